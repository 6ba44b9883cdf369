#![no_main]

use libfuzzer_sys::fuzz_target;

// Parse, lower, and: for circuits small enough to simulate: run the full
// pipeline with the oracle in the loop, so any unitary-breaking rewrite
// found by the fuzzer aborts.
fuzz_target!(|data: &[u8]| {
    let text = match std::str::from_utf8(data) {
        Ok(t) => t,
        Err(_) => return,
    };
    let program = match ionc::qasm::parse_qasm(text) {
        Ok(p) => p,
        Err(_) => return,
    };
    // cap the register size; lowering allocates per-qubit state
    let declared: usize = program
        .statements
        .iter()
        .map(|s| match s {
            ionc::qasm::Stmt::QReg { size, .. } => *size,
            _ => 0,
        })
        .sum();
    if declared == 0 || declared > 64 {
        return;
    }
    let (dag, _) = match ionc::qasm::lower_to_dag(&program) {
        Ok(x) => x,
        Err(_) => return,
    };
    if dag.gate_count() > 256 {
        return;
    }
    let opts = ionc::CompileOptions {
        verify: dag.qubit_count() <= 5 && dag.gate_count() <= 64,
        verify_qubit_cap: 5,
        ..Default::default()
    };
    // verification failures (a miscompile) panic the target
    ionc::compile(dag, &opts).expect("pipeline must not miscompile or crash");
});
