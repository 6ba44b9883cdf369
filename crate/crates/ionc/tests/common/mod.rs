//! Shared helpers for the integration test suites.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ionc::gate::GateSpec;
use ionc::{Angle, CircuitDag, GateKind};

/// Builds a seeded random circuit over the whole gate vocabulary, with a
/// bias toward angles on the pi/4 grid (so macros, merges and restrictions
/// all get exercised alongside free angles).
pub fn random_circuit(seed: u64, n: usize, len: usize) -> CircuitDag {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut c = CircuitDag::new(n).unwrap();
    for _ in 0..len {
        let kind = GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())];
        if kind.arity() > n {
            continue;
        }
        let mut qubits: Vec<usize> = Vec::new();
        while qubits.len() < kind.arity() {
            let q = rng.gen_range(0..n);
            if !qubits.contains(&q) {
                qubits.push(q);
            }
        }
        let params: Vec<Angle> = (0..kind.param_count())
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Angle::from_pi(rng.gen_range(0..8) as f64 / 4.0)
                } else {
                    Angle::from_pi(rng.gen::<f64>() * 2.0)
                }
            })
            .collect();
        c.append_gate(GateSpec::new(kind, &qubits, &params)).unwrap();
    }
    c
}

/// The corpus directory checked into the repository.
pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bench/circuits")
}

/// Loads and lowers every .qasm file of the corpus, sorted by name.
pub fn load_corpus() -> Vec<(String, CircuitDag)> {
    let mut files: Vec<_> = std::fs::read_dir(corpus_dir())
        .expect("bench/circuits exists")
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "qasm").unwrap_or(false))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&path).unwrap();
            let program = ionc::qasm::parse_qasm(&text)
                .unwrap_or_else(|e| panic!("{name}: parse error: {e}"));
            let (dag, _) = ionc::qasm::lower_to_dag(&program)
                .unwrap_or_else(|e| panic!("{name}: lowering error: {e}"));
            (name, dag)
        })
        .collect()
}
