#![no_main]

use libfuzzer_sys::fuzz_target;

// The serialized circuit format is an external interface; rebuilding from
// arbitrary JSON must either error cleanly or yield a valid graph.
fuzz_target!(|data: &[u8]| {
    let json: ionc::json::CircuitJson = match serde_json::from_slice(data) {
        Ok(j) => j,
        Err(_) => return,
    };
    if json.n == 0 || json.n > 64 || json.gates.len() > 512 {
        return;
    }
    if let Ok(dag) = json.to_dag() {
        dag.validate().expect("deserialized circuits must be valid");
        let _ = dag.execution_order();
    }
});
