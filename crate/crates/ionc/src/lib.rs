//! Compiler for a shuttling-based trapped-ion quantum processor.
//!
//! Takes arbitrary input circuits (OpenQASM 2.0 or programmatic) and rewrites
//! them into the restricted native gate set of the hardware: `R(pi/2, phi)`,
//! `R(pi, phi)`, `Rz(phi)` and `ZZ(pi/2)`. The pass pipeline eliminates SWAP
//! gates by renaming wires, cancels redundancies, rebases through TK1/CNOT
//! into `Rx`/`Rz`/`ZZ`, restricts pulse areas, folds every `Rz` into gate
//! phases (phase tracking), and aggregates single-qubit gates into blocks
//! around the `ZZ` gates for the downstream shuttling stage.
//!
//! Every transformation is checked against a dense brute-force unitary
//! oracle in the test suite, and compilation itself can verify its output
//! (`CompileOptions::verify`) for circuits small enough to simulate.

pub mod angle;
pub mod check;
pub mod dag;
pub mod error;
pub mod gate;
pub mod json;
pub mod native;
pub mod oracle;
pub mod passes;
pub mod pipeline;
pub mod qasm;

pub use angle::Angle;
pub use dag::{CircuitDag, Vertex};
pub use error::{CircuitError, CompileError, OracleError, QasmError};
pub use gate::{Gate, GateId, GateKind, GateSpec, QubitId};
pub use pipeline::{compile, compile_naive, count_gates, CompileOptions, CompileReport};
