//! Error types for circuit construction, parsing and compilation.

use thiserror::Error;

use crate::gate::{GateId, QubitId};

/// Structural errors raised by the circuit graph.
#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("a circuit needs at least one qubit")]
    InvalidRegister,
    #[error("malformed gate: {0}")]
    MalformedGate(String),
    #[error("qubit {qubit} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { qubit: QubitId, n: usize },
    #[error("gate {gate} does not act on qubit {qubit}")]
    WireError { gate: GateId, qubit: QubitId },
    #[error("unknown gate id {0}")]
    UnknownGate(GateId),
    #[error("splice replacement acts on qubit {qubit} outside the target's qubit set")]
    SpliceError { qubit: QubitId },
    #[error("circuit graph invariant violated: {0}")]
    InvariantViolation(String),
}

/// Errors raised by the dense unitary oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("circuit has {n} qubits, above the configured cap of {cap}")]
    CapacityExceeded { n: usize, cap: usize },
    #[error("dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("invalid qubit permutation")]
    InvalidPermutation,
}

/// Errors raised while parsing or lowering OpenQASM.
#[derive(Debug, Error)]
pub enum QasmError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported feature: {feature}")]
    Unsupported {
        line: usize,
        col: usize,
        feature: String,
    },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
    #[error("recursive gate definition `{0}`")]
    RecursiveGate(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Errors raised by passes and the pipeline.
#[derive(Debug, Error)]
pub enum CompileError {
    #[error("pass `{stage}` failed: {source}")]
    Pass {
        stage: &'static str,
        #[source]
        source: Box<CompileError>,
    },
    #[error("gate {kind} has no lowering template")]
    UnsupportedGate { kind: &'static str },
    #[error("pass-order violation: {0}")]
    PassOrderViolation(String),
    #[error("compiled circuit is not equivalent to the input: {0}")]
    VerificationFailed(String),
    #[error("compiled circuit violates the restricted gate set: {0}")]
    GateSetViolation(String),
    #[error("unknown pass name `{0}`")]
    UnknownPass(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CompileError {
    pub fn at_stage(self, stage: &'static str) -> CompileError {
        CompileError::Pass {
            stage,
            source: Box::new(self),
        }
    }
}
