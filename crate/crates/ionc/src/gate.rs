//! Gate kinds and gate instances.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::angle::Angle;

/// Index of a qubit in the register `q_0 .. q_{n-1}`.
pub type QubitId = usize;

/// The gate vocabulary understood by the compiler.
///
/// `R`, `Rz` and `ZZ` are the hardware-native operations; everything else is
/// an input-level gate that the pass pipeline lowers away. Controls come
/// before targets in the qubit list of a gate instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    R,
    Rz,
    #[serde(rename = "ZZ")]
    Zz,
    Rx,
    Ry,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    #[serde(rename = "TK1")]
    Tk1,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "CZ")]
    Cz,
    #[serde(rename = "CU1")]
    Cu1,
    #[serde(rename = "SWAP")]
    Swap,
    #[serde(rename = "CRy")]
    Cry,
    #[serde(rename = "CCX")]
    Ccx,
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        use GateKind::*;
        match self {
            R | Rz | Rx | Ry | X | Y | Z | H | S | Sdg | T | Tdg | Tk1 => 1,
            Zz | Cnot | Cz | Cu1 | Swap | Cry => 2,
            Ccx => 3,
        }
    }

    /// Number of angle parameters the gate takes.
    pub fn param_count(self) -> usize {
        use GateKind::*;
        match self {
            X | Y | Z | H | S | Sdg | T | Tdg | Cnot | Cz | Swap | Ccx => 0,
            Rz | Zz | Rx | Ry | Cu1 | Cry => 1,
            R => 2,
            Tk1 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            R => "R",
            Rz => "Rz",
            Zz => "ZZ",
            Rx => "Rx",
            Ry => "Ry",
            X => "X",
            Y => "Y",
            Z => "Z",
            H => "H",
            S => "S",
            Sdg => "Sdg",
            T => "T",
            Tdg => "Tdg",
            Tk1 => "TK1",
            Cnot => "CNOT",
            Cz => "CZ",
            Cu1 => "CU1",
            Swap => "SWAP",
            Cry => "CRy",
            Ccx => "CCX",
        }
    }

    /// All kinds, for exhaustive tests.
    pub const ALL: [GateKind; 20] = [
        GateKind::R,
        GateKind::Rz,
        GateKind::Zz,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Tk1,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Cu1,
        GateKind::Swap,
        GateKind::Cry,
        GateKind::Ccx,
    ];
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unique identifier of a gate within a circuit. Ids are never reused.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GateId(pub u32);

impl GateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A gate application without an identity: kind, ordered qubits, parameters.
///
/// This is what rules and decomposition templates produce; the circuit
/// assigns a fresh [`GateId`] when the gate is inserted.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub qubits: SmallVec<[QubitId; 3]>,
    pub params: SmallVec<[Angle; 3]>,
}

impl GateSpec {
    pub fn new(kind: GateKind, qubits: &[QubitId], params: &[Angle]) -> GateSpec {
        GateSpec {
            kind,
            qubits: qubits.into(),
            params: params.into(),
        }
    }

    /// Checks arity, parameter count and qubit distinctness.
    pub fn is_well_formed(&self) -> bool {
        if self.qubits.len() != self.kind.arity() || self.params.len() != self.kind.param_count() {
            return false;
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if self.qubits[..i].contains(q) {
                return false;
            }
        }
        true
    }
}

/// A gate instance inside a circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub qubits: SmallVec<[QubitId; 3]>,
    pub params: SmallVec<[Angle; 3]>,
}

impl Gate {
    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_single_qubit(&self) -> bool {
        self.qubits.len() == 1
    }

    /// The subnode slot of `q` within this gate, if the gate acts on `q`.
    pub fn slot_of(&self, q: QubitId) -> Option<usize> {
        self.qubits.iter().position(|&x| x == q)
    }

    pub fn spec(&self) -> GateSpec {
        GateSpec {
            kind: self.kind,
            qubits: self.qubits.clone(),
            params: self.params.clone(),
        }
    }

    /// Kind and parameters match within angle tolerance (qubits ignored).
    pub fn same_operation(&self, other: &Gate) -> bool {
        self.kind == other.kind
            && self.params.len() == other.params.len()
            && self
                .params
                .iter()
                .zip(other.params.iter())
                .all(|(a, b)| a.approx_eq(*b))
    }
}

/// Shorthand constructors used throughout passes and tests.
pub mod build {
    use super::*;

    pub fn r(q: QubitId, theta: Angle, phi: Angle) -> GateSpec {
        GateSpec::new(GateKind::R, &[q], &[theta, phi])
    }
    pub fn rz(q: QubitId, phi: Angle) -> GateSpec {
        GateSpec::new(GateKind::Rz, &[q], &[phi])
    }
    pub fn rx(q: QubitId, theta: Angle) -> GateSpec {
        GateSpec::new(GateKind::Rx, &[q], &[theta])
    }
    pub fn ry(q: QubitId, theta: Angle) -> GateSpec {
        GateSpec::new(GateKind::Ry, &[q], &[theta])
    }
    pub fn zz(a: QubitId, b: QubitId, theta: Angle) -> GateSpec {
        GateSpec::new(GateKind::Zz, &[a, b], &[theta])
    }
    pub fn tk1(q: QubitId, alpha: Angle, beta: Angle, gamma: Angle) -> GateSpec {
        GateSpec::new(GateKind::Tk1, &[q], &[alpha, beta, gamma])
    }
    pub fn cnot(c: QubitId, t: QubitId) -> GateSpec {
        GateSpec::new(GateKind::Cnot, &[c, t], &[])
    }
    pub fn swap(a: QubitId, b: QubitId) -> GateSpec {
        GateSpec::new(GateKind::Swap, &[a, b], &[])
    }
    pub fn simple(kind: GateKind, q: QubitId) -> GateSpec {
        GateSpec::new(kind, &[q], &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_and_params_are_fixed_per_tag() {
        for kind in GateKind::ALL {
            match kind {
                GateKind::Ccx => assert_eq!(kind.arity(), 3),
                GateKind::Zz
                | GateKind::Cnot
                | GateKind::Cz
                | GateKind::Cu1
                | GateKind::Swap
                | GateKind::Cry => assert_eq!(kind.arity(), 2),
                _ => assert_eq!(kind.arity(), 1),
            }
        }
        assert_eq!(GateKind::R.param_count(), 2);
        assert_eq!(GateKind::Tk1.param_count(), 3);
        assert_eq!(GateKind::Cnot.param_count(), 0);
    }

    #[test]
    fn duplicate_qubits_are_malformed() {
        let g = GateSpec::new(GateKind::Cnot, &[1, 1], &[]);
        assert!(!g.is_well_formed());
        let g = GateSpec::new(GateKind::Cnot, &[0, 1], &[]);
        assert!(g.is_well_formed());
    }
}
