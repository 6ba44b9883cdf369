//! Phase tracking: virtual execution of Rz gates.
//!
//! `R(theta, phi) Rz(z) = Rz(z) R(theta, phi - z)` and Rz commutes with ZZ,
//! so every Rz folds into the phases of the R gates behind it. Walking each
//! wire from input to output with a tracking phase `b`, R gates shift their
//! phase by `-b`, Rz gates vanish into `b`, and one terminal Rz per wire
//! restores the residue (unless dropped, which preserves measurement
//! statistics in the computational basis but not the full unitary).

use crate::angle::Angle;
use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::{build, GateKind};

use super::PassResult;

pub fn phase_tracking(c: &mut CircuitDag, drop_terminal_rz: bool) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    for q in 0..c.qubit_count() {
        let mut b = Angle::ZERO;
        for id in c.wire_gates(q) {
            let g = c.gate(id)?.clone();
            if g.arity() >= 2 {
                if g.kind != GateKind::Zz {
                    return Err(CompileError::PassOrderViolation(format!(
                        "phase tracking ran before rebasing: found {}",
                        g.kind
                    )));
                }
                continue; // Rz commutes through ZZ; b is unaffected
            }
            match g.kind {
                GateKind::Rz => {
                    b = b + g.params[0];
                    c.remove_gate(id)?;
                    changed = true;
                }
                GateKind::R => {
                    if !b.is_zero() {
                        c.set_params(id, &[g.params[0], g.params[1] - b])?;
                        changed = true;
                    }
                }
                GateKind::Rx => {
                    // normalize to R form first: Rx(theta) = R(theta, 0)
                    c.set_operation(id, GateKind::R, &[g.params[0], -b])?;
                    changed = true;
                }
                GateKind::Ry => {
                    c.set_operation(id, GateKind::R, &[g.params[0], Angle::HALF_PI - b])?;
                    changed = true;
                }
                other => {
                    return Err(CompileError::PassOrderViolation(format!(
                        "phase tracking expects R/Rx/Ry/Rz gates, found {other}"
                    )));
                }
            }
        }
        if !b.is_zero() && !drop_terminal_rz {
            c.insert_1q_before(build::rz(q, b), Vertex::Output(q))?;
            changed = true;
        }
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}
