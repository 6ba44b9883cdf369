//! Rebasing into the native gate set via single-qubit squashing.
//!
//! The route: free-angle ZZ gates are rebuilt from ZZ(pi/2), single-qubit
//! runs squash into TK1, remaining multi-qubit gates lower through the
//! TK1+CNOT catalog, and finally CNOT and TK1 expand into native rotations.

use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::{GateId, GateKind};
use crate::native::{self, is_identity_up_to_phase, Rule};

use super::{reduce_fixpoint, PassResult};

/// Replaces every maximal run of single-qubit gates on one wire by a single
/// TK1 gate; runs whose product is the identity (up to phase) are deleted.
pub fn squash_single_qubit_runs(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    for q in 0..c.qubit_count() {
        let mut run: Vec<GateId> = Vec::new();
        let mut v = Vertex::Input(q);
        loop {
            let next = c.succ_of(v);
            let step = match next {
                Some(s @ Vertex::Sub { gate, .. }) => {
                    if c.gate(gate)?.arity() == 1 {
                        run.push(gate);
                        Some(s)
                    } else {
                        changed |= squash_run(c, &run)?;
                        run.clear();
                        Some(s)
                    }
                }
                Some(Vertex::Output(_)) | None => {
                    changed |= squash_run(c, &run)?;
                    run.clear();
                    None
                }
                Some(Vertex::Input(_)) => unreachable!(),
            };
            match step {
                Some(s) => v = s,
                None => break,
            }
        }
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

fn squash_run(c: &mut CircuitDag, run: &[GateId]) -> Result<bool, CompileError> {
    if run.is_empty() {
        return Ok(false);
    }
    if run.len() == 1 && c.gate(run[0])?.kind == GateKind::Tk1 {
        return Ok(false); // already canonical
    }
    let product = native::run_product(run.iter().map(|&id| {
        let g = c.gate(id).expect("run gates are live");
        (g.kind, g.params.to_vec())
    }));
    let q = c.gate(run[0])?.qubits[0];
    if is_identity_up_to_phase(&product, 1e-10) {
        for &id in run {
            c.remove_gate(id)?;
        }
        return Ok(true);
    }
    let mut tk1 = native::squash_to_tk1(&product);
    tk1.qubits[0] = q;
    for &id in &run[1..] {
        c.remove_gate(id)?;
    }
    c.splice(run[0], &[tk1])?;
    Ok(true)
}

/// Expands every TK1 into its Rz-Rx-Rz realization, dropping zero factors.
pub fn expand_tk1(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    for id in c.execution_order() {
        if !c.contains(id) {
            continue;
        }
        let g = c.gate(id)?;
        if g.kind == GateKind::Tk1 {
            let rhs = native::tk1_to_native(g.qubits[0], g.params[0], g.params[1], g.params[2]);
            c.splice(id, &rhs)?;
            changed = true;
        }
    }
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

/// Lowers multi-qubit gates that are not ZZ down to {TK1, CNOT, Rz}, using
/// the fixed catalog. Applied repeatedly until only catalog output remains.
fn lower_multiqubit_catalog(c: &mut CircuitDag) -> Result<bool, CompileError> {
    let mut changed = false;
    loop {
        let mut any = false;
        for id in c.execution_order() {
            if !c.contains(id) {
                continue;
            }
            let g = c.gate(id)?.clone();
            let rhs = match g.kind {
                GateKind::Cz => Rule::CzToCnot.apply(&g),
                GateKind::Cu1 => Rule::Cu1ToCnot.apply(&g),
                GateKind::Swap => Rule::SwapToCnot.apply(&g),
                GateKind::Cry => Rule::CryToCnot.apply(&g),
                GateKind::Ccx => Rule::CcxToCnot.apply(&g),
                _ => None,
            };
            if let Some(rhs) = rhs {
                c.splice(id, &rhs)?;
                any = true;
                changed = true;
            }
        }
        if !any {
            return Ok(changed);
        }
    }
}

/// The full rebasing stage. Afterwards every gate is `Rx`, `Rz` or `ZZ`,
/// and every ZZ pulse area lies in `{pi/2, pi, 3pi/2}`.
pub fn rebase_to_native(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();

    // free-angle ZZ gates first, so the fixpoint can clean up the residue
    let mut changed = false;
    for id in c.execution_order() {
        if !c.contains(id) {
            continue;
        }
        let g = c.gate(id)?.clone();
        if g.kind == GateKind::Zz {
            if g.params[0].is_zero() {
                c.remove_gate(id)?;
                changed = true;
            } else if let Some(rhs) = Rule::ZzToNative.apply(&g) {
                c.splice(id, &rhs)?;
                changed = true;
            }
        }
    }

    changed |= reduce_fixpoint(c)?.changed;
    changed |= squash_single_qubit_runs(c)?.changed;
    if lower_multiqubit_catalog(c)? {
        // the CCX network brings raw Clifford+T gates with it
        squash_single_qubit_runs(c)?;
        changed = true;
    }

    // CNOTs into one ZZ(pi/2) plus local rotations
    for id in c.execution_order() {
        if !c.contains(id) {
            continue;
        }
        let g = c.gate(id)?.clone();
        if g.kind == GateKind::Cnot {
            let rhs = Rule::CnotToNative.apply(&g).expect("kind matched");
            c.splice(id, &rhs)?;
            changed = true;
        }
    }
    changed |= expand_tk1(c)?.changed;

    for g in c.gates() {
        let ok = match g.kind {
            GateKind::Rx | GateKind::Rz => true,
            GateKind::Zz => g.params[0].is_half_pi_multiple() && !g.params[0].is_zero(),
            _ => false,
        };
        if !ok {
            return Err(CompileError::UnsupportedGate {
                kind: g.kind.name(),
            });
        }
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}
