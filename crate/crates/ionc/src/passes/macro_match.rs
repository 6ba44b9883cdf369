//! Macro matching: predefined native decompositions for known gates.
//!
//! Only multi-qubit gates are worth a macro; the catalog ships with the CRy
//! rule, applicable when its rotation angle is a multiple of pi (the angle
//! restriction of the hardware forbids the general case). Other CRy gates
//! stay untouched and lower through the generic rebase later.

use crate::dag::CircuitDag;
use crate::error::CompileError;
use crate::gate::GateKind;
use crate::native::Rule;

use super::{reduce_fixpoint, PassResult};

/// The macros the matcher may apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Macro {
    Cry,
}

pub fn match_macros(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    match_macros_with(c, &[Macro::Cry])
}

pub fn match_macros_with(
    c: &mut CircuitDag,
    macros: &[Macro],
) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    if macros.contains(&Macro::Cry) {
        for id in c.execution_order() {
            if !c.contains(id) {
                continue;
            }
            let g = c.gate(id)?.clone();
            if g.kind == GateKind::Cry {
                if let Some(rhs) = Rule::CryMacro.apply(&g) {
                    c.splice(id, &rhs)?;
                    changed = true;
                }
            }
        }
    }
    changed |= reduce_fixpoint(c)?.changed;
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}
