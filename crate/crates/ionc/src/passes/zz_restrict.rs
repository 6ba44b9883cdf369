//! Final ZZ pulse-area restriction.
//!
//! The hardware executes only ZZ(pi/2); ZZ(pi) and ZZ(3pi/2) expand into
//! repeated applications. Runs last so the block aggregation works on fewer
//! two-qubit gates; expanded gates stay inside their original block.

use crate::angle::Angle;
use crate::dag::CircuitDag;
use crate::error::CompileError;
use crate::gate::GateKind;
use crate::native::Rule;

use super::{BlockSet, PassResult};

pub fn restrict_zz_angles(
    c: &mut CircuitDag,
    mut blocks: Option<&mut BlockSet>,
) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    for id in c.execution_order() {
        if !c.contains(id) {
            continue;
        }
        let g = c.gate(id)?.clone();
        if g.kind != GateKind::Zz {
            continue;
        }
        if g.params[0].approx_eq(Angle::HALF_PI) {
            continue;
        }
        let rule = if g.params[0].approx_eq(Angle::PI) {
            Rule::ZzPi
        } else if g.params[0].approx_eq(Angle::THREE_HALF_PI) {
            Rule::Zz3PiHalf
        } else {
            return Err(CompileError::PassOrderViolation(format!(
                "ZZ({}) reached the final angle restriction",
                g.params[0]
            )));
        };
        let rhs = rule.apply(&g).expect("kind and angle matched");
        let new = c.splice(id, &rhs)?;
        if let Some(set) = blocks.as_deref_mut() {
            for b in set.blocks.iter_mut() {
                if let Some(pos) = b.zz.iter().position(|&z| z == id) {
                    b.zz.splice(pos..=pos, new.iter().copied());
                    break;
                }
            }
        }
        changed = true;
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::build;
    use crate::oracle::{circuit_unitary, equal_up_to_global_phase, CIRCUIT_TOL};
    use crate::passes::build_blocks;

    #[test]
    fn zz_pi_becomes_two_half_pi() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(2 - 2, 1, Angle::PI)).unwrap();
        let orig = c.clone();
        restrict_zz_angles(&mut c, None).unwrap();
        assert_eq!(c.gate_count(), 2);
        assert!(c
            .gates()
            .all(|g| g.kind == GateKind::Zz && g.params[0].approx_eq(Angle::HALF_PI)));
        let a = circuit_unitary(&orig, 10).unwrap();
        let b = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&a, &b, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn zz_half_pi_is_untouched() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(0, 1, Angle::HALF_PI)).unwrap();
        let res = restrict_zz_angles(&mut c, None).unwrap();
        assert!(!res.changed);
        assert_eq!(c.gate_count(), 1);
    }

    #[test]
    fn zz_three_half_pi_becomes_three() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(0, 1, Angle::THREE_HALF_PI)).unwrap();
        let orig = c.clone();
        restrict_zz_angles(&mut c, None).unwrap();
        assert_eq!(c.gate_count(), 3);
        let a = circuit_unitary(&orig, 10).unwrap();
        let b = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&a, &b, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn other_angles_are_a_pass_order_violation() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(0, 1, Angle::from_pi(0.3))).unwrap();
        assert!(matches!(
            restrict_zz_angles(&mut c, None),
            Err(CompileError::PassOrderViolation(_))
        ));
    }

    #[test]
    fn expansion_stays_inside_the_block() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(0, 1, Angle::PI)).unwrap();
        let mut set = build_blocks(&c).unwrap();
        restrict_zz_angles(&mut c, Some(&mut set)).unwrap();
        assert_eq!(set.blocks.len(), 1);
        assert_eq!(set.blocks[0].zz.len(), 2);
        set.check_partition(&c).unwrap();
    }
}
