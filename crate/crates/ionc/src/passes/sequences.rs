//! Rx-Rz sequence building and pulse-area restriction.
//!
//! After rebasing, single-qubit runs squash into TK1 and re-expand through
//! the Rz-Rx-Rz realization; commuting the Rz gates back through the ZZ
//! gates then leaves at most one Rx and one Rz between consecutive ZZ gates
//! on every wire, so the circuit holds at most `4w + 3n` single-qubit gates
//! for `w` ZZ gates. Pulse-area restriction rewrites every remaining Rx into
//! calibrated areas and re-merges, for at most `8w + 5n`.

use crate::dag::CircuitDag;
use crate::error::CompileError;
use crate::gate::GateKind;
use crate::native::rx_restriction;

use super::rebase::expand_tk1;
use super::{
    merge_rz_through_zz, reduce_fixpoint, remove_redundancies, squash_single_qubit_runs,
    PassResult,
};

fn merge_until_stable(c: &mut CircuitDag) -> Result<bool, CompileError> {
    let mut changed = false;
    loop {
        let m = merge_rz_through_zz(c)?;
        let r = remove_redundancies(c)?;
        changed |= m.changed || r.changed;
        if !m.changed && !r.changed {
            return Ok(changed);
        }
    }
}

/// The standalone Rz-through-ZZ merge stage of the pipeline.
pub fn merge_rz_sweep(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let changed = merge_until_stable(c)?;
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

/// Builds the per-wire Rx-Rz normal form (at most one Rx and one Rz between
/// ZZ gates). Expects a circuit over `{Rx, Rz, ZZ}`.
pub fn build_rx_rz_sequences(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = squash_single_qubit_runs(c)?.changed;
    changed |= expand_tk1(c)?.changed;
    changed |= merge_until_stable(c)?;
    changed |= reduce_fixpoint(c)?.changed;
    changed |= merge_until_stable(c)?;
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

/// Restricts every Rx pulse area to the calibrated values, then re-merges
/// the Rz residue through the ZZ gates.
pub fn restrict_single_qubit_angles(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    for id in c.execution_order() {
        if !c.contains(id) {
            continue;
        }
        let g = c.gate(id)?.clone();
        if g.kind == GateKind::Rx && !g.params[0].is_native_pulse_area() {
            let rhs = rx_restriction(g.qubits[0], g.params[0]);
            c.splice(id, &rhs)?;
            changed = true;
        }
    }
    changed |= merge_until_stable(c)?;
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

/// Counts single-qubit gates per inter-ZZ segment of every wire; used to
/// assert the wire normal forms.
pub fn max_segment_profile(c: &CircuitDag) -> SegmentProfile {
    let mut profile = SegmentProfile::default();
    for q in 0..c.qubit_count() {
        let mut seg_rx = 0usize;
        let mut seg_rz = 0usize;
        let mut seg_total = 0usize;
        let mut first = true;
        let flush = |profile: &mut SegmentProfile, rx: usize, rz: usize, total: usize, head: bool| {
            if head {
                profile.max_head = profile.max_head.max(total);
            } else {
                profile.max_between = profile.max_between.max(total);
            }
            profile.max_rx_between = profile.max_rx_between.max(if head { 0 } else { rx });
            profile.max_rz_between = profile.max_rz_between.max(if head { 0 } else { rz });
        };
        for id in c.wire_gates(q) {
            let g = c.gate(id).unwrap();
            if g.arity() >= 2 {
                flush(&mut profile, seg_rx, seg_rz, seg_total, first);
                first = false;
                seg_rx = 0;
                seg_rz = 0;
                seg_total = 0;
            } else {
                seg_total += 1;
                match g.kind {
                    GateKind::Rx | GateKind::R => seg_rx += 1,
                    GateKind::Rz => seg_rz += 1,
                    _ => {}
                }
            }
        }
        flush(&mut profile, seg_rx, seg_rz, seg_total, first);
    }
    profile
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SegmentProfile {
    /// Single-qubit gates between the input and the first two-qubit gate
    /// (or the output, on an untouched wire).
    pub max_head: usize,
    /// Single-qubit gates in any later segment.
    pub max_between: usize,
    pub max_rx_between: usize,
    pub max_rz_between: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::gate::build;
    use crate::oracle::{circuit_unitary, equal_up_to_global_phase, CIRCUIT_TOL};
    use crate::passes::rebase_to_native;

    fn preserved(c0: &CircuitDag, c1: &CircuitDag) -> bool {
        let a = circuit_unitary(c0, 10).unwrap();
        let b = circuit_unitary(c1, 10).unwrap();
        equal_up_to_global_phase(&a, &b, CIRCUIT_TOL).unwrap()
    }

    fn messy_circuit() -> CircuitDag {
        let mut c = CircuitDag::new(4).unwrap();
        for (i, spec) in [
            build::simple(GateKind::H, 0),
            build::cnot(0, 1),
            build::simple(GateKind::T, 1),
            build::rx(2, Angle::from_pi(0.25)),
            build::zz(1, 2, Angle::HALF_PI),
            build::simple(GateKind::H, 2),
            build::cnot(2, 3),
            build::rz(3, Angle::from_pi(0.7)),
            build::cnot(0, 1),
            build::simple(GateKind::Tdg, 0),
            build::zz(0, 3, Angle::PI),
        ]
        .into_iter()
        .enumerate()
        {
            let _ = i;
            c.append_gate(spec).unwrap();
        }
        c
    }

    #[test]
    fn normal_form_bounds_hold_after_sequence_building() {
        let mut c = messy_circuit();
        let orig = c.clone();
        rebase_to_native(&mut c).unwrap();
        build_rx_rz_sequences(&mut c).unwrap();
        assert!(preserved(&orig, &c));

        let n = c.qubit_count();
        let omega = c.gates().filter(|g| g.kind == GateKind::Zz).count();
        let singles = c.gates().filter(|g| g.arity() == 1).count();
        assert!(singles <= 4 * omega + 3 * n, "{singles} > 4*{omega}+3*{n}");

        let profile = max_segment_profile(&c);
        assert!(profile.max_rx_between <= 1);
        assert!(profile.max_rz_between <= 1);
        assert!(profile.max_head <= 3);
    }

    #[test]
    fn no_zz_wire_holds_at_most_three_singles() {
        let mut c = CircuitDag::new(1).unwrap();
        for spec in [
            build::simple(GateKind::H, 0),
            build::simple(GateKind::T, 0),
            build::rx(0, Angle::from_pi(0.7)),
            build::simple(GateKind::S, 0),
            build::rz(0, Angle::from_pi(1.1)),
        ] {
            c.append_gate(spec).unwrap();
        }
        let orig = c.clone();
        rebase_to_native(&mut c).unwrap();
        build_rx_rz_sequences(&mut c).unwrap();
        assert!(c.gate_count() <= 3);
        assert!(preserved(&orig, &c));
    }

    #[test]
    fn restriction_pins_every_rx_pulse_area() {
        let mut c = messy_circuit();
        let orig = c.clone();
        rebase_to_native(&mut c).unwrap();
        build_rx_rz_sequences(&mut c).unwrap();
        restrict_single_qubit_angles(&mut c).unwrap();
        assert!(preserved(&orig, &c));
        for g in c.gates() {
            if g.kind == GateKind::Rx {
                assert!(g.params[0].is_native_pulse_area(), "Rx({})", g.params[0]);
            }
        }
        let n = c.qubit_count();
        let omega = c.gates().filter(|g| g.kind == GateKind::Zz).count();
        let singles = c.gates().filter(|g| g.arity() == 1).count();
        assert!(singles <= 8 * omega + 5 * n);
        let profile = max_segment_profile(&c);
        assert!(profile.max_between <= 4, "between = {}", profile.max_between);
        assert!(profile.max_head <= 5, "head = {}", profile.max_head);
    }

    #[test]
    fn native_rx_pass_through_unchanged() {
        let mut c = CircuitDag::new(1).unwrap();
        c.append_gate(build::rx(0, Angle::PI)).unwrap();
        let res = restrict_single_qubit_angles(&mut c).unwrap();
        assert!(!res.changed);
        assert_eq!(c.gate_count(), 1);
    }

    #[test]
    fn quarter_pi_rx_becomes_five_gates_with_folded_phase() {
        let mut c = CircuitDag::new(1).unwrap();
        c.append_gate(build::rx(0, Angle::from_pi(0.25))).unwrap();
        let orig = c.clone();
        restrict_single_qubit_angles(&mut c).unwrap();
        assert!(preserved(&orig, &c));
        // the arbitrary angle now lives in an Rz phase of 1.25 pi
        assert!(c
            .gates()
            .any(|g| g.kind == GateKind::Rz && g.params[0].approx_eq(Angle::from_pi(1.25))));
        for g in c.gates() {
            if g.kind == GateKind::Rx {
                assert!(g.params[0].approx_eq(Angle::HALF_PI));
            }
        }
    }
}
