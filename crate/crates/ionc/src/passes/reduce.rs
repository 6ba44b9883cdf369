//! Redundancy removal, commutation, and their fixpoint.

use std::collections::{HashSet, VecDeque};

use crate::angle::Angle;
use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::{Gate, GateId, GateKind};

use super::PassResult;

/// Removes redundant gates until no local rule applies:
/// zero-angle rotations, adjacent mergeable rotations (`Rz.Rz`, `Rx.Rx`,
/// `Ry.Ry`, `R.R` with equal phase, `ZZ.ZZ` and `CU1.CU1` on the same pair),
/// and adjacent inverse pairs (`X.X`, `Y.Y`, `Z.Z`, `H.H`, `S.Sdg`, `T.Tdg`,
/// `CNOT.CNOT` with the same control and target, `CZ.CZ`, `SWAP.SWAP`).
pub fn remove_redundancies(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut queue: VecDeque<GateId> = c.execution_order().into();
    let mut queued: HashSet<GateId> = queue.iter().copied().collect();
    let mut changed = false;

    while let Some(id) = queue.pop_front() {
        queued.remove(&id);
        if !c.contains(id) {
            continue;
        }
        let gate = c.gate(id)?.clone();

        if is_zero_rotation(&gate) {
            enqueue_neighbors(c, &gate, &mut queue, &mut queued);
            c.remove_gate(id)?;
            changed = true;
            continue;
        }

        // the candidate partner must be wire-adjacent on every shared wire
        let succ0 = match c.wire_neighbors(id, gate.qubits[0])?.1 {
            Vertex::Sub { gate, .. } => gate,
            _ => continue,
        };
        let partner = c.gate(succ0)?.clone();
        if partner.arity() != gate.arity() {
            continue;
        }
        if gate.arity() == 2 {
            let adj1 = matches!(
                c.wire_neighbors(id, gate.qubits[1])?.1,
                Vertex::Sub { gate, .. } if gate == succ0
            );
            if !adj1 {
                continue;
            }
        }

        match pair_action(&gate, &partner) {
            PairAction::CancelBoth => {
                enqueue_neighbors(c, &gate, &mut queue, &mut queued);
                enqueue_neighbors(c, &partner, &mut queue, &mut queued);
                c.remove_gate(id)?;
                c.remove_gate(succ0)?;
                changed = true;
            }
            PairAction::Merge(angle) => {
                enqueue_neighbors(c, &partner, &mut queue, &mut queued);
                c.remove_gate(succ0)?;
                if angle.is_zero() && merged_zero_is_identity(gate.kind) {
                    enqueue_neighbors(c, &gate, &mut queue, &mut queued);
                    c.remove_gate(id)?;
                } else {
                    let mut params = gate.params.clone();
                    params[0] = angle;
                    c.set_params(id, &params)?;
                    if !queued.contains(&id) {
                        queue.push_back(id);
                        queued.insert(id);
                    }
                }
                changed = true;
            }
            PairAction::None => {}
        }
    }

    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

enum PairAction {
    CancelBoth,
    Merge(Angle),
    None,
}

fn pair_action(g: &Gate, h: &Gate) -> PairAction {
    use GateKind::*;
    if g.kind == h.kind {
        match g.kind {
            Rz if g.qubits == h.qubits => {
                return PairAction::Merge(g.params[0] + h.params[0]);
            }
            Rx | Ry if g.qubits == h.qubits && pulse_merge_allowed(g, h) => {
                return PairAction::Merge(g.params[0] + h.params[0]);
            }
            R if g.qubits == h.qubits
                && g.params[1].approx_eq(h.params[1])
                && pulse_merge_allowed(g, h) =>
            {
                return PairAction::Merge(g.params[0] + h.params[0]);
            }
            Zz | Cu1 if same_pair(g, h) => {
                return PairAction::Merge(g.params[0] + h.params[0]);
            }
            X | Y | Z | H if g.qubits == h.qubits => return PairAction::CancelBoth,
            Cnot if g.qubits == h.qubits => return PairAction::CancelBoth,
            Cz | Swap if same_pair(g, h) => return PairAction::CancelBoth,
            _ => {}
        }
    }
    let inverse = matches!(
        (g.kind, h.kind),
        (S, Sdg) | (Sdg, S) | (T, Tdg) | (Tdg, T)
    );
    if inverse && g.qubits == h.qubits {
        return PairAction::CancelBoth;
    }
    PairAction::None
}

fn same_pair(g: &Gate, h: &Gate) -> bool {
    g.qubits == h.qubits || (g.qubits[0] == h.qubits[1] && g.qubits[1] == h.qubits[0])
}

/// Merging two pulse-area rotations must not push a restricted circuit back
/// out of the native set: two gates with calibrated areas (pi/2, pi) never
/// merge into 3pi/2.
fn pulse_merge_allowed(g: &Gate, h: &Gate) -> bool {
    let both_native = g.params[0].is_native_pulse_area() && h.params[0].is_native_pulse_area();
    !(both_native && (g.params[0] + h.params[0]).approx_eq(Angle::THREE_HALF_PI))
}

/// Rotations whose merged zero angle means the identity. `R(0, phi)` is the
/// identity for any phase, so `R` qualifies via its pulse area.
fn merged_zero_is_identity(kind: GateKind) -> bool {
    matches!(
        kind,
        GateKind::Rz | GateKind::Rx | GateKind::Ry | GateKind::R | GateKind::Zz | GateKind::Cu1
    )
}

fn is_zero_rotation(g: &Gate) -> bool {
    use GateKind::*;
    match g.kind {
        Rz | Rx | Ry | Zz | Cu1 | Cry => g.params[0].is_zero(),
        R => g.params[0].is_zero(),
        Tk1 => g.params.iter().all(|a| a.is_zero()),
        _ => false,
    }
}

fn enqueue_neighbors(
    c: &CircuitDag,
    gate: &Gate,
    queue: &mut VecDeque<GateId>,
    queued: &mut HashSet<GateId>,
) {
    for &q in &gate.qubits {
        if let Ok((p, s)) = c.wire_neighbors(gate.id, q) {
            for v in [p, s] {
                if let Some(n) = v.gate_id() {
                    if queued.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
    }
}

/// Which two-qubit gates a single-qubit gate commutes through, per wire.
fn commutes_through(kind1q: GateKind, kind2q: GateKind, slot: usize) -> bool {
    use GateKind::*;
    let diagonal = matches!(kind1q, Rz | Z | S | Sdg | T | Tdg);
    let x_like = matches!(kind1q, Rx | X);
    match kind2q {
        Zz | Cz => diagonal,
        Cu1 => diagonal,
        Cnot => (diagonal && slot == 0) || (x_like && slot == 1),
        _ => false,
    }
}

/// One sweep in reverse execution order: every single-qubit gate that
/// commutes with the two-qubit gate directly before it on its wire is moved
/// in front of it (toward the inputs), repeatedly.
pub fn commute_through_multis(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let mut changed = false;
    let order = c.execution_order();
    for &id in order.iter().rev() {
        if !c.contains(id) {
            continue;
        }
        let kind = c.gate(id)?.kind;
        if c.gate(id)?.arity() != 1 {
            continue;
        }
        loop {
            let sub = Vertex::Sub { gate: id, slot: 0 };
            match c.pred_of(sub).unwrap() {
                Vertex::Sub { gate: p, slot } => {
                    let pk = c.gate(p)?.kind;
                    if c.gate(p)?.arity() >= 2 && commutes_through(kind, pk, slot) {
                        c.move_1q_before(id, Vertex::Sub { gate: p, slot })?;
                        changed = true;
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult {
        changed,
        gates_removed: 0,
        gates_added: 0,
    })
}

/// The dedicated Rz-through-ZZ merge sweep: succeeding `Rz` gates commute
/// backward through `ZZ` gates and merge with the preceding `Rz`. Guarantees
/// the at-most-one-`Rx`-one-`Rz`-per-segment wire form constructively.
pub fn merge_rz_through_zz(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    let order = c.execution_order();
    for &id in order.iter().rev() {
        if !c.contains(id) || c.gate(id)?.kind != GateKind::Rz {
            continue;
        }
        loop {
            let sub = Vertex::Sub { gate: id, slot: 0 };
            match c.pred_of(sub).unwrap() {
                Vertex::Sub { gate: p, slot } if c.gate(p)?.kind == GateKind::Zz => {
                    c.move_1q_before(id, Vertex::Sub { gate: p, slot })?;
                    changed = true;
                }
                Vertex::Sub { gate: p, .. } if c.gate(p)?.kind == GateKind::Rz => {
                    let sum = c.gate(p)?.params[0] + c.gate(id)?.params[0];
                    c.remove_gate(id)?;
                    if sum.is_zero() {
                        c.remove_gate(p)?;
                    } else {
                        c.set_params(p, &[sum])?;
                    }
                    changed = true;
                    break;
                }
                _ => break,
            }
        }
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

/// Alternates redundancy removal and commutation until a full round changes
/// nothing. The total gate count never increases across rounds.
pub fn reduce_fixpoint(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    let mut rounds = 0usize;
    loop {
        let count_at_round_start = c.gate_count();
        let a = remove_redundancies(c)?;
        let b = commute_through_multis(c)?;
        changed |= a.changed || b.changed;
        debug_assert!(c.gate_count() <= count_at_round_start);
        rounds += 1;
        assert!(
            rounds <= 4 * before + 16,
            "reduce fixpoint failed to terminate"
        );
        if !a.changed && !b.changed {
            break;
        }
    }
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::build;
    use crate::oracle::{circuit_unitary, equal_up_to_global_phase, CIRCUIT_TOL};

    fn kinds(c: &CircuitDag) -> Vec<GateKind> {
        c.execution_order()
            .iter()
            .map(|&id| c.gate(id).unwrap().kind)
            .collect()
    }

    #[test]
    fn adjacent_cnot_pair_cancels() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
    }

    #[test]
    fn opposite_cnot_orientation_does_not_cancel() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        c.append_gate(build::cnot(1, 0)).unwrap();
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 2);
    }

    #[test]
    fn rz_angles_summing_to_two_pi_vanish() {
        let mut c = CircuitDag::new(1).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.3))).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(1.7))).unwrap();
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
    }

    #[test]
    fn rz_angles_merge() {
        let mut c = CircuitDag::new(1).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.3))).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.5))).unwrap();
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 1);
        let g = c.gates().next().unwrap();
        assert!(g.params[0].approx_eq(Angle::from_pi(0.8)));
    }

    #[test]
    fn cascaded_cancellation_through_the_worklist() {
        // h h sandwiched by x x: removing the inner pair exposes the outer
        let mut c = CircuitDag::new(1).unwrap();
        for kind in [GateKind::X, GateKind::H, GateKind::H, GateKind::X] {
            c.append_gate(build::simple(kind, 0)).unwrap();
        }
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
    }

    #[test]
    fn rz_commutes_back_through_zz() {
        let mut c = CircuitDag::new(2).unwrap();
        let zz = c.append_gate(build::zz(0, 1, Angle::HALF_PI)).unwrap();
        let rz = c.append_gate(build::rz(0, Angle::from_pi(0.7))).unwrap();
        let res = commute_through_multis(&mut c).unwrap();
        assert!(res.changed);
        assert_eq!(c.execution_order(), vec![rz, zz]);
    }

    #[test]
    fn x_commutes_through_cnot_target_but_rx_not_through_control() {
        let mut c = CircuitDag::new(2).unwrap();
        let cn = c.append_gate(build::cnot(0, 1)).unwrap();
        let x = c.append_gate(build::simple(GateKind::X, 1)).unwrap();
        let before = circuit_unitary(&c, 10).unwrap();
        commute_through_multis(&mut c).unwrap();
        assert_eq!(c.execution_order(), vec![x, cn]);
        let after = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&before, &after, CIRCUIT_TOL).unwrap());

        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        c.append_gate(build::rx(0, Angle::from_pi(0.4))).unwrap();
        let res = commute_through_multis(&mut c).unwrap();
        assert!(!res.changed);
    }

    #[test]
    fn fixpoint_cancels_rz_pair_around_cnot_control() {
        // cnot, rz(phi) on control, rz(-phi) on control after second cnot
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.4))).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(1.6))).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        let before = circuit_unitary(&c, 10).unwrap();
        let res = reduce_fixpoint(&mut c).unwrap();
        assert!(res.changed);
        assert_eq!(c.gate_count(), 0);
        let after = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&before, &after, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn fixpoint_merges_interleaved_zz_rz() {
        // zz(pi/2) rz(phi) zz(pi/2) rz(-phi) on the same pair -> zz(pi)
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::zz(0, 1, Angle::HALF_PI)).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.4))).unwrap();
        c.append_gate(build::zz(0, 1, Angle::HALF_PI)).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(1.6))).unwrap();
        let before = circuit_unitary(&c, 10).unwrap();
        reduce_fixpoint(&mut c).unwrap();
        assert_eq!(kinds(&c), vec![GateKind::Zz]);
        assert!(c.gates().next().unwrap().params[0].approx_eq(Angle::PI));
        let after = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&before, &after, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn already_minimal_circuit_is_untouched() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::cnot(0, 1)).unwrap();
        c.append_gate(build::rx(0, Angle::HALF_PI)).unwrap();
        let res = reduce_fixpoint(&mut c).unwrap();
        assert!(!res.changed);
        assert_eq!(c.gate_count(), 2);
    }

    #[test]
    fn merge_rz_through_zz_builds_single_rz_per_segment() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.25))).unwrap();
        c.append_gate(build::zz(0, 1, Angle::HALF_PI)).unwrap();
        c.append_gate(build::rz(0, Angle::from_pi(0.5))).unwrap();
        let before = circuit_unitary(&c, 10).unwrap();
        let res = merge_rz_through_zz(&mut c).unwrap();
        assert!(res.changed);
        assert_eq!(c.gate_count(), 2);
        let order = c.execution_order();
        let first = c.gate(order[0]).unwrap();
        assert_eq!(first.kind, GateKind::Rz);
        assert!(first.params[0].approx_eq(Angle::from_pi(0.75)));
        let after = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_global_phase(&before, &after, CIRCUIT_TOL).unwrap());
    }

    #[test]
    fn t_tdg_pair_cancels() {
        let mut c = CircuitDag::new(1).unwrap();
        c.append_gate(build::simple(GateKind::T, 0)).unwrap();
        c.append_gate(build::simple(GateKind::Tdg, 0)).unwrap();
        remove_redundancies(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
    }

    use crate::angle::Angle;
}
