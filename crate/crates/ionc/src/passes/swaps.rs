//! SWAP gate elimination.
//!
//! The shuttling hardware swaps ions physically, so logical SWAP gates are
//! removed from the circuit: the outgoing edges of the SWAP's two subnodes
//! are exchanged, every succeeding gate is relabeled onto the wire it now
//! sits on, and the transposition is composed into the circuit's recorded
//! output permutation.

use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::GateKind;

use super::PassResult;

pub fn eliminate_swaps(c: &mut CircuitDag) -> Result<PassResult, CompileError> {
    let order = c.execution_order();
    // relabel[x] = wire a gate recorded on qubit x actually sits on, given
    // the swaps eliminated so far upstream of it
    let mut relabel: Vec<usize> = (0..c.qubit_count()).collect();
    let mut removed = 0usize;
    let mut any_relabel = false;

    for id in order {
        let gate = c.gate(id)?;
        let qubits: Vec<usize> = gate.qubits.iter().map(|&q| relabel[q]).collect();
        let kind = gate.kind;
        for (slot, &q) in qubits.iter().enumerate() {
            if c.gate(id)?.qubits[slot] != q {
                c.relabel_qubit(id, slot, q);
                any_relabel = true;
            }
        }
        if kind != GateKind::Swap {
            continue;
        }

        let (a, b) = (qubits[0], qubits[1]);
        let sub0 = Vertex::Sub { gate: id, slot: 0 };
        let sub1 = Vertex::Sub { gate: id, slot: 1 };
        let p0 = c.pred_of(sub0).unwrap();
        let p1 = c.pred_of(sub1).unwrap();
        let s0 = c.succ_of(sub0).unwrap();
        let s1 = c.succ_of(sub1).unwrap();
        // exchange the outgoing edges: wire a continues into b's path
        c.link(p0, s1);
        c.link(p1, s0);
        c.free_unlinked(id);
        removed += 1;

        // gates recorded downstream still carry their old labels; compose
        // the transposition so they relabel onto the exchanged wires
        for v in relabel.iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
        c.compose_swap_into_permutation(a, b);
    }

    if removed > 0 {
        // tails were exchanged; re-anchor each wire's output cap
        fix_output_caps(c);
    }
    debug_assert!(c.validate().is_ok());
    Ok(PassResult {
        changed: removed > 0 || any_relabel,
        gates_removed: removed,
        gates_added: 0,
    })
}

/// Walks every wire to its physical end and re-attaches the matching output
/// cap, so that wire `q` again terminates at output `q`.
fn fix_output_caps(c: &mut CircuitDag) {
    for q in 0..c.qubit_count() {
        let mut v = Vertex::Input(q);
        while let Some(next @ Vertex::Sub { .. }) = c.succ_of(v) {
            v = next;
        }
        c.link(v, Vertex::Output(q));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::gate::build;
    use crate::oracle::{circuit_unitary, equal_up_to_permutation_and_phase, CIRCUIT_TOL};

    #[test]
    fn single_swap_becomes_a_permutation() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        let res = eliminate_swaps(&mut c).unwrap();
        assert!(res.changed);
        assert_eq!(c.gate_count(), 0);
        assert_eq!(c.output_permutation(), &[1, 0]);
        c.validate().unwrap();
    }

    #[test]
    fn succeeding_gates_are_relabeled() {
        // swap q0,q1 then cnot q1,q2: after elimination the cnot acts on q0,q2
        let mut c = CircuitDag::new(3).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        let cnot = c.append_gate(build::cnot(1, 2)).unwrap();
        eliminate_swaps(&mut c).unwrap();
        assert_eq!(c.gate(cnot).unwrap().qubits.as_slice(), &[0, 2]);
        c.validate().unwrap();
    }

    #[test]
    fn preceding_gates_keep_their_wires() {
        let mut c = CircuitDag::new(2).unwrap();
        let rx = c.append_gate(build::rx(0, Angle::PI)).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        eliminate_swaps(&mut c).unwrap();
        assert_eq!(c.gate(rx).unwrap().qubits.as_slice(), &[0]);
    }

    #[test]
    fn chained_swaps_compose() {
        let mut c = CircuitDag::new(3).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        c.append_gate(build::swap(1, 2)).unwrap();
        let orig = {
            let mut o = CircuitDag::new(3).unwrap();
            o.append_gate(build::swap(0, 1)).unwrap();
            o.append_gate(build::swap(1, 2)).unwrap();
            circuit_unitary(&o, 10).unwrap()
        };
        eliminate_swaps(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
        let out = circuit_unitary(&c, 10).unwrap();
        assert!(equal_up_to_permutation_and_phase(
            &orig,
            &out,
            c.output_permutation(),
            CIRCUIT_TOL
        )
        .unwrap());
    }

    #[test]
    fn adjacent_swap_pair_cancels_to_identity_permutation() {
        let mut c = CircuitDag::new(2).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        c.append_gate(build::swap(0, 1)).unwrap();
        eliminate_swaps(&mut c).unwrap();
        assert_eq!(c.gate_count(), 0);
        assert_eq!(c.output_permutation(), &[0, 1]);
    }
}
