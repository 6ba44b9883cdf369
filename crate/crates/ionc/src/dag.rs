//! The directed-acyclic-graph circuit representation.
//!
//! A circuit over `n` qubits is a graph with one input vertex and one output
//! vertex per qubit plus one vertex per gate. A gate acting on `m` qubits has
//! `m` subnodes, each with exactly one incoming and one outgoing edge, so the
//! graph decomposes into `n` edge-disjoint paths, one per qubit, from each
//! input vertex to an output vertex. Passes edit the circuit through the
//! splice/move primitives here, which maintain those invariants.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use smallvec::SmallVec;

use crate::angle::Angle;
use crate::error::CircuitError;
use crate::gate::{Gate, GateId, GateKind, GateSpec, QubitId};

/// A position in the graph: an input cap, an output cap, or a gate subnode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Input(QubitId),
    Output(QubitId),
    Sub { gate: GateId, slot: usize },
}

impl Vertex {
    pub fn gate_id(self) -> Option<GateId> {
        match self {
            Vertex::Sub { gate, .. } => Some(gate),
            _ => None,
        }
    }

    pub fn is_output(self) -> bool {
        matches!(self, Vertex::Output(_))
    }
}

#[derive(Clone, Debug)]
struct GateNode {
    gate: Gate,
    pred: SmallVec<[Vertex; 3]>,
    succ: SmallVec<[Vertex; 3]>,
}

/// Quantum circuit as a DAG with per-qubit subnode wiring.
#[derive(Clone, Debug)]
pub struct CircuitDag {
    n: usize,
    input_succ: Vec<Vertex>,
    output_pred: Vec<Vertex>,
    nodes: Vec<Option<GateNode>>,
    live: usize,
    output_permutation: Vec<QubitId>,
}

impl CircuitDag {
    /// Creates a circuit with `n` empty wires, each input connected directly
    /// to its output.
    pub fn new(n: usize) -> Result<CircuitDag, CircuitError> {
        if n == 0 {
            return Err(CircuitError::InvalidRegister);
        }
        Ok(CircuitDag {
            n,
            input_succ: (0..n).map(Vertex::Output).collect(),
            output_pred: (0..n).map(Vertex::Input).collect(),
            nodes: Vec::new(),
            live: 0,
            output_permutation: (0..n).collect(),
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn gate_count(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// The accumulated output-qubit permutation. Entry `i` names the wire of
    /// this circuit whose final state belongs on logical qubit `i` of the
    /// original circuit.
    pub fn output_permutation(&self) -> &[QubitId] {
        &self.output_permutation
    }

    /// Overwrites the recorded permutation (deserialization only; the
    /// caller must pass a bijection).
    pub(crate) fn set_output_permutation(&mut self, perm: Vec<QubitId>) {
        debug_assert_eq!(perm.len(), self.n);
        self.output_permutation = perm;
    }

    /// Composes the recorded permutation with the transposition `(a b)`,
    /// used when a SWAP gate is eliminated.
    pub fn compose_swap_into_permutation(&mut self, a: QubitId, b: QubitId) {
        // (q . s)[j] = s[q[j]] with s the transposition.
        for v in self.output_permutation.iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    }

    pub fn gate(&self, id: GateId) -> Result<&Gate, CircuitError> {
        self.nodes
            .get(id.index())
            .and_then(|n| n.as_ref())
            .map(|n| &n.gate)
            .ok_or(CircuitError::UnknownGate(id))
    }

    pub fn contains(&self, id: GateId) -> bool {
        matches!(self.nodes.get(id.index()), Some(Some(_)))
    }

    /// Live gate ids in id (creation) order.
    pub fn gate_ids(&self) -> impl Iterator<Item = GateId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().map(|_| GateId(i as u32)))
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.nodes.iter().filter_map(|n| n.as_ref().map(|n| &n.gate))
    }

    fn node(&self, id: GateId) -> &GateNode {
        self.nodes[id.index()].as_ref().expect("live gate")
    }

    fn node_mut(&mut self, id: GateId) -> &mut GateNode {
        self.nodes[id.index()].as_mut().expect("live gate")
    }

    /// The wire a vertex sits on.
    pub fn wire_of(&self, v: Vertex) -> QubitId {
        match v {
            Vertex::Input(q) | Vertex::Output(q) => q,
            Vertex::Sub { gate, slot } => self.node(gate).gate.qubits[slot],
        }
    }

    /// The vertex following `v` on its wire. `None` for output caps.
    pub fn succ_of(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::Input(q) => Some(self.input_succ[q]),
            Vertex::Sub { gate, slot } => Some(self.node(gate).succ[slot]),
            Vertex::Output(_) => None,
        }
    }

    /// The vertex preceding `v` on its wire. `None` for input caps.
    pub fn pred_of(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::Output(q) => Some(self.output_pred[q]),
            Vertex::Sub { gate, slot } => Some(self.node(gate).pred[slot]),
            Vertex::Input(_) => None,
        }
    }

    /// The subnode of gate `g` on wire `q`.
    pub fn subnode(&self, g: GateId, q: QubitId) -> Result<Vertex, CircuitError> {
        let slot = self
            .gate(g)?
            .slot_of(q)
            .ok_or(CircuitError::WireError { gate: g, qubit: q })?;
        Ok(Vertex::Sub { gate: g, slot })
    }

    /// Vertices immediately before and after gate `g` on wire `q`.
    pub fn wire_neighbors(&self, g: GateId, q: QubitId) -> Result<(Vertex, Vertex), CircuitError> {
        let sub = self.subnode(g, q)?;
        Ok((self.pred_of(sub).unwrap(), self.succ_of(sub).unwrap()))
    }

    fn set_succ(&mut self, v: Vertex, to: Vertex) {
        match v {
            Vertex::Input(q) => self.input_succ[q] = to,
            Vertex::Sub { gate, slot } => self.node_mut(gate).succ[slot] = to,
            Vertex::Output(_) => unreachable!("output caps have no successor"),
        }
    }

    fn set_pred(&mut self, v: Vertex, from: Vertex) {
        match v {
            Vertex::Output(q) => self.output_pred[q] = from,
            Vertex::Sub { gate, slot } => self.node_mut(gate).pred[slot] = from,
            Vertex::Input(_) => unreachable!("input caps have no predecessor"),
        }
    }

    /// Connects `from -> to`, fixing both directions.
    pub(crate) fn link(&mut self, from: Vertex, to: Vertex) {
        self.set_succ(from, to);
        self.set_pred(to, from);
    }

    fn alloc(&mut self, gate: Gate, arity: usize) -> GateId {
        let id = gate.id;
        debug_assert_eq!(id.index(), self.nodes.len());
        self.nodes.push(Some(GateNode {
            gate,
            pred: smallvec::smallvec![Vertex::Input(0); arity],
            succ: smallvec::smallvec![Vertex::Input(0); arity],
        }));
        self.live += 1;
        id
    }

    fn free(&mut self, id: GateId) {
        self.nodes[id.index()] = None;
        self.live -= 1;
    }

    fn next_id(&self) -> GateId {
        GateId(self.nodes.len() as u32)
    }

    fn check_spec(&self, spec: &GateSpec) -> Result<(), CircuitError> {
        if !spec.is_well_formed() {
            return Err(CircuitError::MalformedGate(format!(
                "{} on {:?} with {} params",
                spec.kind,
                spec.qubits,
                spec.params.len()
            )));
        }
        for &q in &spec.qubits {
            if q >= self.n {
                return Err(CircuitError::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        Ok(())
    }

    /// Appends a gate at the end of its wires and returns its fresh id.
    pub fn append_gate(&mut self, spec: GateSpec) -> Result<GateId, CircuitError> {
        self.check_spec(&spec)?;
        let id = self.next_id();
        let qubits = spec.qubits.clone();
        self.alloc(
            Gate {
                id,
                kind: spec.kind,
                qubits: spec.qubits,
                params: spec.params,
            },
            qubits.len(),
        );
        for (slot, &q) in qubits.iter().enumerate() {
            let sub = Vertex::Sub { gate: id, slot };
            let prev = self.output_pred[q];
            self.link(prev, sub);
            self.link(sub, Vertex::Output(q));
        }
        Ok(id)
    }

    /// Replaces gate `target` by `replacement`, inserted in circuit order at
    /// the same cut. Replacement gates may only touch the target's qubits.
    /// An empty replacement deletes the gate.
    pub fn splice(
        &mut self,
        target: GateId,
        replacement: &[GateSpec],
    ) -> Result<Vec<GateId>, CircuitError> {
        let tgt_qubits: SmallVec<[QubitId; 3]> = self.gate(target)?.qubits.clone();
        for spec in replacement {
            self.check_spec(spec)?;
            for &q in &spec.qubits {
                if !tgt_qubits.contains(&q) {
                    return Err(CircuitError::SpliceError { qubit: q });
                }
            }
        }

        let mut ids = Vec::with_capacity(replacement.len());
        for spec in replacement {
            let id = self.next_id();
            self.alloc(
                Gate {
                    id,
                    kind: spec.kind,
                    qubits: spec.qubits.clone(),
                    params: spec.params.clone(),
                },
                spec.qubits.len(),
            );
            ids.push(id);
        }

        for (tslot, &q) in tgt_qubits.iter().enumerate() {
            let tsub = Vertex::Sub {
                gate: target,
                slot: tslot,
            };
            let after = self.succ_of(tsub).unwrap();
            let mut prev = self.pred_of(tsub).unwrap();
            for (&id, spec) in ids.iter().zip(replacement) {
                if let Some(slot) = spec.qubits.iter().position(|&x| x == q) {
                    let sub = Vertex::Sub { gate: id, slot };
                    self.link(prev, sub);
                    prev = sub;
                }
            }
            self.link(prev, after);
        }

        self.free(target);
        Ok(ids)
    }

    /// Deletes a gate, reconnecting its wires.
    pub fn remove_gate(&mut self, id: GateId) -> Result<(), CircuitError> {
        self.splice(id, &[]).map(|_| ())
    }

    /// Inserts a single-qubit gate immediately before the vertex `at`, which
    /// must lie on the gate's wire.
    pub fn insert_1q_before(
        &mut self,
        spec: GateSpec,
        at: Vertex,
    ) -> Result<GateId, CircuitError> {
        self.check_spec(&spec)?;
        debug_assert_eq!(spec.qubits.len(), 1);
        let q = spec.qubits[0];
        debug_assert_eq!(self.wire_of(at), q);
        let id = self.next_id();
        self.alloc(
            Gate {
                id,
                kind: spec.kind,
                qubits: spec.qubits,
                params: spec.params,
            },
            1,
        );
        let sub = Vertex::Sub { gate: id, slot: 0 };
        let prev = self.pred_of(at).unwrap();
        self.link(prev, sub);
        self.link(sub, at);
        Ok(id)
    }

    /// Detaches a single-qubit gate from its wire and reinserts it before
    /// `at` (an earlier vertex on the same wire).
    pub fn move_1q_before(&mut self, g: GateId, at: Vertex) -> Result<(), CircuitError> {
        let gate = self.gate(g)?;
        debug_assert_eq!(gate.arity(), 1);
        let q = gate.qubits[0];
        debug_assert_eq!(self.wire_of(at), q);
        let sub = Vertex::Sub { gate: g, slot: 0 };
        debug_assert_ne!(at, sub);
        let p = self.pred_of(sub).unwrap();
        let s = self.succ_of(sub).unwrap();
        self.link(p, s);
        let prev = self.pred_of(at).unwrap();
        self.link(prev, sub);
        self.link(sub, at);
        Ok(())
    }

    pub fn set_params(&mut self, id: GateId, params: &[Angle]) -> Result<(), CircuitError> {
        let node = self
            .nodes
            .get_mut(id.index())
            .and_then(|n| n.as_mut())
            .ok_or(CircuitError::UnknownGate(id))?;
        debug_assert_eq!(params.len(), node.gate.kind.param_count());
        node.gate.params = params.into();
        Ok(())
    }

    /// Rewrites kind and params in place. Arity must not change.
    pub fn set_operation(
        &mut self,
        id: GateId,
        kind: GateKind,
        params: &[Angle],
    ) -> Result<(), CircuitError> {
        let node = self
            .nodes
            .get_mut(id.index())
            .and_then(|n| n.as_mut())
            .ok_or(CircuitError::UnknownGate(id))?;
        debug_assert_eq!(kind.arity(), node.gate.qubits.len());
        debug_assert_eq!(kind.param_count(), params.len());
        node.gate.kind = kind;
        node.gate.params = params.into();
        Ok(())
    }

    /// Relabels the qubit a subnode slot sits on. Used only by SWAP
    /// elimination, which re-links wires at the same time.
    pub(crate) fn relabel_qubit(&mut self, id: GateId, slot: usize, q: QubitId) {
        self.node_mut(id).gate.qubits[slot] = q;
    }

    /// Removes a gate without bridging its wires. The caller must re-link
    /// all affected wires itself; used only by SWAP elimination.
    pub(crate) fn free_unlinked(&mut self, id: GateId) {
        self.free(id);
    }

    /// Gate ids on wire `q`, in circuit order.
    pub fn wire_gates(&self, q: QubitId) -> Vec<GateId> {
        let mut out = Vec::new();
        let mut v = self.input_succ[q];
        while let Vertex::Sub { gate, .. } = v {
            out.push(gate);
            v = self.succ_of(v).unwrap();
        }
        out
    }

    /// A deterministic topological order: among simultaneously-ready gates,
    /// the smallest gate id executes first.
    pub fn execution_order(&self) -> Vec<GateId> {
        let mut indeg = vec![0usize; self.nodes.len()];
        let mut heap: BinaryHeap<Reverse<GateId>> = BinaryHeap::new();
        for id in self.gate_ids() {
            let d = self
                .node(id)
                .pred
                .iter()
                .filter(|v| matches!(v, Vertex::Sub { .. }))
                .count();
            indeg[id.index()] = d;
            if d == 0 {
                heap.push(Reverse(id));
            }
        }
        let mut order = Vec::with_capacity(self.live);
        while let Some(Reverse(id)) = heap.pop() {
            order.push(id);
            for slot in 0..self.node(id).succ.len() {
                if let Vertex::Sub { gate, .. } = self.node(id).succ[slot] {
                    indeg[gate.index()] -= 1;
                    if indeg[gate.index()] == 0 {
                        heap.push(Reverse(gate));
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), self.live, "cycle in circuit graph");
        order
    }

    /// Checks every structural invariant; used by tests and debug assertions.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let fail = |msg: String| Err(CircuitError::InvariantViolation(msg));
        let mut perm_seen = vec![false; self.n];
        for &p in &self.output_permutation {
            if p >= self.n || perm_seen[p] {
                return fail("output_permutation is not a bijection".into());
            }
            perm_seen[p] = true;
        }

        let total_slots: usize = self.gates().map(|g| g.arity()).sum();
        let mut visited = std::collections::HashSet::new();
        for q in 0..self.n {
            let mut v = self.input_succ[q];
            let mut prev = Vertex::Input(q);
            let mut steps = 0usize;
            loop {
                match v {
                    Vertex::Sub { gate, slot } => {
                        let node = match self.nodes.get(gate.index()).and_then(|n| n.as_ref()) {
                            Some(n) => n,
                            None => return fail(format!("edge into dead gate {gate:?}")),
                        };
                        if node.gate.qubits[slot] != q {
                            return fail(format!(
                                "subnode {gate:?}/{slot} labeled {} but sits on wire {q}",
                                node.gate.qubits[slot]
                            ));
                        }
                        if node.pred[slot] != prev {
                            return fail(format!("back-pointer mismatch at {gate:?}/{slot}"));
                        }
                        if !visited.insert((gate, slot)) {
                            return fail(format!("subnode {gate:?}/{slot} on two paths"));
                        }
                        prev = v;
                        v = node.succ[slot];
                    }
                    Vertex::Output(w) => {
                        if w != q {
                            return fail(format!("wire {q} terminates at output {w}"));
                        }
                        if self.output_pred[q] != prev {
                            return fail(format!("output back-pointer mismatch on wire {q}"));
                        }
                        break;
                    }
                    Vertex::Input(_) => return fail("edge into an input cap".into()),
                }
                steps += 1;
                if steps > total_slots + 1 {
                    return fail(format!("wire {q} does not terminate"));
                }
            }
        }
        if visited.len() != total_slots {
            return fail("some subnodes are unreachable".into());
        }
        if self.execution_order().len() != self.live {
            return fail("circuit graph contains a cycle".into());
        }
        Ok(())
    }
}
