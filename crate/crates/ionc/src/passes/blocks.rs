//! Block aggregation for the laser interaction zone.
//!
//! Gates execute simultaneously on all ions stored at the interaction zone,
//! so a ZZ gate together with identical single-qubit sequences on both of
//! its qubits forms a block that runs in one shot. Every ZZ gate anchors a
//! block; leftover single-qubit gates form blockless sequences, whose count
//! block rearrangement and angle splitting then minimize. The block
//! structure is bookkeeping over the DAG (gate-id references): only angle
//! splitting touches the circuit itself.

use std::collections::HashMap;

use serde::Serialize;

use crate::angle::Angle;
use crate::dag::{CircuitDag, Vertex};
use crate::error::CompileError;
use crate::gate::{build, GateId, GateKind, QubitId};

use super::PassResult;

/// A ZZ anchor with its shared predecessor and successor sequences. After
/// final ZZ-angle restriction the anchor may expand to two or three
/// ZZ(pi/2) gates, which stay inside the same block.
#[derive(Clone, Debug)]
pub struct Block {
    pub zz: Vec<GateId>,
    pub qubits: [QubitId; 2],
    /// Predecessor pairs in circuit order; `p[t][k]` acts on `qubits[k]`.
    pub p: Vec<[GateId; 2]>,
    /// Successor pairs in circuit order.
    pub s: Vec<[GateId; 2]>,
}

/// A maximal run of single-qubit gates on one wire not owned by any block.
#[derive(Clone, Debug)]
pub struct BlocklessSequence {
    pub qubit: QubitId,
    pub gates: Vec<GateId>,
}

/// The block partition of a circuit.
#[derive(Clone, Debug, Default)]
pub struct BlockSet {
    pub blocks: Vec<Block>,
    pub blockless: Vec<BlocklessSequence>,
}

/// One entry of the linearized schedule handed to the shuttling stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScheduleItem {
    Block(usize),
    Sequence(usize),
}

impl BlockSet {
    pub fn blockless_count(&self) -> usize {
        self.blockless.iter().filter(|s| !s.gates.is_empty()).count()
    }

    fn drop_empty_sequences(&mut self) {
        self.blockless.retain(|s| !s.gates.is_empty());
    }

    /// Every single-qubit gate sits in exactly one block sequence or one
    /// blockless sequence, every ZZ in exactly one block, and block pairs
    /// agree in kind and parameters.
    pub fn check_partition(&self, c: &CircuitDag) -> Result<(), String> {
        let mut seen: HashMap<GateId, &'static str> = HashMap::new();
        let mut claim = |id: GateId, what: &'static str| -> Result<(), String> {
            if seen.insert(id, what).is_some() {
                return Err(format!("gate {id} claimed twice"));
            }
            Ok(())
        };
        for b in &self.blocks {
            for &z in &b.zz {
                claim(z, "zz")?;
            }
            for pair in b.p.iter().chain(b.s.iter()) {
                let g0 = c.gate(pair[0]).map_err(|e| e.to_string())?;
                let g1 = c.gate(pair[1]).map_err(|e| e.to_string())?;
                if !g0.same_operation(g1) {
                    return Err(format!("pair {:?} differs in kind or angles", pair));
                }
                if g0.qubits[0] != b.qubits[0] || g1.qubits[0] != b.qubits[1] {
                    return Err(format!("pair {:?} not aligned with block wires", pair));
                }
                claim(pair[0], "pair")?;
                claim(pair[1], "pair")?;
            }
        }
        for seq in &self.blockless {
            for &id in &seq.gates {
                let g = c.gate(id).map_err(|e| e.to_string())?;
                if g.qubits[0] != seq.qubit {
                    return Err(format!("sequence gate {id} on the wrong wire"));
                }
                claim(id, "blockless")?;
            }
        }
        for g in c.gates() {
            match g.arity() {
                1 => {
                    if !seen.contains_key(&g.id) {
                        return Err(format!("single-qubit gate {} unpartitioned", g.id));
                    }
                }
                2 if g.kind == GateKind::Zz && seen.get(&g.id) != Some(&"zz") => {
                    return Err(format!("ZZ gate {} not anchored in a block", g.id));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Builds the block partition: iterating over the ZZ gates in execution
/// order, each block grows its predecessor sequence backward and successor
/// sequence forward while both wires see identical unclaimed single-qubit
/// gates. Remaining single-qubit gates fall into maximal blockless runs.
pub fn build_blocks(c: &CircuitDag) -> Result<BlockSet, CompileError> {
    let mut claimed: HashMap<GateId, ()> = HashMap::new();
    let mut blocks = Vec::new();

    for id in c.execution_order() {
        let g = c.gate(id)?;
        if g.kind != GateKind::Zz {
            continue;
        }
        let (qi, qj) = (g.qubits[0], g.qubits[1]);
        let grow = |c: &CircuitDag,
                    claimed: &HashMap<GateId, ()>,
                    start: (Vertex, Vertex),
                    forward: bool|
         -> Result<Vec<[GateId; 2]>, CompileError> {
            let mut out = Vec::new();
            let (mut vi, mut vj) = start;
            loop {
                let step = |v: Vertex| if forward { c.succ_of(v) } else { c.pred_of(v) };
                let (ni, nj) = (step(vi).unwrap(), step(vj).unwrap());
                let (gi, gj) = match (ni.gate_id(), nj.gate_id()) {
                    (Some(a), Some(b)) if a != b => (a, b),
                    _ => break,
                };
                if claimed.contains_key(&gi) || claimed.contains_key(&gj) {
                    break;
                }
                let (ga, gb) = (c.gate(gi)?, c.gate(gj)?);
                if ga.arity() != 1 || gb.arity() != 1 || !ga.same_operation(gb) {
                    break;
                }
                out.push([gi, gj]);
                vi = ni;
                vj = nj;
            }
            Ok(out)
        };

        let zi = c.subnode(id, qi)?;
        let zj = c.subnode(id, qj)?;
        let mut p = grow(c, &claimed, (zi, zj), false)?;
        p.reverse();
        let s = grow(c, &claimed, (zi, zj), true)?;
        for pair in p.iter().chain(s.iter()) {
            claimed.insert(pair[0], ());
            claimed.insert(pair[1], ());
        }
        blocks.push(Block {
            zz: vec![id],
            qubits: [qi, qj],
            p,
            s,
        });
    }

    let mut blockless = Vec::new();
    for q in 0..c.qubit_count() {
        let mut run: Vec<GateId> = Vec::new();
        for id in c.wire_gates(q) {
            let g = c.gate(id)?;
            if g.arity() == 1 && !claimed.contains_key(&id) {
                run.push(id);
            } else if !run.is_empty() {
                blockless.push(BlocklessSequence {
                    qubit: q,
                    gates: std::mem::take(&mut run),
                });
            }
        }
        if !run.is_empty() {
            blockless.push(BlocklessSequence { qubit: q, gates: run });
        }
    }

    let set = BlockSet { blocks, blockless };
    debug_assert_eq!(set.check_partition(c), Ok(()));
    Ok(set)
}

/// The vertex immediately before a block's region on one of its wires.
fn front_pred(c: &CircuitDag, b: &Block, side: usize) -> Vertex {
    let first = b
        .p
        .first()
        .map(|pair| pair[side])
        .unwrap_or_else(|| b.zz[0]);
    let q = b.qubits[side];
    c.wire_neighbors(first, q).expect("block gate on its wire").0
}

/// The vertex immediately after a block's region on one of its wires.
fn back_succ(c: &CircuitDag, b: &Block, side: usize) -> Vertex {
    let last = b
        .s
        .last()
        .map(|pair| pair[side])
        .unwrap_or_else(|| *b.zz.last().unwrap());
    let q = b.qubits[side];
    c.wire_neighbors(last, q).expect("block gate on its wire").1
}

struct Ownership {
    /// gate id -> blockless sequence index
    seq_of: HashMap<GateId, usize>,
    /// gate id -> (block index, true when in `s`)
    block_of: HashMap<GateId, (usize, bool)>,
}

fn index_ownership(set: &BlockSet) -> Ownership {
    let mut seq_of = HashMap::new();
    let mut block_of = HashMap::new();
    for (i, seq) in set.blockless.iter().enumerate() {
        for &g in &seq.gates {
            seq_of.insert(g, i);
        }
    }
    for (i, b) in set.blocks.iter().enumerate() {
        for pair in &b.p {
            block_of.insert(pair[0], (i, false));
            block_of.insert(pair[1], (i, false));
        }
        for pair in &b.s {
            block_of.insert(pair[0], (i, true));
            block_of.insert(pair[1], (i, true));
        }
    }
    Ownership { seq_of, block_of }
}

/// Block rearrangement: a blockless sequence equal to the tail of a
/// preceding block's successor sequence moves, together with that tail,
/// into the front of this block's predecessor sequence. The orphaned tail
/// on the third wire must itself be absorbed into a following block, or
/// the whole rearrangement is rolled back.
pub fn rearrange_blocks(c: &CircuitDag, set: &mut BlockSet) -> Result<PassResult, CompileError> {
    let mut changed = false;
    loop {
        let mut applied = false;
        let mut own = index_ownership(set);
        for alpha in 0..set.blocks.len() {
            for side_i in 0..2 {
                // cheap screen before cloning anything: the two front
                // predecessors must be a blockless gate and a block-s gate
                let a = &set.blocks[alpha];
                let gi = front_pred(c, a, side_i).gate_id();
                let gj = front_pred(c, a, 1 - side_i).gate_id();
                let plausible = matches!(
                    (gi.and_then(|g| own.seq_of.get(&g)), gj.and_then(|g| own.block_of.get(&g))),
                    (Some(_), Some(&(b, true))) if b != alpha
                );
                if !plausible {
                    continue;
                }
                let snapshot = set.clone();
                let before_count = set.blockless_count();
                if try_rearrange(c, set, &own, alpha, side_i)? && set.blockless_count() < before_count
                {
                    debug_assert_eq!(set.check_partition(c), Ok(()));
                    applied = true;
                    changed = true;
                    own = index_ownership(set);
                } else {
                    *set = snapshot;
                }
            }
        }
        if !applied {
            break;
        }
    }
    set.drop_empty_sequences();
    debug_assert_eq!(set.check_partition(c), Ok(()));
    Ok(PassResult {
        changed,
        gates_removed: 0,
        gates_added: 0,
    })
}

/// One tentative rearrangement around `set.blocks[alpha]`, with the
/// blockless sequence expected on wire side `side_i`. Returns true when a
/// structural change was made (caller validates the blockless count).
fn try_rearrange(
    c: &CircuitDag,
    set: &mut BlockSet,
    own: &Ownership,
    alpha: usize,
    side_i: usize,
) -> Result<bool, CompileError> {
    let a = &set.blocks[alpha];
    let side_j = 1 - side_i;
    let (_qi, qj) = (a.qubits[side_i], a.qubits[side_j]);

    // wire i: a blockless sequence must end directly before the block
    let gi = match front_pred(c, a, side_i).gate_id() {
        Some(g) => g,
        None => return Ok(false),
    };
    let mu = match own.seq_of.get(&gi) {
        Some(&m) => m,
        None => return Ok(false),
    };
    // wire j: the tail of a preceding block's successor sequence
    let gj = match front_pred(c, a, side_j).gate_id() {
        Some(g) => g,
        None => return Ok(false),
    };
    let beta = match own.block_of.get(&gj) {
        Some(&(b, true)) if b != alpha => b,
        _ => return Ok(false),
    };

    let b_mu_len = set.blockless[mu].gates.len();
    let bblk = &set.blocks[beta];
    if bblk.s.len() < b_mu_len {
        return Ok(false);
    }
    let beta_side_j = if bblk.qubits[0] == qj { 0 } else { 1 };
    if bblk.qubits[beta_side_j] != qj {
        return Ok(false);
    }
    let beta_side_k = 1 - beta_side_j;
    let qk = bblk.qubits[beta_side_k];
    let tail_start = bblk.s.len() - b_mu_len;
    // gj must be the very end of beta's successor sequence
    if bblk.s.last().map(|pair| pair[beta_side_j]) != Some(gj) {
        return Ok(false);
    }
    // the entire blockless sequence must equal the tail
    for t in 0..b_mu_len {
        let seq_gate = c.gate(set.blockless[mu].gates[t])?;
        let tail_gate = c.gate(set.blocks[beta].s[tail_start + t][beta_side_j])?;
        if !seq_gate.same_operation(tail_gate) {
            return Ok(false);
        }
    }

    // stage 1: absorb b_mu and the j-half of the tail into alpha's p
    let tail: Vec<[GateId; 2]> = set.blocks[beta].s.split_off(tail_start);
    let mu_gates = std::mem::take(&mut set.blockless[mu].gates);
    let mut new_pairs = Vec::with_capacity(b_mu_len);
    for (t, pair) in tail.iter().enumerate() {
        let mut entry = [GateId(0); 2];
        entry[side_i] = mu_gates[t];
        entry[side_j] = pair[beta_side_j];
        new_pairs.push(entry);
    }
    let a = &mut set.blocks[alpha];
    new_pairs.append(&mut a.p);
    a.p = new_pairs;

    // the k-halves of the tail become an orphan sequence b_nu
    let b_nu: Vec<GateId> = tail.iter().map(|pair| pair[beta_side_k]).collect();

    // stage 2: b_nu must border a third block on wire k...
    let last_nu = *b_nu.last().unwrap();
    let next = c.wire_neighbors(last_nu, qk)?.1;
    let gamma_entry = match next.gate_id() {
        Some(g) => g,
        None => {
            set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
            return Ok(true); // structural change happened; count check rejects it
        }
    };
    let own2 = index_ownership(set);
    let gamma = match own2.block_of.get(&gamma_entry) {
        Some(&(g, false)) if g != beta => g,
        _ => match set.blocks.iter().position(|b| b.zz.contains(&gamma_entry)) {
            Some(g) if g != beta => g,
            _ => {
                set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
                return Ok(true);
            }
        },
    };
    // ... whose p must start right after b_nu on wire k
    let gblk = &set.blocks[gamma];
    let gamma_side_k = if gblk.qubits[0] == qk { 0 } else { 1 };
    if gblk.qubits[gamma_side_k] != qk || front_pred(c, gblk, gamma_side_k).gate_id() != Some(last_nu)
    {
        set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
        return Ok(true);
    }
    let gamma_side_l = 1 - gamma_side_k;
    // ... and a blockless sequence on wire l must contain b_nu at its end
    let gl = match front_pred(c, gblk, gamma_side_l).gate_id() {
        Some(g) => g,
        None => {
            set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
            return Ok(true);
        }
    };
    let xi = match own2.seq_of.get(&gl) {
        Some(&x) => x,
        None => {
            set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
            return Ok(true);
        }
    };
    if set.blockless[xi].gates.len() < b_nu.len()
        || set.blockless[xi].gates.last() != Some(&gl)
    {
        set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
        return Ok(true);
    }
    let xi_start = set.blockless[xi].gates.len() - b_nu.len();
    for t in 0..b_nu.len() {
        let nu_gate = c.gate(b_nu[t])?;
        let xi_gate = c.gate(set.blockless[xi].gates[xi_start + t])?;
        if !nu_gate.same_operation(xi_gate) {
            set.blockless.push(BlocklessSequence { qubit: qk, gates: b_nu });
            return Ok(true);
        }
    }
    let xi_tail = set.blockless[xi].gates.split_off(xi_start);
    let mut gamma_pairs = Vec::with_capacity(b_nu.len());
    for t in 0..b_nu.len() {
        let mut entry = [GateId(0); 2];
        entry[gamma_side_k] = b_nu[t];
        entry[gamma_side_l] = xi_tail[t];
        gamma_pairs.push(entry);
    }
    let g = &mut set.blocks[gamma];
    gamma_pairs.append(&mut g.p);
    g.p = gamma_pairs;
    Ok(true)
}

/// Angle splitting: when the two wires of a block see simultaneous `R`
/// rotations with equal phase but different pulse areas right at the block
/// boundary, the larger one splits so a matched pair joins the block. The
/// split is applied only when it empties the donor blockless sequence.
pub fn split_angles(c: &mut CircuitDag, set: &mut BlockSet) -> Result<PassResult, CompileError> {
    let before = c.gate_count();
    let mut changed = false;
    loop {
        let mut applied = false;
        let mut own = index_ownership(set);
        for alpha in 0..set.blocks.len() {
            for p_side in [true, false] {
                for donor_side in 0..2 {
                    if try_split(c, set, &own, alpha, p_side, donor_side)? {
                        applied = true;
                        changed = true;
                        debug_assert_eq!(set.check_partition(c), Ok(()));
                        own = index_ownership(set);
                    }
                }
            }
        }
        if !applied {
            break;
        }
    }
    if changed {
        tidy_sequences(c, set)?;
    }
    set.drop_empty_sequences();
    debug_assert_eq!(set.check_partition(c), Ok(()));
    Ok(PassResult::from_counts(before, c.gate_count(), changed))
}

fn try_split(
    c: &mut CircuitDag,
    set: &mut BlockSet,
    own: &Ownership,
    alpha: usize,
    p_side: bool,
    donor_side: usize,
) -> Result<bool, CompileError> {
    let a = &set.blocks[alpha];
    let other_side = 1 - donor_side;

    let boundary = |side: usize| -> Option<GateId> {
        if p_side {
            front_pred(c, a, side).gate_id()
        } else {
            back_succ(c, a, side).gate_id()
        }
    };
    let (gi, gj) = match (boundary(donor_side), boundary(other_side)) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return Ok(false),
    };
    // both must be blockless R rotations with equal phase
    let (mu_i, mu_j) = match (own.seq_of.get(&gi), own.seq_of.get(&gj)) {
        (Some(&x), Some(&y)) if x != y => (x, y),
        _ => return Ok(false),
    };
    let (ga, gb) = (c.gate(gi)?.clone(), c.gate(gj)?.clone());
    if ga.kind != GateKind::R || gb.kind != GateKind::R {
        return Ok(false);
    }
    if !ga.params[1].approx_eq(gb.params[1]) {
        return Ok(false);
    }
    let (theta_i, theta_j) = (ga.params[0], gb.params[0]);
    if theta_i.approx_eq(theta_j) || theta_i.units() >= theta_j.units() {
        return Ok(false);
    }
    // the split must empty the donor sequence, else it is rejected
    if set.blockless[mu_i].gates.len() != 1 {
        return Ok(false);
    }

    let phi = ga.params[1];
    let residue = theta_j - theta_i;
    let qj = set.blocks[alpha].qubits[other_side];
    // matched part adjacent to the block
    let replacement = if p_side {
        [build::r(qj, residue, phi), build::r(qj, theta_i, phi)]
    } else {
        [build::r(qj, theta_i, phi), build::r(qj, residue, phi)]
    };
    let new = c.splice(gj, &replacement)?;
    let (matched_j, leftover_j) = if p_side { (new[1], new[0]) } else { (new[0], new[1]) };

    let mut pair = [GateId(0); 2];
    pair[donor_side] = gi;
    pair[other_side] = matched_j;
    let a = &mut set.blocks[alpha];
    if p_side {
        a.p.insert(0, pair);
    } else {
        a.s.push(pair);
    }
    set.blockless[mu_i].gates.clear();
    // within the partner sequence, the split gate is replaced by its residue
    let slot = if p_side {
        set.blockless[mu_j].gates.len() - 1
    } else {
        0
    };
    debug_assert_eq!(set.blockless[mu_j].gates[slot], gj);
    set.blockless[mu_j].gates[slot] = leftover_j;
    Ok(true)
}

/// Re-minimizes blockless and block sequences after splitting: zero-area
/// rotations vanish and wire-adjacent equal-phase R pairs merge when the
/// summed pulse area stays in the calibrated set.
fn tidy_sequences(c: &mut CircuitDag, set: &mut BlockSet) -> Result<(), CompileError> {
    // blockless sequences
    for idx in 0..set.blockless.len() {
        loop {
            let gates = &set.blockless[idx].gates;
            let mut action: Option<(usize, MergeKind)> = None;
            for t in 0..gates.len() {
                let g = c.gate(gates[t])?;
                if g.kind == GateKind::R && g.params[0].is_zero() {
                    action = Some((t, MergeKind::DropZero));
                    break;
                }
                if t + 1 < gates.len() {
                    let h = c.gate(gates[t + 1])?;
                    if let Some(kind) = mergeable(g, h) {
                        action = Some((t, kind));
                        break;
                    }
                }
            }
            match action {
                Some((t, MergeKind::DropZero)) => {
                    let id = set.blockless[idx].gates.remove(t);
                    c.remove_gate(id)?;
                }
                Some((t, MergeKind::Cancel)) => {
                    let id2 = set.blockless[idx].gates.remove(t + 1);
                    let id1 = set.blockless[idx].gates.remove(t);
                    c.remove_gate(id1)?;
                    c.remove_gate(id2)?;
                }
                Some((t, MergeKind::Merge(sum))) => {
                    let id2 = set.blockless[idx].gates.remove(t + 1);
                    let g = c.gate(set.blockless[idx].gates[t])?.clone();
                    c.set_params(set.blockless[idx].gates[t], &[sum, g.params[1]])?;
                    c.remove_gate(id2)?;
                }
                None => break,
            }
        }
    }
    // block pair sequences: both sides merge simultaneously
    for b in 0..set.blocks.len() {
        for s_side in [false, true] {
            loop {
                let pairs = if s_side { &set.blocks[b].s } else { &set.blocks[b].p };
                let mut action: Option<(usize, MergeKind)> = None;
                for t in 0..pairs.len().saturating_sub(1) {
                    let g = c.gate(pairs[t][0])?;
                    let h = c.gate(pairs[t + 1][0])?;
                    if let Some(kind) = mergeable(g, h) {
                        action = Some((t, kind));
                        break;
                    }
                }
                let Some((t, kind)) = action else { break };
                let pairs = if s_side {
                    &mut set.blocks[b].s
                } else {
                    &mut set.blocks[b].p
                };
                let second = pairs.remove(t + 1);
                match kind {
                    MergeKind::Cancel => {
                        let first = pairs.remove(t);
                        for id in [first[0], first[1], second[0], second[1]] {
                            c.remove_gate(id)?;
                        }
                    }
                    MergeKind::Merge(sum) => {
                        let first = pairs[t];
                        for side in 0..2 {
                            let phi = c.gate(first[side])?.params[1];
                            c.set_params(first[side], &[sum, phi])?;
                            c.remove_gate(second[side])?;
                        }
                    }
                    MergeKind::DropZero => unreachable!(),
                }
            }
        }
    }
    Ok(())
}

enum MergeKind {
    DropZero,
    Cancel,
    Merge(Angle),
}

/// Adjacent equal-phase R pair merge rule that preserves the restricted set.
fn mergeable(g: &crate::gate::Gate, h: &crate::gate::Gate) -> Option<MergeKind> {
    if g.kind != GateKind::R || h.kind != GateKind::R {
        return None;
    }
    if !g.params[1].approx_eq(h.params[1]) {
        return None;
    }
    let sum = g.params[0] + h.params[0];
    if sum.is_zero() {
        Some(MergeKind::Cancel)
    } else if sum.is_native_pulse_area() {
        Some(MergeKind::Merge(sum))
    } else {
        None
    }
}

/// Orders blocks and blockless sequences into the linearized schedule:
/// blocks on the same qubit pair with nothing between them become adjacent,
/// and the blockless sequences after a block are ordered so the sequence on
/// the qubit shared with the next block executes last. Only commuting
/// (disjoint-support) reorderings happen, so the circuit itself is
/// untouched.
pub fn order_blocks(
    c: &CircuitDag,
    set: &mut BlockSet,
) -> Result<(PassResult, Vec<ScheduleItem>), CompileError> {
    set.drop_empty_sequences();
    let nblocks = set.blocks.len();

    // wire order of blocks per qubit, from the anchor order
    let mut wire_blocks: HashMap<QubitId, Vec<usize>> = HashMap::new();
    for (i, b) in set.blocks.iter().enumerate() {
        wire_blocks.entry(b.qubits[0]).or_default().push(i);
        wire_blocks.entry(b.qubits[1]).or_default().push(i);
    }

    // each sequence attaches after the previous block on its wire (if any),
    // otherwise before the next block, otherwise it floats at the start
    let own = index_ownership(set);
    let seq_prev_block: Vec<Option<usize>> = set
        .blockless
        .iter()
        .map(|seq| {
            let first = seq.gates[0];
            let pred = c.wire_neighbors(first, seq.qubit).ok()?.0;
            let pg = pred.gate_id()?;
            own.block_of
                .get(&pg)
                .map(|&(b, _)| b)
                .or_else(|| set.blocks.iter().position(|b| b.zz.contains(&pg)))
        })
        .collect();

    let mut emitted_blocks = vec![false; nblocks];
    let mut emitted_seqs = vec![false; set.blockless.len()];
    let mut schedule = Vec::with_capacity(nblocks + set.blockless.len());

    // sequences on wires without any block run first
    let mut floating: Vec<usize> = (0..set.blockless.len())
        .filter(|&i| !wire_blocks.contains_key(&set.blockless[i].qubit))
        .collect();
    floating.sort_by_key(|&i| set.blockless[i].qubit);
    for i in floating {
        emitted_seqs[i] = true;
        schedule.push(ScheduleItem::Sequence(i));
    }

    let next_block_on = |emitted: &[bool], q: QubitId| -> Option<usize> {
        wire_blocks
            .get(&q)
            .and_then(|v| v.iter().find(|&&b| !emitted[b]).copied())
    };

    let mut last: Option<usize> = None;
    for _ in 0..nblocks {
        // rule 1: a same-pair successor with no intervening block comes next
        let pick = last
            .and_then(|l| {
                let pair = {
                    let mut p = set.blocks[l].qubits;
                    p.sort_unstable();
                    p
                };
                let n0 = next_block_on(&emitted_blocks, pair[0])?;
                let n1 = next_block_on(&emitted_blocks, pair[1])?;
                if n0 == n1 {
                    let mut q = set.blocks[n0].qubits;
                    q.sort_unstable();
                    (q == pair).then_some(n0)
                } else {
                    None
                }
            })
            .unwrap_or_else(|| {
                (0..nblocks)
                    .find(|&b| !emitted_blocks[b])
                    .expect("a block remains")
            });

        // pending sequences that wire-precede this block
        let mut pending: Vec<usize> = (0..set.blockless.len())
            .filter(|&i| {
                !emitted_seqs[i]
                    && set.blocks[pick].qubits.contains(&set.blockless[i].qubit)
                    && seq_prev_block[i].map(|b| emitted_blocks[b]).unwrap_or(true)
            })
            .collect();
        pending.sort_by_key(|&i| set.blockless[i].qubit);
        for i in pending {
            emitted_seqs[i] = true;
            schedule.push(ScheduleItem::Sequence(i));
        }
        emitted_blocks[pick] = true;
        schedule.push(ScheduleItem::Block(pick));
        last = Some(pick);

        // rule 2: the block's trailing sequences, shared-with-next last
        let mut post: Vec<usize> = (0..set.blockless.len())
            .filter(|&i| !emitted_seqs[i] && seq_prev_block[i] == Some(pick))
            .collect();
        let nb0 = next_block_on(&emitted_blocks, set.blocks[pick].qubits[0]);
        let nb1 = next_block_on(&emitted_blocks, set.blocks[pick].qubits[1]);
        let shared_qubit: Option<QubitId> = match (nb0, nb1) {
            (Some(a), Some(b)) if a != b => {
                // the earlier of the two upcoming blocks claims its wire last
                let first = if a < b { a } else { b };
                Some(if first == a.min(b) && nb0 == Some(first) {
                    set.blocks[pick].qubits[0]
                } else {
                    set.blocks[pick].qubits[1]
                })
            }
            (Some(_), None) => Some(set.blocks[pick].qubits[0]),
            (None, Some(_)) => Some(set.blocks[pick].qubits[1]),
            _ => None,
        };
        post.sort_by_key(|&i| {
            let q = set.blockless[i].qubit;
            (Some(q) == shared_qubit, q)
        });
        for i in post {
            emitted_seqs[i] = true;
            schedule.push(ScheduleItem::Sequence(i));
        }
    }

    // trailing sequences whose previous block is now emitted
    let mut rest: Vec<usize> = (0..set.blockless.len()).filter(|&i| !emitted_seqs[i]).collect();
    rest.sort_by_key(|&i| set.blockless[i].qubit);
    for i in rest {
        schedule.push(ScheduleItem::Sequence(i));
    }

    debug_assert!(schedule_is_wire_consistent(c, set, &schedule));
    Ok((
        PassResult {
            changed: false,
            gates_removed: 0,
            gates_added: 0,
        },
        schedule,
    ))
}

/// Every wire sees its items in wire order.
pub fn schedule_is_wire_consistent(
    c: &CircuitDag,
    set: &BlockSet,
    schedule: &[ScheduleItem],
) -> bool {
    let mut rank: HashMap<GateId, usize> = HashMap::new();
    for (pos, item) in schedule.iter().enumerate() {
        match item {
            ScheduleItem::Block(b) => {
                let blk = &set.blocks[*b];
                for pair in blk.p.iter().chain(blk.s.iter()) {
                    rank.insert(pair[0], pos);
                    rank.insert(pair[1], pos);
                }
                for &z in &blk.zz {
                    rank.insert(z, pos);
                }
            }
            ScheduleItem::Sequence(s) => {
                for &g in &set.blockless[*s].gates {
                    rank.insert(g, pos);
                }
            }
        }
    }
    if rank.len() != c.gate_count() {
        return false;
    }
    for q in 0..c.qubit_count() {
        let mut prev = 0usize;
        for id in c.wire_gates(q) {
            let r = match rank.get(&id) {
                Some(&r) => r,
                None => return false,
            };
            if r < prev {
                return false;
            }
            prev = r;
        }
    }
    true
}
