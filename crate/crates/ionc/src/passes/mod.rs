//! Circuit transformation passes.
//!
//! The architecture-independent passes (SWAP elimination, the
//! redundancy/commutation fixpoint, macro matching, rebasing, sequence
//! building and pulse-area restriction) live next to the shuttling-specific
//! ones (phase tracking, block aggregation, block ordering, ZZ angle
//! restriction). Each pass mutates one [`CircuitDag`] and reports what it
//! changed; the pipeline wires them together in the fixed order.

mod blocks;
mod macro_match;
mod phase_track;
mod rebase;
mod reduce;
mod sequences;
mod swaps;
mod zz_restrict;

pub use blocks::{
    build_blocks, order_blocks, rearrange_blocks, schedule_is_wire_consistent, split_angles,
    Block, BlockSet, BlocklessSequence, ScheduleItem,
};
pub use macro_match::{match_macros, match_macros_with, Macro};
pub use phase_track::phase_tracking;
pub use rebase::{rebase_to_native, squash_single_qubit_runs};
pub use reduce::{commute_through_multis, merge_rz_through_zz, reduce_fixpoint, remove_redundancies};
pub use sequences::{
    build_rx_rz_sequences, max_segment_profile, merge_rz_sweep, restrict_single_qubit_angles,
    SegmentProfile,
};
pub use swaps::eliminate_swaps;
pub use zz_restrict::restrict_zz_angles;

/// What a pass did to the circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PassResult {
    pub changed: bool,
    pub gates_removed: usize,
    pub gates_added: usize,
}

impl PassResult {
    pub(crate) fn merge(&mut self, other: PassResult) {
        self.changed |= other.changed;
        self.gates_removed += other.gates_removed;
        self.gates_added += other.gates_added;
    }

    pub(crate) fn from_counts(before: usize, after: usize, changed: bool) -> PassResult {
        PassResult {
            changed,
            gates_removed: before.saturating_sub(after),
            gates_added: after.saturating_sub(before),
        }
    }
}
