//! Behavioral and sequence-form strategies.
//!
//! Both are stored as flat vectors over one player's sequence slots, so
//! conversion is a single pass over infosets. Slot 0 (the empty
//! sequence) is fixed at 1 in both representations; for a behavioral
//! strategy the remaining slots hold per-infoset simplex entries.

use super::{Player, SequenceIndex};

/// Per-infoset action distributions for one player.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorStrategy {
    pub player: Player,
    values: Vec<f64>,
}

/// Realization plan for one player: q[0] = 1 and, at every infoset,
/// the action entries sum to the parent-sequence entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStrategy {
    pub player: Player,
    values: Vec<f64>,
}

impl BehaviorStrategy {
    pub fn new(player: Player, values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        BehaviorStrategy { player, values }
    }

    /// Uniform distribution at every infoset.
    pub fn uniform(idx: &SequenceIndex, player: Player) -> Self {
        let mut values = vec![0.0; idx.player(player).num_sequences];
        values[0] = 1.0;
        for &iid in idx.infosets_of(player) {
            let info = idx.infoset(iid);
            let p = 1.0 / info.num_actions as f64;
            for s in info.seq_range() {
                values[s] = p;
            }
        }
        BehaviorStrategy { player, values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Largest deviation from simplex validity over all infosets.
    pub fn simplex_error(&self, idx: &SequenceIndex) -> f64 {
        let mut err: f64 = 0.0;
        for &iid in idx.infosets_of(self.player) {
            let info = idx.infoset(iid);
            let slice = &self.values[info.seq_range()];
            let sum: f64 = slice.iter().sum();
            err = err.max((sum - 1.0).abs());
            for &v in slice {
                if v < 0.0 {
                    err = err.max(-v);
                }
            }
        }
        err
    }
}

impl SequenceStrategy {
    pub fn new(player: Player, values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        SequenceStrategy { player, values }
    }

    pub fn zeros(idx: &SequenceIndex, player: Player) -> Self {
        let mut values = vec![0.0; idx.player(player).num_sequences];
        values[0] = 1.0;
        SequenceStrategy { player, values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Largest flow-conservation violation:
    /// |Σ_a q[Ia] − q[pI]| maximized over infosets, plus any negativity.
    pub fn flow_error(&self, idx: &SequenceIndex) -> f64 {
        let mut err: f64 = (self.values[0] - 1.0).abs();
        for &iid in idx.infosets_of(self.player) {
            let info = idx.infoset(iid);
            let sum: f64 = self.values[info.seq_range()].iter().sum();
            err = err.max((sum - self.values[info.parent_seq.index()]).abs());
        }
        for &v in &self.values {
            if v < 0.0 {
                err = err.max(-v);
            }
        }
        err
    }
}

/// Realization plan of a behavioral strategy: the product of action
/// probabilities along each sequence's ancestor chain.
pub fn behavior_to_sequence(x: &BehaviorStrategy, idx: &SequenceIndex) -> SequenceStrategy {
    let player = x.player;
    let mut q = vec![0.0; idx.player(player).num_sequences];
    q[0] = 1.0;
    // Top-down: a parent sequence is always filled before its infoset.
    for &iid in idx.infosets_of(player) {
        let info = idx.infoset(iid);
        let base = q[info.parent_seq.index()];
        for s in info.seq_range() {
            q[s] = base * x.values[s];
        }
    }
    SequenceStrategy { player, values: q }
}

/// Behavioral strategy of a realization plan. Infosets with zero
/// parent-sequence mass get the uniform distribution, keeping the
/// conversion total.
pub fn sequence_to_behavior(q: &SequenceStrategy, idx: &SequenceIndex) -> BehaviorStrategy {
    let player = q.player;
    let mut x = vec![0.0; idx.player(player).num_sequences];
    x[0] = 1.0;
    for &iid in idx.infosets_of(player) {
        let info = idx.infoset(iid);
        let denom = q.values[info.parent_seq.index()];
        if denom > 0.0 {
            for s in info.seq_range() {
                x[s] = q.values[s] / denom;
            }
        } else {
            let u = 1.0 / info.num_actions as f64;
            for s in info.seq_range() {
                x[s] = u;
            }
        }
    }
    BehaviorStrategy { player, values: x }
}
