//! Sparse payoff bilinear form.
//!
//! Every terminal node contributes its chance-weighted utility to the
//! entry at the pair of last player sequences on its path. Expected
//! utility for player 1 is then `q1ᵀ U q2` over realization plans.

use super::{GameNode, GameTree, Player, SeqId, SequenceIndex, SequenceStrategy};

/// One accumulated entry of the bilinear form.
#[derive(Debug, Clone, Copy)]
pub struct UtilityEntry {
    pub seq1: SeqId,
    pub seq2: SeqId,
    /// Sum of q0(z)·u1(z) over leaves mapping to (seq1, seq2).
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct SparseUtilityMatrix {
    entries: Vec<UtilityEntry>,
    /// Number of leaf addends before merging (equals the leaf count).
    pub leaf_contributions: usize,
    dims: (usize, usize),
}

impl SparseUtilityMatrix {
    pub fn build(tree: &GameTree, idx: &SequenceIndex) -> SparseUtilityMatrix {
        let mut raw: Vec<(u32, u32, f64)> = Vec::new();
        let mut stack: Vec<(super::NodeId, SeqId, SeqId, f64)> =
            vec![(tree.root(), SeqId::EMPTY, SeqId::EMPTY, 1.0)];
        while let Some((node, s1, s2, p0)) = stack.pop() {
            match tree.node(node) {
                GameNode::Terminal { utility } => raw.push((s1.0, s2.0, p0 * utility)),
                GameNode::Chance { edges } => {
                    for e in edges {
                        stack.push((e.child, s1, s2, p0 * e.prob));
                    }
                }
                GameNode::Decision {
                    player,
                    infoset,
                    children,
                } => {
                    let first = idx.infoset(*infoset).first_seq.0;
                    for (a, &child) in children.iter().enumerate() {
                        let s = SeqId(first + a as u32);
                        match player {
                            Player::One => stack.push((child, s, s2, p0)),
                            Player::Two => stack.push((child, s1, s, p0)),
                        }
                    }
                }
            }
        }
        let leaf_contributions = raw.len();
        raw.sort_by_key(|&(a, b, _)| (a, b));
        let mut entries: Vec<UtilityEntry> = Vec::with_capacity(raw.len());
        for (a, b, v) in raw {
            match entries.last_mut() {
                Some(e) if e.seq1.0 == a && e.seq2.0 == b => e.value += v,
                _ => entries.push(UtilityEntry {
                    seq1: SeqId(a),
                    seq2: SeqId(b),
                    value: v,
                }),
            }
        }
        SparseUtilityMatrix {
            entries,
            leaf_contributions,
            dims: (
                idx.player(Player::One).num_sequences,
                idx.player(Player::Two).num_sequences,
            ),
        }
    }

    #[inline]
    pub fn entries(&self) -> &[UtilityEntry] {
        &self.entries
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Scatter leaf values into both players' counterfactual value
    /// accumulators in one pass: `v1[s1] += w·q2[s2]`, `v2[s2] −= w·q1[s1]`.
    pub fn scatter_both(&self, q1: &[f64], q2: &[f64], v1: &mut [f64], v2: &mut [f64]) {
        for e in &self.entries {
            let (i, j) = (e.seq1.index(), e.seq2.index());
            v1[i] += e.value * q2[j];
            v2[j] -= e.value * q1[i];
        }
    }

    /// Scatter leaf values for a single player against the opponent's
    /// realization plan.
    pub fn scatter_for(&self, player: Player, q_opp: &[f64], v: &mut [f64]) {
        match player {
            Player::One => {
                for e in &self.entries {
                    v[e.seq1.index()] += e.value * q_opp[e.seq2.index()];
                }
            }
            Player::Two => {
                for e in &self.entries {
                    v[e.seq2.index()] -= e.value * q_opp[e.seq1.index()];
                }
            }
        }
    }
}

/// Player 1's expected utility `q1ᵀ U q2`.
pub fn expected_value(
    umat: &SparseUtilityMatrix,
    q1: &SequenceStrategy,
    q2: &SequenceStrategy,
) -> f64 {
    debug_assert_eq!(q1.player, Player::One);
    debug_assert_eq!(q2.player, Player::Two);
    let (a, b) = (q1.values(), q2.values());
    umat.entries
        .iter()
        .map(|e| e.value * a[e.seq1.index()] * b[e.seq2.index()])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{behavior_to_sequence, BehaviorStrategy, GameBuilder};

    fn matching_pennies() -> (GameTree, SequenceIndex) {
        let mut b = GameBuilder::new();
        let h = b.action("h");
        let t = b.action("t");
        let i2 = b.infoset(Player::Two, "".into(), &[h, t]).unwrap();
        let hh = b.terminal(1.0);
        let ht = b.terminal(-1.0);
        let th = b.terminal(-1.0);
        let tt = b.terminal(1.0);
        let d2h = b.decision(i2, vec![hh, ht]).unwrap();
        let d2t = b.decision(i2, vec![th, tt]).unwrap();
        let i1 = b.infoset(Player::One, "".into(), &[h, t]).unwrap();
        let root = b.decision(i1, vec![d2h, d2t]).unwrap();
        let g = b.build(root).unwrap();
        let idx = SequenceIndex::build(&g).unwrap();
        (g, idx)
    }

    #[test]
    fn pennies_is_dense_two_by_two() {
        let (g, idx) = matching_pennies();
        let m = SparseUtilityMatrix::build(&g, &idx);
        assert_eq!(m.leaf_contributions, 4);
        assert_eq!(m.entries().len(), 4);
        let mut payoff = [[0.0; 2]; 2];
        for e in m.entries() {
            payoff[e.seq1.index() - 1][e.seq2.index() - 1] = e.value;
        }
        assert_eq!(payoff, [[1.0, -1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn zero_sum_by_negation() {
        let (g, idx) = matching_pennies();
        let m = SparseUtilityMatrix::build(&g, &idx);
        let x1 = BehaviorStrategy::uniform(&idx, Player::One);
        let mut x2 = BehaviorStrategy::uniform(&idx, Player::Two);
        x2.values_mut()[1] = 0.9;
        x2.values_mut()[2] = 0.1;
        let q1 = behavior_to_sequence(&x1, &idx);
        let q2 = behavior_to_sequence(&x2, &idx);
        let v1 = expected_value(&m, &q1, &q2);
        // Player 2's utility is the negation by construction.
        let v2 = -v1;
        assert_eq!(v1 + v2, 0.0);
    }
}
