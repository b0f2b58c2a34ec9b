//! Shared helpers for integration tests: game setup, seeded random
//! strategies, and a recursive expected-value oracle that never touches
//! the sparse bilinear form.
#![allow(dead_code)] // each test binary uses its own subset

use efpe_core::game::{
    BehaviorStrategy, GameNode, GameTree, Player, SequenceIndex, SparseUtilityMatrix,
};
use efpe_core::games::{generate, GameSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn setup(spec: GameSpec) -> (GameTree, SequenceIndex, SparseUtilityMatrix) {
    let tree = generate(spec).expect("benchmark spec generates");
    let idx = SequenceIndex::build(&tree).expect("benchmark games have perfect recall");
    let umat = SparseUtilityMatrix::build(&tree, &idx);
    (tree, idx, umat)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random behavior strategy: independent positive weights per action,
/// normalized per infoset.
pub fn random_behavior(
    idx: &SequenceIndex,
    player: Player,
    rng: &mut ChaCha8Rng,
) -> BehaviorStrategy {
    let mut x = BehaviorStrategy::uniform(idx, player);
    for &iid in idx.infosets_of(player) {
        let info = idx.infoset(iid);
        let range = info.seq_range();
        let mut sum = 0.0;
        for s in range.clone() {
            let w: f64 = rng.gen_range(0.05..1.0);
            x.values_mut()[s] = w;
            sum += w;
        }
        for s in range {
            x.values_mut()[s] /= sum;
        }
    }
    x
}

/// Random strategy inside the ε-perturbed polytope: a random simplex
/// point squeezed so every action keeps at least ε.
pub fn random_perturbed_behavior(
    idx: &SequenceIndex,
    player: Player,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> BehaviorStrategy {
    let mut x = random_behavior(idx, player, rng);
    for &iid in idx.infosets_of(player) {
        let info = idx.infoset(iid);
        let n = info.num_actions as f64;
        let tau = 1.0 - n * eps;
        assert!(tau > 0.0, "eps too large for test game");
        for s in info.seq_range() {
            let v = x.values()[s];
            x.values_mut()[s] = eps + tau * v;
        }
    }
    x
}

/// Expected utility for player 1 by direct recursive traversal.
pub fn tree_walk_ev(
    tree: &GameTree,
    idx: &SequenceIndex,
    x1: &BehaviorStrategy,
    x2: &BehaviorStrategy,
) -> f64 {
    fn walk(
        tree: &GameTree,
        idx: &SequenceIndex,
        xs: [&BehaviorStrategy; 2],
        node: efpe_core::game::NodeId,
    ) -> f64 {
        match tree.node(node) {
            GameNode::Terminal { utility } => *utility,
            GameNode::Chance { edges } => edges
                .iter()
                .map(|e| e.prob * walk(tree, idx, xs, e.child))
                .sum(),
            GameNode::Decision {
                player,
                infoset,
                children,
            } => {
                let info = idx.infoset(*infoset);
                let probs = &xs[player.index()].values()[info.seq_range()];
                children
                    .iter()
                    .zip(probs)
                    .map(|(&c, &p)| p * walk(tree, idx, xs, c))
                    .sum()
            }
        }
    }
    walk(tree, idx, [x1, x2], tree.root())
}
