//! Exact evaluation: best response, exploitability, and information-set
//! regret.
//!
//! Best responses are computed over the unperturbed strategy polytope in
//! a single bottom-up pass, even when the evaluated profile comes from a
//! perturbed solver. Information-set regret is the counterfactual
//! instantaneous regret normalized by the opponent-plus-chance mass
//! reaching the infoset, i.e. regret "as if the infoset were reached".

use crate::game::{
    behavior_to_sequence, BehaviorStrategy, GameNode, GameTree, Player, SequenceIndex,
    SequenceStrategy, SparseUtilityMatrix,
};
use crate::regret::dot;
use crate::solver::counterfactual_values;

/// Floor applied to a zero reach denominator, which can occur only for
/// unperturbed profiles.
pub const REACH_MASS_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct BestResponseResult {
    /// Responder's expected utility against the fixed opponent.
    pub value: f64,
    /// A pure best response (argmax action at every infoset).
    pub strategy: BehaviorStrategy,
}

/// Exact best response for `responder` against the opponent's
/// realization plan.
pub fn best_response(
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    q_opp: &SequenceStrategy,
    responder: Player,
) -> BestResponseResult {
    let pidx = idx.player(responder);
    let mut acc = vec![0.0; pidx.num_sequences];
    umat.scatter_for(responder, q_opp.values(), &mut acc);
    let mut x = vec![0.0; pidx.num_sequences];
    x[0] = 1.0;
    for &iid in &pidx.bottomup {
        let info = idx.infoset(iid);
        let range = info.seq_range();
        let mut best = f64::NEG_INFINITY;
        let mut best_j = 0;
        for (j, s) in range.enumerate() {
            if acc[s] > best {
                best = acc[s];
                best_j = j;
            }
        }
        x[info.first_seq.index() + best_j] = 1.0;
        acc[info.parent_seq.index()] += best;
    }
    BestResponseResult {
        value: acc[0],
        strategy: BehaviorStrategy::new(responder, x),
    }
}

/// Exploitability of a profile: the sum of both players' best-response
/// gains. Zero exactly at a Nash equilibrium.
pub fn exploitability(
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    q1: &SequenceStrategy,
    q2: &SequenceStrategy,
) -> f64 {
    let br1 = best_response(idx, umat, q2, Player::One);
    let br2 = best_response(idx, umat, q1, Player::Two);
    br1.value + br2.value
}

/// Opponent-plus-chance mass reaching each infoset:
/// D[I] = Σ_{h∈I} q₀(h)·q_{−i}(h).
pub fn infoset_reach_masses(
    tree: &GameTree,
    idx: &SequenceIndex,
    profile: [&BehaviorStrategy; 2],
) -> Vec<f64> {
    let mut mass = vec![0.0; idx.num_infosets()];
    // DFS carrying (chance, p1, p2) reach contributions.
    let mut stack = vec![(tree.root(), 1.0f64, 1.0f64, 1.0f64)];
    while let Some((node, pc, p1, p2)) = stack.pop() {
        match tree.node(node) {
            GameNode::Terminal { .. } => {}
            GameNode::Chance { edges } => {
                for e in edges {
                    stack.push((e.child, pc * e.prob, p1, p2));
                }
            }
            GameNode::Decision {
                player,
                infoset,
                children,
            } => {
                let opp = match player {
                    Player::One => p2,
                    Player::Two => p1,
                };
                mass[infoset.index()] += pc * opp;
                let info = idx.infoset(*infoset);
                let xs = &profile[player.index()].values()[info.seq_range()];
                for (&child, &prob) in children.iter().zip(xs) {
                    match player {
                        Player::One => stack.push((child, pc, p1 * prob, p2)),
                        Player::Two => stack.push((child, pc, p1, p2 * prob)),
                    }
                }
            }
        }
    }
    mass
}

/// Full-reach action values at one infoset: counterfactual values
/// divided by the infoset's reach mass.
pub fn full_reach_values(
    tree: &GameTree,
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    profile: [&BehaviorStrategy; 2],
    infoset: crate::game::InfoSetId,
) -> Vec<f64> {
    let info = idx.infoset(infoset);
    let player = info.player;
    let opp = player.opponent();
    let q_opp = behavior_to_sequence(profile[opp.index()], idx);
    let v = counterfactual_values(idx, umat, player, profile[player.index()], &q_opp);
    let mass = infoset_reach_masses(tree, idx, profile)[infoset.index()];
    let denom = if mass > 0.0 { mass } else { REACH_MASS_FLOOR };
    v[info.seq_range()].iter().map(|&x| x / denom).collect()
}

/// r′(I) = v′(I) − ⟨v′(I), x(I)⟩·𝟙.
pub fn info_set_regret(v_prime: &[f64], x: &[f64]) -> Vec<f64> {
    crate::regret::instantaneous_regret(v_prime, x)
}

/// Information-set regret aggregated over the whole game.
#[derive(Debug, Clone)]
pub struct IsRegretReport {
    /// Per-infoset maximum regret, clamped below at zero.
    pub per_infoset: Vec<f64>,
    /// Maximum over each player's infosets.
    pub per_player: [f64; 2],
    /// Global maximum over both players.
    pub max: f64,
}

/// Maximum information-set regret of a behavior profile.
pub fn max_info_set_regret(
    tree: &GameTree,
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    profile: [&BehaviorStrategy; 2],
) -> IsRegretReport {
    let q1 = behavior_to_sequence(profile[0], idx);
    let q2 = behavior_to_sequence(profile[1], idx);
    let values = [
        counterfactual_values(idx, umat, Player::One, profile[0], &q2),
        counterfactual_values(idx, umat, Player::Two, profile[1], &q1),
    ];
    let mass = infoset_reach_masses(tree, idx, profile);

    let mut per_infoset = vec![0.0; idx.num_infosets()];
    let mut per_player = [0.0f64; 2];
    for p in Player::BOTH {
        for &iid in idx.infosets_of(p) {
            let info = idx.infoset(iid);
            let range = info.seq_range();
            let xs = &profile[p.index()].values()[range.clone()];
            let vs = &values[p.index()][range];
            let m = mass[iid.index()];
            let denom = if m > 0.0 { m } else { REACH_MASS_FLOOR };
            let u = dot(vs, xs) / denom;
            let mut worst = f64::NEG_INFINITY;
            for &v in vs {
                worst = worst.max(v / denom - u);
            }
            let clamped = worst.max(0.0);
            per_infoset[iid.index()] = clamped;
            per_player[p.index()] = per_player[p.index()].max(clamped);
        }
    }
    IsRegretReport {
        per_infoset,
        per_player,
        max: per_player[0].max(per_player[1]),
    }
}
