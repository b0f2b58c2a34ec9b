//! Liar's Dice with one n-sided die per player.
//!
//! Each player privately rolls once. Player 1 opens with a claim
//! (quantity, face), quantity 1 or 2 over faces 1..n, and players then
//! alternate either raising to a strictly higher claim — ordered
//! lexicographically by quantity then face — or challenging. A
//! challenge ends the game: a false claim pays +1 to the challenger, a
//! true claim +1 to the claimant.

use crate::game::{ChanceEdge, GameBuilder, GameError, GameTree, NodeId, Player};

struct Ctx {
    b: GameBuilder,
    n: usize,
    claim_labels: Vec<String>,
}

impl Ctx {
    fn claim_quantity_face(&self, claim: usize) -> (usize, usize) {
        (1 + claim / self.n, 1 + claim % self.n)
    }
}

fn claims(
    ctx: &mut Ctx,
    dice: [usize; 2],
    hist: &mut Vec<usize>,
    hist_key: &str,
) -> Result<NodeId, GameError> {
    let num_claims = 2 * ctx.n;
    let to_act = if hist.len() % 2 == 0 { Player::One } else { Player::Two };
    let own_die = dice[to_act.index()];
    let lowest = hist.last().map_or(0, |&c| c + 1);

    let mut action_ids = Vec::new();
    let mut children = Vec::new();
    for claim in lowest..num_claims {
        let label = ctx.claim_labels[claim].clone();
        action_ids.push(ctx.b.action(&label));
        hist.push(claim);
        let key = format!("{hist_key}.{claim}");
        let child = claims(ctx, dice, hist, &key)?;
        hist.pop();
        children.push(child);
    }
    if let Some(&last) = hist.last() {
        action_ids.push(ctx.b.action("liar"));
        let (q, f) = ctx.claim_quantity_face(last);
        let count = usize::from(dice[0] == f) + usize::from(dice[1] == f);
        let truthful = count >= q;
        // The challenged claim was made by the opponent of `to_act`.
        let challenger_wins = !truthful;
        let u1 = match (to_act, challenger_wins) {
            (Player::One, true) | (Player::Two, false) => 1.0,
            _ => -1.0,
        };
        children.push(ctx.b.terminal(u1));
    }
    let iset = ctx
        .b
        .infoset(to_act, format!("{own_die}|{hist_key}"), &action_ids)?;
    ctx.b.decision(iset, children)
}

pub fn liars_dice(n: usize) -> Result<GameTree, GameError> {
    let claim_labels = (0..2 * n)
        .map(|c| format!("q{}f{}", 1 + c / n, 1 + c % n))
        .collect();
    let mut ctx = Ctx { b: GameBuilder::new(), n, claim_labels };

    let mut roll1_edges = Vec::with_capacity(n);
    for d1 in 1..=n {
        let mut roll2_edges = Vec::with_capacity(n);
        for d2 in 1..=n {
            let child = claims(&mut ctx, [d1, d2], &mut Vec::new(), "")?;
            let label = ctx.b.action(&format!("r{d2}"));
            roll2_edges.push(ChanceEdge { action: label, prob: 1.0 / n as f64, child });
        }
        let roll2 = ctx.b.chance(roll2_edges);
        let label = ctx.b.action(&format!("r{d1}"));
        roll1_edges.push(ChanceEdge { action: label, prob: 1.0 / n as f64, child: roll2 });
    }
    let root = ctx.b.chance(roll1_edges);
    ctx.b.build(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::SequenceIndex;

    #[test]
    fn rank_two_sizes() {
        // n=2: infosets n·4ⁿ = 32, sequences 2n(4ⁿ−1)+2 = 62,
        // leaves n²(4ⁿ−1) = 60.
        let g = liars_dice(2).unwrap();
        let idx = SequenceIndex::build(&g).unwrap();
        assert_eq!(g.num_infosets(), 32);
        assert_eq!(idx.total_sequences(), 62);
        assert_eq!(g.num_leaves(), 60);
    }

    #[test]
    fn rank_five_sizes() {
        let g = liars_dice(5).unwrap();
        let idx = SequenceIndex::build(&g).unwrap();
        assert_eq!(g.num_infosets(), 5120);
        assert_eq!(idx.total_sequences(), 10232);
        assert_eq!(g.num_leaves(), 25575);
    }

    #[test]
    fn challenge_payoffs() {
        // Claim q2f2 with dice (2,1) is false: challenger (P2) wins.
        let g = liars_dice(2).unwrap();
        let mut stack = vec![g.root()];
        let mut found = false;
        while let Some(id) = stack.pop() {
            for (_, c) in g.children(id) {
                stack.push(c);
            }
            if let crate::game::GameNode::Terminal { .. } = g.node(id) {
                found = true;
            }
        }
        assert!(found);
    }
}
