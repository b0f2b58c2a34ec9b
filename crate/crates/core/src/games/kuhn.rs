//! Kuhn poker with an n-card deck.
//!
//! Both players ante 1 and receive one private card. Player 1 may check
//! or bet 1; facing a bet, the opponent calls or folds; after a check,
//! player 2 may check (showdown) or bet, returning the decision to
//! player 1. The higher card wins the pot at showdown.

use crate::game::{ChanceEdge, GameBuilder, GameError, GameTree, NodeId, Player};

pub fn kuhn(n: usize) -> Result<GameTree, GameError> {
    let mut b = GameBuilder::new();
    let act_check = b.action("k");
    let act_bet = b.action("b");
    let act_call = b.action("c");
    let act_fold = b.action("f");
    let bet_acts = [act_check, act_bet];
    let call_acts = [act_call, act_fold];

    let mut deal_edges = Vec::with_capacity(n);
    for c1 in 0..n {
        let mut inner = Vec::with_capacity(n - 1);
        for c2 in (0..n).filter(|&c| c != c1) {
            let win = if c1 > c2 { 1.0 } else { -1.0 };

            // bet / call-fold endgames, built leaves-first
            let bc = b.terminal(2.0 * win);
            let bf = b.terminal(1.0);
            let i2_bet = b.infoset(Player::Two, format!("{c2}|b"), &call_acts)?;
            let after_bet = b.decision(i2_bet, vec![bc, bf])?;

            let kbc = b.terminal(2.0 * win);
            let kbf = b.terminal(-1.0);
            let i1_kb = b.infoset(Player::One, format!("{c1}|kb"), &call_acts)?;
            let after_kb = b.decision(i1_kb, vec![kbc, kbf])?;

            let kk = b.terminal(win);
            let i2_k = b.infoset(Player::Two, format!("{c2}|k"), &bet_acts)?;
            let after_k = b.decision(i2_k, vec![kk, after_kb])?;

            let i1 = b.infoset(Player::One, format!("{c1}|"), &bet_acts)?;
            let root_bet = b.decision(i1, vec![after_k, after_bet])?;
            inner.push(ChanceEdge {
                action: b.action(&format!("d{c2}")),
                prob: 1.0 / (n - 1) as f64,
                child: root_bet,
            });
        }
        let deal2 = b.chance(inner);
        deal_edges.push(ChanceEdge {
            action: b.action(&format!("d{c1}")),
            prob: 1.0 / n as f64,
            child: deal2,
        });
    }
    let root: NodeId = b.chance(deal_edges);
    b.build(root)
}
