//! Goofspiel with three n-card decks (values 1..n).
//!
//! The prize deck is shuffled face-down; each turn chance reveals the
//! top prize and both players bid one card from hand, modeled as player
//! 1 moving first with player 2's infoset hiding that bid. Past bids of
//! both players are revealed once the turn resolves. The higher bid
//! wins the prize, ties split it, and the terminal utility is the
//! difference in prize totals. The forced final turn is kept as
//! explicit single-action decisions.

use crate::game::{ChanceEdge, GameBuilder, GameError, GameTree, NodeId, Player};
use std::fmt::Write as _;

struct State {
    /// Cards still in hand, per player.
    hands: [Vec<usize>; 2],
    /// Prize values not yet revealed.
    prizes: Vec<usize>,
    /// Revealed prizes, own bids, opponent bids as observation strings.
    seen_prizes: String,
    bids: [String; 2],
    score_diff: f64,
}

fn turn(b: &mut GameBuilder, s: &State) -> Result<NodeId, GameError> {
    if s.prizes.is_empty() {
        return Ok(b.terminal(s.score_diff));
    }
    let mut edges = Vec::with_capacity(s.prizes.len());
    let prob = 1.0 / s.prizes.len() as f64;
    for (k, &prize) in s.prizes.iter().enumerate() {
        let mut prizes = s.prizes.clone();
        prizes.remove(k);
        let mut seen = s.seen_prizes.clone();
        write!(seen, "p{prize}").unwrap();

        // Player 1 bids.
        let p1_actions: Vec<_> = s.hands[0]
            .iter()
            .map(|&c| b.action(&format!("b{c}")))
            .collect();
        let mut p1_children = Vec::with_capacity(s.hands[0].len());
        for (i1, &bid1) in s.hands[0].iter().enumerate() {
            // Player 2 bids without seeing bid1.
            let p2_actions: Vec<_> = s.hands[1]
                .iter()
                .map(|&c| b.action(&format!("b{c}")))
                .collect();
            let mut p2_children = Vec::with_capacity(s.hands[1].len());
            for (i2, &bid2) in s.hands[1].iter().enumerate() {
                let mut hands = s.hands.clone();
                hands[0].remove(i1);
                hands[1].remove(i2);
                let gain = match bid1.cmp(&bid2) {
                    std::cmp::Ordering::Greater => prize as f64,
                    std::cmp::Ordering::Less => -(prize as f64),
                    std::cmp::Ordering::Equal => 0.0, // split
                };
                let mut bids = s.bids.clone();
                write!(bids[0], "b{bid1}").unwrap();
                write!(bids[1], "b{bid2}").unwrap();
                let next = State {
                    hands,
                    prizes: prizes.clone(),
                    seen_prizes: seen.clone(),
                    bids,
                    score_diff: s.score_diff + gain,
                };
                p2_children.push(turn(b, &next)?);
            }
            let i2_key = format!("{}|{}|{}", seen, s.bids[1], s.bids[0]);
            let i2 = b.infoset(Player::Two, i2_key, &p2_actions)?;
            p1_children.push(b.decision(i2, p2_children)?);
        }
        let i1_key = format!("{}|{}|{}", seen, s.bids[0], s.bids[1]);
        let i1 = b.infoset(Player::One, i1_key, &p1_actions)?;
        let d1 = b.decision(i1, p1_children)?;
        edges.push(ChanceEdge {
            action: b.action(&format!("p{prize}")),
            prob,
            child: d1,
        });
    }
    Ok(b.chance(edges))
}

pub fn goofspiel(n: usize) -> Result<GameTree, GameError> {
    let mut b = GameBuilder::new();
    let cards: Vec<usize> = (1..=n).collect();
    let s = State {
        hands: [cards.clone(), cards.clone()],
        prizes: cards,
        seen_prizes: String::new(),
        bids: [String::new(), String::new()],
        score_diff: 0.0,
    };
    let root = turn(&mut b, &s)?;
    b.build(root)
}
