//! Leduc poker with n ranks (2n-card deck, two suits per rank).
//!
//! Both players ante 1 and receive one private card. Two betting rounds
//! with fixed raise sizes (2, then 4) and at most two raises per round;
//! a public card is revealed between rounds. A player whose rank pairs
//! the public card wins; otherwise the higher rank wins and equal ranks
//! split. Cards of the same rank are interchangeable, so deals are
//! enumerated by rank with multiplicity-weighted chance probabilities.

use crate::game::{ChanceEdge, GameBuilder, GameError, GameTree, NodeId, Player};

const RAISE_SIZE: [f64; 2] = [2.0, 4.0];

struct Ctx {
    b: GameBuilder,
    n: usize,
}

#[derive(Clone, Copy)]
struct Pot {
    /// Committed amounts; index by player.
    contrib: [f64; 2],
}

/// Betting-round state machine. `hist` is the in-round action string;
/// the player to act and the legal actions follow from it.
fn round_to_act(hist: &str) -> Player {
    match hist {
        "" | "kr" | "rr" => Player::One,
        "k" | "r" | "krr" => Player::Two,
        _ => unreachable!("no decision at `{hist}`"),
    }
}

fn round_actions(hist: &str) -> &'static [&'static str] {
    match hist {
        "" | "k" => &["k", "r"],
        "r" | "kr" => &["f", "c", "r"],
        "rr" | "krr" => &["f", "c"],
        _ => unreachable!(),
    }
}

enum RoundOutcome {
    Continue(String),
    Fold(Player),
}

/// Terminal betting strings reachable from `hist`, with the decisions
/// in between handled by `build_round`.
fn apply(hist: &str, action: &str) -> Option<RoundOutcome> {
    match action {
        "f" => Some(RoundOutcome::Fold(round_to_act(hist))),
        "c" => Some(RoundOutcome::Continue(format!("{hist}{action}"))),
        "k" if hist == "k" => Some(RoundOutcome::Continue(format!("{hist}{action}"))),
        _ => None, // still a decision point
    }
}

impl Ctx {
    /// Build a betting round. `on_end` receives the pot and the full
    /// in-round history on check-check or call; folds terminate here.
    fn build_round(
        &mut self,
        round: usize,
        hist: &str,
        pot: Pot,
        deal: &Deal,
        on_end: &mut dyn FnMut(&mut Ctx, Pot, &str) -> Result<NodeId, GameError>,
    ) -> Result<NodeId, GameError> {
        let player = round_to_act(hist);
        let actions = round_actions(hist);
        let act_ids: Vec<_> = actions.iter().map(|a| self.b.action(a)).collect();
        let mut children = Vec::with_capacity(actions.len());
        for a in actions {
            let mut new_pot = pot;
            let me = player.index();
            let opp = 1 - me;
            match *a {
                "r" => {
                    new_pot.contrib[me] = pot.contrib[opp] + RAISE_SIZE[round];
                }
                "c" => {
                    new_pot.contrib[me] = pot.contrib[opp];
                }
                _ => {}
            }
            let child = match apply(hist, a) {
                Some(RoundOutcome::Fold(folder)) => {
                    // Folder forfeits their committed amount.
                    let u1 = match folder {
                        Player::One => -pot.contrib[0],
                        Player::Two => pot.contrib[1],
                    };
                    self.b.terminal(u1)
                }
                Some(RoundOutcome::Continue(full)) => on_end(self, new_pot, &full)?,
                None => {
                    let next = format!("{hist}{a}");
                    self.build_round(round, &next, new_pot, deal, on_end)?
                }
            };
            children.push(child);
        }
        let key = deal.infoset_key(player, hist);
        let iset = self.b.infoset(player, key, &act_ids)?;
        self.b.decision(iset, children)
    }
}

#[derive(Clone)]
struct Deal {
    r1: usize,
    r2: usize,
    public: Option<usize>,
    /// Completed round-1 betting, for round-2 infoset keys.
    round1: String,
}

impl Deal {
    fn infoset_key(&self, player: Player, hist: &str) -> String {
        let own = match player {
            Player::One => self.r1,
            Player::Two => self.r2,
        };
        match self.public {
            None => format!("{own}|-|{hist}"),
            Some(p) => format!("{own}|{p}|{}/{hist}", self.round1),
        }
    }

    fn showdown_sign(&self) -> f64 {
        let p = self.public.expect("showdown requires a public card");
        if self.r1 == p {
            1.0
        } else if self.r2 == p {
            -1.0
        } else if self.r1 > self.r2 {
            1.0
        } else if self.r1 < self.r2 {
            -1.0
        } else {
            0.0
        }
    }
}

pub fn leduc(n: usize) -> Result<GameTree, GameError> {
    let mut ctx = Ctx { b: GameBuilder::new(), n };
    let deck = 2 * n;

    let mut deal1_edges = Vec::with_capacity(n);
    for r1 in 0..n {
        let mut deal2_edges = Vec::with_capacity(n);
        for r2 in 0..n {
            let remaining2 = 2 - usize::from(r2 == r1);
            if remaining2 == 0 {
                continue;
            }
            let deal = Deal { r1, r2, public: None, round1: String::new() };
            let n_ctx = &mut ctx;
            let pot = Pot { contrib: [1.0, 1.0] };
            let game_root = n_ctx.build_round(
                0,
                "",
                pot,
                &deal,
                &mut |ctx, pot, round1_hist| {
                    // Public card, then the second betting round.
                    let mut pub_edges = Vec::new();
                    for p in 0..ctx.n {
                        let cnt = 2 - usize::from(p == r1) - usize::from(p == r2);
                        if cnt == 0 {
                            continue;
                        }
                        let deal2 = Deal {
                            r1,
                            r2,
                            public: Some(p),
                            round1: round1_hist.to_string(),
                        };
                        let sign = deal2.showdown_sign();
                        let child = ctx.build_round(
                            1,
                            "",
                            pot,
                            &deal2,
                            &mut |ctx, pot, _| {
                                // Both contributions are equal at showdown.
                                Ok(ctx.b.terminal(sign * pot.contrib[1]))
                            },
                        )?;
                        let label = ctx.b.action(&format!("p{p}"));
                        pub_edges.push(ChanceEdge {
                            action: label,
                            prob: cnt as f64 / (deck - 2) as f64,
                            child,
                        });
                    }
                    Ok(ctx.b.chance(pub_edges))
                },
            )?;
            let label = ctx.b.action(&format!("c{r2}"));
            deal2_edges.push(ChanceEdge {
                action: label,
                prob: remaining2 as f64 / (deck - 1) as f64,
                child: game_root,
            });
        }
        let deal2 = ctx.b.chance(deal2_edges);
        let label = ctx.b.action(&format!("c{r1}"));
        deal1_edges.push(ChanceEdge {
            action: label,
            prob: 1.0 / n as f64,
            child: deal2,
        });
    }
    let root = ctx.b.chance(deal1_edges);
    ctx.b.build(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::SequenceIndex;

    #[test]
    fn three_rank_sizes() {
        let g = leduc(3).unwrap();
        let idx = SequenceIndex::build(&g).unwrap();
        assert_eq!(g.num_infosets(), 288);
        assert_eq!(idx.total_sequences(), 674);
        assert_eq!(g.num_leaves(), 1116);
    }

    #[test]
    fn five_rank_sizes() {
        let g = leduc(5).unwrap();
        let idx = SequenceIndex::build(&g).unwrap();
        assert_eq!(g.num_infosets(), 780);
        assert_eq!(idx.total_sequences(), 1822);
        assert_eq!(g.num_leaves(), 5500);
    }
}
