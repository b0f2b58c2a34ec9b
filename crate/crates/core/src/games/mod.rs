//! Benchmark game generators.
//!
//! Four families, each parameterized by a rank `n`: Kuhn poker (n-card
//! deck), Leduc poker (n ranks, two suits), Goofspiel (three n-card
//! decks), and Liar's Dice (one n-sided die per player). Generation is
//! deterministic and chance outcomes are enumerated exhaustively, never
//! sampled.

mod goofspiel;
mod kuhn;
mod leduc;
mod liars_dice;

pub use goofspiel::goofspiel;
pub use kuhn::kuhn;
pub use leduc::leduc;
pub use liars_dice::liars_dice;

use crate::game::{GameError, GameTree};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kuhn,
    Leduc,
    Goofspiel,
    LiarsDice,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Kuhn,
        Family::Leduc,
        Family::Goofspiel,
        Family::LiarsDice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Kuhn => "kuhn",
            Family::Leduc => "leduc",
            Family::Goofspiel => "goofspiel",
            Family::LiarsDice => "liarsdice",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "kuhn" => Some(Family::Kuhn),
            "leduc" => Some(Family::Leduc),
            "goofspiel" | "goof" => Some(Family::Goofspiel),
            "liarsdice" | "liars-dice" | "liars_dice" => Some(Family::LiarsDice),
            _ => None,
        }
    }

    /// Largest supported rank. Goofspiel grows as (n!)³ leaves, so its
    /// envelope stops at 4; the other families stay tractable to 6.
    pub fn max_rank(self) -> u32 {
        match self {
            Family::Goofspiel => 4,
            _ => 6,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub family: Family,
    pub rank: u32,
}

impl GameSpec {
    pub fn new(family: Family, rank: u32) -> GameSpec {
        GameSpec { family, rank }
    }

    /// `kuhn:3`, `leduc:5`, ...
    pub fn parse(s: &str) -> Option<GameSpec> {
        let (fam, rank) = s.split_once(':')?;
        Some(GameSpec {
            family: Family::parse(fam)?,
            rank: rank.parse().ok()?,
        })
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.rank)
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unsupported rank {rank} for {family} (supported: 2..={max})")]
    UnsupportedRank { family: Family, rank: u32, max: u32 },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Generate the game for a spec.
pub fn generate(spec: GameSpec) -> Result<GameTree, SuiteError> {
    let max = spec.family.max_rank();
    if spec.rank < 2 || spec.rank > max {
        return Err(SuiteError::UnsupportedRank {
            family: spec.family,
            rank: spec.rank,
            max,
        });
    }
    let n = spec.rank as usize;
    let tree = match spec.family {
        Family::Kuhn => kuhn(n)?,
        Family::Leduc => leduc(n)?,
        Family::Goofspiel => goofspiel(n)?,
        Family::LiarsDice => liars_dice(n)?,
    };
    Ok(tree)
}

/// Reference (infosets, sequences, leaves) triples for the benchmark
/// instances, used by size verification.
pub fn table1_sizes(spec: GameSpec) -> Option<(usize, usize, usize)> {
    match (spec.family, spec.rank) {
        (Family::Kuhn, 3) => Some((12, 26, 30)),
        (Family::Leduc, 3) => Some((288, 674, 1116)),
        (Family::Leduc, 5) => Some((780, 1822, 5500)),
        (Family::Goofspiel, 3) => Some((546, 668, 216)),
        (Family::Goofspiel, 4) => Some((34952, 42658, 13824)),
        (Family::LiarsDice, 5) => Some((5120, 10232, 25575)),
        (Family::LiarsDice, 6) => Some((24576, 49142, 147420)),
        _ => None,
    }
}

/// The seven benchmark instances with known sizes.
pub fn table1_instances() -> Vec<GameSpec> {
    vec![
        GameSpec::new(Family::Kuhn, 3),
        GameSpec::new(Family::Leduc, 3),
        GameSpec::new(Family::Leduc, 5),
        GameSpec::new(Family::Goofspiel, 3),
        GameSpec::new(Family::Goofspiel, 4),
        GameSpec::new(Family::LiarsDice, 5),
        GameSpec::new(Family::LiarsDice, 6),
    ]
}
