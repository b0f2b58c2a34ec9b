//! Solver library for two-player zero-sum extensive-form games with
//! imperfect information, focused on equilibrium refinement.
//!
//! The crate provides:
//!
//! * [`game`] — extensive-form game trees, sequence-form indexing,
//!   behavioral/sequence strategy conversion, and the sparse payoff
//!   bilinear form, plus a line-oriented text format for games.
//! * [`games`] — deterministic generators for the Kuhn poker, Leduc
//!   poker, Goofspiel, and Liar's Dice benchmark families.
//! * [`perturb`] — ε-perturbed simplex bases that map regret-matching
//!   coordinates into the perturbed strategy polytope.
//! * [`regret`] — local regret minimizers (RM, RM+, discounted RM), the
//!   reward-transformation value modifier, a normal-form stepper, and a
//!   gradient-descent-ascent closed form usable as an equivalence check.
//! * [`solver`] — full-game solvers: CFR+ with quadratic averaging, and
//!   reward-transformed CFR with fixed or adaptive perturbation.
//! * [`metrics`] — exact best response, exploitability, and
//!   information-set regret.

pub mod game;
pub mod games;
pub mod metrics;
pub mod perturb;
pub mod regret;
pub mod solver;

pub use game::{
    behavior_to_sequence, expected_value, sequence_to_behavior, ActionId, BehaviorStrategy,
    GameBuilder, GameError, GameNode, GameTree, InfoSetId, NodeId, Player, SeqId, SequenceIndex,
    SequenceStrategy, SparseUtilityMatrix,
};
pub use games::{generate, table1_sizes, Family, GameSpec};
pub use metrics::{exploitability, max_info_set_regret, BestResponseResult, IsRegretReport};
pub use perturb::PerturbedBasis;
pub use regret::{RegretState, RmVariant, RtConfig};
pub use solver::{
    solve, Algorithm, Perturbation, SolveReport, SolveStatus, SolverConfig, TrajectoryRow,
};
