//! Extensive-form game representation.
//!
//! A [`GameTree`] is an immutable arena of chance, decision, and terminal
//! nodes for a two-player zero-sum game with perfect recall. Terminal
//! utilities are stored for player 1 only; player 2's utility is the
//! negation. Decision nodes reference information sets, which carry the
//! ordered action list shared by all member nodes.

mod index;
mod matrix;
mod strategy;
pub mod text;

pub use index::{InfoSetInfo, SequenceIndex};
pub use matrix::{expected_value, SparseUtilityMatrix, UtilityEntry};
pub use strategy::{behavior_to_sequence, sequence_to_behavior, BehaviorStrategy, SequenceStrategy};

use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Tolerance for chance-outcome probability sums.
pub const CHANCE_PROB_TOL: f64 = 1e-12;

/// Index of a node in the game tree arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// Index of an information set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoSetId(pub u32);

/// Interned action label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub u32);

/// Player-local sequence id. Id 0 is always the empty sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqId(pub u32);

impl SeqId {
    pub const EMPTY: SeqId = SeqId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl InfoSetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ActionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One of the two strategic players. Chance is not a `Player`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// 1-based id used in the text format.
    #[inline]
    pub fn number(self) -> u32 {
        self.index() as u32 + 1
    }

    pub fn from_number(n: u32) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }

    /// Sign of this player's utility relative to player 1's.
    #[inline]
    pub fn utility_sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A chance branch: outcome label, probability, child node.
#[derive(Debug, Clone)]
pub struct ChanceEdge {
    pub action: ActionId,
    pub prob: f64,
    pub child: NodeId,
}

/// A node in the game tree.
#[derive(Debug, Clone)]
pub enum GameNode {
    Chance {
        edges: Vec<ChanceEdge>,
    },
    Decision {
        player: Player,
        infoset: InfoSetId,
        /// Children, aligned with the infoset's ordered action list.
        children: Vec<NodeId>,
    },
    Terminal {
        /// Utility for player 1 (player 2 receives the negation).
        utility: f64,
    },
}

/// Declaration of an information set: owner and ordered actions.
#[derive(Debug, Clone)]
pub struct InfoSetDecl {
    pub player: Player,
    pub actions: Vec<ActionId>,
}

/// Errors raised while constructing or validating games.
#[derive(Debug, Error)]
pub enum GameError {
    #[error("node {0} is referenced as a child more than once")]
    MultipleParents(u32),
    #[error("node {0} is unreachable from the root")]
    Unreachable(u32),
    #[error("root node {0} must not appear as a child")]
    RootIsChild(u32),
    #[error("chance node {node}: probabilities sum to {sum}, expected 1")]
    ChanceProbSum { node: u32, sum: f64 },
    #[error("chance node {node}: negative probability {prob}")]
    NegativeProb { node: u32, prob: f64 },
    #[error("terminal node {0}: utility is not finite")]
    NonFiniteUtility(u32),
    #[error("decision node {node}: {got} children but infoset {infoset} has {expected} actions")]
    ChildCountMismatch {
        node: u32,
        infoset: u32,
        got: usize,
        expected: usize,
    },
    #[error("infoset {0}: declared twice with different players or actions")]
    InfoSetMismatch(u32),
    #[error(
        "perfect recall violation: infoset {infoset} has members with different parent sequences for player {player}"
    )]
    PerfectRecallViolation { infoset: u32, player: Player },
    #[error("infoset {0} has no actions")]
    EmptyInfoSet(u32),
    #[error("game has no nodes")]
    Empty,
}

/// Immutable two-player zero-sum extensive-form game.
#[derive(Debug, Clone)]
pub struct GameTree {
    nodes: Vec<GameNode>,
    root: NodeId,
    actions: Vec<String>,
    infosets: Vec<InfoSetDecl>,
}

impl GameTree {
    #[inline]
    pub fn root(&self) -> NodeId {
        self.root
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &GameNode {
        &self.nodes[id.index()]
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    #[inline]
    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    #[inline]
    pub fn infoset(&self, id: InfoSetId) -> &InfoSetDecl {
        &self.infosets[id.index()]
    }

    #[inline]
    pub fn action_label(&self, id: ActionId) -> &str {
        &self.actions[id.index()]
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Number of terminal nodes.
    pub fn num_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, GameNode::Terminal { .. }))
            .count()
    }

    /// Largest action count over all infosets.
    pub fn max_branching(&self) -> usize {
        self.infosets
            .iter()
            .map(|i| i.actions.len())
            .max()
            .unwrap_or(0)
    }
}

/// Incremental constructor for [`GameTree`].
///
/// Nodes are created bottom-up (children before parents). `build` checks
/// the tree shape: a unique root, every node reachable, no node with two
/// parents, chance probabilities summing to one.
pub struct GameBuilder {
    nodes: Vec<GameNode>,
    actions: Vec<String>,
    action_lookup: HashMap<String, ActionId>,
    infosets: Vec<InfoSetDecl>,
    infoset_lookup: HashMap<(Player, String), InfoSetId>,
}

impl GameBuilder {
    pub fn new() -> Self {
        GameBuilder {
            nodes: Vec::new(),
            actions: Vec::new(),
            action_lookup: HashMap::new(),
            infosets: Vec::new(),
            infoset_lookup: HashMap::new(),
        }
    }

    /// Intern an action label. Labels are shared across the whole game.
    pub fn action(&mut self, label: &str) -> ActionId {
        if let Some(&id) = self.action_lookup.get(label) {
            return id;
        }
        let id = ActionId(self.actions.len() as u32);
        self.actions.push(label.to_string());
        self.action_lookup.insert(label.to_string(), id);
        id
    }

    /// Intern an information set keyed by what the player observes.
    ///
    /// The first call for a key fixes the ordered action list; later
    /// calls must pass the same actions.
    pub fn infoset(
        &mut self,
        player: Player,
        key: String,
        actions: &[ActionId],
    ) -> Result<InfoSetId, GameError> {
        if let Some(&id) = self.infoset_lookup.get(&(player, key.clone())) {
            let decl = &self.infosets[id.index()];
            if decl.actions != actions {
                return Err(GameError::InfoSetMismatch(id.0));
            }
            return Ok(id);
        }
        if actions.is_empty() {
            return Err(GameError::EmptyInfoSet(self.infosets.len() as u32));
        }
        let id = InfoSetId(self.infosets.len() as u32);
        self.infosets.push(InfoSetDecl {
            player,
            actions: actions.to_vec(),
        });
        self.infoset_lookup.insert((player, key), id);
        Ok(id)
    }

    /// Declare an infoset with an explicit id (used by the text parser).
    pub fn infoset_with_id(
        &mut self,
        id: u32,
        player: Player,
        actions: &[ActionId],
    ) -> Result<InfoSetId, GameError> {
        let idx = id as usize;
        if idx < self.infosets.len() {
            let decl = &self.infosets[idx];
            if decl.player != player || decl.actions != actions {
                return Err(GameError::InfoSetMismatch(id));
            }
            return Ok(InfoSetId(id));
        }
        if idx != self.infosets.len() {
            // Fill gaps are not allowed: ids must appear densely.
            return Err(GameError::InfoSetMismatch(id));
        }
        if actions.is_empty() {
            return Err(GameError::EmptyInfoSet(id));
        }
        self.infosets.push(InfoSetDecl {
            player,
            actions: actions.to_vec(),
        });
        Ok(InfoSetId(id))
    }

    pub fn terminal(&mut self, utility: f64) -> NodeId {
        self.push(GameNode::Terminal { utility })
    }

    pub fn chance(&mut self, edges: Vec<ChanceEdge>) -> NodeId {
        self.push(GameNode::Chance { edges })
    }

    /// Children must align with the infoset's ordered action list.
    pub fn decision(
        &mut self,
        infoset: InfoSetId,
        children: Vec<NodeId>,
    ) -> Result<NodeId, GameError> {
        let decl = &self.infosets[infoset.index()];
        if decl.actions.len() != children.len() {
            return Err(GameError::ChildCountMismatch {
                node: self.nodes.len() as u32,
                infoset: infoset.0,
                got: children.len(),
                expected: decl.actions.len(),
            });
        }
        Ok(self.push(GameNode::Decision {
            player: decl.player,
            infoset,
            children,
        }))
    }

    fn push(&mut self, node: GameNode) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn build(self, root: NodeId) -> Result<GameTree, GameError> {
        let tree = GameTree {
            nodes: self.nodes,
            root,
            actions: self.actions,
            infosets: self.infosets,
        };
        tree.validate()?;
        Ok(tree)
    }
}

impl Default for GameBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GameTree {
    fn validate(&self) -> Result<(), GameError> {
        if self.nodes.is_empty() {
            return Err(GameError::Empty);
        }
        let mut parent_count = vec![0u32; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                GameNode::Chance { edges } => {
                    let mut sum = 0.0;
                    for e in edges {
                        if e.prob < 0.0 {
                            return Err(GameError::NegativeProb {
                                node: id as u32,
                                prob: e.prob,
                            });
                        }
                        sum += e.prob;
                        parent_count[e.child.index()] += 1;
                    }
                    if (sum - 1.0).abs() > CHANCE_PROB_TOL {
                        return Err(GameError::ChanceProbSum {
                            node: id as u32,
                            sum,
                        });
                    }
                }
                GameNode::Decision {
                    infoset, children, ..
                } => {
                    let decl = &self.infosets[infoset.index()];
                    if decl.actions.len() != children.len() {
                        return Err(GameError::ChildCountMismatch {
                            node: id as u32,
                            infoset: infoset.0,
                            got: children.len(),
                            expected: decl.actions.len(),
                        });
                    }
                    for c in children {
                        parent_count[c.index()] += 1;
                    }
                }
                GameNode::Terminal { utility } => {
                    if !utility.is_finite() {
                        return Err(GameError::NonFiniteUtility(id as u32));
                    }
                }
            }
        }
        if parent_count[self.root.index()] != 0 {
            return Err(GameError::RootIsChild(self.root.0));
        }
        for (id, &c) in parent_count.iter().enumerate() {
            if c > 1 {
                return Err(GameError::MultipleParents(id as u32));
            }
            if c == 0 && id != self.root.index() {
                return Err(GameError::Unreachable(id as u32));
            }
        }
        Ok(())
    }

    /// Children of a node paired with their action labels, in order.
    /// Terminal nodes yield nothing.
    pub fn children(&self, id: NodeId) -> Vec<(ActionId, NodeId)> {
        match self.node(id) {
            GameNode::Chance { edges } => edges.iter().map(|e| (e.action, e.child)).collect(),
            GameNode::Decision {
                infoset, children, ..
            } => self.infoset(*infoset)
                .actions
                .iter()
                .copied()
                .zip(children.iter().copied())
                .collect(),
            GameNode::Terminal { .. } => Vec::new(),
        }
    }
}
