//! Sequence-form indexing.
//!
//! Each player's sequence set Σ contains the empty sequence (id 0) plus
//! one id per (infoset, action) pair. Sequence ids are assigned in
//! depth-first tree order, so two builds of the same game index
//! identically. An infoset's action sequences are contiguous, starting
//! at `first_seq`.

use super::{GameError, GameNode, GameTree, InfoSetId, NodeId, Player, SeqId};

/// Per-infoset sequence data.
#[derive(Debug, Clone)]
pub struct InfoSetInfo {
    pub player: Player,
    /// Sequence id of this infoset's first action; ids run contiguously.
    pub first_seq: SeqId,
    pub num_actions: usize,
    /// Last sequence of the owner on the path to this infoset (0 = empty).
    pub parent_seq: SeqId,
    /// Number of owner sequences on the root path, including this one.
    pub depth: u32,
    /// Member decision nodes, in discovery order.
    pub members: Vec<NodeId>,
}

impl InfoSetInfo {
    /// Range of this infoset's sequence slots.
    #[inline]
    pub fn seq_range(&self) -> std::ops::Range<usize> {
        let f = self.first_seq.index();
        f..f + self.num_actions
    }
}

#[derive(Debug, Clone)]
pub struct PlayerIndex {
    /// Total sequences including the empty sequence.
    pub num_sequences: usize,
    /// Owning infoset per sequence slot; slot 0 (empty) has none.
    pub seq_owner: Vec<Option<InfoSetId>>,
    /// Depth per sequence slot; 0 for the empty sequence.
    pub seq_depth: Vec<u32>,
    /// This player's infosets ordered root-first (parents before children).
    pub topdown: Vec<InfoSetId>,
    /// The reverse: children before parents.
    pub bottomup: Vec<InfoSetId>,
}

/// Sequence-form index for both players.
#[derive(Debug, Clone)]
pub struct SequenceIndex {
    infosets: Vec<Option<InfoSetInfo>>,
    players: [PlayerIndex; 2],
}

impl SequenceIndex {
    /// Build the index, validating perfect recall: all members of an
    /// infoset must share the owner's parent sequence.
    pub fn build(tree: &GameTree) -> Result<SequenceIndex, GameError> {
        let mut infosets: Vec<Option<InfoSetInfo>> = vec![None; tree.num_infosets()];
        let mut num_sequences = [1usize, 1usize];
        let mut discovery: [Vec<InfoSetId>; 2] = [Vec::new(), Vec::new()];

        // Iterative depth-first walk carrying each player's last sequence.
        let mut stack: Vec<(NodeId, [SeqId; 2])> = vec![(tree.root(), [SeqId::EMPTY; 2])];
        while let Some((node, last)) = stack.pop() {
            match tree.node(node) {
                GameNode::Terminal { .. } => {}
                GameNode::Chance { edges } => {
                    // Reverse push keeps left-to-right discovery order.
                    for e in edges.iter().rev() {
                        stack.push((e.child, last));
                    }
                }
                GameNode::Decision {
                    player,
                    infoset,
                    children,
                } => {
                    let p = player.index();
                    let slot = &mut infosets[infoset.index()];
                    let first_seq = match slot {
                        Some(info) => {
                            if info.parent_seq != last[p] {
                                return Err(GameError::PerfectRecallViolation {
                                    infoset: infoset.0,
                                    player: *player,
                                });
                            }
                            info.members.push(node);
                            info.first_seq
                        }
                        None => {
                            let first = SeqId(num_sequences[p] as u32);
                            let n = children.len();
                            num_sequences[p] += n;
                            *slot = Some(InfoSetInfo {
                                player: *player,
                                first_seq: first,
                                num_actions: n,
                                parent_seq: last[p],
                                depth: 0, // filled below
                                members: vec![node],
                            });
                            discovery[p].push(*infoset);
                            first
                        }
                    };
                    for (a, &child) in children.iter().enumerate().rev() {
                        let mut next = last;
                        next[p] = SeqId(first_seq.0 + a as u32);
                        stack.push((child, next));
                    }
                }
            }
        }

        // Depths: an infoset discovered after its parent-sequence owner,
        // so a discovery-order pass resolves them in one sweep.
        let mut seq_depth: [Vec<u32>; 2] = [
            vec![0; num_sequences[0]],
            vec![0; num_sequences[1]],
        ];
        let mut seq_owner: [Vec<Option<InfoSetId>>; 2] = [
            vec![None; num_sequences[0]],
            vec![None; num_sequences[1]],
        ];
        for p in 0..2 {
            for &iid in &discovery[p] {
                let info = infosets[iid.index()].as_mut().unwrap();
                let depth = seq_depth[p][info.parent_seq.index()] + 1;
                info.depth = depth;
                for s in info.seq_range() {
                    seq_depth[p][s] = depth;
                    seq_owner[p][s] = Some(iid);
                }
            }
        }

        let players = [0, 1].map(|p| {
            let mut bottomup = discovery[p].clone();
            // Stable sort keeps discovery order inside a depth level.
            bottomup.sort_by_key(|iid| {
                std::cmp::Reverse(infosets[iid.index()].as_ref().unwrap().depth)
            });
            PlayerIndex {
                num_sequences: num_sequences[p],
                seq_owner: std::mem::take(&mut seq_owner[p]),
                seq_depth: std::mem::take(&mut seq_depth[p]),
                topdown: discovery[p].clone(),
                bottomup,
            }
        });

        Ok(SequenceIndex { infosets, players })
    }

    #[inline]
    pub fn player(&self, p: Player) -> &PlayerIndex {
        &self.players[p.index()]
    }

    /// Infoset data; panics if the infoset never appears in the tree.
    #[inline]
    pub fn infoset(&self, id: InfoSetId) -> &InfoSetInfo {
        self.infosets[id.index()]
            .as_ref()
            .expect("infoset not reached by any tree node")
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    /// Total sequence count over both players (the usual game-size stat).
    pub fn total_sequences(&self) -> usize {
        self.players[0].num_sequences + self.players[1].num_sequences
    }

    pub fn infosets_of(&self, p: Player) -> &[InfoSetId] {
        &self.players[p.index()].topdown
    }
}
