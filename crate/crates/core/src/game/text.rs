//! Line-oriented text format for games.
//!
//! ```text
//! players 2
//! node 0 chance (c0:3.3333333333333331e-1)(c1:3.3333333333333331e-1)(c2:3.3333333333333331e-1)
//! node 1 player 1 infoset 0 actions k b
//! node 7 terminal -1.0000000000000000e0
//! edge 0 c0 1
//! ```
//!
//! All node lines come first, then all edge lines. Numbers are written
//! with 17 significant digits so values round-trip exactly. The writer
//! renumbers nodes in depth-first preorder, making the output a
//! canonical function of the tree.

use super::{
    ActionId, ChanceEdge, GameError, GameNode, GameTree, InfoSetId, NodeId, Player,
};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: expected `players 2` header")]
    BadHeader(usize),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate node id {id}")]
    DuplicateNode { line: usize, id: u32 },
    #[error("node {0}: edge references undeclared node")]
    UnknownNode(u32),
    #[error("node {node}: no outgoing edge labelled `{label}`")]
    MissingEdge { node: u32, label: String },
    #[error("node {node}: unexpected edge labelled `{label}`")]
    UnexpectedEdge { node: u32, label: String },
    #[error("infoset {0}: inconsistent redeclaration")]
    InfoSetMismatch(u32),
    #[error("no root: every node appears as a child")]
    NoRoot,
    #[error("multiple roots: nodes {0} and {1} have no parent")]
    MultipleRoots(u32, u32),
    #[error(transparent)]
    Game(#[from] GameError),
}

fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Serialize a game. Output is canonical: nodes appear in depth-first
/// preorder and edges in the same traversal order.
pub fn write_game(tree: &GameTree) -> String {
    // Preorder renumbering.
    let mut order: Vec<NodeId> = Vec::with_capacity(tree.num_nodes());
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        order.push(id);
        let kids = tree.children(id);
        for (_, c) in kids.into_iter().rev() {
            stack.push(c);
        }
    }
    let mut new_id = vec![0u32; tree.num_nodes()];
    for (k, id) in order.iter().enumerate() {
        new_id[id.index()] = k as u32;
    }
    // Infoset ids are also renumbered by first appearance, so the
    // output is independent of construction order.
    let mut new_iid: Vec<Option<u32>> = vec![None; tree.num_infosets()];
    let mut next_iid = 0u32;
    for &id in &order {
        if let GameNode::Decision { infoset, .. } = tree.node(id) {
            let slot = &mut new_iid[infoset.index()];
            if slot.is_none() {
                *slot = Some(next_iid);
                next_iid += 1;
            }
        }
    }

    let mut nodes_out = String::new();
    let mut edges_out = String::new();
    for &id in &order {
        let nid = new_id[id.index()];
        match tree.node(id) {
            GameNode::Chance { edges } => {
                write!(nodes_out, "node {} chance", nid).unwrap();
                for e in edges {
                    write!(
                        nodes_out,
                        " ({}:{})",
                        tree.action_label(e.action),
                        fmt_f64(e.prob)
                    )
                    .unwrap();
                }
                nodes_out.push('\n');
                for e in edges {
                    writeln!(
                        edges_out,
                        "edge {} {} {}",
                        nid,
                        tree.action_label(e.action),
                        new_id[e.child.index()]
                    )
                    .unwrap();
                }
            }
            GameNode::Decision {
                player,
                infoset,
                children,
            } => {
                let iid = new_iid[infoset.index()].unwrap();
                write!(nodes_out, "node {} player {} infoset {}", nid, player, iid).unwrap();
                nodes_out.push_str(" actions");
                let decl = tree.infoset(*infoset);
                for &a in &decl.actions {
                    write!(nodes_out, " {}", tree.action_label(a)).unwrap();
                }
                nodes_out.push('\n');
                for (&a, &c) in decl.actions.iter().zip(children.iter()) {
                    writeln!(
                        edges_out,
                        "edge {} {} {}",
                        nid,
                        tree.action_label(a),
                        new_id[c.index()]
                    )
                    .unwrap();
                }
            }
            GameNode::Terminal { utility } => {
                writeln!(nodes_out, "node {} terminal {}", nid, fmt_f64(*utility)).unwrap();
            }
        }
    }
    format!("players 2\n{}{}", nodes_out, edges_out)
}

enum ParsedNode {
    Chance(Vec<(String, f64)>),
    Decision {
        player: Player,
        infoset: u32,
        actions: Vec<String>,
    },
    Terminal(f64),
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, ParseError> {
    tok.parse::<f64>().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("bad number `{}`", tok),
    })
}

fn parse_u32(tok: &str, line: usize) -> Result<u32, ParseError> {
    tok.parse::<u32>().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("bad integer `{}`", tok),
    })
}

/// Parse a game from the text format.
pub fn read_game(input: &str) -> Result<GameTree, ParseError> {
    let mut lines = input.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            None
        } else {
            Some((i + 1, t))
        }
    });
    match lines.next() {
        Some((_, "players 2")) => {}
        Some((n, _)) => return Err(ParseError::BadHeader(n)),
        None => return Err(ParseError::BadHeader(1)),
    }

    let mut decls: HashMap<u32, ParsedNode> = HashMap::new();
    let mut decl_order: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, String, u32)> = Vec::new();

    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("node") => {
                let id = parse_u32(
                    toks.next().ok_or(ParseError::Malformed {
                        line: ln,
                        msg: "missing node id".into(),
                    })?,
                    ln,
                )?;
                if decls.contains_key(&id) {
                    return Err(ParseError::DuplicateNode { line: ln, id });
                }
                let kind = toks.next().ok_or(ParseError::Malformed {
                    line: ln,
                    msg: "missing node kind".into(),
                })?;
                let parsed = match kind {
                    "chance" => {
                        let mut outcomes = Vec::new();
                        for tok in toks {
                            let inner =
                                tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or(
                                    ParseError::Malformed {
                                        line: ln,
                                        msg: format!("bad chance outcome `{}`", tok),
                                    },
                                )?;
                            let (label, prob) =
                                inner.split_once(':').ok_or(ParseError::Malformed {
                                    line: ln,
                                    msg: format!("bad chance outcome `{}`", tok),
                                })?;
                            outcomes.push((label.to_string(), parse_f64(prob, ln)?));
                        }
                        if outcomes.is_empty() {
                            return Err(ParseError::Malformed {
                                line: ln,
                                msg: "chance node with no outcomes".into(),
                            });
                        }
                        ParsedNode::Chance(outcomes)
                    }
                    "player" => {
                        let pnum = parse_u32(
                            toks.next().ok_or(ParseError::Malformed {
                                line: ln,
                                msg: "missing player number".into(),
                            })?,
                            ln,
                        )?;
                        let player =
                            Player::from_number(pnum).ok_or(ParseError::Malformed {
                                line: ln,
                                msg: format!("bad player `{}`", pnum),
                            })?;
                        match toks.next() {
                            Some("infoset") => {}
                            _ => {
                                return Err(ParseError::Malformed {
                                    line: ln,
                                    msg: "expected `infoset`".into(),
                                })
                            }
                        }
                        let infoset = parse_u32(
                            toks.next().ok_or(ParseError::Malformed {
                                line: ln,
                                msg: "missing infoset id".into(),
                            })?,
                            ln,
                        )?;
                        match toks.next() {
                            Some("actions") => {}
                            _ => {
                                return Err(ParseError::Malformed {
                                    line: ln,
                                    msg: "expected `actions`".into(),
                                })
                            }
                        }
                        let actions: Vec<String> = toks.map(str::to_string).collect();
                        if actions.is_empty() {
                            return Err(ParseError::Malformed {
                                line: ln,
                                msg: "decision node with no actions".into(),
                            });
                        }
                        ParsedNode::Decision {
                            player,
                            infoset,
                            actions,
                        }
                    }
                    "terminal" => {
                        let u = parse_f64(
                            toks.next().ok_or(ParseError::Malformed {
                                line: ln,
                                msg: "missing utility".into(),
                            })?,
                            ln,
                        )?;
                        ParsedNode::Terminal(u)
                    }
                    other => {
                        return Err(ParseError::Malformed {
                            line: ln,
                            msg: format!("unknown node kind `{}`", other),
                        })
                    }
                };
                decls.insert(id, parsed);
                decl_order.push(id);
            }
            Some("edge") => {
                let parent = parse_u32(
                    toks.next().ok_or(ParseError::Malformed {
                        line: ln,
                        msg: "missing edge parent".into(),
                    })?,
                    ln,
                )?;
                let label = toks
                    .next()
                    .ok_or(ParseError::Malformed {
                        line: ln,
                        msg: "missing edge label".into(),
                    })?
                    .to_string();
                let child = parse_u32(
                    toks.next().ok_or(ParseError::Malformed {
                        line: ln,
                        msg: "missing edge child".into(),
                    })?,
                    ln,
                )?;
                edges.push((parent, label, child));
            }
            Some(other) => {
                return Err(ParseError::Malformed {
                    line: ln,
                    msg: format!("unknown directive `{}`", other),
                })
            }
            None => {}
        }
    }

    // Dense node ids in declaration order.
    let mut node_remap: HashMap<u32, u32> = HashMap::new();
    for (k, &id) in decl_order.iter().enumerate() {
        node_remap.insert(id, k as u32);
    }

    // Group edges per parent, keyed by label.
    let mut out_edges: HashMap<u32, HashMap<String, u32>> = HashMap::new();
    let mut has_parent: Vec<bool> = vec![false; decl_order.len()];
    for (parent, label, child) in edges {
        if !node_remap.contains_key(&parent) {
            return Err(ParseError::UnknownNode(parent));
        }
        let child_dense = *node_remap
            .get(&child)
            .ok_or(ParseError::UnknownNode(child))?;
        has_parent[child_dense as usize] = true;
        let slot = out_edges.entry(parent).or_default();
        if slot.insert(label.clone(), child_dense).is_some() {
            return Err(ParseError::UnexpectedEdge {
                node: parent,
                label,
            });
        }
    }

    // Action table and infoset declarations, in declaration order.
    let mut actions: Vec<String> = Vec::new();
    let mut action_lookup: HashMap<String, ActionId> = HashMap::new();
    let intern = |label: &str, actions: &mut Vec<String>,
                  lookup: &mut HashMap<String, ActionId>| {
        if let Some(&a) = lookup.get(label) {
            a
        } else {
            let a = ActionId(actions.len() as u32);
            actions.push(label.to_string());
            lookup.insert(label.to_string(), a);
            a
        }
    };

    let mut infoset_remap: HashMap<u32, InfoSetId> = HashMap::new();
    let mut infoset_decls: Vec<super::InfoSetDecl> = Vec::new();
    let mut nodes: Vec<GameNode> = Vec::with_capacity(decl_order.len());

    for &orig_id in &decl_order {
        let decl = decls.remove(&orig_id).unwrap();
        let labelled = out_edges.remove(&orig_id).unwrap_or_default();
        let mut labelled = labelled;
        let node = match decl {
            ParsedNode::Terminal(u) => {
                if !labelled.is_empty() {
                    let label = labelled.keys().next().unwrap().clone();
                    return Err(ParseError::UnexpectedEdge {
                        node: orig_id,
                        label,
                    });
                }
                GameNode::Terminal { utility: u }
            }
            ParsedNode::Chance(outcomes) => {
                let mut chance_edges = Vec::with_capacity(outcomes.len());
                for (label, prob) in &outcomes {
                    let child = labelled.remove(label).ok_or(ParseError::MissingEdge {
                        node: orig_id,
                        label: label.clone(),
                    })?;
                    chance_edges.push(ChanceEdge {
                        action: intern(label, &mut actions, &mut action_lookup),
                        prob: *prob,
                        child: NodeId(child),
                    });
                }
                if let Some(label) = labelled.into_keys().next() {
                    return Err(ParseError::UnexpectedEdge {
                        node: orig_id,
                        label,
                    });
                }
                GameNode::Chance {
                    edges: chance_edges,
                }
            }
            ParsedNode::Decision {
                player,
                infoset,
                actions: labels,
            } => {
                let act_ids: Vec<ActionId> = labels
                    .iter()
                    .map(|l| intern(l, &mut actions, &mut action_lookup))
                    .collect();
                let iid = match infoset_remap.get(&infoset) {
                    Some(&iid) => {
                        let d = &infoset_decls[iid.index()];
                        if d.player != player || d.actions != act_ids {
                            return Err(ParseError::InfoSetMismatch(infoset));
                        }
                        iid
                    }
                    None => {
                        let iid = InfoSetId(infoset_decls.len() as u32);
                        infoset_decls.push(super::InfoSetDecl {
                            player,
                            actions: act_ids.clone(),
                        });
                        infoset_remap.insert(infoset, iid);
                        iid
                    }
                };
                let mut children = Vec::with_capacity(labels.len());
                for label in &labels {
                    let child = labelled.remove(label).ok_or(ParseError::MissingEdge {
                        node: orig_id,
                        label: label.clone(),
                    })?;
                    children.push(NodeId(child));
                }
                if let Some(label) = labelled.into_keys().next() {
                    return Err(ParseError::UnexpectedEdge {
                        node: orig_id,
                        label,
                    });
                }
                GameNode::Decision {
                    player,
                    infoset: iid,
                    children,
                }
            }
        };
        nodes.push(node);
    }

    // The root is the unique node that never appears as a child.
    let mut root = None;
    for (k, &hp) in has_parent.iter().enumerate() {
        if !hp {
            match root {
                None => root = Some(k as u32),
                Some(r) => return Err(ParseError::MultipleRoots(r, k as u32)),
            }
        }
    }
    let root = root.ok_or(ParseError::NoRoot)?;

    let tree = GameTree {
        nodes,
        root: NodeId(root),
        actions,
        infosets: infoset_decls,
    };
    tree.validate()?;
    Ok(tree)
}
