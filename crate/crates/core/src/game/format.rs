use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Game, InfoSet, InfoSetId, Move, Node, NodeId, ParseError, PlayerId, Tree, TreeId};
use crate::{format_rational, parse_rational, Rational};

/// Serialized form of a game. Field names are the on-disk keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub players: Vec<String>,
    pub base_tree: String,
    pub trees: Vec<TreeDoc>,
    #[serde(default)]
    pub infosets: Vec<InfoSetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub id: String,
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action_profile: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoffs: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoSetDoc {
    pub tree: String,
    pub node: String,
    pub player: String,
    pub target_tree: String,
    pub target_nodes: Vec<String>,
}

impl GameDocument {
    pub fn from_json(text: &str) -> Result<GameDocument, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

fn unknown(kind: &'static str, name: &str, context: String) -> ParseError {
    ParseError::UnknownReference { kind, name: name.to_string(), context }
}

pub(super) fn build(doc: &GameDocument) -> Result<Game, ParseError> {
    let mut player_index = HashMap::new();
    for (i, p) in doc.players.iter().enumerate() {
        if player_index.insert(p.as_str(), PlayerId(i)).is_some() {
            return Err(ParseError::Duplicate { kind: "player", name: p.clone() });
        }
    }
    if doc.players.is_empty() {
        return Err(ParseError::Malformed("no players declared".into()));
    }
    let mut tree_index = HashMap::new();
    for (i, t) in doc.trees.iter().enumerate() {
        if tree_index.insert(t.id.as_str(), TreeId(i)).is_some() {
            return Err(ParseError::Duplicate { kind: "tree", name: t.id.clone() });
        }
        if t.nodes.is_empty() {
            return Err(ParseError::Malformed(format!("tree `{}` has no nodes", t.id)));
        }
    }
    let base = *tree_index
        .get(doc.base_tree.as_str())
        .ok_or_else(|| unknown("tree", &doc.base_tree, "base_tree".into()))?;

    // global node numbering
    let mut node_index: HashMap<(TreeId, &str), NodeId> = HashMap::new();
    let mut docs: Vec<(TreeId, &NodeDoc)> = Vec::new();
    for (ti, t) in doc.trees.iter().enumerate() {
        for nd in &t.nodes {
            let id = NodeId(docs.len());
            if node_index.insert((TreeId(ti), nd.id.as_str()), id).is_some() {
                return Err(ParseError::Duplicate { kind: "node", name: format!("{}:{}", t.id, nd.id) });
            }
            docs.push((TreeId(ti), nd));
        }
    }
    let label = |t: TreeId, n: &str| format!("{}:{}", doc.trees[t.0].id, n);

    // moves (infosets filled in later)
    let mut nodes: Vec<Node> = Vec::with_capacity(docs.len());
    for &(t, nd) in &docs {
        let mut active: Vec<PlayerId> = Vec::new();
        for p in nd.actions.keys() {
            let pid = *player_index.get(p.as_str()).ok_or_else(|| unknown("player", p, label(t, &nd.id)))?;
            active.push(pid);
        }
        active.sort();
        if let Some(list) = &nd.active {
            let mut declared = Vec::new();
            for p in list {
                let pid = *player_index.get(p.as_str()).ok_or_else(|| unknown("player", p, label(t, &nd.id)))?;
                declared.push(pid);
            }
            declared.sort();
            declared.dedup();
            if declared != active {
                return Err(ParseError::Malformed(format!(
                    "node {}: `active` does not match the players listed under `actions`",
                    label(t, &nd.id)
                )));
            }
        }
        let mut moves = Vec::new();
        for pid in active {
            let acts = &nd.actions[&doc.players[pid.0]];
            if acts.is_empty() {
                return Err(ParseError::Malformed(format!(
                    "node {}: player {} has an empty action set",
                    label(t, &nd.id),
                    doc.players[pid.0]
                )));
            }
            for (k, a) in acts.iter().enumerate() {
                if acts[..k].contains(a) {
                    return Err(ParseError::Duplicate { kind: "action", name: format!("{} at {}", a, label(t, &nd.id)) });
                }
            }
            moves.push(Move { player: pid, actions: acts.clone(), infoset: InfoSetId(usize::MAX), action_map: Vec::new() });
        }
        let slots: usize = moves.iter().map(|m| m.actions.len()).product();
        let children = if moves.is_empty() { Vec::new() } else { vec![NodeId(usize::MAX); slots] };
        nodes.push(Node {
            name: nd.id.clone(),
            tree: t,
            copy_of: NodeId(usize::MAX),
            parent: None,
            incoming: Vec::new(),
            moves,
            children,
            payoffs: None,
        });
    }

    // parents and edges
    let mut roots: Vec<Option<NodeId>> = vec![None; doc.trees.len()];
    for (i, &(t, nd)) in docs.iter().enumerate() {
        let id = NodeId(i);
        match &nd.parent {
            None => {
                if !nd.action_profile.is_empty() {
                    return Err(ParseError::Malformed(format!("root {} carries an action profile", label(t, &nd.id))));
                }
                if let Some(prev) = roots[t.0] {
                    return Err(ParseError::Malformed(format!(
                        "tree `{}` has two roots: {} and {}",
                        doc.trees[t.0].id, nodes[prev.0].name, nd.id
                    )));
                }
                roots[t.0] = Some(id);
            }
            Some(pname) => {
                let pid = *node_index
                    .get(&(t, pname.as_str()))
                    .ok_or_else(|| unknown("node", pname, format!("parent of {}", label(t, &nd.id))))?;
                let parent = &nodes[pid.0];
                if parent.moves.is_empty() {
                    return Err(ParseError::Malformed(format!(
                        "node {} has a child but no active players",
                        label(t, pname)
                    )));
                }
                if nd.action_profile.len() != parent.moves.len() {
                    return Err(ParseError::Malformed(format!(
                        "edge into {} must name one action per active player of its parent",
                        label(t, &nd.id)
                    )));
                }
                let mut local = Vec::with_capacity(parent.moves.len());
                for m in &parent.moves {
                    let pname_ = &doc.players[m.player.0];
                    let a = nd.action_profile.get(pname_).ok_or_else(|| {
                        ParseError::Malformed(format!("edge into {} lacks an action for {}", label(t, &nd.id), pname_))
                    })?;
                    let pos = m
                        .actions
                        .iter()
                        .position(|x| x == a)
                        .ok_or_else(|| unknown("action", a, format!("edge into {}", label(t, &nd.id))))?;
                    local.push(pos);
                }
                let mut slot = 0;
                for (m, &a) in parent.moves.iter().zip(&local) {
                    slot = slot * m.actions.len() + a;
                }
                if nodes[pid.0].children[slot] != NodeId(usize::MAX) {
                    return Err(ParseError::Duplicate {
                        kind: "action profile",
                        name: format!("below {}", label(t, pname)),
                    });
                }
                nodes[pid.0].children[slot] = id;
                nodes[i].parent = Some(pid);
                nodes[i].incoming = local;
            }
        }
    }
    for (ti, r) in roots.iter().enumerate() {
        if r.is_none() {
            return Err(ParseError::Malformed(format!("tree `{}` has no root", doc.trees[ti].id)));
        }
    }
    for (i, n) in nodes.iter().enumerate() {
        if n.children.iter().any(|c| c.0 == usize::MAX) {
            return Err(ParseError::Malformed(format!(
                "node {} lacks a child for some action profile",
                label(n.tree, &docs[i].1.id)
            )));
        }
        // cycle check: walking up must reach the root
        let mut cur = NodeId(i);
        let mut steps = 0;
        while let Some(p) = nodes[cur.0].parent {
            cur = p;
            steps += 1;
            if steps > nodes.len() {
                return Err(ParseError::Malformed(format!("cycle through {}", label(n.tree, &n.name))));
            }
        }
    }

    // copies
    for (i, &(t, nd)) in docs.iter().enumerate() {
        let target = nd.copy_of.as_deref().unwrap_or(&nd.id);
        if t == base && target != nd.id {
            return Err(ParseError::Malformed(format!(
                "base-tree node {} cannot be a copy of another node",
                label(t, &nd.id)
            )));
        }
        let c = *node_index
            .get(&(base, target))
            .ok_or_else(|| unknown("node", target, format!("copy_of of {}", label(t, &nd.id))))?;
        nodes[i].copy_of = c;
    }

    // payoffs: base tree first so copies can inherit
    let order: Vec<usize> = (0..docs.len())
        .filter(|&i| docs[i].0 == base)
        .chain((0..docs.len()).filter(|&i| docs[i].0 != base))
        .collect();
    for i in order {
        let (t, nd) = docs[i];
        let terminal = nodes[i].moves.is_empty();
        match &nd.payoffs {
            Some(map) => {
                if !terminal {
                    return Err(ParseError::Malformed(format!("decision node {} carries payoffs", label(t, &nd.id))));
                }
                let mut vals = vec![None; doc.players.len()];
                for (p, v) in map {
                    let pid = *player_index.get(p.as_str()).ok_or_else(|| unknown("player", p, label(t, &nd.id)))?;
                    vals[pid.0] = Some(parse_rational(v).ok_or_else(|| ParseError::InvalidRational(v.clone()))?);
                }
                let vals: Option<Vec<Rational>> = vals.into_iter().collect();
                let vals = vals.ok_or_else(|| {
                    ParseError::Malformed(format!("terminal {} lacks a payoff for some player", label(t, &nd.id)))
                })?;
                nodes[i].payoffs = Some(vals);
            }
            None if terminal => {
                if t == base {
                    return Err(ParseError::Malformed(format!("terminal {} has no payoffs", label(t, &nd.id))));
                }
                nodes[i].payoffs = nodes[nodes[i].copy_of.0].payoffs.clone();
            }
            None => {}
        }
    }

    // information sets
    let mut assigned: HashMap<(NodeId, PlayerId), usize> = HashMap::new();
    let mut groups: Vec<(PlayerId, TreeId, Vec<NodeId>)> = Vec::new();
    let mut group_of: HashMap<(PlayerId, TreeId, Vec<NodeId>), usize> = HashMap::new();
    for rec in &doc.infosets {
        let t = *tree_index.get(rec.tree.as_str()).ok_or_else(|| unknown("tree", &rec.tree, "information set".into()))?;
        let n = *node_index
            .get(&(t, rec.node.as_str()))
            .ok_or_else(|| unknown("node", &rec.node, format!("information set in tree {}", rec.tree)))?;
        let p = *player_index
            .get(rec.player.as_str())
            .ok_or_else(|| unknown("player", &rec.player, format!("information set at {}", label(t, &rec.node))))?;
        let tt = *tree_index
            .get(rec.target_tree.as_str())
            .ok_or_else(|| unknown("tree", &rec.target_tree, format!("information set at {}", label(t, &rec.node))))?;
        let mut targets = Vec::new();
        for name in &rec.target_nodes {
            let m = *node_index
                .get(&(tt, name.as_str()))
                .ok_or_else(|| unknown("node", name, format!("information set at {}", label(t, &rec.node))))?;
            if targets.contains(&m) {
                return Err(ParseError::Duplicate { kind: "target node", name: label(tt, name) });
            }
            targets.push(m);
        }
        targets.sort();
        if nodes[n.0].move_of(p).is_none() {
            return Err(ParseError::Malformed(format!(
                "information set given for {} at {}, where that player is not active",
                rec.player,
                label(t, &rec.node)
            )));
        }
        let key = (p, tt, targets);
        let g = match group_of.get(&key) {
            Some(&g) => g,
            None => {
                groups.push(key.clone());
                group_of.insert(key, groups.len() - 1);
                groups.len() - 1
            }
        };
        if assigned.insert((n, p), g).is_some() {
            return Err(ParseError::Duplicate {
                kind: "information set",
                name: format!("{} at {}", rec.player, label(t, &rec.node)),
            });
        }
    }
    for (i, n) in nodes.iter().enumerate() {
        for m in &n.moves {
            if !assigned.contains_key(&(NodeId(i), m.player)) {
                return Err(ParseError::Malformed(format!(
                    "missing information set for {} at {}",
                    doc.players[m.player.0],
                    label(n.tree, &n.name)
                )));
            }
        }
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, ta, na) = &groups[a];
        let (pb, tb, nb) = &groups[b];
        (ta, na.first(), pa, na).cmp(&(tb, nb.first(), pb, nb))
    });
    let mut rank = vec![0; groups.len()];
    for (pos, &g) in order.iter().enumerate() {
        rank[g] = pos;
    }
    let mut infosets: Vec<InfoSet> = order
        .iter()
        .map(|&g| {
            let (p, t, members) = &groups[g];
            let actions = members
                .first()
                .and_then(|&m| nodes[m.0].move_of(*p))
                .map(|mv| mv.actions.clone())
                .unwrap_or_default();
            InfoSet { player: *p, tree: *t, nodes: members.clone(), actions, owners: Vec::new() }
        })
        .collect();
    for (i, node) in nodes.iter_mut().enumerate() {
        for m in node.moves.iter_mut() {
            let h = rank[assigned[&(NodeId(i), m.player)]];
            m.infoset = InfoSetId(h);
            m.action_map = infosets[h].actions.iter().map(|a| m.actions.iter().position(|x| x == a)).collect();
            infosets[h].owners.push(NodeId(i));
        }
    }

    let trees = doc
        .trees
        .iter()
        .enumerate()
        .map(|(ti, t)| Tree {
            name: t.id.clone(),
            root: roots[ti].unwrap(),
            nodes: t.nodes.iter().map(|nd| node_index[&(TreeId(ti), nd.id.as_str())]).collect(),
        })
        .collect();
    Ok(Game::assemble(doc.players.clone(), trees, base, nodes, infosets))
}

fn node_doc(game: &Game, n: NodeId, copy_name: Option<String>) -> NodeDoc {
    let node = game.node(n);
    let mut doc = NodeDoc { id: node.name.clone(), copy_of: copy_name, ..Default::default() };
    if let Some(p) = node.parent {
        let parent = game.node(p);
        doc.parent = Some(parent.name.clone());
        for (m, &a) in parent.moves.iter().zip(&node.incoming) {
            doc.action_profile.insert(game.players[m.player.0].clone(), m.actions[a].clone());
        }
    }
    for m in &node.moves {
        doc.actions.insert(game.players[m.player.0].clone(), m.actions.clone());
    }
    if let Some(pay) = &node.payoffs {
        doc.payoffs = Some(
            pay.iter()
                .enumerate()
                .map(|(i, v)| (game.players[i].clone(), format_rational(v)))
                .collect(),
        );
    }
    doc
}

fn infoset_docs(game: &Game, trees: &[TreeId]) -> Vec<InfoSetDoc> {
    let mut out = Vec::new();
    for &t in trees {
        for &n in &game.tree(t).nodes {
            let node = game.node(n);
            for m in &node.moves {
                let h = game.infoset(m.infoset);
                out.push(InfoSetDoc {
                    tree: game.tree(t).name.clone(),
                    node: node.name.clone(),
                    player: game.players[m.player.0].clone(),
                    target_tree: game.tree(h.tree).name.clone(),
                    target_nodes: h.nodes.iter().map(|&x| game.node(x).name.clone()).collect(),
                });
            }
        }
    }
    out
}

pub(super) fn document_of(game: &Game) -> GameDocument {
    let trees: Vec<TreeId> = game.tree_ids().collect();
    GameDocument {
        players: game.players.clone(),
        base_tree: game.tree(game.base).name.clone(),
        trees: trees
            .iter()
            .map(|&t| TreeDoc {
                id: game.tree(t).name.clone(),
                nodes: game
                    .tree(t)
                    .nodes
                    .iter()
                    .map(|&n| {
                        let copy = game.node(game.node(n).copy_of).name.clone();
                        let copy = (t != game.base && copy != game.node(n).name).then_some(copy);
                        node_doc(game, n, copy)
                    })
                    .collect(),
            })
            .collect(),
        infosets: infoset_docs(game, &trees),
    }
}

pub(super) fn partial_document(game: &Game, t: TreeId) -> GameDocument {
    let trees = game.partial_trees(t);
    // base-node copy -> node of the new base tree
    let mut in_new_base: HashMap<NodeId, NodeId> = HashMap::new();
    for &n in &game.tree(t).nodes {
        in_new_base.insert(game.node(n).copy_of, n);
    }
    GameDocument {
        players: game.players.clone(),
        base_tree: game.tree(t).name.clone(),
        trees: trees
            .iter()
            .map(|&u| TreeDoc {
                id: game.tree(u).name.clone(),
                nodes: game
                    .tree(u)
                    .nodes
                    .iter()
                    .map(|&n| {
                        let copy = if u == t {
                            None
                        } else {
                            let c = game.node(n).copy_of;
                            let target = in_new_base.get(&c).copied().unwrap_or(c);
                            Some(game.node(target).name.clone())
                        };
                        node_doc(game, n, copy)
                    })
                    .collect(),
            })
            .collect(),
        infosets: infoset_docs(game, &trees),
    }
}
