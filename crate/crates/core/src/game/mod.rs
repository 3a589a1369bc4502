//! Forests of game trees with cross-tree information sets.

mod format;
mod validate;

use std::fmt;

pub use format::{GameDocument, InfoSetDoc, NodeDoc, TreeDoc};
pub use validate::{Property, ValidationReport, Violation};

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeId(pub usize);

/// Index into [`Game::nodes`]. Nodes are numbered tree by tree in declaration
/// order, so comparing ids compares declaration positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfoSetId(pub usize);

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown {kind} `{name}` referenced from {context}")]
    UnknownReference { kind: &'static str, name: String, context: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("malformed game: {0}")]
    Malformed(String),
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("unknown tree `{0}`")]
    UnknownTree(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone)]
pub struct Tree {
    pub name: String,
    pub root: NodeId,
    /// Declaration order.
    pub nodes: Vec<NodeId>,
}

/// One active player's move at a decision node.
#[derive(Debug, Clone)]
pub struct Move {
    pub player: PlayerId,
    pub actions: Vec<String>,
    pub infoset: InfoSetId,
    /// For each action of the information set, its position in `actions`.
    /// `None` only in forests that fail validation (imaginary actions).
    pub action_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub name: String,
    pub tree: TreeId,
    pub copy_of: NodeId,
    pub parent: Option<NodeId>,
    /// Local action index per move of the parent that leads here.
    pub incoming: Vec<usize>,
    pub moves: Vec<Move>,
    /// Children indexed in mixed radix over `moves` (first move most significant).
    pub children: Vec<NodeId>,
    pub payoffs: Option<Vec<Rational>>,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn move_of(&self, player: PlayerId) -> Option<&Move> {
        self.moves.iter().find(|m| m.player == player)
    }

    pub fn child(&self, local: &[usize]) -> NodeId {
        let mut idx = 0;
        for (m, &a) in self.moves.iter().zip(local) {
            idx = idx * m.actions.len() + a;
        }
        self.children[idx]
    }
}

#[derive(Debug, Clone)]
pub struct InfoSet {
    pub player: PlayerId,
    pub tree: TreeId,
    /// Sorted by id.
    pub nodes: Vec<NodeId>,
    /// A_h: the player's action labels at the first member node.
    pub actions: Vec<String>,
    /// Nodes n (in any tree) with π_i(n) equal to this set.
    pub owners: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct Game {
    pub players: Vec<String>,
    pub trees: Vec<Tree>,
    pub base: TreeId,
    pub nodes: Vec<Node>,
    /// Canonical order: tree, then smallest member node, then player.
    pub infosets: Vec<InfoSet>,
    below: Vec<Vec<bool>>,
    direct: Vec<Vec<bool>>,
    reach: Vec<Vec<bool>>,
    precedes: Vec<Vec<bool>>,
}

/// Part of an action label shown to users: everything before the first `@`.
/// Labels such as `B@n` and `B@t` are distinct actions that both render as `B`.
pub fn display_label(label: &str) -> &str {
    label.split('@').next().unwrap_or(label)
}

impl Game {
    pub fn parse(text: &str) -> Result<Game, ParseError> {
        let doc = GameDocument::from_json(text)?;
        Game::from_document(&doc)
    }

    pub fn from_document(doc: &GameDocument) -> Result<Game, ParseError> {
        format::build(doc)
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn infoset(&self, id: InfoSetId) -> &InfoSet {
        &self.infosets[id.0]
    }

    pub fn tree(&self, id: TreeId) -> &Tree {
        &self.trees[id.0]
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players.len()).map(PlayerId)
    }

    pub fn tree_ids(&self) -> impl Iterator<Item = TreeId> {
        (0..self.trees.len()).map(TreeId)
    }

    pub fn player_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p == name).map(PlayerId)
    }

    pub fn tree_by_name(&self, name: &str) -> Option<TreeId> {
        self.trees.iter().position(|t| t.name == name).map(TreeId)
    }

    pub fn node_by_name(&self, tree: TreeId, name: &str) -> Option<NodeId> {
        self.trees[tree.0].nodes.iter().copied().find(|&n| self.nodes[n.0].name == name)
    }

    /// π_i(n) for an active player.
    pub fn infoset_at(&self, node: NodeId, player: PlayerId) -> Option<InfoSetId> {
        self.node(node).move_of(player).map(|m| m.infoset)
    }

    /// T ⪯ T': every node of `a` copies a node that `b` also copies.
    pub fn is_below(&self, a: TreeId, b: TreeId) -> bool {
        self.below[a.0][b.0]
    }

    /// T ↣ T' with T ≠ T'.
    pub fn points_to(&self, a: TreeId, b: TreeId) -> bool {
        self.direct[a.0][b.0]
    }

    /// T ↪ T', the transitive closure of ↣.
    pub fn reaches(&self, a: TreeId, b: TreeId) -> bool {
        self.reach[a.0][b.0]
    }

    /// Trees of the T-partial game in declaration order: T itself and all T' with T ↪ T'.
    pub fn partial_trees(&self, t: TreeId) -> Vec<TreeId> {
        self.tree_ids().filter(|&u| u == t || self.reaches(t, u)).collect()
    }

    /// h ⇝ h': same tree and every node of h' has a proper ancestor in h.
    pub fn precedes(&self, h: InfoSetId, h2: InfoSetId) -> bool {
        self.precedes[h.0][h2.0]
    }

    /// H_i in canonical order.
    pub fn infosets_of(&self, player: PlayerId) -> Vec<InfoSetId> {
        (0..self.infosets.len())
            .map(InfoSetId)
            .filter(|&h| self.infosets[h.0].player == player)
            .collect()
    }

    /// H_i^T: the player's information sets located in trees of the T-partial game.
    pub fn infosets_in_partial(&self, player: PlayerId, t: TreeId) -> Vec<InfoSetId> {
        (0..self.infosets.len())
            .map(InfoSetId)
            .filter(|&h| {
                let set = &self.infosets[h.0];
                set.player == player && (set.tree == t || self.reaches(t, set.tree))
            })
            .collect()
    }

    /// Information sets located in tree `t` itself.
    pub fn infosets_located_in(&self, player: PlayerId, t: TreeId) -> Vec<InfoSetId> {
        self.infosets_of(player).into_iter().filter(|&h| self.infosets[h.0].tree == t).collect()
    }

    pub fn is_ancestor(&self, a: NodeId, mut b: NodeId) -> bool {
        while let Some(p) = self.nodes[b.0].parent {
            if p == a {
                return true;
            }
            b = p;
        }
        false
    }

    /// Root-to-node path, both ends included.
    pub fn path_to(&self, n: NodeId) -> Vec<NodeId> {
        let mut path = vec![n];
        let mut cur = n;
        while let Some(p) = self.nodes[cur.0].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Local index of the action `node`'s player takes on the edge towards `child`.
    pub fn action_towards(&self, node: NodeId, player: PlayerId, child: NodeId) -> Option<usize> {
        let c = &self.nodes[child.0];
        if c.parent != Some(node) {
            return None;
        }
        let pos = self.nodes[node.0].moves.iter().position(|m| m.player == player)?;
        Some(c.incoming[pos])
    }

    pub fn descendants_or_self(&self, n: NodeId) -> Vec<NodeId> {
        let mut out = vec![n];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            out.extend(self.nodes[cur.0].children.iter().copied());
            i += 1;
        }
        out
    }

    pub fn terminals(&self, t: TreeId) -> Vec<NodeId> {
        self.trees[t.0].nodes.iter().copied().filter(|&n| self.nodes[n.0].is_terminal()).collect()
    }

    /// Human label of an information set, e.g. `Colin@T:n->T'`.
    pub fn infoset_label(&self, h: InfoSetId) -> String {
        let set = &self.infosets[h.0];
        let tree = &self.trees[set.tree.0].name;
        let nodes: Vec<&str> = set.nodes.iter().map(|n| self.nodes[n.0].name.as_str()).collect();
        format!("{}@{}:{{{}}}", self.players[set.player.0], tree, nodes.join(","))
    }

    pub fn node_label(&self, n: NodeId) -> String {
        let node = &self.nodes[n.0];
        format!("{}:{}", self.trees[node.tree.0].name, node.name)
    }

    /// Players with an active node in `t` whose information sets there all lie in other trees.
    pub fn players_without_local_infosets(&self, t: TreeId) -> Vec<PlayerId> {
        self.player_ids()
            .filter(|&p| {
                let active = self.trees[t.0]
                    .nodes
                    .iter()
                    .any(|&n| self.nodes[n.0].move_of(p).is_some());
                active && self.infosets_located_in(p, t).is_empty()
            })
            .collect()
    }

    /// A player active at n and at a later node n' of the same tree whose
    /// information set at n' lies in a strictly more expressive tree than the one at n.
    pub fn awareness_rises(&self) -> bool {
        self.nodes.iter().any(|later| {
            later.moves.iter().any(|m| {
                let t2 = self.infosets[m.infoset.0].tree;
                let mut up = later.parent;
                while let Some(n) = up {
                    if let Some(h) = self.infoset_at(n, m.player) {
                        let t1 = self.infosets[h.0].tree;
                        if t1 != t2 && self.is_below(t1, t2) {
                            return true;
                        }
                    }
                    up = self.nodes[n.0].parent;
                }
                false
            })
        })
    }

    /// The T-partial game as a stand-alone forest with base tree `t`.
    pub fn partial_game(&self, t: TreeId) -> Result<Game, GameError> {
        if t.0 >= self.trees.len() {
            return Err(GameError::UnknownTree(format!("#{}", t.0)));
        }
        let doc = format::partial_document(self, t);
        Ok(Game::from_document(&doc)?)
    }

    pub fn partial_game_by_name(&self, name: &str) -> Result<Game, GameError> {
        let t = self.tree_by_name(name).ok_or_else(|| GameError::UnknownTree(name.to_string()))?;
        self.partial_game(t)
    }

    pub fn to_document(&self) -> GameDocument {
        format::document_of(self)
    }

    pub(crate) fn assemble(
        players: Vec<String>,
        trees: Vec<Tree>,
        base: TreeId,
        nodes: Vec<Node>,
        infosets: Vec<InfoSet>,
    ) -> Game {
        let mut game = Game {
            players,
            trees,
            base,
            nodes,
            infosets,
            below: Vec::new(),
            direct: Vec::new(),
            reach: Vec::new(),
            precedes: Vec::new(),
        };
        game.compute_relations();
        game
    }

    fn compute_relations(&mut self) {
        let nt = self.trees.len();
        let copies: Vec<Vec<NodeId>> = self
            .trees
            .iter()
            .map(|t| {
                let mut c: Vec<NodeId> = t.nodes.iter().map(|&n| self.nodes[n.0].copy_of).collect();
                c.sort();
                c
            })
            .collect();
        self.below = (0..nt)
            .map(|a| (0..nt).map(|b| copies[a].iter().all(|x| copies[b].binary_search(x).is_ok())).collect())
            .collect();

        let mut direct = vec![vec![false; nt]; nt];
        for node in &self.nodes {
            for m in &node.moves {
                let target = self.infosets[m.infoset.0].tree;
                if target != node.tree {
                    direct[node.tree.0][target.0] = true;
                }
            }
        }
        let mut reach = direct.clone();
        for k in 0..nt {
            for a in 0..nt {
                if reach[a][k] {
                    for b in 0..nt {
                        if reach[k][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
        }
        self.direct = direct;
        self.reach = reach;

        let nh = self.infosets.len();
        let mut precedes = vec![vec![false; nh]; nh];
        for a in 0..nh {
            for b in 0..nh {
                let (ha, hb) = (&self.infosets[a], &self.infosets[b]);
                if a == b || ha.player != hb.player || ha.tree != hb.tree {
                    continue;
                }
                precedes[a][b] = hb.nodes.iter().all(|&n2| ha.nodes.iter().any(|&n1| self.is_ancestor(n1, n2)));
            }
        }
        self.precedes = precedes;
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player#{}", self.0)
    }
}
