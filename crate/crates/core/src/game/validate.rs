use std::fmt;

use serde::Serialize;

use super::{Game, NodeId, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    /// Forest-level shape problems (unreachable trees).
    Structure,
    SubtreeClosure,
    TerminalCopy,
    ActionSetConsistency,
    I0,
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    Arborescence,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Structure => "structure",
            Property::SubtreeClosure => "subtree-closure",
            Property::TerminalCopy => "terminal-copy",
            Property::ActionSetConsistency => "action-set-consistency",
            Property::I0 => "I0 confinement",
            Property::I1 => "I1 no-delusion",
            Property::I2 => "I2 introspection",
            Property::I3 => "I3 no divining",
            Property::I4 => "I4 no imaginary actions",
            Property::I5 => "I5 distinct action names",
            Property::I6 => "I6 perfect recall",
            Property::Arborescence => "arborescence",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: Property,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Informational remarks that do not make the forest invalid.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, p: Property) -> bool {
        self.violations.iter().any(|v| v.property == p)
    }

    /// Distinct violated properties in canonical order.
    pub fn properties(&self) -> Vec<Property> {
        let mut ps: Vec<Property> = self.violations.iter().map(|v| v.property).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    fn push(&mut self, property: Property, message: String) {
        self.violations.push(Violation { property, message });
    }
}

pub(super) fn validate(game: &Game) -> ValidationReport {
    let mut r = ValidationReport::default();
    structure(game, &mut r);
    subtrees(game, &mut r);
    action_sets(game, &mut r);
    information_sets(game, &mut r);
    perfect_recall(game, &mut r);
    arborescence(game, &mut r);
    for t in game.tree_ids() {
        for p in game.players_without_local_infosets(t) {
            r.notes.push(format!(
                "{} is active in tree {} but has no information set located there",
                game.players[p.0],
                game.tree(t).name
            ));
        }
    }
    r
}

fn structure(game: &Game, r: &mut ValidationReport) {
    for t in game.tree_ids() {
        if t != game.base && !game.reaches(game.base, t) {
            r.push(
                Property::Structure,
                format!("tree {} is not reachable from the base tree through information sets", game.tree(t).name),
            );
        }
        if game.reaches(t, t) {
            r.push(Property::Structure, format!("tree {} reaches itself through information sets", game.tree(t).name));
        }
    }
}

fn subtrees(game: &Game, r: &mut ValidationReport) {
    for t in game.tree_ids() {
        let tree = game.tree(t);
        let mut seen: Vec<NodeId> = Vec::new();
        for &n in &tree.nodes {
            let node = game.node(n);
            let copy = game.node(node.copy_of);
            let here = game.node_label(n);
            if seen.contains(&node.copy_of) {
                r.push(Property::SubtreeClosure, format!("{here} copies a node already copied in the same tree"));
            }
            seen.push(node.copy_of);
            if t == game.base {
                continue;
            }
            match (node.parent, copy.parent) {
                (Some(p), Some(cp)) => {
                    if game.node(p).copy_of != cp {
                        r.push(
                            Property::SubtreeClosure,
                            format!("parent of {here} is not a copy of the parent of {}", game.node_label(node.copy_of)),
                        );
                    } else {
                        let parent = game.node(p);
                        let cparent = game.node(cp);
                        let same_labels = parent.moves.iter().zip(&node.incoming).all(|(m, &a)| {
                            match cparent.moves.iter().position(|x| x.player == m.player) {
                                Some(k) => cparent.moves[k].actions[copy.incoming[k]] == m.actions[a],
                                None => false,
                            }
                        });
                        if !same_labels {
                            r.push(
                                Property::SubtreeClosure,
                                format!("edge into {here} is labelled differently from the copied edge"),
                            );
                        }
                    }
                }
                (Some(_), None) => r.push(
                    Property::SubtreeClosure,
                    format!("{here} has a parent but copies the base root"),
                ),
                _ => {}
            }
            if node.is_terminal() {
                if !copy.is_terminal() {
                    r.push(Property::TerminalCopy, format!("terminal {here} copies decision node {}", game.node_label(node.copy_of)));
                } else if node.payoffs != copy.payoffs {
                    r.push(Property::TerminalCopy, format!("payoffs at {here} differ from those of the copied terminal"));
                }
                continue;
            }
            let players: Vec<PlayerId> = node.moves.iter().map(|m| m.player).collect();
            let cplayers: Vec<PlayerId> = copy.moves.iter().map(|m| m.player).collect();
            if players != cplayers {
                r.push(Property::SubtreeClosure, format!("active players at {here} differ from the copied node"));
                continue;
            }
            for (m, cm) in node.moves.iter().zip(&copy.moves) {
                if m.actions.iter().any(|a| !cm.actions.contains(a)) {
                    r.push(
                        Property::SubtreeClosure,
                        format!("{here} offers {} an action the copied node lacks", game.players[m.player.0]),
                    );
                }
            }
        }
    }
}

fn action_sets(game: &Game, r: &mut ValidationReport) {
    for t in game.tree_ids() {
        let nodes = &game.tree(t).nodes;
        for p in game.player_ids() {
            let active: Vec<(NodeId, &Vec<String>)> = nodes
                .iter()
                .filter_map(|&n| game.node(n).move_of(p).map(|m| (n, &m.actions)))
                .collect();
            for (i, (a, sa)) in active.iter().enumerate() {
                for (b, sb) in &active[i + 1..] {
                    let meets = sa.iter().any(|x| sb.contains(x));
                    if meets && !same_set(sa, sb) {
                        r.push(
                            Property::ActionSetConsistency,
                            format!(
                                "{} has overlapping but different action sets at {} and {}",
                                game.players[p.0],
                                game.node_label(*a),
                                game.node_label(*b)
                            ),
                        );
                    }
                    if same_set(sa, sb) && game.infoset_at(*a, p) != game.infoset_at(*b, p) {
                        r.push(
                            Property::I5,
                            format!(
                                "{} has equal action sets at {} and {} but different information sets",
                                game.players[p.0],
                                game.node_label(*a),
                                game.node_label(*b)
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

fn information_sets(game: &Game, r: &mut ValidationReport) {
    for (i, node) in game.nodes.iter().enumerate() {
        let n = NodeId(i);
        for m in &node.moves {
            let h = game.infoset(m.infoset);
            let who = &game.players[m.player.0];
            let here = game.node_label(n);
            if h.nodes.is_empty() {
                r.push(Property::I0, format!("information set of {who} at {here} is empty"));
                continue;
            }
            if !game.is_below(h.tree, node.tree) {
                r.push(
                    Property::I0,
                    format!("information set of {who} at {here} lies in tree {}, which is not a subtree of {}", game.tree(h.tree).name, game.tree(node.tree).name),
                );
            }
            if h.tree == node.tree && !h.nodes.contains(&n) {
                r.push(Property::I1, format!("{who} at {here} does not consider the actual node possible"));
            }
            for &n2 in &h.nodes {
                match game.node(n2).move_of(m.player) {
                    None => r.push(
                        Property::I2,
                        format!("{who} at {here} considers {} possible, where {who} is not active", game.node_label(n2)),
                    ),
                    Some(m2) => {
                        if m2.infoset != m.infoset {
                            r.push(
                                Property::I2,
                                format!("{who}'s information set at {} differs from the one at {here}", game.node_label(n2)),
                            );
                        }
                        if m2.actions.iter().any(|a| !m.actions.contains(a)) {
                            r.push(
                                Property::I4,
                                format!("{who} at {here} imagines actions available at {} only", game.node_label(n2)),
                            );
                        }
                    }
                }
                for d in game.descendants_or_self(n2) {
                    if let Some(md) = game.node(d).move_of(m.player) {
                        if game.infoset(md.infoset).tree != h.tree {
                            r.push(
                                Property::I3,
                                format!(
                                    "{who}'s information set at {} leaves tree {} although {here} points into it",
                                    game.node_label(d),
                                    game.tree(h.tree).name
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn perfect_recall(game: &Game, r: &mut ValidationReport) {
    for (i, node) in game.nodes.iter().enumerate() {
        let n1 = NodeId(i);
        for m in &node.moves {
            let p = m.player;
            for d in game.descendants_or_self(n1).into_iter().skip(1) {
                let Some(mk) = game.node(d).move_of(p) else { continue };
                // action of p at n1 on the way to d
                let path = game.path_to(d);
                let step = path[path.iter().position(|&x| x == n1).unwrap() + 1];
                let a = &m.actions[game.action_towards(n1, p, step).unwrap()];
                for &n2 in &game.infoset(mk.infoset).nodes {
                    let path2 = game.path_to(n2);
                    let recalled = path2.windows(2).any(|w| {
                        let (x, next) = (w[0], w[1]);
                        game.node(x).move_of(p).is_some_and(|mx| {
                            mx.infoset == m.infoset
                                && mx.actions[game.action_towards(x, p, next).unwrap()] == *a
                        })
                    });
                    if !recalled {
                        r.push(
                            Property::I6,
                            format!(
                                "{} forgets playing {} at {} when reaching {}",
                                game.players[p.0],
                                a,
                                game.node_label(n1),
                                game.node_label(n2)
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn arborescence(game: &Game, r: &mut ValidationReport) {
    for p in game.player_ids() {
        let hs = game.infosets_of(p);
        for &h in &hs {
            let preds: Vec<_> = hs.iter().copied().filter(|&g| game.precedes(g, h)).collect();
            for (i, &a) in preds.iter().enumerate() {
                for &b in &preds[i + 1..] {
                    if !game.precedes(a, b) && !game.precedes(b, a) {
                        r.push(
                            Property::Arborescence,
                            format!(
                                "predecessors {} and {} of {} are not ordered",
                                game.infoset_label(a),
                                game.infoset_label(b),
                                game.infoset_label(h)
                            ),
                        );
                    }
                }
            }
        }
    }
}
