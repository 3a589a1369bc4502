//! Textbook iterated conditional strict dominance and iterated admissibility
//! for single-tree games, read straight from the game document.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use unaware_core::{parse_rational, GameDocument, NormalForm, Rational};

use super::simplex;

/// A strategy as information set (sorted member node names) -> action label.
pub type Plan = BTreeMap<Vec<String>, String>;

struct Set {
    player: usize,
    nodes: Vec<String>,
    actions: Vec<String>,
}

pub struct Textbook {
    sets: Vec<Set>,
    /// Per player: the player's information sets, and every strategy as action indices over them.
    own: Vec<Vec<usize>>,
    strategies: Vec<Vec<Vec<usize>>>,
    /// Payoff vectors by profile (strategy index per player, mixed radix).
    payoffs: Vec<Vec<Rational>>,
    /// Profiles whose play passes through each information set.
    reaches: Vec<Vec<bool>>,
}

fn product(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out.into_iter().flat_map(|p| (0..r).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

impl Textbook {
    pub fn new(doc: &GameDocument) -> Textbook {
        assert_eq!(doc.trees.len(), 1, "textbook routines take single-tree games");
        let tree = &doc.trees[0];
        let players = &doc.players;
        let node: HashMap<&str, _> = tree.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        let root = tree.nodes.iter().find(|n| n.parent.is_none()).expect("root");

        let mut sets: Vec<Set> = Vec::new();
        let mut set_at: HashMap<(usize, String), usize> = HashMap::new();
        for h in &doc.infosets {
            let player = players.iter().position(|p| *p == h.player).unwrap();
            let mut nodes = h.target_nodes.clone();
            nodes.sort();
            let idx = match sets.iter().position(|s| s.player == player && s.nodes == nodes) {
                Some(i) => i,
                None => {
                    let actions = node[nodes[0].as_str()].actions[&h.player].clone();
                    sets.push(Set { player, nodes, actions });
                    sets.len() - 1
                }
            };
            set_at.insert((player, h.node.clone()), idx);
        }

        let own: Vec<Vec<usize>> = (0..players.len()).map(|i| (0..sets.len()).filter(|&h| sets[h].player == i).collect()).collect();
        let strategies: Vec<Vec<Vec<usize>>> = own.iter().map(|hs| product(&hs.iter().map(|&h| sets[h].actions.len()).collect::<Vec<_>>())).collect();
        let counts: Vec<usize> = strategies.iter().map(|s| s.len()).collect();

        let mut payoffs = Vec::new();
        let mut reaches = vec![Vec::new(); sets.len()];
        for profile in product(&counts) {
            let mut here = root;
            let mut visited = vec![false; sets.len()];
            while here.payoffs.is_none() {
                let mut choice: BTreeMap<String, String> = BTreeMap::new();
                for name in here.actions.keys() {
                    let i = players.iter().position(|p| p == name).unwrap();
                    let h = set_at[&(i, here.id.clone())];
                    visited[h] = true;
                    let pos = own[i].iter().position(|&x| x == h).unwrap();
                    let a = strategies[i][profile[i]][pos];
                    choice.insert(name.clone(), sets[h].actions[a].clone());
                }
                here = tree
                    .nodes
                    .iter()
                    .find(|n| n.parent.as_deref() == Some(here.id.as_str()) && n.action_profile == choice)
                    .expect("child for every joint action");
            }
            let pay = here.payoffs.as_ref().unwrap();
            payoffs.push(players.iter().map(|p| parse_rational(&pay[p]).unwrap()).collect());
            for (h, v) in visited.into_iter().enumerate() {
                reaches[h].push(v);
            }
        }
        Textbook { sets, own, strategies, payoffs, reaches }
    }

    fn counts(&self) -> Vec<usize> {
        self.strategies.iter().map(|s| s.len()).collect()
    }

    fn index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(self.counts()).fold(0, |acc, (&s, n)| acc * n + s)
    }

    /// Opponent profiles of player i, each as a full profile with i's slot left at 0.
    fn opponents(&self, i: usize) -> Vec<Vec<usize>> {
        let mut counts = self.counts();
        counts[i] = 1;
        product(&counts)
    }

    pub fn plan(&self, player: usize, s: usize) -> Plan {
        self.own[player]
            .iter()
            .zip(&self.strategies[player][s])
            .map(|(&h, &a)| (self.sets[h].nodes.clone(), self.sets[h].actions[a].clone()))
            .collect()
    }

    fn matrix(&self, i: usize, rows: &[usize], cols: &[Vec<usize>]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|&s| {
                cols.iter()
                    .map(|o| {
                        let mut prof = o.clone();
                        prof[i] = s;
                        self.payoffs[self.index(&prof)][i].clone()
                    })
                    .collect()
            })
            .collect()
    }

    fn survives(y: &[Vec<bool>], i: usize, o: &[usize]) -> bool {
        o.iter().enumerate().all(|(j, &s)| j == i || y[j][s])
    }

    fn step(&self, y: &[Vec<bool>], strict: bool) -> Vec<Vec<bool>> {
        let mut next = y.to_vec();
        for i in 0..y.len() {
            let opponents = self.opponents(i);
            let mut conditions: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
            if strict {
                for &h in &self.own[i] {
                    let reach = |s: usize, o: &Vec<usize>| {
                        let mut prof = o.clone();
                        prof[i] = s;
                        self.reaches[h][self.index(&prof)]
                    };
                    let rows: Vec<usize> = (0..y[i].len()).filter(|&s| y[i][s] && opponents.iter().any(|o| reach(s, o))).collect();
                    let cols: Vec<Vec<usize>> = opponents
                        .iter()
                        .filter(|o| Self::survives(y, i, o) && (0..y[i].len()).any(|s| reach(s, o)))
                        .cloned()
                        .collect();
                    conditions.push((rows, cols));
                }
            } else {
                let rows: Vec<usize> = (0..y[i].len()).filter(|&s| y[i][s]).collect();
                let cols: Vec<Vec<usize>> = opponents.iter().filter(|o| Self::survives(y, i, o)).cloned().collect();
                conditions.push((rows, cols));
            }
            for (rows, cols) in conditions {
                if rows.len() < 2 || cols.is_empty() {
                    continue;
                }
                let p = self.matrix(i, &rows, &cols);
                for (r, &s) in rows.iter().enumerate() {
                    let gone = if strict { simplex::strictly_dominated(&p, r) } else { !simplex::admissible(&p, r) };
                    if gone {
                        next[i][s] = false;
                    }
                }
            }
        }
        next
    }

    /// Level sets up to and including the fixed point.
    pub fn iterate(&self, strict: bool) -> Vec<Vec<Vec<bool>>> {
        let mut levels = vec![self.counts().into_iter().map(|n| vec![true; n]).collect::<Vec<_>>()];
        loop {
            let next = self.step(levels.last().unwrap(), strict);
            if next == *levels.last().unwrap() {
                return levels;
            }
            levels.push(next);
        }
    }

    pub fn plans(&self, level: &[Vec<bool>]) -> Vec<BTreeSet<Plan>> {
        level
            .iter()
            .enumerate()
            .map(|(i, set)| (0..set.len()).filter(|&s| set[s]).map(|s| self.plan(i, s)).collect())
            .collect()
    }
}

/// The library's base-tree sets in the same notation.
pub fn library_plans(nf: &NormalForm, sets: &[Vec<bool>]) -> Vec<BTreeSet<Plan>> {
    let game = nf.game();
    game.player_ids()
        .map(|p| {
            let scope = nf.universe.scope(p, game.base);
            (0..sets[p.0].len())
                .filter(|&s| sets[p.0][s])
                .map(|s| {
                    scope
                        .infosets
                        .iter()
                        .zip(scope.digits(s))
                        .map(|(&h, a)| {
                            let set = game.infoset(h);
                            let mut nodes: Vec<String> = set.nodes.iter().map(|&n| game.node(n).name.clone()).collect();
                            nodes.sort();
                            (nodes, set.actions[a].clone())
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}
