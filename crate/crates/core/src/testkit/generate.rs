use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::{Game, GameDocument, InfoSetDoc, NodeDoc, Property, TreeDoc};
use crate::strategy::Universe;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub players: usize,
    pub trees: usize,
    pub max_depth: usize,
    pub max_actions: usize,
    pub payoff_min: i64,
    pub payoff_max: i64,
    /// Probability that an information set is proposed for retargeting into a coarser tree.
    pub unawareness_density: f64,
    /// Probability that two compatible information sets of a player are proposed for merging.
    pub merge_density: f64,
    /// Upper bound on the number of strategy profiles of the base tree.
    pub max_profiles: usize,
    /// Whole-game attempts before giving up.
    pub attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            players: 2,
            trees: 2,
            max_depth: 3,
            max_actions: 3,
            payoff_min: -9,
            payoff_max: 9,
            unawareness_density: 0.5,
            merge_density: 0.3,
            max_profiles: 1500,
            attempts: 200,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GenerationError {
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("no valid game found within {attempts} attempts (seed {seed})")]
    Budget { seed: u64, attempts: usize },
}

impl GeneratorConfig {
    pub fn check(&self) -> Result<(), GenerationError> {
        let bad = |m: &str| Err(GenerationError::Config(m.to_string()));
        if !(2..=3).contains(&self.players) {
            return bad("players must be 2 or 3");
        }
        if !(1..=3).contains(&self.trees) {
            return bad("trees must be between 1 and 3");
        }
        if !(1..=3).contains(&self.max_depth) {
            return bad("max_depth must be between 1 and 3");
        }
        if !(2..=3).contains(&self.max_actions) {
            return bad("max_actions must be 2 or 3");
        }
        if self.payoff_min > self.payoff_max {
            return bad("payoff_min exceeds payoff_max");
        }
        if !(0.0..=1.0).contains(&self.unawareness_density) || !(0.0..=1.0).contains(&self.merge_density) {
            return bad("densities must lie in [0, 1]");
        }
        if self.attempts == 0 {
            return bad("attempts must be positive");
        }
        Ok(())
    }
}

struct BaseNode {
    parent: Option<usize>,
    /// (set, action) of each mover at the parent.
    incoming: Vec<(usize, usize)>,
    /// (player, base set) per active player.
    movers: Vec<(usize, usize)>,
    children: Vec<usize>,
    payoffs: Vec<i64>,
}

struct BaseSet {
    player: usize,
    arity: usize,
}

struct Model {
    players: usize,
    nodes: Vec<BaseNode>,
    sets: Vec<BaseSet>,
    /// Per tree: root base node and kept action indices per base set.
    trees: Vec<(usize, Vec<Vec<usize>>)>,
    /// target[tree][set] = tree holding the information set used by the tree's copies of `set`.
    target: Vec<Vec<usize>>,
}

impl Model {
    fn base(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Model {
        let mut m = Model { players: cfg.players, nodes: Vec::new(), sets: Vec::new(), trees: Vec::new(), target: Vec::new() };
        m.grow(rng, cfg, None, Vec::new(), 0);
        let all = m.sets.iter().map(|s| (0..s.arity).collect()).collect();
        m.trees.push((0, all));
        m
    }

    fn grow(&mut self, rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, parent: Option<usize>, incoming: Vec<(usize, usize)>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(BaseNode { parent, incoming, movers: Vec::new(), children: Vec::new(), payoffs: Vec::new() });
        let decide = depth == 0 || (depth < cfg.max_depth && rng.gen_bool(0.55));
        if !decide {
            self.nodes[id].payoffs = (0..self.players).map(|_| rng.gen_range(cfg.payoff_min..=cfg.payoff_max)).collect();
            return id;
        }
        let mut who: Vec<usize> = vec![rng.gen_range(0..self.players)];
        if rng.gen_bool(0.25) {
            let other = rng.gen_range(0..self.players);
            if !who.contains(&other) {
                who.push(other);
                who.sort();
            }
        }
        let movers: Vec<(usize, usize)> = who
            .iter()
            .map(|&p| {
                self.sets.push(BaseSet { player: p, arity: rng.gen_range(2..=cfg.max_actions) });
                (p, self.sets.len() - 1)
            })
            .collect();
        self.nodes[id].movers = movers.clone();
        let arities: Vec<usize> = movers.iter().map(|&(_, g)| self.sets[g].arity).collect();
        let total: usize = arities.iter().product();
        for mut code in 0..total {
            let mut local = vec![0; arities.len()];
            for k in (0..arities.len()).rev() {
                local[k] = code % arities[k];
                code /= arities[k];
            }
            let inc = movers.iter().zip(&local).map(|(&(_, g), &a)| (g, a)).collect();
            let child = self.grow(rng, cfg, Some(id), inc, depth + 1);
            self.nodes[id].children.push(child);
        }
        id
    }

    fn is_desc_or_self(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.nodes[b].parent {
                Some(p) => b = p,
                None => return false,
            }
        }
    }

    /// Base nodes present in tree `t`, in base order.
    fn members(&self, t: usize) -> Vec<usize> {
        let (root, kept) = &self.trees[t];
        (0..self.nodes.len())
            .filter(|&n| {
                if !self.is_desc_or_self(*root, n) {
                    return false;
                }
                let mut x = n;
                while x != *root {
                    if !self.nodes[x].incoming.iter().all(|&(g, a)| kept[g].contains(&a)) {
                        return false;
                    }
                    x = self.nodes[x].parent.unwrap();
                }
                true
            })
            .collect()
    }

    fn set_nodes(&self, g: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].movers.iter().any(|&(_, s)| s == g)).collect()
    }

    fn add_pruned_tree(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let parent = self.trees.len() - 1;
        let members = self.members(parent);
        let decisions: Vec<usize> = members.iter().copied().filter(|&n| !self.nodes[n].movers.is_empty()).collect();
        let prev_root = self.trees[parent].0;
        let root = if rng.gen_bool(0.5) { prev_root } else { *decisions.choose(rng).unwrap() };
        let mut kept = self.trees[parent].1.clone();
        let mut pruned = false;
        for g in 0..self.sets.len() {
            if kept[g].len() > 1 && rng.gen_bool(0.4) {
                let drop = rng.gen_range(1..kept[g].len());
                let keep = kept[g].len() - drop;
                kept[g].shuffle(rng);
                kept[g].truncate(keep);
                kept[g].sort();
                pruned = true;
            }
        }
        if !pruned && root == prev_root {
            return false;
        }
        self.trees.push((root, kept));
        true
    }

    fn labels(&self, g: usize) -> Vec<String> {
        (0..self.sets[g].arity).map(|a| format!("{}@{}", (b'a' + a as u8) as char, g)).collect()
    }

    fn document(&self) -> GameDocument {
        let pname = |p: usize| format!("P{}", p + 1);
        let nname = |n: usize| format!("n{n}");
        let tname = |t: usize| format!("T{t}");
        let mut trees = Vec::new();
        let mut infosets = Vec::new();
        for t in 0..self.trees.len() {
            let (root, kept) = &self.trees[t];
            let members = self.members(t);
            let mut nodes = Vec::new();
            for &n in &members {
                let node = &self.nodes[n];
                let mut doc = NodeDoc { id: nname(n), ..Default::default() };
                if n != *root {
                    doc.parent = Some(nname(node.parent.unwrap()));
                    for &(g, a) in &node.incoming {
                        doc.action_profile.insert(pname(self.sets[g].player), self.labels(g)[a].clone());
                    }
                }
                if node.movers.is_empty() {
                    if t == 0 {
                        doc.payoffs = Some(
                            node.payoffs.iter().enumerate().map(|(p, v)| (pname(p), v.to_string())).collect::<BTreeMap<_, _>>(),
                        );
                    }
                } else {
                    for &(p, g) in &node.movers {
                        let labels = self.labels(g);
                        doc.actions.insert(pname(p), kept[g].iter().map(|&a| labels[a].clone()).collect());
                        let to = self.target[t][g];
                        let to_members = self.members(to);
                        infosets.push(InfoSetDoc {
                            tree: tname(t),
                            node: nname(n),
                            player: pname(p),
                            target_tree: tname(to),
                            target_nodes: self.set_nodes(g).into_iter().filter(|x| to_members.contains(x)).map(nname).collect(),
                        });
                    }
                }
                nodes.push(doc);
            }
            trees.push(TreeDoc { id: tname(t), nodes });
        }
        GameDocument { players: (0..self.players).map(pname).collect(), base_tree: tname(0), trees, infosets }
    }

    fn try_build(&self) -> Option<Game> {
        let game = Game::from_document(&self.document()).ok()?;
        game.validate().is_valid().then_some(game)
    }

    /// Merges base sets g into h (same player and arity); relabels g's nodes.
    fn merged(&self, g: usize, h: usize) -> Model {
        let mut m = self.clone_model();
        for node in &mut m.nodes {
            for mv in &mut node.movers {
                if mv.1 == g {
                    mv.1 = h;
                }
            }
            for inc in &mut node.incoming {
                if inc.0 == g {
                    inc.0 = h;
                }
            }
        }
        m
    }

    fn clone_model(&self) -> Model {
        Model {
            players: self.players,
            nodes: self
                .nodes
                .iter()
                .map(|n| BaseNode {
                    parent: n.parent,
                    incoming: n.incoming.clone(),
                    movers: n.movers.clone(),
                    children: n.children.clone(),
                    payoffs: n.payoffs.clone(),
                })
                .collect(),
            sets: self.sets.iter().map(|s| BaseSet { player: s.player, arity: s.arity }).collect(),
            trees: self.trees.clone(),
            target: self.target.clone(),
        }
    }

    /// Strategy profiles of the base tree, saturating.
    fn profiles(&self) -> usize {
        self.used_sets().iter().fold(1usize, |acc, &g| acc.saturating_mul(self.sets[g].arity))
    }

    fn used_sets(&self) -> Vec<usize> {
        let mut gs: Vec<usize> = self.nodes.iter().flat_map(|n| n.movers.iter().map(|&(_, g)| g)).collect();
        gs.sort();
        gs.dedup();
        gs
    }
}

/// A random valid forest, deterministic in `cfg.seed`.
pub fn generate(cfg: &GeneratorConfig) -> Result<Game, GenerationError> {
    generate_document(cfg).map(|(_, g)| g)
}

pub fn generate_document(cfg: &GeneratorConfig) -> Result<(GameDocument, Game), GenerationError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.attempts {
        if let Some(found) = attempt(&mut rng, cfg) {
            return Ok(found);
        }
    }
    Err(GenerationError::Budget { seed: cfg.seed, attempts: cfg.attempts })
}

fn attempt(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Option<(GameDocument, Game)> {
    let mut m = Model::base(rng, cfg);
    m.target = vec![vec![0; m.sets.len()]];
    if m.profiles() > cfg.max_profiles.saturating_mul(16) {
        return None;
    }

    // imperfect information inside the base tree
    let sets = m.used_sets();
    for (i, &g) in sets.iter().enumerate() {
        for &h in &sets[..i] {
            if m.sets[g].player == m.sets[h].player && m.sets[g].arity == m.sets[h].arity && rng.gen_bool(cfg.merge_density) {
                let cand = m.merged(g, h);
                if cand.try_build().is_some() {
                    m = cand;
                    break;
                }
            }
        }
    }
    if m.profiles() > cfg.max_profiles {
        return None;
    }
    m.try_build()?;

    while m.trees.len() < cfg.trees {
        if !m.add_pruned_tree(rng) {
            return None;
        }
        let t = m.trees.len() - 1;
        m.target.push(vec![t; m.sets.len()]);
    }
    let sets = m.used_sets();

    // retarget information sets into coarser trees, one validated proposal at a time
    let mut proposals: Vec<(usize, usize, usize)> = Vec::new();
    for t in 0..m.trees.len() {
        for to in t + 1..m.trees.len() {
            for &g in &sets {
                proposals.push((t, g, to));
            }
        }
    }
    proposals.shuffle(rng);
    let reached = |m: &Model, to: usize| (0..to).any(|t| m.target[t].iter().enumerate().any(|(g, &x)| x == to && sets.contains(&g)));
    for &(t, g, to) in &proposals {
        if !rng.gen_bool(cfg.unawareness_density) {
            continue;
        }
        propose(&mut m, t, g, to);
    }
    // every tree must be reachable from the base
    for to in 1..m.trees.len() {
        if reached(&m, to) {
            continue;
        }
        for &(t, g, x) in &proposals {
            if x == to && propose(&mut m, t, g, to) {
                break;
            }
        }
    }
    let doc = m.document();
    let game = Game::from_document(&doc).ok()?;
    let report = game.validate();
    if !report.is_valid() {
        debug_assert!(report.has(Property::Structure));
        return None;
    }
    let universe = Universe::new(&game);
    if universe.profile_count(game.base) > cfg.max_profiles {
        return None;
    }
    Some((doc, game))
}

/// Points tree `t`'s copies of base set `g` at tree `to`; kept only if the forest stays valid
/// apart from reachability, which later proposals may still fix.
fn propose(m: &mut Model, t: usize, g: usize, to: usize) -> bool {
    let present = |m: &Model, tree: usize| m.set_nodes(g).iter().any(|n| m.members(tree).contains(n));
    if m.target[t][g] != t || m.target[to][g] != to || !present(m, t) || !present(m, to) {
        return false;
    }
    m.target[t][g] = to;
    let ok = Game::from_document(&m.document())
        .map(|game| game.validate().violations.iter().all(|v| v.property == Property::Structure))
        .unwrap_or(false);
    if !ok {
        m.target[t][g] = t;
    }
    ok
}
