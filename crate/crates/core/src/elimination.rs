//! Iterated conditional strict dominance, conditional weak dominance and
//! iterated admissibility over extended restrictions.

use rayon::prelude::*;
use serde::Serialize;

use crate::dominance::{dominated_in, DominanceWitness, Mode};
use crate::game::{InfoSetId, PlayerId, TreeId};
use crate::normal_form::{ExtendedRestriction, NormalForm, Restriction};
use crate::strategy::PartialStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Concept {
    Icsd,
    Icwd,
    Ia,
}

impl Concept {
    pub fn name(self) -> &'static str {
        match self {
            Concept::Icsd => "icsd",
            Concept::Icwd => "icwd",
            Concept::Ia => "ia",
        }
    }

    fn mode(self) -> Mode {
        match self {
            Concept::Icsd => Mode::Strict,
            Concept::Icwd | Concept::Ia => Mode::Weak,
        }
    }
}

/// Switches for deliberately weakened engines. The default is the correct engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Remove every member of [s̃_i] when s̃_i is dominated in a coarser tree.
    pub propagate: bool,
    /// Include T' = T in the tree quantifier.
    pub reflexive: bool,
    /// For IA, condition only on normal forms of trees holding an information set of the player.
    pub restrict_normal_forms: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { propagate: true, reflexive: true, restrict_normal_forms: true }
    }
}

/// What the dominated strategy was conditioned on.
#[derive(Debug, Clone, PartialEq)]
pub enum Conditioning {
    /// A normal-form information set, by the information sets producing it.
    InfoSet(Vec<InfoSetId>),
    NormalForm(TreeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub strategy: PartialStrategy,
    /// s̃_i = the strategy induced on T'; its tree is T'.
    pub induced: PartialStrategy,
    pub conditioning: Conditioning,
    pub witness: DominanceWitness,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub concept: Concept,
    /// 𝐘^0 = 𝐒, 𝐘^1, … up to and including the fixed point.
    pub levels: Vec<ExtendedRestriction>,
    /// removals[k] turns levels[k] into levels[k + 1].
    pub removals: Vec<Vec<Removal>>,
}

impl Trace {
    pub fn fixed_point(&self) -> &ExtendedRestriction {
        self.levels.last().expect("trace has level 0")
    }

    /// Level k, repeating the fixed point for k past the end.
    pub fn level(&self, k: usize) -> &ExtendedRestriction {
        &self.levels[k.min(self.levels.len() - 1)]
    }
}

/// Dominated T'-partial strategies of one player with their first reason.
type Dominated = Vec<Option<(Conditioning, DominanceWitness)>>;

fn dominated_in_tree(nf: &NormalForm, y: &ExtendedRestriction, concept: Concept, opts: Options, player: PlayerId, tree: TreeId) -> Dominated {
    let table = nf.table(tree);
    let mut out: Dominated = vec![None; table.counts[player.0]];
    let conditions: Vec<(Conditioning, Restriction)> = match concept {
        Concept::Icsd | Concept::Icwd => nf.nf_infosets[player.0]
            .iter()
            .filter(|x| x.tree == tree)
            .map(|x| (Conditioning::InfoSet(x.sources.clone()), Restriction::intersect(table, player, &x.own, &x.opponents, y)))
            .collect(),
        Concept::Ia => {
            if opts.restrict_normal_forms && !nf.normal_forms_of(player).contains(&tree) {
                Vec::new()
            } else {
                vec![(Conditioning::NormalForm(tree), Restriction::whole(table, player, y))]
            }
        }
    };
    for (cond, r) in conditions {
        for (s, w) in dominated_in(nf, &r, concept.mode()) {
            if out[s].is_none() {
                out[s] = Some((cond.clone(), w));
            }
        }
    }
    out
}

/// One application of U, W or W̃, kept inside the incoming restriction.
pub fn step(nf: &NormalForm, y: &ExtendedRestriction, concept: Concept, opts: Options) -> (ExtendedRestriction, Vec<Removal>) {
    let game = nf.game();
    let pairs: Vec<(PlayerId, TreeId)> = game.player_ids().flat_map(|p| game.tree_ids().map(move |t| (p, t))).collect();
    let dominated: Vec<Dominated> = pairs
        .par_iter()
        .map(|&(p, t)| dominated_in_tree(nf, y, concept, opts, p, t))
        .collect();
    let lookup = |p: PlayerId, t: TreeId| &dominated[p.0 * game.trees.len() + t.0];

    let mut next = y.clone();
    let mut removals = Vec::new();
    for p in game.player_ids() {
        for t in game.tree_ids() {
            let mut targets: Vec<TreeId> = Vec::new();
            if opts.reflexive {
                targets.push(t);
            }
            if opts.propagate {
                targets.extend(game.tree_ids().filter(|&t2| game.reaches(t, t2)));
            }
            for s in y.survivors(p, t) {
                for &t2 in &targets {
                    let idx = nf.universe.induce_index(p, t, t2, s.index);
                    if let Some((cond, w)) = &lookup(p, t2)[idx] {
                        next.remove(s);
                        removals.push(Removal {
                            strategy: s,
                            induced: nf.universe.strategy(p, t2, idx),
                            conditioning: cond.clone(),
                            witness: w.clone(),
                        });
                        break;
                    }
                }
            }
        }
    }
    (next, removals)
}

pub fn iterate(nf: &NormalForm, concept: Concept) -> Trace {
    iterate_with(nf, concept, Options::default())
}

pub fn iterate_with(nf: &NormalForm, concept: Concept, opts: Options) -> Trace {
    let mut levels = vec![ExtendedRestriction::full(&nf.universe)];
    let mut removals = Vec::new();
    loop {
        let (next, removed) = step(nf, levels.last().unwrap(), concept, opts);
        if removed.is_empty() {
            break;
        }
        levels.push(next);
        removals.push(removed);
    }
    Trace { concept, levels, removals }
}
