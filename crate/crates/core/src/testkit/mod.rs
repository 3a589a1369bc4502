//! Random game generation and the cross-check harness.

mod generate;

pub use generate::{generate, generate_document, GenerationError, GeneratorConfig};

use rayon::prelude::*;
use serde::Serialize;

use crate::elimination::{iterate_with, Concept, Options, Trace};
use crate::game::Game;
use crate::normal_form::{ExtendedRestriction, NormalForm};
use crate::rationalizability::{levels_with, BeliefConcept, LevelOptions, Levels};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub level: usize,
    pub player: String,
    pub tree: String,
    pub strategy: String,
    /// Membership on the left-hand and right-hand side of the identity.
    pub left: bool,
    pub right: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub divergence: Option<Divergence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    /// Reproducer, when the game came from the generator.
    pub config: Option<GeneratorConfig>,
    pub checks: Vec<CheckOutcome>,
    /// Identities reported but not asserted.
    pub informational: Vec<CheckOutcome>,
    /// Some player's awareness grows along a path; see [`Game::awareness_rises`].
    pub awareness_rises: bool,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().chain(&self.informational).find(|c| c.name == name)
    }
}

pub const THEOREM_1: &str = "theorem-1 icsd=efr";
pub const THEOREM_2: &str = "theorem-2 icwd=pr";
pub const PROPOSITION_1: &str = "proposition-1 ia=prr";
pub const PROPOSITION_2: &str = "proposition-2 pr=prr";
pub const THEOREM_3: &str = "theorem-3 ia=pr";
pub const COROLLARY_1: &str = "corollary-1 ia=icwd";
pub const THEOREM_3_UNINTERSECTED: &str = "theorem-3 unintersected";

/// The six engines run on one game.
pub struct Runs {
    pub icsd: Trace,
    pub icwd: Trace,
    pub ia: Trace,
    pub efr: Levels,
    pub pr: Levels,
    pub prr: Levels,
}

impl Runs {
    pub fn new(nf: &NormalForm, elim: Options, level: LevelOptions) -> Runs {
        Runs {
            icsd: iterate_with(nf, Concept::Icsd, elim),
            icwd: iterate_with(nf, Concept::Icwd, elim),
            ia: iterate_with(nf, Concept::Ia, elim),
            efr: levels_with(nf, BeliefConcept::Efr, level),
            pr: levels_with(nf, BeliefConcept::Pr, level),
            prr: levels_with(nf, BeliefConcept::Prr, level),
        }
    }
}

pub fn cross_check(game: &Game) -> CrossCheckReport {
    cross_check_with(game, Options::default(), LevelOptions::default())
}

pub fn cross_check_with(game: &Game, elim: Options, level: LevelOptions) -> CrossCheckReport {
    let nf = NormalForm::build(game);
    let runs = Runs::new(&nf, elim, level);
    compare(&nf, &runs)
}

/// Generates and cross-checks one game per configuration, in input order.
pub fn fuzz(configs: &[GeneratorConfig]) -> Vec<Result<CrossCheckReport, GenerationError>> {
    configs
        .par_iter()
        .map(|cfg| {
            let game = generate(cfg)?;
            Ok(CrossCheckReport { config: Some(cfg.clone()), ..cross_check(&game) })
        })
        .collect()
}

pub fn compare(nf: &NormalForm, runs: &Runs) -> CrossCheckReport {
    let full = |t: &Trace, k: usize| full_sets(nf, t.level(k));
    let lv = |l: &Levels, k: usize| l.level(k).clone();
    let depth = [
        runs.icsd.levels.len(),
        runs.icwd.levels.len(),
        runs.ia.levels.len(),
        runs.efr.sets.len(),
        runs.pr.sets.len(),
        runs.prr.sets.len(),
    ]
    .into_iter()
    .max()
    .unwrap();

    let full_check = |name: &'static str, a: &dyn Fn(usize) -> Vec<Vec<bool>>, b: &dyn Fn(usize) -> Vec<Vec<bool>>| {
        for k in 0..depth {
            if let Some(d) = first_difference(nf, k, &a(k), &b(k)) {
                return CheckOutcome { name, passed: false, divergence: Some(d) };
            }
        }
        CheckOutcome { name, passed: true, divergence: None }
    };
    let tree_check = |name: &'static str, a: &dyn Fn(usize) -> ExtendedRestriction, b: &dyn Fn(usize) -> ExtendedRestriction| {
        for k in 0..depth {
            if let Some(d) = first_tree_difference(nf, k, &a(k), &b(k)) {
                return CheckOutcome { name, passed: false, divergence: Some(d) };
            }
        }
        CheckOutcome { name, passed: true, divergence: None }
    };

    let checks = vec![
        full_check(THEOREM_1, &|k| full(&runs.icsd, k), &|k| lv(&runs.efr, k)),
        full_check(THEOREM_2, &|k| full(&runs.icwd, k), &|k| lv(&runs.pr, k)),
        full_check(PROPOSITION_1, &|k| full(&runs.ia, k), &|k| lv(&runs.prr, k)),
        full_check(PROPOSITION_2, &|k| lv(&runs.pr, k), &|k| lv(&runs.prr, k)),
        full_check(THEOREM_3, &|k| full(&runs.ia, k), &|k| lv(&runs.pr, k)),
        tree_check(COROLLARY_1, &|k| runs.ia.level(k).clone(), &|k| runs.icwd.level(k).clone()),
    ];
    let informational = vec![tree_check(THEOREM_3_UNINTERSECTED, &|k| runs.ia.level(k).clone(), &|k| runs.pr.induced(nf, k))];
    CrossCheckReport { config: None, checks, informational, awareness_rises: nf.game().awareness_rises() }
}

/// Base-tree part of an extended restriction, per player.
pub fn full_sets(nf: &NormalForm, y: &ExtendedRestriction) -> Vec<Vec<bool>> {
    y.sets[nf.game().base.0].clone()
}

fn first_difference(nf: &NormalForm, k: usize, a: &[Vec<bool>], b: &[Vec<bool>]) -> Option<Divergence> {
    let game = nf.game();
    for p in game.player_ids() {
        for idx in 0..a[p.0].len() {
            if a[p.0][idx] != b[p.0][idx] {
                return Some(Divergence {
                    level: k,
                    player: game.players[p.0].clone(),
                    tree: game.tree(game.base).name.clone(),
                    strategy: nf.universe.render(nf.universe.strategy(p, game.base, idx)),
                    left: a[p.0][idx],
                    right: b[p.0][idx],
                });
            }
        }
    }
    None
}

fn first_tree_difference(nf: &NormalForm, k: usize, a: &ExtendedRestriction, b: &ExtendedRestriction) -> Option<Divergence> {
    let game = nf.game();
    for t in game.tree_ids() {
        for p in game.player_ids() {
            let (x, y) = (&a.sets[t.0][p.0], &b.sets[t.0][p.0]);
            if let Some(idx) = (0..x.len()).find(|&i| x[i] != y[i]) {
                return Some(Divergence {
                    level: k,
                    player: game.players[p.0].clone(),
                    tree: game.tree(t).name.clone(),
                    strategy: nf.universe.render(nf.universe.strategy(p, t, idx)),
                    left: x[idx],
                    right: y[idx],
                });
            }
        }
    }
    None
}
