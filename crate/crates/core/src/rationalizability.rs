//! Belief-based level procedures: extensive-form rationalizability, prudent
//! rationalizability and prudent relaxed rationalizability, plus the
//! constructions that relate their belief systems.
//!
//! Levels are computed on full strategies (base-tree scope). Opponents' beliefs
//! at an information set h live on the T_h-partial profiles induced by the
//! previous level.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dominance::{fullsupport_justifying_belief, is_best_response, justifying_belief, BeliefWitness};
use crate::game::{InfoSetId, PlayerId, TreeId};
use crate::normal_form::{ExtendedRestriction, NormalForm};
use crate::strategy::{PartialStrategy, StrategyError};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BeliefConcept {
    Efr,
    Pr,
    Prr,
}

impl BeliefConcept {
    pub fn name(self) -> &'static str {
        match self {
            BeliefConcept::Efr => "efr",
            BeliefConcept::Pr => "pr",
            BeliefConcept::Prr => "prr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Standard,
    Generalized,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefSystem {
    pub player: PlayerId,
    pub kind: SystemKind,
    /// One belief per information set of the player, canonical order.
    pub beliefs: Vec<(InfoSetId, BeliefWitness)>,
}

impl BeliefSystem {
    pub fn at(&self, h: InfoSetId) -> Option<&BeliefWitness> {
        self.beliefs.iter().find(|(g, _)| *g == h).map(|(_, b)| b)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RationalizabilityError {
    #[error("belief puts positive probability on a profile that excludes the information set")]
    NotAllowing,
    #[error("player has no information set located in the tree")]
    NoInfoSets,
    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonOutOfRange,
    #[error("one belief per rank-partition element is required")]
    BeliefCount,
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Level sets S_i^k (or S̄, S̈) of full strategies.
#[derive(Debug, Clone)]
pub struct Levels {
    pub concept: BeliefConcept,
    /// sets[k][player][full strategy index], up to and including the fixed point.
    pub sets: Vec<Vec<Vec<bool>>>,
    /// Justifying beliefs of the fixed point, keyed by (player, h, induced T_h index)
    /// for EFR/PR and (player, tree, induced index) for PRR.
    witnesses: HashMap<(usize, usize, usize), Option<BeliefWitness>>,
}

impl Levels {
    pub fn level(&self, k: usize) -> &Vec<Vec<bool>> {
        &self.sets[k.min(self.sets.len() - 1)]
    }

    pub fn fixed_point(&self) -> &Vec<Vec<bool>> {
        self.sets.last().expect("level 0 exists")
    }

    pub fn survivors(&self, nf: &NormalForm, k: usize, player: PlayerId) -> Vec<PartialStrategy> {
        let base = nf.game().base;
        self.level(k)[player.0]
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(i, _)| nf.universe.strategy(player, base, i))
            .collect()
    }

    /// Inductions of level k into every tree, as an extended restriction.
    pub fn induced(&self, nf: &NormalForm, k: usize) -> ExtendedRestriction {
        induce_all(nf, self.level(k))
    }

    /// Beliefs that justify a fixed-point strategy at each information set it allows
    /// (every information set for PRR).
    pub fn witnesses_for(&self, nf: &NormalForm, s: PartialStrategy) -> Vec<(InfoSetId, BeliefWitness)> {
        let game = nf.game();
        let mut out = Vec::new();
        for h in game.infosets_of(s.player) {
            let t = game.infoset(h).tree;
            let idx = nf.universe.induce_index(s.player, s.tree, t, s.index);
            let key = match self.concept {
                BeliefConcept::Prr => (s.player.0, t.0, idx),
                _ => (s.player.0, h.0, idx),
            };
            if let Some(Some(b)) = self.witnesses.get(&key) {
                let mut b = b.clone();
                b.infoset = Some(h);
                out.push((h, b));
            }
        }
        out
    }
}

fn induce_all(nf: &NormalForm, sets: &[Vec<bool>]) -> ExtendedRestriction {
    let game = nf.game();
    let base = game.base;
    let mut y = ExtendedRestriction {
        sets: game.tree_ids().map(|t| game.player_ids().map(|p| vec![false; nf.universe.count(p, t)]).collect()).collect(),
    };
    for p in game.player_ids() {
        for (idx, _) in sets[p.0].iter().enumerate().filter(|&(_, &b)| b) {
            for t in game.tree_ids() {
                let j = nf.universe.induce_index(p, base, t, idx);
                y.sets[t.0][p.0][j] = true;
            }
        }
    }
    y
}

/// Payoff of `cand` (T_h-partial) against opponents' index `o` when play is conditioned on h.
fn conditional_payoff(nf: &NormalForm, h: InfoSetId, player: PlayerId, cand: usize, o: usize) -> Result<Rational, StrategyError> {
    let t = nf.game().infoset(h).tree;
    let table = nf.table(t);
    let idx = table.join(player, cand, o);
    if nf.allows(h, idx) {
        return Ok(nf.payoff(t, player, idx).clone());
    }
    let profile = table.profile(idx);
    let z = nf.universe.conditional_play(h, nf.universe.strategy(player, t, cand), &profile)?;
    Ok(nf.game().node(z).payoffs.as_ref().expect("terminal")[player.0].clone())
}

fn conditional_matrix(nf: &NormalForm, h: InfoSetId, player: PlayerId, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|&r| {
            cols.iter()
                .map(|&o| conditional_payoff(nf, h, player, r, o).expect("domain profiles allow h"))
                .collect()
        })
        .collect()
}

fn ex_ante_matrix(nf: &NormalForm, tree: TreeId, player: PlayerId, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|&r| cols.iter().map(|&o| nf.payoff_against(tree, player, r, o).clone()).collect())
        .collect()
}

fn witness_of(player: PlayerId, tree: TreeId, h: Option<InfoSetId>, cols: &[usize], belief: Vec<Rational>, full_support: bool) -> BeliefWitness {
    BeliefWitness {
        player,
        tree,
        infoset: h,
        belief: cols.iter().copied().zip(belief).filter(|(_, p)| full_support || p.is_positive()).collect(),
        full_support,
    }
}

/// Σ_o b(o) · u_i^{T_h}(conditional play at h of `s` against o).
pub fn expected_payoff_at(nf: &NormalForm, h: InfoSetId, s: PartialStrategy, belief: &BeliefWitness) -> Result<Rational, RationalizabilityError> {
    let t = nf.game().infoset(h).tree;
    let own = nf.universe.induce(s, t)?;
    let mut total = Rational::zero();
    for (o, p) in &belief.belief {
        if p.is_zero() {
            continue;
        }
        if !nf.opponents_allow(h, *o) {
            return Err(RationalizabilityError::NotAllowing);
        }
        total += p * conditional_payoff(nf, h, s.player, own.index, *o)?;
    }
    Ok(total)
}

/// Rationality of `s` at `h`: either `s` excludes h, or no h-replacement does strictly better.
pub fn rational_at(nf: &NormalForm, s: PartialStrategy, belief: &BeliefWitness, h: InfoSetId) -> Result<bool, RationalizabilityError> {
    if !nf.strategy_allows(s, h) {
        return Ok(true);
    }
    let t = nf.game().infoset(h).tree;
    let own = nf.universe.induce(s, t)?;
    let mine = expected_payoff_at(nf, h, own, belief)?;
    for r in nf.universe.replacements(own, h) {
        if expected_payoff_at(nf, h, r, belief)? > mine {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relaxed rationality: no alternative does strictly better ex ante under `belief`.
/// Alternatives are `candidates` (T_h-partial indices), or all of S_i^{T_h} when `None`.
pub fn relaxed_rational(
    nf: &NormalForm,
    s: PartialStrategy,
    belief: &BeliefWitness,
    h: InfoSetId,
    candidates: Option<&[usize]>,
) -> Result<bool, RationalizabilityError> {
    let t = nf.game().infoset(h).tree;
    let own = nf.universe.induce(s, t)?;
    let value = |r: usize| -> Rational {
        belief.belief.iter().map(|(o, p)| p * nf.payoff_against(t, s.player, r, *o)).sum()
    };
    let mine = value(own.index);
    let all: Vec<usize> = (0..nf.universe.count(s.player, t)).collect();
    Ok(candidates.unwrap_or(&all).iter().all(|&r| value(r) <= mine))
}

/// Context of one level: previous survivors induced into every tree.
struct Prev<'a> {
    nf: &'a NormalForm<'a>,
    induced: ExtendedRestriction,
    opts: LevelOptions,
}

impl Prev<'_> {
    fn opponents(&self, player: PlayerId, tree: TreeId) -> Vec<bool> {
        self.induced.opponents_mask(self.nf.table(tree), player)
    }

    /// Test at information set h for the T_h-partial strategy `own` (EFR/PR).
    fn conditional_test(&self, concept: BeliefConcept, h: InfoSetId, player: PlayerId, own: usize) -> Option<BeliefWitness> {
        let nf = self.nf;
        let set = nf.nf_infoset_of(h);
        let t = set.tree;
        let survivors = self.opponents(player, t);
        let mut domain: Vec<usize> = (0..set.opponents.len()).filter(|&o| set.opponents[o] && survivors[o]).collect();
        if domain.is_empty() {
            match concept {
                BeliefConcept::Efr => domain = (0..set.opponents.len()).filter(|&o| set.opponents[o]).collect(),
                // no constraint: any allowing point mass stands in as the witness
                _ => {
                    let o = (0..set.opponents.len()).find(|&o| set.opponents[o])?;
                    return Some(witness_of(player, t, Some(h), &[o], vec![Rational::one()], false));
                }
            }
        }
        let rows: Vec<usize> = nf.universe.replacements(nf.universe.strategy(player, t, own), h).iter().map(|r| r.index).collect();
        let target = rows.iter().position(|&r| r == own).expect("replacements include the strategy");
        let m = conditional_matrix(nf, h, player, &rows, &domain);
        match concept {
            BeliefConcept::Efr => justifying_belief(&m, target).map(|b| witness_of(player, t, Some(h), &domain, b, false)),
            _ => fullsupport_justifying_belief(&m, target, self.opts.positivity)
                .map(|b| witness_of(player, t, Some(h), &domain, b, true)),
        }
    }

    /// Ex-ante test on the whole normal form of `tree` (PRR).
    fn relaxed_test(&self, tree: TreeId, player: PlayerId, own: usize) -> Option<BeliefWitness> {
        let nf = self.nf;
        let survivors = self.opponents(player, tree);
        let domain: Vec<usize> = (0..survivors.len()).filter(|&o| survivors[o]).collect();
        if domain.is_empty() {
            return None;
        }
        let rows: Vec<usize> = if self.opts.all_relaxed_candidates {
            (0..nf.universe.count(player, tree)).collect()
        } else {
            self.induced.survivors(player, tree).iter().map(|s| s.index).collect()
        };
        let target = rows.iter().position(|&r| r == own)?;
        let m = ex_ante_matrix(nf, tree, player, &rows, &domain);
        fullsupport_justifying_belief(&m, target, self.opts.positivity).map(|b| witness_of(player, tree, None, &domain, b, true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelOptions {
    /// Require strictly positive minimum probability in full-support tests.
    pub positivity: bool,
    /// Compare relaxed rationality against all of S_i^{T_h} instead of the
    /// player's own previous-level survivors induced into T_h.
    pub all_relaxed_candidates: bool,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions { positivity: true, all_relaxed_candidates: false }
    }
}

pub fn levels(nf: &NormalForm, concept: BeliefConcept) -> Levels {
    levels_with(nf, concept, LevelOptions::default())
}

pub fn levels_with(nf: &NormalForm, concept: BeliefConcept, opts: LevelOptions) -> Levels {
    let game = nf.game();
    let base = game.base;
    let mut sets = vec![game.player_ids().map(|p| vec![true; nf.universe.count(p, base)]).collect::<Vec<_>>()];
    loop {
        let current = sets.last().unwrap().clone();
        let prev = Prev { nf, induced: induce_all(nf, &current), opts };

        // distinct tests needed at this level
        let mut keys: BTreeSet<(usize, usize, usize)> = BTreeSet::new(); // (player, h or tree, own)
        for p in game.player_ids() {
            for idx in (0..current[p.0].len()).filter(|&i| current[p.0][i]) {
                let s = nf.universe.strategy(p, base, idx);
                for h in game.infosets_of(p) {
                    let t = game.infoset(h).tree;
                    let own = nf.universe.induce_index(p, base, t, idx);
                    match concept {
                        BeliefConcept::Prr => {
                            keys.insert((p.0, t.0, own));
                        }
                        _ => {
                            if nf.strategy_allows(s, h) {
                                keys.insert((p.0, h.0, own));
                            }
                        }
                    }
                }
            }
        }
        let results: HashMap<(usize, usize, usize), Option<BeliefWitness>> = keys
            .into_par_iter()
            .map(|(p, x, own)| {
                let w = match concept {
                    BeliefConcept::Prr => prev.relaxed_test(TreeId(x), PlayerId(p), own),
                    _ => prev.conditional_test(concept, InfoSetId(x), PlayerId(p), own),
                };
                ((p, x, own), w)
            })
            .collect();

        let mut next = current.clone();
        for p in game.player_ids() {
            for idx in (0..current[p.0].len()).filter(|&i| current[p.0][i]) {
                let s = nf.universe.strategy(p, base, idx);
                let ok = game.infosets_of(p).into_iter().all(|h| {
                    let t = game.infoset(h).tree;
                    let own = nf.universe.induce_index(p, base, t, idx);
                    match concept {
                        BeliefConcept::Prr => results[&(p.0, t.0, own)].is_some(),
                        _ => !nf.strategy_allows(s, h) || results[&(p.0, h.0, own)].is_some(),
                    }
                });
                next[p.0][idx] = ok;
            }
        }
        if next == current {
            return Levels { concept, sets, witnesses: results };
        }
        sets.push(next);
    }
}

/// A generalized belief system justifying `s` at level `k` of the EFR procedure:
/// the level test's belief where `s` allows h, a point mass on an allowing profile elsewhere.
pub fn generalized_system(nf: &NormalForm, efr: &Levels, k: usize, s: PartialStrategy) -> Option<BeliefSystem> {
    let game = nf.game();
    let prev = Prev { nf, induced: efr.induced(nf, k.saturating_sub(1)), opts: LevelOptions::default() };
    let mut beliefs = Vec::new();
    for h in game.infosets_of(s.player) {
        let t = game.infoset(h).tree;
        let own = nf.universe.induce_index(s.player, s.tree, t, s.index);
        let b = if nf.strategy_allows(s, h) {
            prev.conditional_test(BeliefConcept::Efr, h, s.player, own)?
        } else {
            let set = nf.nf_infoset_of(h);
            let survivors = prev.opponents(s.player, t);
            let o = (0..set.opponents.len())
                .find(|&o| set.opponents[o] && survivors[o])
                .or_else(|| (0..set.opponents.len()).find(|&o| set.opponents[o]))?;
            witness_of(s.player, t, Some(h), &[o], vec![Rational::one()], false)
        };
        beliefs.push((h, b));
    }
    Some(BeliefSystem { player: s.player, kind: SystemKind::Generalized, beliefs })
}

/// The immediate ⇝-predecessor of `h` among the player's information sets.
fn immediate_predecessor(nf: &NormalForm, h: InfoSetId) -> Option<InfoSetId> {
    let game = nf.game();
    let p = game.infoset(h).player;
    let preds: Vec<InfoSetId> = game.infosets_of(p).into_iter().filter(|&g| game.precedes(g, h)).collect();
    preds.iter().copied().find(|&g| preds.iter().all(|&x| x == g || game.precedes(x, g)))
}

/// Turns a generalized belief system into a standard one: roots keep their
/// belief; each successor takes the Bayes update of its immediate
/// predecessor's belief when that gives it positive probability, and keeps
/// the generalized belief otherwise.
pub fn construct_conditioned_beliefs(nf: &NormalForm, system: &BeliefSystem) -> Result<BeliefSystem, RationalizabilityError> {
    let game = nf.game();
    for (h, b) in &system.beliefs {
        if b.belief.iter().any(|(o, p)| p.is_positive() && !nf.opponents_allow(*h, *o)) {
            return Err(RationalizabilityError::NotAllowing);
        }
    }
    // predecessors first
    let mut order: Vec<InfoSetId> = system.beliefs.iter().map(|(h, _)| *h).collect();
    order.sort_by_key(|&h| (game.infosets_of(system.player).iter().filter(|&&g| game.precedes(g, h)).count(), h));
    let mut done: Vec<(InfoSetId, BeliefWitness)> = Vec::new();
    for h in order {
        let own = system.at(h).expect("listed").clone();
        let b = match immediate_predecessor(nf, h).and_then(|g| done.iter().find(|(x, _)| *x == g)) {
            Some((_, pb)) => {
                let mass: Rational = pb.belief.iter().filter(|(o, _)| nf.opponents_allow(h, *o)).map(|(_, p)| p.clone()).sum();
                if mass.is_positive() {
                    BeliefWitness {
                        player: own.player,
                        tree: own.tree,
                        infoset: Some(h),
                        belief: pb
                            .belief
                            .iter()
                            .filter(|(o, p)| p.is_positive() && nf.opponents_allow(h, *o))
                            .map(|(o, p)| (*o, p / &mass))
                            .collect(),
                        full_support: false,
                    }
                } else {
                    own
                }
            }
            None => own,
        };
        done.push((h, b));
    }
    done.sort_by_key(|(h, _)| *h);
    Ok(BeliefSystem { player: system.player, kind: SystemKind::Standard, beliefs: done })
}

/// Whether `system` satisfies the standard-kind conditioning requirement.
pub fn is_conditioned(nf: &NormalForm, system: &BeliefSystem) -> bool {
    system.beliefs.iter().all(|(h, b)| {
        let Some(g) = immediate_predecessor(nf, *h) else { return true };
        let pb = system.at(g).expect("complete system");
        let mass: Rational = pb.belief.iter().filter(|(o, _)| nf.opponents_allow(*h, *o)).map(|(_, p)| p.clone()).sum();
        if !mass.is_positive() {
            return true;
        }
        let allowing: Vec<usize> = pb.belief.iter().filter(|(o, _)| nf.opponents_allow(*h, *o)).map(|(o, _)| *o).collect();
        allowing.iter().all(|&o| b.probability(o) == pb.probability(o) / &mass)
            && b.belief.iter().all(|(o, p)| p.is_zero() || allowing.contains(o))
    })
}

/// G_i^T: the player's information sets located in `tree` that no other such set precedes.
pub fn rank_partition(nf: &NormalForm, player: PlayerId, tree: TreeId) -> Result<Vec<InfoSetId>, RationalizabilityError> {
    let game = nf.game();
    let located = game.infosets_located_in(player, tree);
    if located.is_empty() {
        return Err(RationalizabilityError::NoInfoSets);
    }
    Ok(located.iter().copied().filter(|&h| !located.iter().any(|&g| game.precedes(g, h))).collect())
}

/// Opponents' profiles of `tree` in `survivors` that allow `h`.
pub fn allowing_survivors(nf: &NormalForm, h: InfoSetId, survivors: &[bool]) -> Vec<usize> {
    let set = nf.nf_infoset_of(h);
    (0..survivors.len()).filter(|&o| survivors[o] && set.opponents[o]).collect()
}

/// Whether the sets S̄_{-i}^{k,T}(g), g ∈ `g`, cover and partition S̄_{-i}^{k,T}(H_i^T).
pub fn partition_holds(nf: &NormalForm, player: PlayerId, tree: TreeId, g: &[InfoSetId], survivors: &[bool]) -> (bool, bool) {
    let located = nf.game().infosets_located_in(player, tree);
    let union: BTreeSet<usize> = located.iter().flat_map(|&h| allowing_survivors(nf, h, survivors)).collect();
    let mut seen = BTreeSet::new();
    let mut disjoint = true;
    for &h in g {
        for o in allowing_survivors(nf, h, survivors) {
            disjoint &= seen.insert(o);
        }
    }
    (seen == union, disjoint)
}

/// Mixes beliefs b̄(g), g ∈ G, with weight (1−ε)/|G| each and spreads ε evenly over
/// survivors that allow no information set of the player located in the tree. With
/// no such survivors the weights are 1/|G|.
pub fn epsilon_fullsupport_belief(
    nf: &NormalForm,
    player: PlayerId,
    tree: TreeId,
    survivors: &[bool],
    g: &[InfoSetId],
    beliefs: &[BeliefWitness],
    epsilon: &Rational,
) -> Result<BeliefWitness, RationalizabilityError> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(RationalizabilityError::EpsilonOutOfRange);
    }
    if g.is_empty() {
        return Err(RationalizabilityError::NoInfoSets);
    }
    if beliefs.len() != g.len() {
        return Err(RationalizabilityError::BeliefCount);
    }
    let located = nf.game().infosets_located_in(player, tree);
    let covered: BTreeSet<usize> = located.iter().flat_map(|&h| allowing_survivors(nf, h, survivors)).collect();
    let excluded: Vec<usize> = (0..survivors.len()).filter(|&o| survivors[o] && !covered.contains(&o)).collect();
    let n = Rational::from_integer((g.len() as i64).into());
    let weight = if excluded.is_empty() { Rational::one() / &n } else { (Rational::one() - epsilon) / &n };
    let mut mass: Vec<Rational> = vec![Rational::zero(); survivors.len()];
    for b in beliefs {
        for (o, p) in &b.belief {
            mass[*o] += &weight * p;
        }
    }
    if !excluded.is_empty() {
        let e = epsilon / Rational::from_integer((excluded.len() as i64).into());
        for &o in &excluded {
            mass[o] += &e;
        }
    }
    Ok(BeliefWitness {
        player,
        tree,
        infoset: None,
        belief: (0..survivors.len()).filter(|&o| survivors[o]).map(|o| (o, mass[o].clone())).collect(),
        full_support: true,
    })
}

/// Whether `s` is a best response to `belief` among `candidates` under conditional play at h.
pub fn best_among(nf: &NormalForm, h: InfoSetId, s: usize, candidates: &[usize], belief: &BeliefWitness) -> bool {
    let player = belief.player;
    let cols: Vec<usize> = belief.belief.iter().map(|(o, _)| *o).collect();
    let probs: Vec<Rational> = belief.belief.iter().map(|(_, p)| p.clone()).collect();
    let mut rows = candidates.to_vec();
    if !rows.contains(&s) {
        rows.push(s);
    }
    let m = conditional_matrix(nf, h, player, &rows, &cols);
    is_best_response(&m, rows.iter().position(|&r| r == s).unwrap(), &probs)
}
