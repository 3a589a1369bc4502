//! Exact dominance tests and their belief-side duals.
//!
//! Matrix functions take a payoff matrix with one row per own strategy and one
//! column per opponents' profile; `target` is a row index. The restriction
//! wrappers translate a [`Restriction`] into such a matrix.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::game::{InfoSetId, PlayerId, TreeId};
use crate::lp::{LinearProgram, Relation};
use crate::normal_form::{NormalForm, Restriction};
use crate::strategy::PartialStrategy;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Weak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceWitness {
    pub dominated: PartialStrategy,
    /// Dominating mixture over Y_i, canonical order, positive weights only.
    pub mixture: Vec<(PartialStrategy, Rational)>,
    pub mode: Mode,
    /// Opponents' profiles of the restriction the test ran on.
    pub opponents: Vec<usize>,
}

impl DominanceWitness {
    /// Re-evaluates the defining inequalities directly.
    pub fn verify(&self, nf: &NormalForm) -> bool {
        let s = self.dominated;
        let total: Rational = self.mixture.iter().map(|(_, w)| w.clone()).sum();
        if total != Rational::one() || self.mixture.iter().any(|(_, w)| w.is_negative()) || self.opponents.is_empty() {
            return false;
        }
        let mut some_strict = false;
        for &o in &self.opponents {
            let mixed: Rational = self
                .mixture
                .iter()
                .map(|(r, w)| w * nf.payoff_against(s.tree, s.player, r.index, o))
                .sum();
            let own = nf.payoff_against(s.tree, s.player, s.index, o);
            if mixed < *own || (self.mode == Mode::Strict && mixed == *own) {
                return false;
            }
            some_strict |= mixed > *own;
        }
        some_strict
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefWitness {
    pub player: PlayerId,
    pub tree: TreeId,
    pub infoset: Option<InfoSetId>,
    /// Probability per opponents' profile index of `tree`, domain order.
    pub belief: Vec<(usize, Rational)>,
    pub full_support: bool,
}

impl BeliefWitness {
    pub fn is_distribution(&self) -> bool {
        let total: Rational = self.belief.iter().map(|(_, p)| p.clone()).sum();
        total == Rational::one()
            && self.belief.iter().all(|(_, p)| !p.is_negative())
            && (!self.full_support || self.belief.iter().all(|(_, p)| p.is_positive()))
    }

    pub fn probability(&self, opponents: usize) -> Rational {
        self.belief.iter().find(|(o, _)| *o == opponents).map(|(_, p)| p.clone()).unwrap_or_else(Rational::zero)
    }
}

fn diff_row(p: &[Vec<Rational>], r: usize, t: usize) -> Vec<Rational> {
    p[r].iter().zip(&p[t]).map(|(a, b)| a - b).collect()
}

/// Rows other than `target` not weakly below another such row; a dominating
/// mixture can always be moved onto them.
fn candidate_rows(p: &[Vec<Rational>], target: usize) -> Vec<usize> {
    let le = |a: &[Rational], b: &[Rational]| a.iter().zip(b).all(|(x, y)| x <= y);
    let others: Vec<usize> = (0..p.len()).filter(|&r| r != target).collect();
    others
        .iter()
        .copied()
        .filter(|&r| !others.iter().any(|&q| q != r && le(&p[r], &p[q]) && (p[r] != p[q] || q < r)))
        .collect()
}

fn spread(n: usize, rows: &[usize], x: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (&r, v) in rows.iter().zip(x) {
        out[r] = v.clone();
    }
    out
}

/// A mixture over rows that strictly dominates `target`, if one exists.
pub fn strict_dominator(p: &[Vec<Rational>], target: usize) -> Option<Vec<Rational>> {
    let cols = p.first().map_or(0, Vec::len);
    if cols == 0 {
        return None;
    }
    let n = p.len();
    if let Some(r) = (0..n).find(|&r| r != target && p[r].iter().zip(&p[target]).all(|(a, b)| a > b)) {
        return Some(unit(n, r));
    }
    let rows = candidate_rows(p, target);
    if (0..cols).any(|c| rows.iter().all(|&r| p[r][c] <= p[target][c])) {
        return None;
    }
    // gaps >= 1 after scaling; minimizing the scale keeps the program bounded
    let mut lp = LinearProgram::new(rows.len());
    lp.objective = vec![-Rational::one(); rows.len()];
    for c in 0..cols {
        lp.add(rows.iter().map(|&r| &p[r][c] - &p[target][c]).collect(), Relation::Ge, Rational::one());
    }
    let sol = lp.solve();
    let (_, x) = sol.optimal()?;
    let total: Rational = x.iter().sum();
    Some(spread(n, &rows, &x.iter().map(|v| v / &total).collect::<Vec<_>>()))
}

/// A mixture over rows that weakly dominates `target`, if one exists.
pub fn weak_dominator(p: &[Vec<Rational>], target: usize) -> Option<Vec<Rational>> {
    let cols = p.first().map_or(0, Vec::len);
    if cols == 0 {
        return None;
    }
    let n = p.len();
    if let Some(r) = (0..n).find(|&r| {
        r != target && {
            let d = diff_row(p, r, target);
            d.iter().all(|v| !v.is_negative()) && d.iter().any(|v| v.is_positive())
        }
    }) {
        return Some(unit(n, r));
    }
    if is_best_response(p, target, &uniform(cols)) {
        return None;
    }
    let rows = candidate_rows(p, target);
    let k = rows.len();
    // variables: sigma (k), slack (cols)
    let mut lp = LinearProgram::new(k + cols);
    for c in 0..cols {
        lp.objective[k + c] = Rational::one();
        let mut row: Vec<Rational> = rows.iter().map(|&r| p[r][c].clone()).collect();
        row.extend((0..cols).map(|j| if j == c { -Rational::one() } else { Rational::zero() }));
        lp.add(row, Relation::Eq, p[target][c].clone());
    }
    let mut sum = vec![Rational::one(); k];
    sum.extend(vec![Rational::zero(); cols]);
    lp.add(sum, Relation::Eq, Rational::one());
    let sol = lp.solve();
    let (value, x) = sol.optimal()?;
    value.is_positive().then(|| spread(n, &rows, &x[..k]))
}

/// Rows whose best-response constraint against `target` can bind: rows never
/// above `target` and rows below another kept row are implied.
fn binding_rows(p: &[Vec<Rational>], target: usize) -> Vec<usize> {
    let le = |a: &[Rational], b: &[Rational]| a.iter().zip(b).all(|(x, y)| x <= y);
    let open: Vec<usize> = (0..p.len()).filter(|&r| r != target && !le(&p[r], &p[target])).collect();
    open.iter()
        .copied()
        .filter(|&r| !open.iter().any(|&q| q != r && le(&p[r], &p[q]) && (p[r] != p[q] || q < r)))
        .collect()
}

fn uniform(cols: usize) -> Vec<Rational> {
    vec![Rational::new(1.into(), (cols as i64).into()); cols]
}

/// A belief over columns under which `target` is a best response among all rows.
pub fn justifying_belief(p: &[Vec<Rational>], target: usize) -> Option<Vec<Rational>> {
    let cols = p.first().map_or(0, Vec::len);
    if cols == 0 {
        return None;
    }
    let rows = binding_rows(p, target);
    if let Some(c) = (0..cols).find(|&c| rows.iter().all(|&r| p[r][c] <= p[target][c])) {
        return Some(unit(cols, c));
    }
    let u = uniform(cols);
    if is_best_response(p, target, &u) {
        return Some(u);
    }
    let mut lp = LinearProgram::new(cols);
    lp.add(vec![Rational::one(); cols], Relation::Eq, Rational::one());
    for r in rows {
        lp.add(diff_row(p, target, r), Relation::Ge, Rational::zero());
    }
    lp.solve().optimal().map(|(_, x)| x.to_vec())
}

/// A full-support belief under which `target` is a best response. With
/// `positivity` off, a belief with minimum probability zero is accepted.
pub fn fullsupport_justifying_belief(p: &[Vec<Rational>], target: usize, positivity: bool) -> Option<Vec<Rational>> {
    let cols = p.first().map_or(0, Vec::len);
    if cols == 0 {
        return None;
    }
    if !positivity {
        return justifying_belief(p, target);
    }
    let u = uniform(cols);
    if is_best_response(p, target, &u) {
        return Some(u);
    }
    let rows = binding_rows(p, target);
    if rows.iter().any(|&r| p[r].iter().zip(&p[target]).all(|(a, b)| a >= b)) {
        return None;
    }
    // beta = gamma + delta: variables gamma (cols), delta; maximize delta
    let mut lp = LinearProgram::new(cols + 1);
    lp.objective[cols] = Rational::one();
    let mut sum = vec![Rational::one(); cols];
    sum.push(Rational::from_integer((cols as i64).into()));
    lp.add(sum, Relation::Eq, Rational::one());
    for r in rows {
        let mut row = diff_row(p, target, r);
        row.push(row.iter().sum());
        lp.add(row, Relation::Ge, Rational::zero());
    }
    let sol = lp.solve();
    let (delta, x) = sol.optimal()?;
    delta.is_positive().then(|| x[..cols].iter().map(|g| g + delta).collect())
}

/// Expected payoff of every row under `belief`.
pub fn expected_rows(p: &[Vec<Rational>], belief: &[Rational]) -> Vec<Rational> {
    p.iter().map(|row| row.iter().zip(belief).map(|(a, b)| a * b).sum()).collect()
}

/// Whether `target` maximizes expected payoff among the rows under `belief`.
pub fn is_best_response(p: &[Vec<Rational>], target: usize, belief: &[Rational]) -> bool {
    let e = expected_rows(p, belief);
    e.iter().all(|v| *v <= e[target])
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    (0..n).map(|r| if r == k { Rational::one() } else { Rational::zero() }).collect()
}

fn witness(nf: &NormalForm, y: &Restriction, s: usize, mix: Vec<Rational>, mode: Mode) -> DominanceWitness {
    let u = &nf.universe;
    DominanceWitness {
        dominated: u.strategy(y.player, y.tree, s),
        mixture: y
            .own
            .iter()
            .zip(mix)
            .filter(|(_, w)| w.is_positive())
            .map(|(&r, w)| (u.strategy(y.player, y.tree, r), w))
            .collect(),
        mode,
        opponents: y.opponents.clone(),
    }
}

/// Strict dominance of strategy index `s` within the restriction `y`.
pub fn strictly_dominated(nf: &NormalForm, s: usize, y: &Restriction) -> Option<DominanceWitness> {
    let t = y.own.iter().position(|&x| x == s)?;
    if y.opponents.is_empty() {
        return None;
    }
    strict_dominator(&y.matrix(nf), t).map(|mix| witness(nf, y, s, mix, Mode::Strict))
}

/// Weak dominance of strategy index `s` within the restriction `y`.
pub fn weakly_dominated(nf: &NormalForm, s: usize, y: &Restriction) -> Option<DominanceWitness> {
    let t = y.own.iter().position(|&x| x == s)?;
    if y.opponents.is_empty() {
        return None;
    }
    weak_dominator(&y.matrix(nf), t).map(|mix| witness(nf, y, s, mix, Mode::Weak))
}

/// Dominated strategies of a whole restriction, each with a witness.
pub fn dominated_in(nf: &NormalForm, y: &Restriction, mode: Mode) -> Vec<(usize, DominanceWitness)> {
    if y.is_empty() {
        return Vec::new();
    }
    let m = y.matrix(nf);
    y.own
        .iter()
        .enumerate()
        .filter_map(|(t, &s)| {
            let mix = match mode {
                Mode::Strict => strict_dominator(&m, t),
                Mode::Weak => weak_dominator(&m, t),
            }?;
            Some((s, witness(nf, y, s, mix, mode)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn table(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    #[test]
    fn matching_pennies_has_no_dominance() {
        let p = table(&[&[1, -1], &[-1, 1]]);
        for t in 0..2 {
            assert!(strict_dominator(&p, t).is_none());
            assert!(weak_dominator(&p, t).is_none());
            let b = justifying_belief(&p, t).unwrap();
            assert!(is_best_response(&p, t, &b));
        }
    }

    #[test]
    fn mixed_strict_dominator() {
        let p = table(&[&[0, 0], &[3, -1], &[-1, 3]]);
        let mix = strict_dominator(&p, 0).unwrap();
        assert_eq!(mix, vec![rat(0, 1), rat(1, 2), rat(1, 2)]);
        // no pure row does it
        assert!((1..3).all(|r| !p[r].iter().zip(&p[0]).all(|(a, b)| a > b)));
        assert!(justifying_belief(&p, 0).is_none());
    }

    #[test]
    fn duplicate_row_is_not_weakly_dominated() {
        let p = table(&[&[2, 1], &[2, 1]]);
        assert!(weak_dominator(&p, 0).is_none());
        assert!(weak_dominator(&p, 1).is_none());
    }

    #[test]
    fn weak_but_not_strict() {
        let p = table(&[&[1, 0], &[1, 1]]);
        assert!(strict_dominator(&p, 0).is_none());
        assert_eq!(weak_dominator(&p, 0), Some(vec![rat(0, 1), rat(1, 1)]));
        assert!(justifying_belief(&p, 0).is_some());
        assert!(fullsupport_justifying_belief(&p, 0, true).is_none());
        assert!(fullsupport_justifying_belief(&p, 0, false).is_some());
    }

    #[test]
    fn single_candidate_or_column() {
        let p = table(&[&[5, -2, 0]]);
        assert!(justifying_belief(&p, 0).is_some());
        assert!(fullsupport_justifying_belief(&p, 0, true).is_some());
        let q = table(&[&[1], &[3]]);
        assert_eq!(fullsupport_justifying_belief(&q, 1, true), justifying_belief(&q, 1));
        assert!(fullsupport_justifying_belief(&q, 0, true).is_none());
    }
}
