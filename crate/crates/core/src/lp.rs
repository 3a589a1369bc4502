//! Dense two-phase simplex over exact rationals.
//!
//! Problems are stated as `maximize c·x` subject to linear rows and `x >= 0`.
//! Bland's rule is used for both the entering and the leaving variable, so the
//! method terminates on degenerate problems.

use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl Solution {
    pub fn optimal(&self) -> Option<(&Rational, &[Rational])> {
        match self {
            Solution::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width mismatch");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> Solution {
        Tableau::build(self).run(&self.objective)
    }

    /// Checks a candidate point against every row and the sign constraints.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    // columns [num_vars, first_artificial) are slacks/surpluses
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let mut normalized = Vec::with_capacity(m);
        for c in &lp.constraints {
            // a zero right-hand side flips for free and then needs no artificial
            if c.rhs.is_negative() || (c.rhs.is_zero() && c.relation == Relation::Ge) {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((c.coeffs.iter().map(|v| -v).collect::<Vec<_>>(), rel, -&c.rhs));
            } else {
                normalized.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            }
        }
        let num_slack = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let num_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = n + num_slack;
        let width = first_artificial + num_art;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut slack, mut art) = (n, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            for (j, v) in coeffs.into_iter().enumerate() {
                row[j] = v;
            }
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, num_vars: n, first_artificial, width }
    }

    fn run(mut self, objective: &[Rational]) -> Solution {
        if self.width > self.first_artificial {
            // phase one: maximize -(sum of artificials)
            let mut cost = vec![Rational::zero(); self.width];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            let mut z = self.objective_row(&cost);
            match self.optimize(&mut z, self.width) {
                Some(()) => {}
                None => unreachable!("phase one is bounded"),
            }
            if z[self.width].is_negative() {
                return Solution::Infeasible;
            }
            self.evict_artificials();
        }
        let mut cost = vec![Rational::zero(); self.width];
        cost[..self.num_vars].clone_from_slice(objective);
        let mut z = self.objective_row(&cost);
        if self.optimize(&mut z, self.first_artificial).is_none() {
            return Solution::Unbounded;
        }
        let mut point = vec![Rational::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                point[b] = self.rows[r][self.width].clone();
            }
        }
        Solution::Optimal { value: z[self.width].clone(), point }
    }

    // Reduced-cost row for `maximize cost·x`; entry j is (c_B B^-1 A_j - c_j), last entry the value.
    fn objective_row(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut z: Vec<Rational> = cost.iter().map(|c| -c).collect();
        z.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let f = cost[b].clone();
            for (zj, a) in z.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *zj += &f * a;
                }
            }
        }
        z
    }

    // Returns None when unbounded. Only columns below `limit` may enter.
    fn optimize(&mut self, z: &mut [Rational], limit: usize) -> Option<()> {
        loop {
            let Some(enter) = (0..limit).find(|&j| z[j].is_negative()) else {
                return Some(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, _) = leave?;
            self.pivot(r, enter, z);
        }
    }

    fn pivot(&mut self, r: usize, col: usize, z: &mut [Rational]) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, a) in row.iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *v -= &f * a;
                }
            }
        }
        if !z[col].is_zero() {
            let f = z[col].clone();
            for (v, a) in z.iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *v -= &f * a;
                }
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    // After a feasible phase one, artificials still basic sit at level zero.
    // Pivot them out where possible; rows with no other support are redundant.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Rational::zero(); self.width + 1];
                    self.pivot(r, j, &mut dummy);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}
