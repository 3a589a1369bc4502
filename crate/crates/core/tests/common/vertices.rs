//! Belief polytope of a payoff table by brute-force vertex enumeration.
//!
//! For a target row the polytope is {β in the simplex over columns : the
//! target is a best response to β}. It is nonempty iff it has a vertex, and it
//! contains a full-support point iff the vertex supports cover every column.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

pub struct Polytope {
    pub vertices: Vec<Vec<Q>>,
    pub columns: usize,
}

impl Polytope {
    pub fn nonempty(&self) -> bool {
        !self.vertices.is_empty()
    }

    pub fn has_full_support_point(&self) -> bool {
        (0..self.columns).all(|c| self.vertices.iter().any(|v| v[c].is_positive()))
    }
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Solves the square system `m x = rhs`; `None` if singular.
fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    let d = f * m[col][c];
                    m[r][c] -= d;
                }
                let d = f * rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

pub fn belief_polytope(p: &[Vec<Q>], target: usize) -> Polytope {
    let cols = p[target].len();
    // inequalities g·β >= 0: first β_c >= 0, then (target - r)·β >= 0
    let mut ineq: Vec<Vec<Q>> = (0..cols)
        .map(|c| (0..cols).map(|j| if j == c { Q::one() } else { Q::zero() }).collect())
        .collect();
    for (r, row) in p.iter().enumerate() {
        if r != target {
            ineq.push(p[target].iter().zip(row).map(|(s, u)| s - u).collect());
        }
    }
    let mut vertices: Vec<Vec<Q>> = Vec::new();
    combinations(ineq.len(), cols - 1, &mut |pick| {
        let mut m = vec![vec![Q::one(); cols]];
        let mut rhs = vec![Q::one()];
        for &i in pick {
            m.push(ineq[i].clone());
            rhs.push(Q::zero());
        }
        if let Some(x) = solve(m, rhs) {
            let feasible = ineq.iter().all(|g| !g.iter().zip(&x).map(|(a, b)| a * b).fold(Q::zero(), |s, v| s + v).is_negative());
            if feasible && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    });
    Polytope { vertices, columns: cols }
}
