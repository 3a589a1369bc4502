//! A small exact simplex for `max c·x s.t. A x <= b, x >= 0` with `b >= 0`,
//! so the origin is a feasible basis. Written separately from the library LP.

use num_traits::{One, Signed, Zero};
use unaware_core::Rational;

/// Optimal value; `None` when unbounded.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<Rational> {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|v| !v.is_negative()));
    // columns: x (n), slacks (m), rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        row[..n].clone_from_slice(&a[i]);
        row[n + i] = Rational::one();
        row[width - 1] = b[i].clone();
        t.push(row);
    }
    let mut obj = vec![Rational::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (row, _) = leave?;
        let pivot = t[row][enter].clone();
        for v in t[row].iter_mut() {
            *v = &*v / &pivot;
        }
        let prow = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == row || r[enter].is_zero() {
                continue;
            }
            let f = r[enter].clone();
            for (v, p) in r.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        basis[row] = enter;
    }
    Some(t[m][width - 1].clone())
}

/// Whether row `target` of `p` is strictly dominated by a mixture of the rows.
pub fn strictly_dominated(p: &[Vec<Rational>], target: usize) -> bool {
    // Shift to positive payoffs; max t·x over {A x <= 1} is below 1 exactly
    // when some mixture beats the target everywhere.
    let low = p.iter().flatten().min().cloned().unwrap_or_else(Rational::zero);
    let shift = |v: &Rational| v - &low + Rational::one();
    let a: Vec<Vec<Rational>> = p.iter().map(|row| row.iter().map(shift).collect()).collect();
    let c: Vec<Rational> = p[target].iter().map(shift).collect();
    let b = vec![Rational::one(); p.len()];
    maximize(&a, &b, &c).expect("bounded") < Rational::one()
}

/// Whether row `target` is a best response to some belief with full support.
pub fn admissible(p: &[Vec<Rational>], target: usize) -> bool {
    // beliefs z + delta; maximize delta
    let cols = p[target].len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for row in p {
        let diff: Vec<Rational> = row.iter().zip(&p[target]).map(|(u, s)| u - s).collect();
        let mut line = diff.clone();
        line.push(diff.iter().sum());
        a.push(line);
        b.push(Rational::zero());
    }
    let mut total = vec![Rational::one(); cols];
    total.push(Rational::from_integer((cols as i64).into()));
    a.push(total);
    b.push(Rational::one());
    let mut c = vec![Rational::zero(); cols];
    c.push(Rational::one());
    maximize(&a, &b, &c).expect("bounded").is_positive()
}
