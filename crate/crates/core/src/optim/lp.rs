//! Small dense simplex solver for `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with
//! `b ≥ 0`, so the slack basis is feasible from the start. Bland's rule
//! keeps degenerate problems from cycling.

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_TOL: f64 = 1e-11;

pub(crate) struct Lp {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// Returns an optimal `x`, or `None` if the problem is unbounded or the
/// pivot budget runs out.
pub(crate) fn maximize(lp: &Lp, max_pivots: usize) -> Option<Vec<f64>> {
    let m = lp.a.len();
    let n = lp.c.len();
    debug_assert!(lp.b.iter().all(|&v| v >= 0.0));
    let width = n + m + 1;
    // rows 0..m constraints, row m objective (reduced costs, stored as -c)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&lp.a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = lp.b[i];
    }
    for j in 0..n {
        t[m][j] = -lp.c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..max_pivots {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_TOL) else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i][width - 1];
                }
            }
            return Some(x);
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let coef = t[i][enter];
            if coef > PIVOT_TOL {
                let ratio = t[i][width - 1] / coef;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let r = leave?;
        let pivot = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[enter];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        basis[r] = enter;
    }
    None
}
