use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ipf, max_residual, Fit, SolverOptions, SolverReport};
use crate::dist::{AxisSet, JointDistribution};
use crate::error::{Error, Result};
use crate::math::{ln, log2};

/// Barrier weight of the first centring pass (nats).
const MU_START: f64 = 1e-2;
const MU_SHRINK: f64 = 0.1;
/// Newton decrement below which a centring pass stops.
const CENTRED: f64 = 1e-20;
/// Cells below these masses are tried at exact zero at the end.
const POLISH_THRESHOLDS: [f64; 3] = [1e-9, 1e-7, 1e-5];

/// Minimises `I_Q(S; X1, X2)` over all `Q` with `Q(X1,S) = P(X1,S)` and
/// `Q(X2,S) = P(X2,S)`.
///
/// The feasible set is parameterised as `Q = Q0 + N θ` with `N` a basis of
/// the null space of the marginal constraints (restricted to cells whose
/// marginals are positive) and `Q0` the max-ent feasible point, which
/// depends on the two marginals only. The objective is minimised with a
/// log-barrier interior-point method: damped Newton centring for a
/// decreasing sequence of barrier weights. Optima on the boundary are
/// approached to within the barrier weight; cells left with negligible mass
/// are then set to zero and the remainder refitted, keeping the refit only
/// if it is feasible and no worse.
///
/// The trace (when `verbose`) holds the objective after each accepted
/// centring pass; a pass is accepted only if it does not raise the objective.
pub fn broja_minimize_joint_mi(
    reference: &JointDistribution,
    opts: &SolverOptions,
) -> Result<(JointDistribution, SolverReport)> {
    opts.validate()?;
    let t = reference.target_axis()?;
    if reference.n_predictors() != 2 {
        return Err(Error::UnsupportedMeasure(format!(
            "joint-MI minimisation needs 2 predictors, got {}",
            reference.n_predictors()
        )));
    }
    let preds = reference.predictor_axes();
    let s_axes = AxisSet::single(t);
    let fits = [
        Fit::new(reference, AxisSet::single(preds[0]).union(s_axes)),
        Fit::new(reference, AxisSet::single(preds[1]).union(s_axes)),
    ];
    let x_map = reference.projection_map(AxisSet::from_axes(preds.iter().copied()));
    let s_map = reference.projection_map(s_axes);
    let objective = |q: &[f64]| joint_mi(q, &x_map, &s_map);

    let n = reference.probs().len();
    let cells: Vec<usize> = (0..n).filter(|&c| fits.iter().all(|f| f.allows(c))).collect();
    let mut q = vec![0.0; n];
    for &c in &cells {
        q[c] = 1.0 / cells.len() as f64;
    }
    ipf(&mut q, &fits, opts.tolerance * 0.01, opts.max_iterations, None);

    let basis = null_space(&fits, &cells);
    let mut f = objective(&q);
    let mut trace = Vec::new();
    if opts.verbose {
        trace.push(f);
    }
    let mut iterations = 0;
    let mut converged = basis.is_empty();
    let mut mu = MU_START;
    let mut current = q.clone();
    while !converged && iterations < opts.max_iterations {
        let used = centre(&mut current, &cells, &basis, &x_map, mu, opts.max_iterations - iterations);
        iterations += used;
        let f_centre = objective(&current);
        if f_centre <= f {
            q.copy_from_slice(&current);
            f = f_centre;
            if opts.verbose {
                trace.push(f);
            }
        }
        // duality gap of an exact centre is at most (#cells) * mu nats
        if cells.len() as f64 * mu * core::f64::consts::LOG2_E <= opts.tolerance {
            converged = true;
        }
        mu *= MU_SHRINK;
    }

    let inner_tol = opts.tolerance * 0.01;
    for thr in POLISH_THRESHOLDS {
        if !q.iter().any(|&v| v > 0.0 && v < thr) {
            continue;
        }
        let mut trial: Vec<f64> = q.iter().map(|&v| if v < thr { 0.0 } else { v }).collect();
        let (_, res) = ipf(&mut trial, &fits, inner_tol, 10_000, None);
        let f_trial = objective(&trial);
        if res <= inner_tol && f_trial <= f + 1e-12 {
            q = trial;
            f = f_trial;
            if opts.verbose && trace.last().is_some_and(|&last| f <= last) {
                trace.push(f);
            }
            break;
        }
    }

    let residual = max_residual(&fits, &q);
    let report = SolverReport {
        iterations,
        residual,
        objective: f,
        converged: converged && residual <= opts.tolerance,
        trace,
    };
    Ok((reference.with_probs(q)?, report))
}

/// Damped Newton on `I(S;X) - mu Σ ln q` (nats) along the null-space
/// directions, starting from a strictly positive feasible `q`. Returns the
/// number of Newton steps taken.
fn centre(q: &mut [f64], cells: &[usize], basis: &[Vec<f64>], x_map: &[usize], mu: f64, budget: usize) -> usize {
    let k = basis.len();
    let barrier = |q: &[f64]| -> f64 {
        let qx = marginal(q, x_map);
        cells
            .iter()
            .map(|&c| {
                let v = q[c];
                // I(S;X) up to a constant on the feasible set: Σ q ln q - Σ_x q(x) ln q(x)
                v * ln(v / qx[x_map[c]]) - mu * ln(v)
            })
            .sum()
    };
    // basis directions summed within each predictor pair x
    let n_x = x_map.iter().copied().max().map_or(0, |m| m + 1);
    let per_x: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut v = vec![0.0; n_x];
            for (ci, &c) in cells.iter().enumerate() {
                v[x_map[c]] += b[ci];
            }
            v
        })
        .collect();
    let mut phi = barrier(q);
    for step in 1..=budget {
        let qx = marginal(q, x_map);
        // gradient and Hessian in cell coordinates (allowed cells only)
        let grad: Vec<f64> = cells
            .iter()
            .map(|&c| ln(q[c] / qx[x_map[c]]) - mu / q[c])
            .collect();
        let mut g = vec![0.0; k];
        for (i, b) in basis.iter().enumerate() {
            g[i] = b.iter().zip(&grad).map(|(x, y)| x * y).sum();
        }
        let mut h = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..=i {
                let mut v = 0.0;
                for (ci, &c) in cells.iter().enumerate() {
                    let (bi, bj) = (basis[i][ci], basis[j][ci]);
                    if bi != 0.0 && bj != 0.0 {
                        v += bi * bj * (1.0 / q[c] + mu / (q[c] * q[c]));
                    }
                }
                for (x, &px) in qx.iter().enumerate() {
                    if px > 0.0 {
                        v -= per_x[i][x] * per_x[j][x] / px;
                    }
                }
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        let Some(d) = solve(h, g.iter().map(|v| -v).collect()) else {
            return step;
        };
        let decrement: f64 = -g.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        if !(decrement > CENTRED) {
            return step;
        }
        let dir: Vec<f64> = (0..cells.len())
            .map(|ci| basis.iter().zip(&d).map(|(b, di)| b[ci] * di).sum())
            .collect();
        // largest step keeping every cell positive, then backtracking
        let mut t = 1.0f64;
        for (ci, &c) in cells.iter().enumerate() {
            if dir[ci] < 0.0 {
                t = t.min(0.99 * q[c] / -dir[ci]);
            }
        }
        let mut trial = q.to_vec();
        loop {
            for (ci, &c) in cells.iter().enumerate() {
                trial[c] = q[c] + t * dir[ci];
            }
            let positive = cells.iter().all(|&c| trial[c] > 0.0);
            if positive {
                let phi_trial = barrier(&trial);
                if phi_trial <= phi - 0.25 * t * decrement {
                    q.copy_from_slice(&trial);
                    // at rounding level the step no longer makes progress
                    if phi_trial >= phi {
                        return step;
                    }
                    phi = phi_trial;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-16 {
                return step;
            }
        }
    }
    budget
}

/// Basis of `{v : A v = 0}` where `A` maps allowed-cell masses to the
/// constrained marginals. Vectors are indexed like `cells`.
fn null_space(fits: &[Fit], cells: &[usize]) -> Vec<Vec<f64>> {
    let k = cells.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for fit in fits {
        for m in 0..fit.target.len() {
            let row: Vec<f64> = cells.iter().map(|&c| if fit.map[c] == m { 1.0 } else { 0.0 }).collect();
            if row.iter().any(|&v| v != 0.0) {
                rows.push(row);
            }
        }
    }
    // reduced row echelon form
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())) else {
            break;
        };
        if rows[p][col].abs() < 1e-9 {
            continue;
        }
        rows.swap(r, p);
        let pv = rows[r][col];
        rows[r].iter_mut().for_each(|v| *v /= pv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0.0 {
                let f = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0.0; k];
            v[free] = 1.0;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free];
            }
            v
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn marginal(q: &[f64], map: &[usize]) -> Vec<f64> {
    let size = map.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![0.0; size];
    for (c, &v) in q.iter().enumerate() {
        out[map[c]] += v;
    }
    out
}

/// `I(S; X) = Σ q log2 [q / (q(x) q(s))]`.
fn joint_mi(q: &[f64], x_map: &[usize], s_map: &[usize]) -> f64 {
    let qx = marginal(q, x_map);
    let qs = marginal(q, s_map);
    q.iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(c, &v)| v * log2(v / (qx[x_map[c]] * qs[s_map[c]])))
        .sum()
}
