use alloc::vec;
use alloc::vec::Vec;

use super::lp::{maximize, Lp};
use super::{entropy_bits, ipf, ConstraintSet, Fit, SolverOptions, SolverReport};
use crate::dist::JointDistribution;
use crate::error::Result;

/// Maximum-entropy distribution matching every constrained marginal of the
/// reference. Non-convergence is not an error here: the report says
/// `converged = false` and the caller decides.
///
/// Cells whose constrained marginals vanish are frozen at zero. Cells that
/// are zero in every feasible distribution because of how several
/// constraints combine are found first with a small linear program, so the
/// fitting runs on the exact support of the optimum.
pub fn maxent_under_marginals(
    constraints: &ConstraintSet,
    opts: &SolverOptions,
) -> Result<(JointDistribution, SolverReport)> {
    opts.validate()?;
    let reference = constraints.reference();
    let fits: Vec<Fit> = constraints.axes().iter().map(|&a| Fit::new(reference, a)).collect();
    let n_cells = reference.probs().len();

    let allowed: Vec<bool> = (0..n_cells).map(|c| fits.iter().all(|f| f.allows(c))).collect();
    let support = feasible_support(reference.probs(), &allowed, &fits);

    let count = support.iter().filter(|&&s| s).count() as f64;
    let mut q: Vec<f64> = support.iter().map(|&s| if s { 1.0 / count } else { 0.0 }).collect();
    let mut trace = Vec::new();
    let (iterations, residual) = ipf(
        &mut q,
        &fits,
        opts.tolerance,
        opts.max_iterations,
        opts.verbose.then_some(&mut trace),
    );
    let report = SolverReport {
        iterations,
        residual,
        objective: entropy_bits(&q),
        converged: residual <= opts.tolerance,
        trace,
    };
    Ok((reference.with_probs(q)?, report))
}

/// Cells that are positive in at least one distribution meeting the
/// constraints. Reference-positive cells qualify directly. A zero cell `c`
/// qualifies iff some direction `δ` with `M δ = 0`, `δ ≥ 0` on the zero
/// cells and `δ_c > 0` exists: the reference has slack on its support, so
/// a small step along `δ` stays feasible. That is the program
///
/// `max Σ y_c  s.t.  M δ = 0,  0 ≤ y_c ≤ δ_c,  y_c ≤ 1,  δ_zero ≥ 0`
///
/// whose optimum sets `y_c = 1` exactly on the reachable cells (the
/// directions form a cone). `M` is a 0/1 matrix, so the program does not
/// depend on the marginal values and stays well conditioned.
fn feasible_support(reference: &[f64], allowed: &[bool], fits: &[Fit]) -> Vec<bool> {
    let positive: Vec<usize> = (0..reference.len()).filter(|&c| allowed[c] && reference[c] > 0.0).collect();
    let candidates: Vec<usize> = (0..reference.len()).filter(|&c| allowed[c] && reference[c] <= 0.0).collect();
    let mut support: Vec<bool> = (0..reference.len()).map(|c| allowed[c] && reference[c] > 0.0).collect();
    if candidates.is_empty() {
        return support;
    }

    // columns: δ on candidates, δ⁺ and δ⁻ on positive cells, then y
    let (nz, np) = (candidates.len(), positive.len());
    let y0 = nz + 2 * np;
    let n_vars = y0 + nz;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for fit in fits {
        for (m, &t) in fit.target.iter().enumerate() {
            if t <= 0.0 {
                continue;
            }
            let mut row = vec![0.0; n_vars];
            for (k, &c) in candidates.iter().enumerate() {
                if fit.map[c] == m {
                    row[k] = 1.0;
                }
            }
            for (k, &c) in positive.iter().enumerate() {
                if fit.map[c] == m {
                    row[nz + k] = 1.0;
                    row[nz + np + k] = -1.0;
                }
            }
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            rows.push(row);
            rows.push(neg);
            rhs.push(0.0);
            rhs.push(0.0);
        }
    }
    for k in 0..nz {
        let mut row = vec![0.0; n_vars];
        row[y0 + k] = 1.0;
        row[k] = -1.0;
        rows.push(row);
        rhs.push(0.0);
        let mut cap = vec![0.0; n_vars];
        cap[y0 + k] = 1.0;
        rows.push(cap);
        rhs.push(1.0);
    }
    let mut objective = vec![0.0; n_vars];
    for v in &mut objective[y0..] {
        *v = 1.0;
    }
    let lp = Lp { a: rows, b: rhs, c: objective };
    match maximize(&lp, 50 * (lp.a.len() + n_vars)) {
        Some(x) => {
            for (k, &c) in candidates.iter().enumerate() {
                if x[y0 + k] > 0.5 {
                    support[c] = true;
                }
            }
        }
        None => {
            // fall back to every allowed cell; fitting still converges, only slower
            for &c in &candidates {
                support[c] = true;
            }
        }
    }
    support
}
