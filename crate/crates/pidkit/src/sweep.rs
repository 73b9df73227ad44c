//! Parameter sweeps. Grid points run in parallel; results come back in grid
//! order.

use pidkit_core::gaussian::{feasible_b_grid, gaussian_sweep_point, GaussianSweep};
use pidkit_core::measures::pid;
use pidkit_core::{Error, McOptions, MeasureChoice, PidResult, Result, SolverOptions};
use rayon::prelude::*;

use crate::registry::{predpred, PREDPRED_RANGE};

/// `from, from + step, ...` up to `to`, with `to` itself always included.
pub fn step_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || from > to {
        return Err(Error::InvalidOption(format!("bad grid {from}..{to} step {step}")));
    }
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let v = from + k as f64 * step;
        if v > to - 1e-9 * step {
            break;
        }
        grid.push(v);
        k += 1;
    }
    grid.push(to);
    Ok(grid)
}

/// The default predictor-coupling grid: the valid range in steps of 0.1.
pub fn predpred_default_grid() -> Vec<f64> {
    step_grid(PREDPRED_RANGE.0, PREDPRED_RANGE.1, 0.1).expect("valid range")
}

#[derive(Debug, Clone)]
pub struct PredpredRow {
    pub c: f64,
    /// One decomposition per requested measure, in request order.
    pub results: Vec<PidResult>,
}

pub fn predpred_sweep(grid: &[f64], measures: &[MeasureChoice], opts: &SolverOptions) -> Result<Vec<PredpredRow>> {
    let (lo, hi) = PREDPRED_RANGE;
    if let Some(&c) = grid.iter().find(|&&c| !(lo - 1e-12..=hi + 1e-12).contains(&c)) {
        return Err(Error::InvalidOption(format!("predpred grid point {c} outside [{lo}, {hi}]")));
    }
    grid.par_iter()
        .map(|&c| {
            let d = predpred(c)?;
            let results = measures.iter().map(|&m| pid(&d, m, opts)).collect::<Result<Vec<_>>>()?;
            Ok(PredpredRow { c, results })
        })
        .collect()
}

/// Gaussian sweep over `b`; point `i` uses generator stream `i`, so the
/// result matches the serial sweep in the core crate.
pub fn gaussian_sweep_parallel(a: f64, c: f64, b_grid: &[f64], mc: &McOptions) -> Result<GaussianSweep> {
    let points = b_grid
        .par_iter()
        .enumerate()
        .map(|(i, &b)| gaussian_sweep_point(a, c, b, i, mc))
        .collect::<Result<Vec<_>>>()?;
    let mut sweep = GaussianSweep::default();
    for (p, &b) in points.into_iter().zip(b_grid) {
        match p {
            Some(row) => sweep.rows.push(row),
            None => sweep.skipped.push(b),
        }
    }
    Ok(sweep)
}

/// `count` feasible `b` values for the given `a`, `c`, kept a small
/// relative distance away from the singular endpoints.
pub fn gaussian_default_grid(a: f64, c: f64, count: usize) -> Vec<f64> {
    feasible_b_grid(a, c, count, 1e-3)
}
