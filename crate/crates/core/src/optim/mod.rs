//! Constrained optimisation over joint distributions.
//!
//! [`maxent_under_marginals`] finds the maximum-entropy distribution whose
//! marginals on a list of axis sets match a reference distribution.
//! [`broja_minimize_joint_mi`] minimises `I(S; X1, X2)` over the
//! distributions sharing both predictor-target marginals with a reference.

mod broja;
mod lp;
mod maxent;

use alloc::format;
use alloc::vec::Vec;

pub use broja::broja_minimize_joint_mi;
pub use maxent::maxent_under_marginals;

use crate::dist::{AxisSet, JointDistribution};
use crate::error::{Error, Result};

/// Axis sets whose marginals must agree with `reference`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    reference: JointDistribution,
    axes: Vec<AxisSet>,
}

impl ConstraintSet {
    pub fn new(reference: JointDistribution, axes: Vec<AxisSet>) -> Result<Self> {
        let n = reference.n_axes();
        for &a in &axes {
            if a.is_empty() {
                return Err(Error::EmptyAxisSet);
            }
            if !a.is_subset(AxisSet::all(n)) {
                let axis = a.iter().find(|&x| x >= n).unwrap_or(n);
                return Err(Error::AxisOutOfRange { axis, n_axes: n });
            }
        }
        Ok(ConstraintSet { reference, axes })
    }

    pub fn reference(&self) -> &JointDistribution {
        &self.reference
    }

    pub fn axes(&self) -> &[AxisSet] {
        &self.axes
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Largest accepted L1 marginal residual (max-ent) or objective
    /// decrease per step (joint-MI minimisation).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Record the per-iteration residual or objective in the report.
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-10, max_iterations: 100_000, verbose: false }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidOption(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidOption("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Convergence record of one solve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverReport {
    pub iterations: usize,
    /// Largest L1 deviation of a constrained marginal from its reference.
    pub residual: f64,
    /// Entropy (max-ent) or joint mutual information (minimisation), bits.
    pub objective: f64,
    pub converged: bool,
    /// Per-iteration residual (max-ent) or accepted objective values
    /// (minimisation); only filled when `verbose` is set.
    pub trace: Vec<f64>,
}

/// A marginal constraint in table form: for every cell of the full table its
/// marginal index, and the reference marginal.
pub(crate) struct Fit {
    map: Vec<usize>,
    target: Vec<f64>,
}

impl Fit {
    pub(crate) fn new(reference: &JointDistribution, axes: AxisSet) -> Self {
        Fit { map: reference.projection_map(axes), target: reference.marginal_unchecked(axes) }
    }

    fn current(&self, q: &[f64]) -> Vec<f64> {
        let mut cur = alloc::vec![0.0; self.target.len()];
        for (c, &v) in q.iter().enumerate() {
            cur[self.map[c]] += v;
        }
        cur
    }

    fn residual(&self, q: &[f64]) -> f64 {
        self.current(q).iter().zip(&self.target).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Cell may be positive only if its constrained marginal is.
    pub(crate) fn allows(&self, cell: usize) -> bool {
        self.target[self.map[cell]] > 0.0
    }
}

pub(crate) fn max_residual(fits: &[Fit], q: &[f64]) -> f64 {
    fits.iter().map(|f| f.residual(q)).fold(0.0, f64::max)
}

/// Iterative proportional fitting from `q`: rescales `q` to each marginal in
/// turn until every residual is at most `tol`. Zero cells stay zero.
pub(crate) fn ipf(q: &mut [f64], fits: &[Fit], tol: f64, max_iter: usize, trace: Option<&mut Vec<f64>>) -> (usize, f64) {
    let mut trace = trace;
    let mut residual = max_residual(fits, q);
    if residual <= tol {
        return (0, residual);
    }
    for iter in 1..=max_iter {
        for fit in fits {
            let cur = fit.current(q);
            for (c, v) in q.iter_mut().enumerate() {
                if *v > 0.0 {
                    let m = fit.map[c];
                    *v *= fit.target[m] / cur[m];
                }
            }
        }
        residual = max_residual(fits, q);
        if let Some(t) = trace.as_deref_mut() {
            t.push(residual);
        }
        if residual <= tol {
            return (iter, residual);
        }
    }
    (max_iter, residual)
}

pub(crate) fn entropy_bits(q: &[f64]) -> f64 {
    -q.iter().map(|&p| crate::math::xlog2x(p)).sum::<f64>()
}
