//! Decompositions for a univariate Gaussian target `S` and two univariate
//! Gaussian predictors, all with unit variance:
//! `a = Corr(X1,S)`, `c = Corr(X2,S)`, `b = Corr(X1,X2)`.
//!
//! `I_mmi` is closed form. `I_ccs` is a Monte-Carlo average of the filtered
//! local co-information, with every local term taken from the exact
//! conditional Gaussian densities.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::{PidResult, RedundancyLattice};
use crate::math::{acos, cos, log2, sqrt};
use crate::measures::SIGN_DEAD_ZONE;

/// Smallest eigenvalue accepted for a correlation matrix.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSystem {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub sample_count: usize,
    pub seed: u64,
    pub report_standard_error: bool,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { sample_count: 1_000_000, seed: 0, report_standard_error: true }
    }
}

/// `I = -½ log2(1 - r²)` for a bivariate Gaussian with correlation `r`.
pub fn gaussian_mi(r: f64) -> Result<f64> {
    if !(r.abs() < 1.0) {
        return Err(Error::InvalidCorrelation(format!("|r| must be below 1, got {r}")));
    }
    Ok(-0.5 * log2(1.0 - r * r))
}

impl GaussianSystem {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidCorrelation(format!("{name} = {v} outside [-1, 1]")));
            }
        }
        let sys = GaussianSystem { a, b, c };
        let least = sys.eigenvalues()[0];
        if least < -EIGEN_TOLERANCE {
            return Err(Error::InvalidCorrelation(format!(
                "correlation matrix not positive semi-definite (eigenvalue {least:e})"
            )));
        }
        Ok(sys)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Eigenvalues of the correlation matrix of `(X1, X2, S)`, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        let off = a * a + b * b + c * c;
        if off == 0.0 {
            return [1.0; 3];
        }
        // unit diagonal: shift by 1, then the trigonometric solution of the
        // depressed cubic; det of the off-diagonal part is 2abc
        let p = sqrt(off / 3.0);
        let r = (a * b * c / (p * p * p)).clamp(-1.0, 1.0);
        let phi = acos(r) / 3.0;
        let hi = 1.0 + 2.0 * p * cos(phi);
        let lo = 1.0 + 2.0 * p * cos(phi + 2.0 * core::f64::consts::PI / 3.0);
        [lo, 3.0 - hi - lo, hi]
    }

    pub fn determinant(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        1.0 - a * a - b * b - c * c + 2.0 * a * b * c
    }

    /// Range of `b` giving a valid matrix for the given `a`, `c`.
    pub fn feasible_b(a: f64, c: f64) -> (f64, f64) {
        let r = sqrt((1.0 - a * a) * (1.0 - c * c));
        ((a * c - r).max(-1.0), (a * c + r).min(1.0))
    }

    /// Regression of `S` on `(X1, X2)`: coefficients and residual variance.
    fn regression(&self) -> Result<(f64, f64, f64)> {
        let (a, b, c) = (self.a, self.b, self.c);
        let det_x = 1.0 - b * b;
        let residual = self.determinant() / det_x;
        if det_x <= EIGEN_TOLERANCE || residual <= EIGEN_TOLERANCE {
            return Err(Error::DegenerateCovariance);
        }
        Ok(((a - b * c) / det_x, (c - a * b) / det_x, residual))
    }

    /// `I(S; X1, X2)` in closed form.
    pub fn joint_mi(&self) -> Result<f64> {
        let (_, _, residual) = self.regression()?;
        Ok(-0.5 * log2(residual))
    }

    /// Lower Cholesky factor of the covariance of `(X1, X2, S)`.
    fn cholesky(&self) -> Result<[[f64; 3]; 3]> {
        let m = [[1.0, self.b, self.a], [self.b, 1.0, self.c], [self.a, self.c, 1.0]];
        let mut l = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    let d = m[i][i] - s;
                    if d <= EIGEN_TOLERANCE {
                        return Err(Error::DegenerateCovariance);
                    }
                    l[i][j] = sqrt(d);
                } else {
                    l[i][j] = (m[i][j] - s) / l[j][j];
                }
            }
        }
        Ok(l)
    }
}

/// Closed-form `I_mmi` decomposition on the two-predictor lattice.
pub fn gaussian_immi_pid(sys: &GaussianSystem) -> Result<PidResult> {
    let i1 = gaussian_mi(sys.a)?;
    let i2 = gaussian_mi(sys.c)?;
    let icap = vec![i1.min(i2), i1, i2, sys.joint_mi()?];
    PidResult::from_icap(RedundancyLattice::build(2)?, "mmi", icap)
}

/// Monte-Carlo `I_ccs` decomposition using generator stream 0.
pub fn gaussian_iccs_pid(sys: &GaussianSystem, mc: &McOptions) -> Result<PidResult> {
    gaussian_iccs_pid_stream(sys, mc, 0)
}

/// Monte-Carlo `I_ccs` decomposition drawing from stream `stream` of the
/// seeded generator, so grid points can be evaluated in any order.
///
/// Every redundancy value, including the single-source and joint mutual
/// informations, is estimated from the same samples; standard errors are
/// the sample standard deviation of each per-sample term over `√N`.
pub fn gaussian_iccs_pid_stream(sys: &GaussianSystem, mc: &McOptions, stream: u64) -> Result<PidResult> {
    if mc.sample_count == 0 {
        return Err(Error::InvalidOption("sample_count must be positive".into()));
    }
    let l = sys.cholesky()?;
    let (beta1, beta2, var12) = sys.regression()?;
    let (a, c) = (sys.a, sys.c);
    let var1 = 1.0 - a * a;
    let var2 = 1.0 - c * c;
    let log2e = core::f64::consts::LOG2_E;
    // log2 N(s; m, v) - log2 N(s; 0, 1)
    let delta = |s: f64, m: f64, v: f64| -0.5 * log2(v) + 0.5 * log2e * (s * s - (s - m) * (s - m) / v);

    let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
    rng.set_stream(stream);
    // per-sample terms: redundancy values ({1}{2}, {1}, {2}, {12}) then atoms
    let mut stats = [Welford::default(); 8];
    for _ in 0..mc.sample_count {
        let z: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let x1 = l[0][0] * z[0];
        let x2 = l[1][0] * z[0] + l[1][1] * z[1];
        let s = l[2][0] * z[0] + l[2][1] * z[1] + l[2][2] * z[2];
        let d1 = delta(s, a * x1, var1);
        let d2 = delta(s, c * x2, var2);
        let d12 = delta(s, beta1 * x1 + beta2 * x2, var12);
        let co = d1 + d2 - d12;
        let lead = crate::math::sign(co, SIGN_DEAD_ZONE);
        let agree = lead != 0
            && crate::math::sign(d1, SIGN_DEAD_ZONE) == lead
            && crate::math::sign(d2, SIGN_DEAD_ZONE) == lead
            && crate::math::sign(d12, SIGN_DEAD_ZONE) == lead;
        let com = if agree { co } else { 0.0 };
        let terms = [com, d1, d2, d12, com, d1 - com, d2 - com, d12 - d1 - d2 + com];
        for (w, v) in stats.iter_mut().zip(terms) {
            w.push(v);
        }
    }
    let icap: Vec<f64> = stats[..4].iter().map(|w| w.mean).collect();
    let mut result = PidResult::from_icap(RedundancyLattice::build(2)?, "iccs_game", icap)?;
    if mc.report_standard_error {
        let n = mc.sample_count as f64;
        let se = |w: &Welford| sqrt(w.variance() / n);
        result.icap_standard_errors = Some(stats[..4].iter().map(se).collect());
        result.atom_standard_errors = Some(stats[4..].iter().map(se).collect());
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn variance(&self) -> f64 {
        if self.n > 1.0 {
            self.m2 / (self.n - 1.0)
        } else {
            0.0
        }
    }
}

/// One grid point of a Gaussian sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSweepRow {
    /// Position in the requested grid; also the generator stream.
    pub index: usize,
    pub b: f64,
    pub immi: PidResult,
    pub iccs: PidResult,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussianSweep {
    pub rows: Vec<GaussianSweepRow>,
    /// Grid values rejected as infeasible or degenerate.
    pub skipped: Vec<f64>,
}

/// Evaluates one sweep point; `Ok(None)` for an infeasible or degenerate `b`.
pub fn gaussian_sweep_point(a: f64, c: f64, b: f64, index: usize, mc: &McOptions) -> Result<Option<GaussianSweepRow>> {
    let sys = match GaussianSystem::new(a, b, c) {
        Ok(sys) => sys,
        Err(Error::InvalidCorrelation(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let immi = match gaussian_immi_pid(&sys) {
        Ok(r) => r,
        Err(Error::DegenerateCovariance) => return Ok(None),
        Err(e) => return Err(e),
    };
    let iccs = gaussian_iccs_pid_stream(&sys, mc, index as u64)?;
    Ok(Some(GaussianSweepRow { index, b, immi, iccs }))
}

/// Both decompositions at every `b` of the grid.
pub fn gaussian_sweep(a: f64, c: f64, b_grid: &[f64], mc: &McOptions) -> Result<GaussianSweep> {
    let mut out = GaussianSweep::default();
    for (index, &b) in b_grid.iter().enumerate() {
        match gaussian_sweep_point(a, c, b, index, mc)? {
            Some(row) => out.rows.push(row),
            None => out.skipped.push(b),
        }
    }
    Ok(out)
}

/// `count` evenly spaced values strictly inside the feasible `b` range,
/// inset from each end by `inset` times its width.
pub fn feasible_b_grid(a: f64, c: f64, count: usize, inset: f64) -> Vec<f64> {
    let (lo, hi) = GaussianSystem::feasible_b(a, c);
    let w = hi - lo;
    let (lo, hi) = (lo + inset * w, hi - inset * w);
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mi_examples() {
        assert_eq!(gaussian_mi(0.0).unwrap(), 0.0);
        assert!((gaussian_mi(0.5).unwrap() - 0.2075).abs() < 1e-4);
        assert!((gaussian_mi(0.6).unwrap() - 0.3219).abs() < 1e-4);
        assert_eq!(gaussian_mi(-0.6).unwrap(), gaussian_mi(0.6).unwrap());
        assert!(gaussian_mi(1.0).is_err());
    }

    #[test]
    fn feasibility() {
        assert!(GaussianSystem::new(0.5, -0.6, 0.5).is_err());
        assert!(GaussianSystem::new(0.5, -0.5, 0.5).is_ok());
        assert!(GaussianSystem::new(0.5, 1.2, 0.5).is_err());
        let (lo, hi) = GaussianSystem::feasible_b(0.5, 0.5);
        assert!((lo + 0.5).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        // eigenvalues against the characteristic polynomial
        let sys = GaussianSystem::new(0.3, -0.2, 0.7).unwrap();
        for l in sys.eigenvalues() {
            let m = [[1.0 - l, -0.2, 0.3], [-0.2, 1.0 - l, 0.7], [0.3, 0.7, 1.0 - l]];
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            assert!(det.abs() < 1e-12);
        }
    }

    #[test]
    fn immi_examples() {
        let r = gaussian_immi_pid(&GaussianSystem::new(0.5, 0.1, 0.5).unwrap()).unwrap();
        assert_eq!(r.ipartial[1], 0.0);
        assert_eq!(r.ipartial[2], 0.0);
        let r = gaussian_immi_pid(&GaussianSystem::new(0.4, 0.1, 0.6).unwrap()).unwrap();
        assert_eq!(r.icap[0], gaussian_mi(0.4).unwrap());
        assert_eq!(r.ipartial[1], 0.0);
        let r = gaussian_immi_pid(&GaussianSystem::new(0.0, 0.3, 0.6).unwrap()).unwrap();
        assert_eq!(r.icap[0], 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let sys = GaussianSystem::new(0.5, 0.2, 0.5).unwrap();
        let mc = McOptions { sample_count: 20_000, seed: 7, report_standard_error: true };
        let a = gaussian_iccs_pid(&sys, &mc).unwrap();
        let b = gaussian_iccs_pid(&sys, &mc).unwrap();
        assert_eq!(a, b);
        let other = gaussian_iccs_pid_stream(&sys, &mc, 1).unwrap();
        assert_ne!(a.icap, other.icap);
    }

    #[test]
    fn self_redundancy_within_three_standard_errors() {
        let sys = GaussianSystem::new(0.5, 0.25, 0.5).unwrap();
        let mc = McOptions { sample_count: 200_000, seed: 3, report_standard_error: true };
        let r = gaussian_iccs_pid(&sys, &mc).unwrap();
        let se = r.icap_standard_errors.as_ref().unwrap();
        let exact = gaussian_mi(0.5).unwrap();
        assert!((r.icap[1] - exact).abs() < 3.0 * se[1]);
        assert!((r.icap[2] - exact).abs() < 3.0 * se[2]);
        assert!((r.icap[3] - sys.joint_mi().unwrap()).abs() < 3.0 * se[3]);
    }

    #[test]
    fn sweep_skips_infeasible() {
        let mc = McOptions { sample_count: 1000, ..Default::default() };
        let s = gaussian_sweep(0.5, 0.5, &[-0.9, 0.0, 1.0], &mc).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.skipped, [-0.9, 1.0]);
        assert!(gaussian_sweep(0.5, 0.5, &[], &mc).unwrap().rows.is_empty());
        assert_eq!(feasible_b_grid(0.5, 0.5, 3, 0.0), [-0.5, 0.25, 1.0]);
    }
}
