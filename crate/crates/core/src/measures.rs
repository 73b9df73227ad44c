//! Redundancy measures and the decomposition pipeline.
//!
//! - `I_ccs`: expected pointwise co-information, counted only where every
//!   source, the sources jointly and the co-information change the target
//!   surprisal in the same direction. Evaluated on a max-ent surrogate of
//!   the reference.
//! - `I_min`: expected minimum specific information.
//! - `I_broja`: co-information at the joint-MI minimiser over the
//!   distributions sharing the predictor-target marginals (two predictors).
//! - `I_mmi`: the smallest single-source mutual information.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dist::{AxisSet, JointDistribution, LocalTermRow, LocalTermTable, Marginals, Source};
use crate::error::{Error, Result};
use crate::lattice::{Antichain, PidResult, RedundancyLattice};
use crate::math::{log2, sign};
use crate::optim::{broja_minimize_joint_mi, maxent_under_marginals, ConstraintSet, SolverOptions, SolverReport};

/// Magnitudes below this count as sign zero in the `I_ccs` filter.
pub const SIGN_DEAD_ZONE: f64 = 1e-12;

/// Which constraints define the `I_ccs` evaluation distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IccsVariant {
    /// Source-target marginals plus the joint marginal of all sources.
    #[default]
    Game,
    /// Source-target marginals only.
    Decision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureChoice {
    Iccs(IccsVariant),
    Imin,
    Broja,
    Mmi,
}

impl Default for MeasureChoice {
    fn default() -> Self {
        MeasureChoice::Iccs(IccsVariant::Game)
    }
}

impl MeasureChoice {
    pub fn label(&self) -> &'static str {
        match self {
            MeasureChoice::Iccs(IccsVariant::Game) => "iccs_game",
            MeasureChoice::Iccs(IccsVariant::Decision) => "iccs_decision",
            MeasureChoice::Imin => "imin",
            MeasureChoice::Broja => "broja",
            MeasureChoice::Mmi => "mmi",
        }
    }
}

impl fmt::Display for MeasureChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A row where the overlap exceeds the smaller single-source local information.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityViolation {
    pub outcome: Vec<usize>,
    pub coinformation: f64,
    pub min_abs_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IccsEvaluation {
    pub value: f64,
    pub table: LocalTermTable,
    pub report: SolverReport,
    pub violations: Vec<ContinuityViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrojaEvaluation {
    pub value: f64,
    /// The joint-MI minimiser.
    pub distribution: JointDistribution,
    pub report: SolverReport,
}

/// Position-compressed copy of `axes` inside the kept axes `keep`.
fn reindex(axes: AxisSet, keep: AxisSet) -> AxisSet {
    AxisSet::from_axes(keep.iter().enumerate().filter(|&(_, a)| axes.contains(a)).map(|(i, _)| i))
}

/// `I_ccs(S; node)` with its pointwise table.
pub fn iccs(
    reference: &JointDistribution,
    node: &Antichain,
    variant: IccsVariant,
    opts: &SolverOptions,
) -> Result<IccsEvaluation> {
    let t = reference.target_axis()?;
    let source_axes = node
        .sources()
        .iter()
        .map(|&s| reference.source_axes(s))
        .collect::<Result<Vec<_>>>()?;
    let union = source_axes.iter().fold(AxisSet::empty(), |acc, &a| acc.union(a));
    let keep = union.union(AxisSet::single(t));
    let local = reference.marginalize(keep)?;

    let s = reindex(AxisSet::single(t), keep);
    let sources: Vec<AxisSet> = source_axes.iter().map(|&a| reindex(a, keep)).collect();
    let joint = reindex(union, keep);
    let mut constraints: Vec<AxisSet> = sources.iter().map(|&a| a.union(s)).collect();
    if variant == IccsVariant::Game {
        constraints.push(joint);
    }
    let (phat, report) = maxent_under_marginals(&ConstraintSet::new(local, constraints)?, opts)?;
    if !report.converged {
        return Err(Error::NotConverged(report));
    }

    let mut groups = sources.clone();
    groups.push(s);
    let mut marginals = Marginals::new(&phat);
    let mut rows = Vec::new();
    for (outcome, prob) in phat.support() {
        let source_deltas = sources
            .iter()
            .map(|&a| marginals.surprisal_delta(a, s, &outcome))
            .collect::<Result<Vec<_>>>()?;
        let joint_delta = marginals.surprisal_delta(joint, s, &outcome)?;
        let coinformation = marginals.local_coinformation(&groups, &outcome)?;
        let lead = sign(coinformation, SIGN_DEAD_ZONE);
        let agree = lead != 0
            && sign(joint_delta, SIGN_DEAD_ZONE) == lead
            && source_deltas.iter().all(|&d| sign(d, SIGN_DEAD_ZONE) == lead);
        rows.push(LocalTermRow {
            outcome,
            prob,
            source_deltas,
            joint_delta,
            coinformation,
            common: if agree { coinformation } else { 0.0 },
        });
    }
    let table = LocalTermTable { axes: keep.iter().collect(), rows };
    let violations = continuity_check(&table);
    Ok(IccsEvaluation { value: table.expectation(), table, report, violations })
}

/// `I_ccs` for an arbitrary collection of sources. A source containing
/// another listed source is dropped first: on the evaluation distribution
/// its local co-information terms cancel against the smaller source's.
pub fn iccs_sources(
    reference: &JointDistribution,
    sources: &[Source],
    variant: IccsVariant,
    opts: &SolverOptions,
) -> Result<IccsEvaluation> {
    iccs(reference, &minimal_sources(sources)?, variant, opts)
}

/// The antichain of minimal elements of a source collection.
pub fn minimal_sources(sources: &[Source]) -> Result<Antichain> {
    let mut kept: Vec<Source> = Vec::new();
    for &s in sources {
        let dominated = sources.iter().any(|&o| o != s && o.is_subset(s));
        if !dominated && !kept.contains(&s) {
            kept.push(s);
        }
    }
    Antichain::new(kept)
}

/// `I_min(S; node) = Σ_s p(s) min_i I(S=s; A_i)`.
pub fn imin(reference: &JointDistribution, node: &Antichain) -> Result<f64> {
    let t = reference.target_axis()?;
    for &src in node.sources() {
        reference.source_axes(src)?;
    }
    let p_s = reference.marginal_table(AxisSet::single(t))?;
    let mut total = 0.0;
    for (s, &ps) in p_s.iter().enumerate() {
        if ps <= 0.0 {
            continue;
        }
        let mut least = f64::INFINITY;
        for &src in node.sources() {
            least = least.min(reference.specific_information(src, s)?);
        }
        total += ps * least;
    }
    Ok(total)
}

/// `I_mmi(S; node) = min_i I(S; A_i)`.
pub fn immi(reference: &JointDistribution, node: &Antichain) -> Result<f64> {
    let s = reference.target_set()?;
    let mut least = f64::INFINITY;
    for &src in node.sources() {
        least = least.min(reference.mutual_information(reference.source_axes(src)?, s)?);
    }
    Ok(least)
}

/// `I_broja(S; {1}{2})`: `I(S;X1) + I(S;X2) - min_Q I_Q(S; X1, X2)`.
pub fn broja_redundancy(reference: &JointDistribution, opts: &SolverOptions) -> Result<BrojaEvaluation> {
    let (distribution, report) = broja_minimize_joint_mi(reference, opts)?;
    if !report.converged {
        return Err(Error::NotConverged(report));
    }
    let s = reference.target_set()?;
    let preds = reference.predictor_axes();
    let value = reference.mutual_information(AxisSet::single(preds[0]), s)?
        + reference.mutual_information(AxisSet::single(preds[1]), s)?
        - report.objective;
    Ok(BrojaEvaluation { value, distribution, report })
}

/// Full decomposition: redundancy for every lattice node (plain mutual
/// information for single-source nodes), then Möbius inversion.
pub fn pid(reference: &JointDistribution, measure: MeasureChoice, opts: &SolverOptions) -> Result<PidResult> {
    let s = reference.target_set()?;
    let n = reference.n_predictors();
    let lattice = RedundancyLattice::build(n)?;
    if measure == MeasureChoice::Broja && n != 2 {
        return Err(Error::UnsupportedMeasure(format!("broja needs 2 predictors, got {n}")));
    }
    let mut icap = Vec::with_capacity(lattice.len());
    let mut reports = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    for (i, node) in lattice.nodes().iter().enumerate() {
        let value = if node.len() == 1 {
            reference.mutual_information(reference.source_axes(node.sources()[0])?, s)?
        } else {
            match measure {
                MeasureChoice::Iccs(variant) => {
                    let ev = iccs(reference, node, variant, opts)?;
                    for v in &ev.violations {
                        warnings.push(format!(
                            "continuity condition fails at node {node}, outcome {:?}: |c| = {:.6} > {:.6}",
                            v.outcome,
                            v.coinformation.abs(),
                            v.min_abs_delta
                        ));
                    }
                    reports.push((i, ev.report));
                    ev.value
                }
                MeasureChoice::Imin => imin(reference, node)?,
                MeasureChoice::Mmi => immi(reference, node)?,
                MeasureChoice::Broja => {
                    let ev = broja_redundancy(reference, opts)?;
                    reports.push((i, ev.report));
                    ev.value
                }
            }
        };
        icap.push(value);
    }
    let mut result = PidResult::from_icap(lattice, measure.label(), icap)?;
    result.reports = reports;
    result.warnings = warnings;
    Ok(result)
}

fn two_sources(sources: &[Source]) -> Result<(Source, Source)> {
    match sources {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::InvalidSource(format!("need exactly 2 sources, got {}", sources.len()))),
    }
}

/// `Σ_s p(s) max[I(S=s;A1) + I(S=s;A2) - I(S=s;A1,A2), 0]`.
pub fn target_specific_coinfo(reference: &JointDistribution, sources: &[Source]) -> Result<f64> {
    let (a1, a2) = two_sources(sources)?;
    let t = reference.target_axis()?;
    let both = a1.union(a2);
    let p_s = reference.marginal_table(AxisSet::single(t))?;
    let mut total = 0.0;
    for (s, &ps) in p_s.iter().enumerate() {
        if ps > 0.0 {
            let overlap = reference.specific_information(a1, s)? + reference.specific_information(a2, s)?
                - reference.specific_information(both, s)?;
            total += ps * overlap.max(0.0);
        }
    }
    Ok(total)
}

/// `Σ_{a1,a2} p(a1,a2) max[I(S;a1) + I(S;a2) - I(S;a1,a2), 0]` with
/// `I(S;a) = Σ_s p(s|a) log2[p(s|a) / p(s)]`.
pub fn source_specific_coinfo(reference: &JointDistribution, sources: &[Source]) -> Result<f64> {
    let (a1, a2) = two_sources(sources)?;
    let t = reference.target_axis()?;
    let s_axes = AxisSet::single(t);
    let x1 = reference.source_axes(a1)?;
    let x2 = reference.source_axes(a2)?;
    let x12 = x1.union(x2);
    let mut marginals = Marginals::new(reference);
    let mut values: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (outcome, _) in reference.support() {
        values.entry(reference.sub_index(x12, &outcome)).or_insert(outcome);
    }
    let mut total = 0.0;
    for (_, outcome) in values {
        let p = marginals.prob(x12, &outcome);
        let overlap = source_value_information(&mut marginals, x1, s_axes, t, &outcome)
            + source_value_information(&mut marginals, x2, s_axes, t, &outcome)
            - source_value_information(&mut marginals, x12, s_axes, t, &outcome);
        total += p * overlap.max(0.0);
    }
    Ok(total)
}

fn source_value_information(m: &mut Marginals<'_>, a: AxisSet, s: AxisSet, t: usize, outcome: &[usize]) -> f64 {
    let mut point = outcome.to_vec();
    let p_a = m.prob(a, &point);
    let mut total = 0.0;
    for v in 0..m.dist().cards()[t] {
        point[t] = v;
        let p_as = m.prob(a.union(s), &point);
        if p_as > 0.0 {
            let p_s = m.prob(s, &point);
            total += p_as / p_a * log2(p_as / (p_a * p_s));
        }
    }
    total
}

/// Rows that pass the common-sign test but whose co-information exceeds
/// the smallest single-source local information in magnitude.
pub fn continuity_check(table: &LocalTermTable) -> Vec<ContinuityViolation> {
    table
        .rows
        .iter()
        .filter(|r| {
            let lead = sign(r.coinformation, SIGN_DEAD_ZONE);
            lead != 0 && r.source_deltas.iter().all(|&d| sign(d, SIGN_DEAD_ZONE) == lead)
        })
        .filter_map(|r| {
            let min_abs = r.source_deltas.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
            (r.coinformation.abs() > min_abs + SIGN_DEAD_ZONE).then(|| ContinuityViolation {
                outcome: r.outcome.clone(),
                coinformation: r.coinformation,
                min_abs_delta: min_abs,
            })
        })
        .collect()
}
