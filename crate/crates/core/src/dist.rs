//! Dense joint distributions over finite alphabets and the information
//! quantities defined on them.
//!
//! Axes are numbered from 0 in storage order. One axis may be designated
//! the target `S`; the remaining axes are the predictors, addressed by
//! 1-based predictor index in [`Source`] values (predictor `i` is the
//! `i`-th non-target axis in ascending order).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::{log2, xlog2x};

/// Tolerance on the total probability mass accepted at construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A set of axes, stored as a bitmask (at most 32 axes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AxisSet(u32);

impl AxisSet {
    pub const fn empty() -> Self {
        AxisSet(0)
    }

    pub const fn from_bits(bits: u32) -> Self {
        AxisSet(bits)
    }

    pub fn single(axis: usize) -> Self {
        AxisSet(1 << axis)
    }

    pub fn from_axes<I: IntoIterator<Item = usize>>(axes: I) -> Self {
        AxisSet(axes.into_iter().fold(0, |m, a| m | (1 << a)))
    }

    /// All axes `0..n`.
    pub fn all(n: usize) -> Self {
        if n >= 32 {
            AxisSet(u32::MAX)
        } else {
            AxisSet((1u32 << n) - 1)
        }
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, axis: usize) -> bool {
        axis < 32 && self.0 & (1 << axis) != 0
    }

    pub fn union(self, other: AxisSet) -> AxisSet {
        AxisSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AxisSet) -> AxisSet {
        AxisSet(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: AxisSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: AxisSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Axes in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&a| self.0 & (1 << a) != 0)
    }

    fn max_axis(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(31 - self.0.leading_zeros() as usize)
        }
    }
}

/// A nonempty set of predictors, by 1-based predictor index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Source(u16);

impl Source {
    /// Builds a source from 1-based predictor indices.
    pub fn new(members: &[usize]) -> Result<Self> {
        let mut bits = 0u16;
        for &m in members {
            if m == 0 || m > 16 {
                return Err(Error::InvalidSource(format!("predictor index {m} out of 1..=16")));
            }
            if bits & (1 << (m - 1)) != 0 {
                return Err(Error::InvalidSource(format!("predictor {m} repeated")));
            }
            bits |= 1 << (m - 1);
        }
        if bits == 0 {
            return Err(Error::InvalidSource("empty source".into()));
        }
        Ok(Source(bits))
    }

    pub(crate) fn from_bits(bits: u16) -> Self {
        debug_assert!(bits != 0);
        Source(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// Member predictor indices, ascending, 1-based.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&i| self.0 & (1 << i) != 0).map(|i| i + 1)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Source) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Source) -> Source {
        Source(self.0 | other.0)
    }

    fn max_member(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }
}

impl Ord for Source {
    /// Smaller sources first, then lexicographic by members, so that nodes
    /// print as `{3}{12}` and `{12}{13}{23}`.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Source {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for m in self.members() {
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Dense probability table over a product of finite alphabets, row-major
/// (last axis varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    cards: Vec<usize>,
    probs: Vec<f64>,
    target: Option<usize>,
}

impl JointDistribution {
    /// Validates and wraps a dense table.
    pub fn new(cards: Vec<usize>, probs: Vec<f64>, target: Option<usize>) -> Result<Self> {
        if cards.is_empty() {
            return Err(Error::InvalidDistribution("no axes".into()));
        }
        if cards.len() > 32 {
            return Err(Error::InvalidDistribution("more than 32 axes".into()));
        }
        if let Some(pos) = cards.iter().position(|&c| c == 0) {
            return Err(Error::InvalidDistribution(format!("axis {pos} has cardinality 0")));
        }
        let size = cards
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c))
            .ok_or_else(|| Error::InvalidDistribution("table too large".into()))?;
        if probs.len() != size {
            return Err(Error::InvalidDistribution(format!(
                "expected {size} cells, got {}",
                probs.len()
            )));
        }
        if let Some(t) = target {
            if t >= cards.len() {
                return Err(Error::AxisOutOfRange { axis: t, n_axes: cards.len() });
            }
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(JointDistribution { cards, probs, target })
    }

    /// Builds a distribution from explicit `(outcome, probability)` rows;
    /// omitted outcomes are zero. Repeated outcomes are rejected.
    pub fn from_outcomes<'a, I>(cards: Vec<usize>, target: Option<usize>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [usize], f64)>,
    {
        let size: usize = cards.iter().product();
        let mut probs = vec![0.0; size];
        let mut seen = vec![false; size];
        for (outcome, p) in rows {
            let idx = index_in(&cards, outcome)?;
            if seen[idx] {
                return Err(Error::InvalidDistribution(format!("duplicate outcome {outcome:?}")));
            }
            seen[idx] = true;
            probs[idx] = p;
        }
        Self::new(cards, probs, target)
    }

    /// Uniform distribution over the listed outcomes.
    pub fn equiprobable(cards: Vec<usize>, target: Option<usize>, outcomes: &[&[usize]]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let p = 1.0 / outcomes.len() as f64;
        Self::from_outcomes(cards, target, outcomes.iter().map(|o| (*o, p)))
    }

    /// Same alphabet and target, new probabilities.
    pub fn with_probs(&self, probs: Vec<f64>) -> Result<Self> {
        Self::new(self.cards.clone(), probs, self.target)
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_axes(&self) -> usize {
        self.cards.len()
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn target_axis(&self) -> Result<usize> {
        self.target.ok_or(Error::NoTarget)
    }

    pub fn target_set(&self) -> Result<AxisSet> {
        self.target_axis().map(AxisSet::single)
    }

    /// Non-target axes in ascending order; predictor `i` is element `i - 1`.
    pub fn predictor_axes(&self) -> Vec<usize> {
        (0..self.n_axes()).filter(|&a| Some(a) != self.target).collect()
    }

    pub fn n_predictors(&self) -> usize {
        self.n_axes() - usize::from(self.target.is_some())
    }

    pub fn all_axes(&self) -> AxisSet {
        AxisSet::all(self.n_axes())
    }

    /// All predictor axes.
    pub fn predictor_set(&self) -> AxisSet {
        AxisSet::from_axes(self.predictor_axes())
    }

    /// Axes underlying a source.
    pub fn source_axes(&self, source: Source) -> Result<AxisSet> {
        let preds = self.predictor_axes();
        if source.max_member() > preds.len() {
            return Err(Error::InvalidSource(format!(
                "{source} refers to predictor {} but only {} exist",
                source.max_member(),
                preds.len()
            )));
        }
        Ok(AxisSet::from_axes(source.members().map(|m| preds[m - 1])))
    }

    pub fn index_of(&self, outcome: &[usize]) -> Result<usize> {
        index_in(&self.cards, outcome)
    }

    pub fn outcome_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_axes()];
        for (slot, &c) in out.iter_mut().zip(&self.cards).rev() {
            *slot = index % c;
            index /= c;
        }
        out
    }

    pub fn prob(&self, outcome: &[usize]) -> Result<f64> {
        Ok(self.probs[self.index_of(outcome)?])
    }

    /// Outcomes with positive probability, in storage order.
    pub fn support(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| (self.outcome_of(i), p))
    }

    fn check_axes(&self, axes: AxisSet) -> Result<()> {
        if axes.is_empty() {
            return Err(Error::EmptyAxisSet);
        }
        match axes.max_axis() {
            Some(a) if a >= self.n_axes() => Err(Error::AxisOutOfRange { axis: a, n_axes: self.n_axes() }),
            _ => Ok(()),
        }
    }

    /// Cardinalities of the kept axes, ascending axis order.
    pub(crate) fn sub_cards(&self, axes: AxisSet) -> Vec<usize> {
        axes.iter().map(|a| self.cards[a]).collect()
    }

    /// Index of `outcome` (a full tuple) inside the marginal table over `axes`.
    pub(crate) fn sub_index(&self, axes: AxisSet, outcome: &[usize]) -> usize {
        axes.iter().fold(0, |acc, a| acc * self.cards[a] + outcome[a])
    }

    /// For every cell of the full table, its index in the marginal over `axes`.
    pub(crate) fn projection_map(&self, axes: AxisSet) -> Vec<usize> {
        let n = self.n_axes();
        let mut map = Vec::with_capacity(self.probs.len());
        let mut tuple = vec![0usize; n];
        for _ in 0..self.probs.len() {
            map.push(self.sub_index(axes, &tuple));
            for k in (0..n).rev() {
                tuple[k] += 1;
                if tuple[k] < self.cards[k] {
                    break;
                }
                tuple[k] = 0;
            }
        }
        map
    }

    /// Dense marginal table over `axes` (ascending axis order, row-major).
    pub fn marginal_table(&self, axes: AxisSet) -> Result<Vec<f64>> {
        self.check_axes(axes)?;
        Ok(self.marginal_unchecked(axes))
    }

    pub(crate) fn marginal_unchecked(&self, axes: AxisSet) -> Vec<f64> {
        let size: usize = self.sub_cards(axes).iter().product();
        let mut out = vec![0.0; size];
        if axes == self.all_axes() {
            out.copy_from_slice(&self.probs);
            return out;
        }
        for (cell, idx) in self.projection_map(axes).into_iter().enumerate() {
            out[idx] += self.probs[cell];
        }
        out
    }

    /// Marginal distribution over `keep`; the target survives (re-indexed)
    /// only if it is kept.
    pub fn marginalize(&self, keep: AxisSet) -> Result<JointDistribution> {
        self.check_axes(keep)?;
        let target = self
            .target
            .filter(|&t| keep.contains(t))
            .map(|t| keep.iter().position(|a| a == t).unwrap());
        Self::new(self.sub_cards(keep), self.marginal_unchecked(keep), target)
    }

    /// Reorders axes: new axis `k` is old axis `order[k]`.
    pub fn permute_axes(&self, order: &[usize]) -> Result<JointDistribution> {
        let n = self.n_axes();
        let mut used = vec![false; n];
        if order.len() != n || order.iter().any(|&a| a >= n || core::mem::replace(&mut used[a], true)) {
            return Err(Error::InvalidDistribution(format!("bad permutation {order:?}")));
        }
        let cards: Vec<usize> = order.iter().map(|&a| self.cards[a]).collect();
        let mut probs = vec![0.0; self.probs.len()];
        let mut new_outcome = vec![0; n];
        for (i, &p) in self.probs.iter().enumerate() {
            let old = self.outcome_of(i);
            for (k, &a) in order.iter().enumerate() {
                new_outcome[k] = old[a];
            }
            probs[index_in(&cards, &new_outcome)?] = p;
        }
        let target = self.target.map(|t| order.iter().position(|&a| a == t).unwrap());
        Self::new(cards, probs, target)
    }

    /// Entropy of the full table, bits.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
    }

    /// Entropy of the marginal over `axes`, bits.
    pub fn entropy_of(&self, axes: AxisSet) -> Result<f64> {
        self.check_axes(axes)?;
        Ok(self.entropy_unchecked(axes))
    }

    fn entropy_unchecked(&self, axes: AxisSet) -> f64 {
        -self.marginal_unchecked(axes).iter().map(|&p| xlog2x(p)).sum::<f64>()
    }

    /// `I(A;B) = H(A) + H(B) - H(A,B)` in bits.
    pub fn mutual_information(&self, a: AxisSet, b: AxisSet) -> Result<f64> {
        self.check_axes(a)?;
        self.check_axes(b)?;
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingAxes);
        }
        Ok(self.entropy_unchecked(a) + self.entropy_unchecked(b) - self.entropy_unchecked(a.union(b)))
    }

    /// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
    pub fn conditional_mutual_information(&self, a: AxisSet, b: AxisSet, given: AxisSet) -> Result<f64> {
        self.check_axes(a)?;
        self.check_axes(b)?;
        self.check_axes(given)?;
        if !a.is_disjoint(b) || !a.is_disjoint(given) || !b.is_disjoint(given) {
            return Err(Error::OverlappingAxes);
        }
        Ok(self.entropy_unchecked(a.union(given)) + self.entropy_unchecked(b.union(given))
            - self.entropy_unchecked(a.union(b).union(given))
            - self.entropy_unchecked(given))
    }

    /// Co-information of disjoint groups: the alternating sum
    /// `sum_{T nonempty} (-1)^{|T|+1} H(T)`. Equals mutual information for
    /// two groups and is positive for net redundancy.
    pub fn coinformation(&self, groups: &[AxisSet]) -> Result<f64> {
        self.check_groups(groups, true)?;
        let mut total = 0.0;
        for mask in 1u32..(1 << groups.len()) {
            let h = self.entropy_unchecked(union_of(groups, mask));
            total += if mask.count_ones() % 2 == 1 { h } else { -h };
        }
        Ok(total)
    }

    /// Local (pointwise) co-information of `outcome` over disjoint groups.
    pub fn local_coinformation(&self, groups: &[AxisSet], outcome: &[usize]) -> Result<f64> {
        self.check_groups(groups, true)?;
        self.index_of(outcome)?;
        let mut marginals = Marginals::new(self);
        marginals.local_coinformation(groups, outcome)
    }

    fn check_groups(&self, groups: &[AxisSet], disjoint: bool) -> Result<()> {
        if groups.len() < 2 {
            return Err(Error::TooFewGroups(groups.len()));
        }
        let mut seen = AxisSet::empty();
        for &g in groups {
            self.check_axes(g)?;
            if disjoint && !seen.is_disjoint(g) {
                return Err(Error::OverlappingAxes);
            }
            seen = seen.union(g);
        }
        Ok(())
    }

    /// `Δ_s h(a) = log2 p(s|a) - log2 p(s)` for the source values and target
    /// value taken from `outcome` (a full tuple).
    pub fn local_surprisal_delta(&self, source: Source, outcome: &[usize]) -> Result<f64> {
        let axes = self.source_axes(source)?;
        self.index_of(outcome)?;
        let mut marginals = Marginals::new(self);
        marginals.surprisal_delta(axes, self.target_set()?, outcome)
    }

    /// Specific information `I(S=s; A) = sum_a p(a|s) log2[p(s|a) / p(s)]`.
    pub fn specific_information(&self, source: Source, s: usize) -> Result<f64> {
        let t = self.target_axis()?;
        let a = self.source_axes(source)?;
        if s >= self.cards[t] {
            return Err(Error::InvalidOutcome);
        }
        let ts = AxisSet::single(t);
        let p_s = self.marginal_unchecked(ts)[s];
        if p_s <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        let joint_axes = a.union(ts);
        let p_as = self.marginal_unchecked(joint_axes);
        let p_a = self.marginal_unchecked(a);
        // walk the (A, S) table; S position within the joint ordering
        let sub_cards = self.sub_cards(joint_axes);
        let s_pos = joint_axes.iter().position(|x| x == t).unwrap();
        let mut total = 0.0;
        let mut tuple = vec![0usize; sub_cards.len()];
        for &pas in &p_as {
            if tuple[s_pos] == s && pas > 0.0 {
                let a_idx = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != s_pos)
                    .fold(0, |acc, (k, &v)| acc * sub_cards[k] + v);
                total += pas / p_s * log2(pas / (p_a[a_idx] * p_s));
            }
            for k in (0..tuple.len()).rev() {
                tuple[k] += 1;
                if tuple[k] < sub_cards[k] {
                    break;
                }
                tuple[k] = 0;
            }
        }
        Ok(total)
    }

    /// Checks the three-variable interaction-information bounds
    /// `-min[I(S;X), I(S;Y), I(X;Y)] <= I(X;Y;S) <= min[I(S;X|Y), I(S;Y|X), I(X;Y|S)]`
    /// where `I(X;Y;S) = I(X,Y;S) - I(X;S) - I(Y;S)`.
    pub fn coinformation_bounds_check(&self, x: AxisSet, y: AxisSet, s: AxisSet) -> Result<BoundsReport> {
        let i_xs = self.mutual_information(x, s)?;
        let i_ys = self.mutual_information(y, s)?;
        let i_xy = self.mutual_information(x, y)?;
        let interaction = self.mutual_information(x.union(y), s)? - i_xs - i_ys;
        let lower = -min3(i_xs, i_ys, i_xy);
        let upper = min3(
            self.conditional_mutual_information(s, x, y)?,
            self.conditional_mutual_information(s, y, x)?,
            self.conditional_mutual_information(x, y, s)?,
        );
        Ok(BoundsReport {
            interaction_information: interaction,
            lower_bound: lower,
            upper_bound: upper,
        })
    }
}

fn min3(a: f64, b: f64, c: f64) -> f64 {
    a.min(b).min(c)
}

fn union_of(groups: &[AxisSet], mask: u32) -> AxisSet {
    groups
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .fold(AxisSet::empty(), |acc, (_, &g)| acc.union(g))
}

fn index_in(cards: &[usize], outcome: &[usize]) -> Result<usize> {
    if outcome.len() != cards.len() {
        return Err(Error::InvalidOutcome);
    }
    let mut idx = 0;
    for (&v, &c) in outcome.iter().zip(cards) {
        if v >= c {
            return Err(Error::InvalidOutcome);
        }
        idx = idx * c + v;
    }
    Ok(idx)
}

/// Result of [`JointDistribution::coinformation_bounds_check`]. Values in bits,
/// using the interaction-information sign convention (positive = synergy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub interaction_information: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl BoundsReport {
    pub fn lower_margin(&self) -> f64 {
        self.interaction_information - self.lower_bound
    }

    pub fn upper_margin(&self) -> f64 {
        self.upper_bound - self.interaction_information
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower_margin() >= -tol && self.upper_margin() >= -tol
    }
}

/// Marginal tables of one distribution, computed on demand and kept for the
/// lifetime of the evaluation.
pub struct Marginals<'a> {
    dist: &'a JointDistribution,
    tables: BTreeMap<AxisSet, Vec<f64>>,
}

impl<'a> Marginals<'a> {
    pub fn new(dist: &'a JointDistribution) -> Self {
        Marginals { dist, tables: BTreeMap::new() }
    }

    pub fn dist(&self) -> &'a JointDistribution {
        self.dist
    }

    /// Probability of the restriction of `outcome` to `axes`.
    pub fn prob(&mut self, axes: AxisSet, outcome: &[usize]) -> f64 {
        if axes.is_empty() {
            return 1.0;
        }
        let dist = self.dist;
        let table = self.tables.entry(axes).or_insert_with(|| dist.marginal_unchecked(axes));
        table[dist.sub_index(axes, outcome)]
    }

    /// Pointwise entropy `-log2 p(outcome restricted to axes)`.
    pub fn surprisal(&mut self, axes: AxisSet, outcome: &[usize]) -> Result<f64> {
        let p = self.prob(axes, outcome);
        if p <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        Ok(-log2(p))
    }

    /// `log2 p(t|a) - log2 p(t)`.
    pub fn surprisal_delta(&mut self, a: AxisSet, t: AxisSet, outcome: &[usize]) -> Result<f64> {
        let h_t = self.surprisal(t, outcome)?;
        let h_a = self.surprisal(a, outcome)?;
        let h_at = self.surprisal(a.union(t), outcome)?;
        // h(t) - h(t|a) with h(t|a) = h(a,t) - h(a)
        Ok(h_t - (h_at - h_a))
    }

    /// Alternating sum of pointwise entropies over the unions of nonempty
    /// subsets of `groups`. Groups may overlap; overlapping members are
    /// treated as one underlying variable.
    pub fn local_coinformation(&mut self, groups: &[AxisSet], outcome: &[usize]) -> Result<f64> {
        let mut total = 0.0;
        for mask in 1u32..(1 << groups.len()) {
            let h = self.surprisal(union_of(groups, mask), outcome)?;
            total += if mask.count_ones() % 2 == 1 { h } else { -h };
        }
        Ok(total)
    }
}

/// One row of a pointwise table: a support outcome of the evaluation
/// distribution and its local terms (bits).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTermRow {
    /// Values of the axes listed in [`LocalTermTable::axes`].
    pub outcome: Vec<usize>,
    pub prob: f64,
    /// `Δ_s h(a_i)` per source, in node order.
    pub source_deltas: Vec<f64>,
    /// `Δ_s h(a_1, …, a_n)` for all sources jointly.
    pub joint_delta: f64,
    /// Local co-information `c(a_1; …; a_n; s)`.
    pub coinformation: f64,
    /// Common change in surprisal (the co-information when all signs agree, else 0).
    pub common: f64,
}

/// Pointwise terms of one `I_ccs` evaluation. `axes` lists the axes of the
/// original reference distribution the row outcomes refer to (source
/// members followed by the target, ascending).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalTermTable {
    pub axes: Vec<usize>,
    pub rows: Vec<LocalTermRow>,
}

impl LocalTermTable {
    /// `sum p * common`.
    pub fn expectation(&self) -> f64 {
        self.rows.iter().map(|r| r.prob * r.common).sum()
    }

    pub fn row(&self, outcome: &[usize]) -> Option<&LocalTermRow> {
        self.rows.iter().find(|r| r.outcome == outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rdn() -> JointDistribution {
        JointDistribution::equiprobable(vec![2, 2, 2], Some(2), &[&[0, 0, 0], &[1, 1, 1]]).unwrap()
    }

    fn and() -> JointDistribution {
        JointDistribution::equiprobable(
            vec![2, 2, 2],
            Some(2),
            &[&[0, 0, 0], &[0, 1, 0], &[1, 0, 0], &[1, 1, 1]],
        )
        .unwrap()
    }

    fn xor() -> JointDistribution {
        JointDistribution::equiprobable(
            vec![2, 2, 2],
            Some(2),
            &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 0]],
        )
        .unwrap()
    }

    fn sum() -> JointDistribution {
        JointDistribution::equiprobable(
            vec![2, 2, 3],
            Some(2),
            &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 2]],
        )
        .unwrap()
    }

    fn uniquemis() -> JointDistribution {
        JointDistribution::from_outcomes(
            vec![2, 2, 2],
            Some(2),
            [(&[0usize, 0, 0][..], 0.4), (&[0, 1, 0][..], 0.1), (&[1, 1, 1][..], 0.5)],
        )
        .unwrap()
    }

    const X1: AxisSet = AxisSet::from_bits(0b001);
    const X2: AxisSet = AxisSet::from_bits(0b010);
    const S: AxisSet = AxisSet::from_bits(0b100);

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(JointDistribution::new(vec![2], vec![0.5, 0.4], None).is_err());
        assert!(JointDistribution::new(vec![2, 0], vec![], None).is_err());
        assert!(JointDistribution::new(vec![2], vec![1.5, -0.5], None).is_err());
        assert!(JointDistribution::new(vec![2], vec![0.5, 0.5], Some(1)).is_err());
        assert!(JointDistribution::from_outcomes(vec![2], None, [(&[0usize][..], 0.5), (&[0][..], 0.5)]).is_err());
        // within the construction tolerance
        assert!(JointDistribution::new(vec![2], vec![0.5, 0.5 + 1e-10], None).is_ok());
    }

    #[test]
    fn marginalize_examples() {
        let m = rdn().marginalize(X1).unwrap();
        assert_eq!(m.probs(), &[0.5, 0.5]);
        assert_eq!(m.target(), None);

        let m = and().marginalize(X1.union(S)).unwrap();
        // (x1, s): (0,0)=0.5, (0,1)=0, (1,0)=0.25, (1,1)=0.25
        assert_eq!(m.probs(), &[0.5, 0.0, 0.25, 0.25]);
        assert_eq!(m.target(), Some(1));

        let d = and();
        assert_eq!(d.marginalize(d.all_axes()).unwrap(), d);
        assert_eq!(d.marginalize(AxisSet::empty()), Err(Error::EmptyAxisSet));
    }

    #[test]
    fn entropy_examples() {
        let coin = JointDistribution::new(vec![2], vec![0.5, 0.5], None).unwrap();
        close(coin.entropy(), 1.0, 1e-15);
        let sure = JointDistribution::new(vec![3], vec![0.0, 1.0, 0.0], None).unwrap();
        assert_eq!(sure.entropy(), 0.0);
        let broja_and = JointDistribution::from_outcomes(
            vec![2, 2, 2],
            Some(2),
            [(&[0usize, 0, 0][..], 0.5), (&[1, 1, 0][..], 0.25), (&[1, 1, 1][..], 0.25)],
        )
        .unwrap();
        close(broja_and.entropy(), 1.5, 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let d = uniquemis();
        close(d.mutual_information(S, X1).unwrap(), 1.0, 1e-12);
        close(d.mutual_information(S, X1.union(X2)).unwrap(), 1.0, 1e-12);
        close(d.mutual_information(S, X2).unwrap(), 0.61, 0.005);
        close(xor().mutual_information(X1, X2).unwrap(), 0.0, 1e-15);
        assert_eq!(d.mutual_information(X1, X1.union(S)), Err(Error::OverlappingAxes));
    }

    #[test]
    fn local_surprisal_delta_examples() {
        let d = and();
        let src1 = Source::new(&[1]).unwrap();
        close(d.local_surprisal_delta(src1, &[0, 0, 0]).unwrap(), 0.415, 5e-4);
        close(d.local_surprisal_delta(src1, &[1, 0, 0]).unwrap(), -0.585, 5e-4);
        // x2 carries nothing about s in xor
        close(xor().local_surprisal_delta(Source::new(&[2]).unwrap(), &[0, 1, 1]).unwrap(), 0.0, 1e-15);
        assert_eq!(d.local_surprisal_delta(src1, &[0, 0, 1]), Err(Error::ZeroProbability));
    }

    #[test]
    fn coinformation_examples() {
        close(sum().coinformation(&[X1, X2, S]).unwrap(), -0.5, 1e-12);
        close(xor().coinformation(&[X1, X2, S]).unwrap(), -1.0, 1e-12);
        close(rdn().coinformation(&[X1, X2, S]).unwrap(), 1.0, 1e-12);
        assert_eq!(rdn().coinformation(&[X1]), Err(Error::TooFewGroups(1)));
        let d = and();
        assert_eq!(
            d.coinformation(&[X1, S]).unwrap().to_bits(),
            d.mutual_information(X1, S).unwrap().to_bits()
        );
    }

    #[test]
    fn local_coinformation_examples() {
        close(and().local_coinformation(&[X1, X2, S], &[0, 1, 0]).unwrap(), -0.585, 5e-4);
        close(sum().local_coinformation(&[X1, X2, S], &[0, 1, 1]).unwrap(), -1.0, 1e-12);
        close(xor().local_coinformation(&[X1, X2, S], &[1, 0, 1]).unwrap(), -1.0, 1e-12);
        // independent group
        let ind = JointDistribution::new(vec![2, 2, 2], vec![0.125; 8], Some(2)).unwrap();
        close(ind.local_coinformation(&[X1, X2, S], &[1, 0, 1]).unwrap(), 0.0, 1e-12);
        assert_eq!(rdn().local_coinformation(&[X1, X2, S], &[0, 1, 0]), Err(Error::ZeroProbability));
    }

    #[test]
    fn specific_information_examples() {
        // two-bit copy: S = (X1, X2)
        let copy = JointDistribution::equiprobable(
            vec![2, 2, 4],
            Some(2),
            &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 2], &[1, 1, 3]],
        )
        .unwrap();
        for s in 0..4 {
            close(copy.specific_information(Source::new(&[1]).unwrap(), s).unwrap(), 1.0, 1e-12);
        }
        close(xor().specific_information(Source::new(&[1]).unwrap(), 1).unwrap(), 0.0, 1e-15);
        // AND, s = 1, source {1}: enumerate p(x1|s=1) log2 p(s=1|x1)/p(s=1) by hand.
        // p(s=1) = 1/4; only x1 = 1 occurs with s = 1; p(s=1|x1=1) = 1/2.
        let expected = 1.0 * log2(0.5 / 0.25);
        close(and().specific_information(Source::new(&[1]).unwrap(), 1).unwrap(), expected, 1e-15);
        assert_eq!(rdn().specific_information(Source::new(&[1]).unwrap(), 5), Err(Error::InvalidOutcome));
    }

    #[test]
    fn bounds_examples() {
        let r = xor().coinformation_bounds_check(X1, X2, S).unwrap();
        close(r.interaction_information, 1.0, 1e-12);
        close(r.upper_margin(), 0.0, 1e-12);
        assert!(r.holds(1e-12));

        let r = rdn().coinformation_bounds_check(X1, X2, S).unwrap();
        close(r.interaction_information, -1.0, 1e-12);
        close(r.lower_bound, -1.0, 1e-12);
        assert!(r.holds(1e-12));

        let ind = JointDistribution::new(vec![2, 2, 2], vec![0.125; 8], Some(2)).unwrap();
        let r = ind.coinformation_bounds_check(X1, X2, S).unwrap();
        for v in [r.interaction_information, r.lower_bound, r.upper_bound] {
            close(v, 0.0, 1e-12);
        }
    }

    #[test]
    fn permute_axes_moves_target() {
        let d = and();
        let p = d.permute_axes(&[2, 0, 1]).unwrap();
        assert_eq!(p.target(), Some(0));
        assert_eq!(p.prob(&[1, 1, 1]).unwrap(), 0.25);
        assert_eq!(p.prob(&[0, 0, 1]).unwrap(), 0.25);
        assert!(d.permute_axes(&[0, 0, 1]).is_err());
    }

    #[test]
    fn source_display_and_order() {
        let a = Source::new(&[3]).unwrap();
        let b = Source::new(&[1, 2]).unwrap();
        assert!(a < b);
        assert_eq!(alloc::format!("{a}{b}"), "{3}{12}");
        assert!(Source::new(&[]).is_err());
        assert!(Source::new(&[1, 1]).is_err());
        let d = and();
        assert!(d.source_axes(Source::new(&[3]).unwrap()).is_err());
    }
}
