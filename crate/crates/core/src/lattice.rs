//! Redundancy lattices: antichains of predictor subsets ordered by
//! `α ≼ β  ⇔  ∀B ∈ β ∃A ∈ α : A ⊆ B`, and Möbius inversion from redundancy
//! values `I_cap` to partial-information atoms `I_partial`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dist::Source;
use crate::error::{Error, Result};
use crate::optim::SolverReport;

/// One lattice node: a nonempty set of sources, none containing another.
/// Sources are kept in canonical order (size, then members).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antichain {
    sources: Vec<Source>,
}

impl Antichain {
    pub fn new(mut sources: Vec<Source>) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::InvalidSource("antichain needs at least one source".into()));
        }
        sources.sort();
        for (i, a) in sources.iter().enumerate() {
            for b in &sources[i + 1..] {
                if a.is_subset(*b) || b.is_subset(*a) {
                    return Err(Error::InvalidSource(format!("{a} and {b} are nested")));
                }
            }
        }
        Ok(Antichain { sources })
    }

    /// Parses the `{1}{23}` notation.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidSource(format!("cannot parse node {text:?}"));
        let text = text.trim();
        let mut sources = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(bad)?;
            let close = inner.find('}').ok_or_else(bad)?;
            let members = inner[..close]
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            sources.push(Source::new(&members)?);
            rest = &inner[close + 1..];
        }
        Self::new(sources)
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    /// Lattice order: `self ≼ other`.
    pub fn leq(&self, other: &Antichain) -> bool {
        other
            .sources
            .iter()
            .all(|b| self.sources.iter().any(|a| a.is_subset(*b)))
    }

    /// Multiset of source sizes, ascending.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.sources.iter().map(|s| s.len()).collect();
        sizes.sort_unstable();
        sizes
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sources {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// All antichains for `n` predictors, stored bottom-up (by number of strict
/// predecessors, ties in canonical order).
#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyLattice {
    n: usize,
    nodes: Vec<Antichain>,
    /// Strict predecessors of each node, as node indices.
    below: Vec<Vec<usize>>,
}

impl RedundancyLattice {
    pub fn build(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::LatticeSize(n));
        }
        let mut all_sources: Vec<Source> = (1u16..(1 << n)).map(Source::from_bits).collect();
        all_sources.sort();
        let mut nodes = Vec::new();
        let mut chosen = Vec::new();
        grow_antichains(&all_sources, 0, &mut chosen, &mut nodes);

        let mut below_count: Vec<(usize, Antichain)> = nodes
            .iter()
            .map(|a| (nodes.iter().filter(|b| *b != a && b.leq(a)).count(), a.clone()))
            .collect();
        below_count.sort();
        let nodes: Vec<Antichain> = below_count.into_iter().map(|(_, a)| a).collect();
        let below = nodes
            .iter()
            .map(|a| {
                (0..nodes.len())
                    .filter(|&j| nodes[j] != *a && nodes[j].leq(a))
                    .collect()
            })
            .collect();
        Ok(RedundancyLattice { n, nodes, below })
    }

    pub fn n_predictors(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Antichain] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, node: &Antichain) -> Option<usize> {
        self.nodes.iter().position(|a| a == node)
    }

    /// Node index by `{1}{23}` name.
    pub fn find(&self, name: &str) -> Option<usize> {
        Antichain::parse(name).ok().and_then(|a| self.index_of(&a))
    }

    /// Strict predecessors of node `i`.
    pub fn strictly_below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    /// Covering pairs `(lower, upper)` of the Hasse diagram.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (hi, preds) in self.below.iter().enumerate() {
            for &lo in preds {
                let covered = preds.iter().any(|&mid| mid != lo && self.below[mid].contains(&lo));
                if !covered {
                    edges.push((lo, hi));
                }
            }
        }
        edges
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// The node `{12…n}`.
    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Depth-first enumeration: sources are added in canonical order, each
/// incomparable with everything already chosen.
fn grow_antichains(all: &[Source], start: usize, chosen: &mut Vec<Source>, out: &mut Vec<Antichain>) {
    for i in start..all.len() {
        let s = all[i];
        if chosen.iter().all(|c| !c.is_subset(s) && !s.is_subset(*c)) {
            chosen.push(s);
            out.push(Antichain { sources: chosen.clone() });
            grow_antichains(all, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Partial-information atoms from redundancy values, computed bottom-up:
/// `I_partial(α) = I_cap(α) - Σ_{β ≺ α} I_partial(β)`.
pub fn moebius_inversion(lattice: &RedundancyLattice, icap: &[f64]) -> Result<Vec<f64>> {
    if icap.len() != lattice.len() || icap.iter().any(|v| !v.is_finite()) {
        return Err(Error::MissingValues);
    }
    let mut atoms = vec![0.0; icap.len()];
    for i in 0..icap.len() {
        let lower: f64 = lattice.below[i].iter().map(|&j| atoms[j]).sum();
        atoms[i] = icap[i] - lower;
    }
    Ok(atoms)
}

/// A populated decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PidResult {
    pub lattice: RedundancyLattice,
    /// Measure label, e.g. `iccs_game` or `mmi`.
    pub measure: String,
    pub icap: Vec<f64>,
    pub ipartial: Vec<f64>,
    /// Solver reports keyed by node index, in node order.
    pub reports: Vec<(usize, SolverReport)>,
    /// Monte-Carlo standard errors of the atoms, when estimated by sampling.
    pub atom_standard_errors: Option<Vec<f64>>,
    /// Monte-Carlo standard errors of the redundancy values.
    pub icap_standard_errors: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl PidResult {
    pub fn from_icap(lattice: RedundancyLattice, measure: &str, icap: Vec<f64>) -> Result<Self> {
        let ipartial = moebius_inversion(&lattice, &icap)?;
        Ok(PidResult {
            lattice,
            measure: measure.to_string(),
            icap,
            ipartial,
            reports: Vec::new(),
            atom_standard_errors: None,
            icap_standard_errors: None,
            warnings: Vec::new(),
        })
    }

    /// Atom of the node named like `{1}{23}`.
    pub fn atom(&self, name: &str) -> Option<f64> {
        self.lattice.find(name).map(|i| self.ipartial[i])
    }

    /// Redundancy of the node named like `{1}{23}`.
    pub fn redundancy(&self, name: &str) -> Option<f64> {
        self.lattice.find(name).map(|i| self.icap[i])
    }

    pub fn atom_sum(&self) -> f64 {
        self.ipartial.iter().sum()
    }

    pub fn node_names(&self) -> Vec<String> {
        self.lattice.nodes().iter().map(|a| a.to_string()).collect()
    }
}

/// One row of the order-structure summary of a three-predictor decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStructureTerm {
    pub level: usize,
    /// Source sizes of the grouped nodes, ascending, e.g. `[1, 2]`.
    pub tag: Vec<usize>,
    pub value: f64,
}

/// Groups the 18 atoms of a three-predictor lattice by their source-size
/// profile and sums them. Levels run from `(1,1,1)` at 1 to `(3)` at 7.
pub fn order_structure_collapse(result: &PidResult) -> Result<Vec<OrderStructureTerm>> {
    if result.lattice.n_predictors() != 3 {
        return Err(Error::LatticeSize(result.lattice.n_predictors()));
    }
    const LAYOUT: [(usize, &[usize]); 8] = [
        (1, &[1, 1, 1]),
        (2, &[1, 1]),
        (3, &[1, 2]),
        (4, &[1]),
        (4, &[2, 2, 2]),
        (5, &[2, 2]),
        (6, &[2]),
        (7, &[3]),
    ];
    Ok(LAYOUT
        .iter()
        .map(|&(level, tag)| OrderStructureTerm {
            level,
            tag: tag.to_vec(),
            value: result
                .lattice
                .nodes()
                .iter()
                .zip(&result.ipartial)
                .filter(|(a, _)| a.size_profile() == tag)
                .map(|(_, v)| v)
                .sum(),
        })
        .collect())
}
