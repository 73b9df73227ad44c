use alloc::string::String;
use core::fmt;

use crate::optim::SolverReport;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Cardinalities, probabilities or target index do not describe a valid distribution.
    InvalidDistribution(String),
    /// An operation needed at least one axis.
    EmptyAxisSet,
    /// Axis index outside the distribution.
    AxisOutOfRange { axis: usize, n_axes: usize },
    /// Two axis groups that must be disjoint share an axis.
    OverlappingAxes,
    /// Co-information needs at least two groups.
    TooFewGroups(usize),
    /// A pointwise quantity was requested for an event of probability zero.
    ZeroProbability,
    /// Outcome tuple has the wrong length or a value outside its alphabet.
    InvalidOutcome,
    /// The operation needs a designated target axis.
    NoTarget,
    /// Source refers to predictors the distribution does not have.
    InvalidSource(String),
    /// Lattices are only built for 1..=4 predictors.
    LatticeSize(usize),
    /// Redundancy values missing or not finite for some lattice node.
    MissingValues,
    /// The requested measure cannot be applied to this system.
    UnsupportedMeasure(String),
    /// An iterative solver stopped before reaching its tolerance.
    NotConverged(SolverReport),
    /// Correlation parameters do not form a valid (positive semi-definite) matrix.
    InvalidCorrelation(String),
    /// The covariance is singular where a density is needed.
    DegenerateCovariance,
    /// Option value out of its allowed range.
    InvalidOption(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::EmptyAxisSet => write!(f, "empty axis set"),
            Error::AxisOutOfRange { axis, n_axes } => {
                write!(f, "axis {axis} out of range for {n_axes} axes")
            }
            Error::OverlappingAxes => write!(f, "axis groups overlap"),
            Error::TooFewGroups(n) => write!(f, "need at least 2 groups, got {n}"),
            Error::ZeroProbability => write!(f, "event has zero probability"),
            Error::InvalidOutcome => write!(f, "outcome outside the alphabet"),
            Error::NoTarget => write!(f, "distribution has no target axis"),
            Error::InvalidSource(msg) => write!(f, "invalid source: {msg}"),
            Error::LatticeSize(n) => write!(f, "lattice requires 1..=4 predictors, got {n}"),
            Error::MissingValues => write!(f, "missing or non-finite lattice values"),
            Error::UnsupportedMeasure(msg) => write!(f, "unsupported measure: {msg}"),
            Error::NotConverged(r) => write!(
                f,
                "solver did not converge after {} iterations (residual {:e})",
                r.iterations, r.residual
            ),
            Error::InvalidCorrelation(msg) => write!(f, "invalid correlation: {msg}"),
            Error::DegenerateCovariance => write!(f, "degenerate covariance"),
            Error::InvalidOption(msg) => write!(f, "invalid option: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
