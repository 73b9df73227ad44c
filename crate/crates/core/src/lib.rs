//! Partial information decomposition of discrete and Gaussian systems.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`dist`]: dense joint distributions and the pointwise/expected
//!   information quantities built on them (entropy, mutual information,
//!   co-information, specific information, local changes in surprisal).
//! - [`lattice`]: the redundancy lattice of antichains and Möbius inversion
//!   from redundancy values to partial-information atoms.
//! - [`optim`]: maximum-entropy projection under marginal constraints and
//!   the joint-MI minimisation behind `I_broja`.
//! - [`measures`]: the redundancy measures `I_ccs`, `I_min`, `I_broja` and
//!   `I_mmi`, and the full decomposition pipeline.
//! - [`gaussian`]: closed-form `I_mmi` and Monte-Carlo `I_ccs` for the
//!   univariate trivariate Gaussian family.
//!
//! All information values are in bits.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dist;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod measures;
pub mod optim;

mod math;

pub use dist::{AxisSet, JointDistribution, LocalTermRow, LocalTermTable, Source};
pub use error::{Error, Result};
pub use gaussian::{GaussianSystem, McOptions};
pub use lattice::{Antichain, PidResult, RedundancyLattice};
pub use measures::{IccsVariant, MeasureChoice};
pub use optim::{ConstraintSet, SolverOptions, SolverReport};
