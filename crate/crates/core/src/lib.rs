//! Entanglement detection from correlations in complementary local
//! measurements.
//!
//! The crate is organized bottom-up:
//! - [`qmat`]: dense complex matrices, density matrices, partial operations
//! - [`bases`]: orthonormal bases, mutually unbiased sets, observables
//! - [`states`]: named states, one-parameter families, random ensembles
//! - [`correlations`]: mutual information, Pearson coefficient, conditional sums
//! - [`criteria`]: entanglement detectors built on those measures
//! - [`experiments`]: sweeps, Monte Carlo tallies, measurement optimization

pub mod bases;
pub mod correlations;
pub mod criteria;
pub mod error;
pub mod experiments;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
