//! Simulation of a self-phase-locked optical parametric oscillator with two
//! orthogonally oriented type-II crystals and a rotated half-wave plate.
//!
//! - [`cavity`]: Jones-matrix round trip, threshold and classical steady state.
//! - [`noise`]: linearized fluctuations, output spectral covariance and the
//!   closed-form spectra they are checked against.
//! - [`polarization`]: Stokes means, Stokes fluctuation spectra and the sum,
//!   product and EPR entanglement criteria.
//!
//! Everything is a pure function of its inputs.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod error;
pub mod noise;
pub mod polarization;

pub use cavity::{
    round_trip_exact, round_trip_reduced, sigma_from_pump, stationarity_residual, steady_state,
    threshold_branches, ComplexMatrix4, FieldState, OpticalConstants, ReducedParams,
    ThresholdBranches,
};
pub use error::{Error, Result};
pub use noise::{spectral_matrix, SpectralMatrix};
pub use polarization::{criteria_record, CriteriaRecord};
