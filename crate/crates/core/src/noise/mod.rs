//! Linearized quantum fluctuations above threshold.

mod basis;
mod blocks;
mod closed_form;
mod drift;
mod spectrum;
mod validate;

pub use basis::{Mode, QuadVector, Quadrature, QuadratureBasis};
pub use blocks::{build_blocks, combination_transform, BlockDecomposition, Combination};
pub use closed_form::{phase_sum_spectrum, printed_spectra, PrintedSpectra};
pub use drift::{build_drift, minus_block, plus_block, DriftMatrix8, PumpInjectionMap};
pub use spectrum::{
    combination_spectrum, cross_spectrum, spectral_matrix, transfer_functions, NoiseFactor,
    SpectralMatrix, TransferFunctions, TransferIn, TransferPump, OMEGA_MAX, OMEGA_MIN,
};
pub use validate::{
    validate_spectra, Reference, Regime, Sample, SpectrumCheck, SpectrumId, SweepGrid,
    ValidationReport, SPECTRUM_TOLERANCE,
};

pub(crate) use closed_form::{difference_sector_denominator, sum_sector_denominator};
pub(crate) use spectrum::check_omega;
