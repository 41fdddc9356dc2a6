//! Frequency-domain input–output response and output noise spectra.
//!
//! At normalized analysis frequency `Ω` the intracavity quadratures obey
//! `2iΩ x = M' x + √((σ-1)/κ) P x₀ + √(2/κ) x_in`; the output leaves through
//! the coupler as `√(2κ) x - x_in`. The loss `κ` cancels from the output, so
//! only `(Ω, σ, c)` and the pump spectral density enter here.
//!
//! A [`SpectralMatrix`] keeps the factor `F = [T_in | √v T_pump]` together
//! with `S = F F^H`. Quadratic forms are evaluated as `‖uᵀF‖²`, which avoids
//! the cancellation that hits `uᵀ S u` when large sum-sector noise cancels
//! down to a deeply squeezed difference.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::basis::QuadVector;
use super::drift::{build_drift, PumpInjectionMap};
use crate::error::{Error, Result};

pub type TransferIn = SMatrix<Complex64, 8, 8>;
pub type TransferPump = SMatrix<Complex64, 8, 4>;
pub type NoiseFactor = SMatrix<Complex64, 8, 12>;

/// Supported analysis frequencies.
pub const OMEGA_MIN: f64 = 1e-6;
pub const OMEGA_MAX: f64 = 1e6;

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if !(OMEGA_MIN..=OMEGA_MAX).contains(&omega) {
        return Err(Error::param(
            "omega",
            format!("must lie in [{OMEGA_MIN:e}, {OMEGA_MAX:e}], got {omega}"),
        ));
    }
    Ok(())
}

/// Output response to mirror vacuum (`input`) and to pump quadratures (`pump`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunctions {
    pub input: TransferIn,
    pub pump: TransferPump,
}

/// `T_in = 2(2iΩ - M')⁻¹ - I` and `T_pump = √(2(σ-1)) (2iΩ - M')⁻¹ P`.
pub fn transfer_functions(omega: f64, sigma: f64, coupling: f64) -> Result<TransferFunctions> {
    check_omega(omega)?;
    let drift = build_drift(sigma, coupling)?;
    let system = TransferIn::identity() * Complex64::new(0.0, 2.0 * omega)
        - drift.matrix.map(|x| Complex64::new(x, 0.0));
    let resolvent = system
        .lu()
        .try_inverse()
        .ok_or_else(|| {
            Error::Numeric(format!(
                "2iΩ - M' is singular at omega={omega}, sigma={sigma}, c={coupling}"
            ))
        })?;
    let input = resolvent * Complex64::new(2.0, 0.0) - TransferIn::identity();
    let map = PumpInjectionMap::default().matrix.map(|x| Complex64::new(x, 0.0));
    let pump = resolvent * map * Complex64::new((2.0 * (sigma - 1.0)).sqrt(), 0.0);
    Ok(TransferFunctions { input, pump })
}

/// Shot-noise-normalized output spectral covariance at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMatrix {
    pub omega: f64,
    pub sigma: f64,
    pub coupling: f64,
    pub pump_variance: f64,
    factor: NoiseFactor,
    matrix: TransferIn,
}

impl SpectralMatrix {
    /// Covariance `F F^H` of unit-variance independent white inputs mapped by `factor`.
    pub fn from_factor(omega: f64, sigma: f64, coupling: f64, pump_variance: f64, factor: NoiseFactor) -> Self {
        let matrix = factor * factor.adjoint();
        SpectralMatrix {
            omega,
            sigma,
            coupling,
            pump_variance,
            factor,
            matrix,
        }
    }

    /// Coherent-state (vacuum) output: `S = I₈`.
    pub fn vacuum(omega: f64) -> Self {
        let mut factor = NoiseFactor::zeros();
        factor
            .fixed_view_mut::<8, 8>(0, 0)
            .copy_from(&TransferIn::identity());
        Self::from_factor(omega, 1.0, 0.0, PumpInjectionMap::DEFAULT_VARIANCE, factor)
    }

    pub fn matrix(&self) -> &TransferIn {
        &self.matrix
    }

    pub fn factor(&self) -> &NoiseFactor {
        &self.factor
    }

    fn project(&self, coeffs: &QuadVector) -> SVector<Complex64, 12> {
        (coeffs.map(|x| Complex64::new(x, 0.0)).transpose() * self.factor).transpose()
    }

    /// Largest deviation from Hermiticity, `max |S - S^H|`.
    pub fn hermiticity_error(&self) -> f64 {
        (self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Output spectral matrix for mirror vacuum plus pump noise of density `pump_variance`.
pub fn spectral_matrix(omega: f64, sigma: f64, coupling: f64, pump_variance: f64) -> Result<SpectralMatrix> {
    let variance = PumpInjectionMap::new(pump_variance)?.variance;
    let t = transfer_functions(omega, sigma, coupling)?;
    let mut factor = NoiseFactor::zeros();
    factor.fixed_view_mut::<8, 8>(0, 0).copy_from(&t.input);
    factor
        .fixed_view_mut::<8, 4>(0, 8)
        .copy_from(&(t.pump * Complex64::new(variance.sqrt(), 0.0)));
    Ok(SpectralMatrix::from_factor(omega, sigma, coupling, variance, factor))
}

fn norm_sq(coeffs: &QuadVector) -> Result<f64> {
    let n = coeffs.norm_squared();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::param("coeffs", "coefficient vector must be nonzero and finite"));
    }
    Ok(n)
}

/// Noise spectrum of the real quadrature combination `u`, normalized by `uᵀu`
/// so that vacuum gives 1.
pub fn combination_spectrum(spectrum: &SpectralMatrix, coeffs: &QuadVector) -> Result<f64> {
    let n = norm_sq(coeffs)?;
    Ok(spectrum.project(coeffs).norm_squared() / n)
}

/// Symmetrized cross spectrum `uᵀ Re(S) w / (‖u‖‖w‖)`.
pub fn cross_spectrum(spectrum: &SpectralMatrix, u: &QuadVector, w: &QuadVector) -> Result<f64> {
    let nu = norm_sq(u)?;
    let nw = norm_sq(w)?;
    let pu = spectrum.project(u);
    let pw = spectrum.project(w);
    let dot: Complex64 = pu.iter().zip(pw.iter()).map(|(a, b)| a * b.conj()).sum();
    Ok(dot.re / (nu * nw).sqrt())
}
