use super::spectrum::check_omega;
use crate::error::Result;

/// The four closed-form output spectra shared by the `α` and `β` sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedSpectra {
    /// Amplitude-quadrature sum.
    pub p: f64,
    /// Phase-quadrature sum, as published.
    pub q: f64,
    /// Amplitude-quadrature difference.
    pub r: f64,
    /// Phase-quadrature difference.
    pub s: f64,
}

/// `(c² + σ(σ-1))² + Ω² - 2(c² - σ(σ-1))Ω² + Ω⁴`, the sum-sector determinant.
pub(crate) fn sum_sector_denominator(omega: f64, sigma: f64, coupling: f64) -> f64 {
    let w2 = omega * omega;
    let c2 = coupling * coupling;
    let ss = sigma * (sigma - 1.0);
    (c2 + ss).powi(2) + w2 - 2.0 * (c2 - ss) * w2 + w2 * w2
}

/// `Ω² + (Ω² - c²)²`, the difference-sector determinant.
pub(crate) fn difference_sector_denominator(omega: f64, coupling: f64) -> f64 {
    let w2 = omega * omega;
    w2 + (w2 - coupling * coupling).powi(2)
}

/// Evaluates the published closed forms verbatim.
///
/// The published phase-sum spectrum `q` goes negative below `Ω ≈ 0.7` at
/// `σ = 1, c = 0`; see [`phase_sum_spectrum`] for the form the linearized
/// model actually produces.
pub fn printed_spectra(omega: f64, sigma: f64, coupling: f64) -> Result<PrintedSpectra> {
    check_omega(omega)?;
    let w2 = omega * omega;
    let c2 = coupling * coupling;
    let sum_den = sum_sector_denominator(omega, sigma, coupling);
    let diff_den = difference_sector_denominator(omega, coupling);
    let below = (sigma - 1.0).powi(2);

    let p = 1.0 + 1.0 / (2.0 * (w2 + below)) + (sigma * sigma + w2 - c2) / (2.0 * sum_den);
    let q = 1.0 - 1.0 / (w2 + sigma * sigma) - (below + w2 - c2) / (2.0 * sum_den);
    let r = 1.0 - 1.0 / (2.0 * (1.0 + w2)) - (w2 - c2) / (2.0 * diff_den);
    let s = 1.0 + 1.0 / (2.0 * w2) + (1.0 + w2 - c2) / (2.0 * diff_den);
    Ok(PrintedSpectra { p, q, r, s })
}

/// Phase-sum spectrum of the linearized model (pump density 2):
/// `1 - 1/(2(Ω² + σ²)) - ((σ-1)² + Ω² - c²)/(2D)`.
///
/// Differs from the published `q` only by the factor 2 in the second term.
pub fn phase_sum_spectrum(omega: f64, sigma: f64, coupling: f64) -> Result<f64> {
    check_omega(omega)?;
    let w2 = omega * omega;
    let sum_den = sum_sector_denominator(omega, sigma, coupling);
    Ok(1.0
        - 1.0 / (2.0 * (w2 + sigma * sigma))
        - ((sigma - 1.0).powi(2) + w2 - coupling * coupling) / (2.0 * sum_den))
}
