//! Stokes-operator description of the two output beams and the
//! polarization-entanglement criteria built on it.
//!
//! Beam `a` carries modes `a1` (x) and `a2` (y); beam `b` carries `b1` (x) and
//! `b2` (y). Around the circular steady state the fluctuations of `S1` and
//! `S2` are linear in the quadratures:
//! `δS1_u/|J| = p_u1 - p_u2` and `δS2_u/|J| = -(q_u1 - q_u2)`.
//!
//! All spectra here are normalized to coherent-state shot noise, which is
//! the same as using unit-norm quadrature coefficient vectors.

use num_complex::Complex64;

use crate::cavity::FieldState;
use crate::error::{Error, Result};
use crate::noise::{
    check_omega, combination_spectrum, cross_spectrum, difference_sector_denominator,
    sum_sector_denominator, QuadVector, SpectralMatrix,
};

/// Classical Stokes parameters of one beam, in photon-number units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesMean {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesMean {
    /// Stokes vector of the field `(x, y)`. `S3 > 0` for the circular state
    /// `y = -i x` produced by the cavity.
    pub fn from_field(x: Complex64, y: Complex64) -> Self {
        let cross = x.conj() * y;
        StokesMean {
            s0: x.norm_sqr() + y.norm_sqr(),
            s1: x.norm_sqr() - y.norm_sqr(),
            s2: 2.0 * cross.re,
            s3: -2.0 * cross.im,
        }
    }

    /// `S0² - (S1² + S2² + S3²)`; zero for a fully polarized field.
    pub fn polarization_defect(&self) -> f64 {
        self.s0 * self.s0 - (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3)
    }
}

/// Stokes means of both output beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamStokes {
    pub a: StokesMean,
    pub b: StokesMean,
}

pub fn stokes_means(state: &FieldState) -> BeamStokes {
    let v = state.vector;
    // The state vector stores b2* and b1*.
    BeamStokes {
        a: StokesMean::from_field(v[0], v[2]),
        b: StokesMean::from_field(v[3].conj(), v[1].conj()),
    }
}

/// `|⟨S3⟩|²`, the right-hand side of the `S1`/`S2` uncertainty relation for either beam.
pub fn heisenberg_bound(state: &FieldState) -> f64 {
    let s3 = stokes_means(state).a.s3;
    s3 * s3
}

/// Quadrature coefficient vectors of the Stokes fluctuations, per `|J|`.
pub struct StokesCombination;

impl StokesCombination {
    pub fn s1_a() -> QuadVector {
        QuadVector::from_column_slice(&[1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn s2_a() -> QuadVector {
        QuadVector::from_column_slice(&[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn s1_b() -> QuadVector {
        QuadVector::from_column_slice(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0])
    }

    pub fn s2_b() -> QuadVector {
        QuadVector::from_column_slice(&[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0])
    }

    /// `δS1_a + δS1_b`.
    pub fn s1_plus() -> QuadVector {
        Self::s1_a() + Self::s1_b()
    }

    /// `δS2_a - δS2_b`.
    pub fn s2_minus() -> QuadVector {
        Self::s2_a() - Self::s2_b()
    }
}

/// Normalized Stokes fluctuation spectra at one analysis frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesSpectra {
    pub s1_plus: f64,
    pub s2_minus: f64,
    pub var_s1_a: f64,
    pub var_s1_b: f64,
    pub cov_s1: f64,
    pub var_s2_a: f64,
    pub var_s2_b: f64,
    pub cov_s2: f64,
}

pub fn stokes_fluctuation_spectra(spectrum: &SpectralMatrix) -> Result<StokesSpectra> {
    use StokesCombination as C;
    Ok(StokesSpectra {
        s1_plus: combination_spectrum(spectrum, &C::s1_plus())?,
        s2_minus: combination_spectrum(spectrum, &C::s2_minus())?,
        var_s1_a: combination_spectrum(spectrum, &C::s1_a())?,
        var_s1_b: combination_spectrum(spectrum, &C::s1_b())?,
        cov_s1: cross_spectrum(spectrum, &C::s1_a(), &C::s1_b())?,
        var_s2_a: combination_spectrum(spectrum, &C::s2_a())?,
        var_s2_b: combination_spectrum(spectrum, &C::s2_b())?,
        cov_s2: cross_spectrum(spectrum, &C::s2_a(), &C::s2_b())?,
    })
}

/// Closed-form two-beam Stokes spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedStokes {
    pub s1_plus: f64,
    pub s2_minus: f64,
}

pub fn printed_stokes_spectra(omega: f64, sigma: f64, coupling: f64) -> Result<PrintedStokes> {
    check_omega(omega)?;
    let w2 = omega * omega;
    let c2 = coupling * coupling;
    let s1_plus = 1.0 - (w2 - c2) / difference_sector_denominator(omega, coupling);
    let s2_minus =
        1.0 - ((w2 - c2) + (sigma - 1.0).powi(2)) / sum_sector_denominator(omega, sigma, coupling);
    Ok(PrintedStokes { s1_plus, s2_minus })
}

/// A criterion value and whether it certifies the property (strict inequality).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criterion {
    pub value: f64,
    pub satisfied: bool,
}

/// Threshold of the normalized product criterion.
pub const PRODUCT_THRESHOLD: f64 = 2.0;

/// `(S_S1+ + S_S2-)/2 < 1`.
pub fn sum_criterion(s1_plus: f64, s2_minus: f64) -> Criterion {
    let value = 0.5 * (s1_plus + s2_minus);
    Criterion {
        value,
        satisfied: value < 1.0,
    }
}

/// `S_S1+ · S_S2- < 2`.
pub fn product_criterion(s1_plus: f64, s2_minus: f64) -> Criterion {
    let value = s1_plus * s2_minus;
    Criterion {
        value,
        satisfied: value < PRODUCT_THRESHOLD,
    }
}

/// Unnormalized product form `Δ²(S1a + S1b) · Δ²(S2a - S2b)` against
/// `2(|⟨S3a⟩| + |⟨S3b⟩|)` for mode intensity `|J|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawProduct {
    pub lhs: f64,
    pub rhs: f64,
}

impl RawProduct {
    pub fn satisfied(&self) -> bool {
        self.lhs < self.rhs
    }
}

pub fn raw_product_criterion(s1_plus: f64, s2_minus: f64, intensity: f64) -> RawProduct {
    // Each two-beam combination has squared norm 4 over the quadratures.
    let var_s1 = 4.0 * intensity * s1_plus;
    let var_s2 = 4.0 * intensity * s2_minus;
    let s3 = 2.0 * intensity;
    RawProduct {
        lhs: var_s1 * var_s2,
        rhs: 2.0 * (s3 + s3),
    }
}

fn conditional_variance(var_a: f64, var_b: f64, cov: f64) -> Result<f64> {
    if !(var_b > 0.0) || !(var_a > 0.0) {
        return Err(Error::Numeric(format!(
            "conditional variance needs positive variances, got {var_a} and {var_b}"
        )));
    }
    Ok(var_a * (1.0 - cov * cov / (var_a * var_b)))
}

/// Product of the conditional variances of `S1` and `S2` of beam `a` given
/// beam `b`; below 1 the correlations exhibit the EPR paradox.
pub fn epr_criterion(spectra: &StokesSpectra) -> Result<Criterion> {
    let first = conditional_variance(spectra.var_s1_a, spectra.var_s1_b, spectra.cov_s1)?;
    let second = conditional_variance(spectra.var_s2_a, spectra.var_s2_b, spectra.cov_s2)?;
    let value = first * second;
    Ok(Criterion {
        value,
        satisfied: value < 1.0,
    })
}

/// All three criteria at one analysis frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaRecord {
    pub omega: f64,
    pub s1_plus: f64,
    pub s2_minus: f64,
    pub sum_value: f64,
    pub product_value: f64,
    pub epr_value: f64,
    pub sum_entangled: bool,
    pub product_entangled: bool,
    pub epr_violation: bool,
}

pub fn criteria_record(spectrum: &SpectralMatrix) -> Result<CriteriaRecord> {
    let stokes = stokes_fluctuation_spectra(spectrum)?;
    let sum = sum_criterion(stokes.s1_plus, stokes.s2_minus);
    let product = product_criterion(stokes.s1_plus, stokes.s2_minus);
    let epr = epr_criterion(&stokes)?;
    Ok(CriteriaRecord {
        omega: spectrum.omega,
        s1_plus: stokes.s1_plus,
        s2_minus: stokes.s2_minus,
        sum_value: sum.value,
        product_value: product.value,
        epr_value: epr.value,
        sum_entangled: sum.satisfied,
        product_entangled: product.satisfied,
        epr_violation: epr.satisfied,
    })
}
