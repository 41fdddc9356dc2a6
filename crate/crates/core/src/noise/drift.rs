use nalgebra::{SMatrix, Matrix4};

use crate::error::{Error, Result};

/// Normalized 8×8 drift matrix `M'` over the quadrature basis, with the
/// pump parameter and normalized coupling it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix8 {
    pub matrix: SMatrix<f64, 8, 8>,
    pub sigma: f64,
    pub coupling: f64,
}

pub(crate) fn check_operating_point(sigma: f64, coupling: f64) -> Result<()> {
    if !(sigma >= 1.0 && sigma.is_finite()) {
        return Err(Error::param(
            "sigma",
            format!("linearization needs an oscillating steady state (sigma >= 1), got {sigma}"),
        ));
    }
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return Err(Error::param(
            "coupling",
            format!("must be non-negative, got {coupling}"),
        ));
    }
    Ok(())
}

/// Builds `M'(σ, c)`.
///
/// The pump-mediated cross terms between `p_a1`/`p_b2` and `p_a2`/`p_b1`
/// are `-(σ - 2)`.
pub fn build_drift(sigma: f64, coupling: f64) -> Result<DriftMatrix8> {
    check_operating_point(sigma, coupling)?;
    let s = sigma;
    let c = coupling;
    let x = -(s - 2.0);
    #[rustfmt::skip]
    let matrix = SMatrix::<f64, 8, 8>::from_row_slice(&[
        -s,  -c,  0.0,  c,   0.0, 0.0, x,   0.0,
         c,  -s,  -c,   0.0, 0.0, 0.0, 0.0, -s,
         0.0, c,  -s,  -c,   x,   0.0, 0.0, 0.0,
        -c,  0.0,  c,  -s,   0.0, -s,  0.0, 0.0,
         0.0, 0.0, x,   0.0, -s,  -c,  0.0, c,
         0.0, 0.0, 0.0, -s,   c,  -s,  -c,  0.0,
         x,   0.0, 0.0, 0.0, 0.0,  c,  -s,  -c,
         0.0, -s,  0.0, 0.0, -c,  0.0,  c,  -s,
    ]);
    Ok(DriftMatrix8 {
        matrix,
        sigma,
        coupling,
    })
}

/// Maps the four pump quadratures `(p0x, q0x, p0y, q0y)` onto the eight
/// cavity quadratures, together with the pump quadrature spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpInjectionMap {
    pub matrix: SMatrix<f64, 8, 4>,
    pub variance: f64,
}

impl PumpInjectionMap {
    /// Spectral density that reproduces the closed-form spectra above threshold.
    pub const DEFAULT_VARIANCE: f64 = 2.0;

    pub fn new(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::param(
                "pump_variance",
                format!("must be positive, got {variance}"),
            ));
        }
        // Rows a1 and b2 see the x pump, rows a2 and b1 the y pump.
        #[rustfmt::skip]
        let matrix = SMatrix::<f64, 8, 4>::from_row_slice(&[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ]);
        Ok(PumpInjectionMap { matrix, variance })
    }
}

impl Default for PumpInjectionMap {
    fn default() -> Self {
        PumpInjectionMap::new(Self::DEFAULT_VARIANCE).expect("default variance is positive")
    }
}

/// Symmetric-sector block `M₊(σ, c)` over `(p_α, p_β, q_α, q_β)`.
pub fn plus_block(sigma: f64, coupling: f64) -> Matrix4<f64> {
    let a = -2.0 * (sigma - 1.0);
    let b = -2.0 * sigma;
    let c = coupling;
    #[rustfmt::skip]
    let m = Matrix4::new(
        a,   0.0, -c,  c,
        0.0, a,    c, -c,
        c,  -c,    b,  0.0,
        -c,  c,   0.0, b,
    );
    m
}

/// Antisymmetric-sector block `M₋(c)` over `(r_α, r_β, s_α, s_β)`; it does
/// not depend on the pump.
pub fn minus_block(coupling: f64) -> Matrix4<f64> {
    let c = coupling;
    #[rustfmt::skip]
    let m = Matrix4::new(
        -2.0, 0.0, -c,  -c,
        0.0, -2.0, -c,  -c,
        c,    c,   0.0, 0.0,
        c,    c,   0.0, 0.0,
    );
    m
}
