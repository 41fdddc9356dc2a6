use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix4, SMatrix};

use super::basis::{Mode, QuadVector, Quadrature, QuadratureBasis};
use super::drift::{build_drift, minus_block, plus_block};
use crate::error::Result;

/// Symmetric (`p`, `q`) and antisymmetric (`r`, `s`) combinations of the
/// signal/idler pair produced by each crystal. `α` pairs `a1` with `b2`,
/// `β` pairs `a2` with `b1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combination {
    PAlpha,
    PBeta,
    QAlpha,
    QBeta,
    RAlpha,
    RBeta,
    SAlpha,
    SBeta,
}

impl Combination {
    /// Block ordering `(p_α, p_β, q_α, q_β | r_α, r_β, s_α, s_β)`.
    pub const ALL: [Combination; 8] = [
        Combination::PAlpha,
        Combination::PBeta,
        Combination::QAlpha,
        Combination::QBeta,
        Combination::RAlpha,
        Combination::RBeta,
        Combination::SAlpha,
        Combination::SBeta,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Combination::PAlpha => "p_alpha",
            Combination::PBeta => "p_beta",
            Combination::QAlpha => "q_alpha",
            Combination::QBeta => "q_beta",
            Combination::RAlpha => "r_alpha",
            Combination::RBeta => "r_beta",
            Combination::SAlpha => "s_alpha",
            Combination::SBeta => "s_beta",
        }
    }

    /// Unit-norm coefficients over the quadrature basis. The `β` differences
    /// carry an overall minus sign: `r_β = -(p_a2 - p_b1)/√2`.
    pub fn coefficients(self) -> QuadVector {
        use Mode::*;
        use Quadrature::*;
        let u = QuadratureBasis::unit;
        let v = match self {
            Combination::PAlpha => u(A1, Amplitude) + u(B2, Amplitude),
            Combination::QAlpha => u(A1, Phase) + u(B2, Phase),
            Combination::RAlpha => u(A1, Amplitude) - u(B2, Amplitude),
            Combination::SAlpha => u(A1, Phase) - u(B2, Phase),
            Combination::PBeta => u(A2, Amplitude) + u(B1, Amplitude),
            Combination::QBeta => u(A2, Phase) + u(B1, Phase),
            Combination::RBeta => -(u(A2, Amplitude) - u(B1, Amplitude)),
            Combination::SBeta => -(u(A2, Phase) - u(B1, Phase)),
        };
        v * FRAC_1_SQRT_2
    }
}

/// Orthogonal change of basis separating the pump-driven sum sector from
/// the pump-free difference sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecomposition {
    /// Rows are the combinations in [`Combination::ALL`] order.
    pub transform: SMatrix<f64, 8, 8>,
    pub plus: Matrix4<f64>,
    pub minus: Matrix4<f64>,
    pub sigma: f64,
    pub coupling: f64,
}

impl BlockDecomposition {
    /// `diag(M₊, M₋)`.
    pub fn block_diagonal(&self) -> SMatrix<f64, 8, 8> {
        let mut m = SMatrix::<f64, 8, 8>::zeros();
        m.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.plus);
        m.fixed_view_mut::<4, 4>(4, 4).copy_from(&self.minus);
        m
    }

    /// `‖T M' Tᵀ - diag(M₊, M₋)‖∞` (entrywise maximum).
    pub fn conjugation_error(&self) -> Result<f64> {
        let drift = build_drift(self.sigma, self.coupling)?;
        let rotated = self.transform * drift.matrix * self.transform.transpose();
        Ok((rotated - self.block_diagonal()).amax())
    }
}

pub fn combination_transform() -> SMatrix<f64, 8, 8> {
    let mut t = SMatrix::<f64, 8, 8>::zeros();
    for (row, comb) in Combination::ALL.iter().enumerate() {
        t.set_row(row, &comb.coefficients().transpose());
    }
    t
}

pub fn build_blocks(sigma: f64, coupling: f64) -> Result<BlockDecomposition> {
    build_drift(sigma, coupling)?;
    Ok(BlockDecomposition {
        transform: combination_transform(),
        plus: plus_block(sigma, coupling),
        minus: minus_block(coupling),
        sigma,
        coupling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_is_orthogonal() {
        let t = combination_transform();
        let err = (t * t.transpose() - SMatrix::<f64, 8, 8>::identity()).amax();
        assert!(err < 1e-15);
    }

    #[test]
    fn printed_block_rows() {
        let c = 0.37;
        let b = build_blocks(1.0, c).unwrap();
        assert_eq!(b.plus.row(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.0, -c, c]);
        for r in 2..4 {
            assert_eq!(b.minus.row(r).iter().copied().collect::<Vec<_>>(), vec![c, c, 0.0, 0.0]);
        }
    }

    #[test]
    fn conjugation_example() {
        let b = build_blocks(1.5, 0.7).unwrap();
        assert!(b.conjugation_error().unwrap() < 1e-12);
    }
}
