use nalgebra::SVector;

/// Real coefficient vector over the quadrature basis.
pub type QuadVector = SVector<f64, 8>;

/// The four intracavity modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A1,
    A2,
    B1,
    B2,
}

/// Amplitude (`p`) or phase (`q`) quadrature of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Amplitude,
    Phase,
}

/// Fixed ordering `(p_a1, q_a1, p_a2, q_a2, p_b1, q_b1, p_b2, q_b2)` shared by
/// every drift, transfer and spectral matrix.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureBasis;

impl QuadratureBasis {
    pub const DIM: usize = 8;

    pub const LABELS: [&'static str; 8] = [
        "p_a1", "q_a1", "p_a2", "q_a2", "p_b1", "q_b1", "p_b2", "q_b2",
    ];

    pub const fn index(mode: Mode, quadrature: Quadrature) -> usize {
        let base = match mode {
            Mode::A1 => 0,
            Mode::A2 => 2,
            Mode::B1 => 4,
            Mode::B2 => 6,
        };
        match quadrature {
            Quadrature::Amplitude => base,
            Quadrature::Phase => base + 1,
        }
    }

    /// Unit vector selecting one quadrature.
    pub fn unit(mode: Mode, quadrature: Quadrature) -> QuadVector {
        let mut v = QuadVector::zeros();
        v[Self::index(mode, quadrature)] = 1.0;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_fixed() {
        let modes = [Mode::A1, Mode::A2, Mode::B1, Mode::B2];
        let mut seen = Vec::new();
        for m in modes {
            for q in [Quadrature::Amplitude, Quadrature::Phase] {
                seen.push(QuadratureBasis::index(m, q));
            }
        }
        assert_eq!(seen, (0..8).collect::<Vec<_>>());
        assert_eq!(QuadratureBasis::LABELS[QuadratureBasis::index(Mode::B2, Quadrature::Phase)], "q_b2");
    }
}
