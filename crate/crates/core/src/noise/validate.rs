//! Numeric-vs-closed-form cross-check of the quadrature spectra.

use std::fmt;

use super::blocks::Combination;
use super::closed_form::{phase_sum_spectrum, printed_spectra};
use super::spectrum::{combination_spectrum, spectral_matrix};
use crate::error::Result;

/// Relative agreement required between numeric and closed-form spectra.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpectrumId {
    P,
    Q,
    R,
    S,
}

impl SpectrumId {
    pub const ALL: [SpectrumId; 4] = [SpectrumId::P, SpectrumId::Q, SpectrumId::R, SpectrumId::S];

    fn combinations(self) -> [Combination; 2] {
        match self {
            SpectrumId::P => [Combination::PAlpha, Combination::PBeta],
            SpectrumId::Q => [Combination::QAlpha, Combination::QBeta],
            SpectrumId::R => [Combination::RAlpha, Combination::RBeta],
            SpectrumId::S => [Combination::SAlpha, Combination::SBeta],
        }
    }
}

impl fmt::Display for SpectrumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpectrumId::P => "S_p",
            SpectrumId::Q => "S_q",
            SpectrumId::R => "S_r",
            SpectrumId::S => "S_s",
        };
        f.write_str(s)
    }
}

/// Which closed form a numeric spectrum is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reference {
    /// The published expression, verbatim.
    Printed,
    /// The phase-sum form derived from the linearized model
    /// ([`phase_sum_spectrum`]); only used for `S_q`.
    Model,
}

/// Operating regime of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Regime {
    pub above_threshold: bool,
    pub coupled: bool,
}

impl Regime {
    pub fn of(sigma: f64, coupling: f64) -> Self {
        Regime {
            above_threshold: sigma > 1.0,
            coupled: coupling > 0.0,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.above_threshold { "sigma>1" } else { "sigma=1" };
        let c = if self.coupled { "c>0" } else { "c=0" };
        write!(f, "{s}, {c}")
    }
}

/// One numeric/closed-form pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub combination: Combination,
    pub omega: f64,
    pub sigma: f64,
    pub coupling: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_error: f64,
}

/// Worst agreement for one spectrum, reference and regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumCheck {
    pub spectrum: SpectrumId,
    pub reference: Reference,
    pub regime: Regime,
    pub points: usize,
    pub max_rel_error: f64,
    pub worst: Sample,
}

impl SpectrumCheck {
    pub fn passes(&self) -> bool {
        self.max_rel_error < SPECTRUM_TOLERANCE
    }
}

/// Frequencies, pump parameters and couplings to evaluate on.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub omegas: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub couplings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub pump_variance: f64,
    pub checks: Vec<SpectrumCheck>,
    /// Every sample off by more than [`SPECTRUM_TOLERANCE`].
    pub mismatches: Vec<Sample>,
}

impl ValidationReport {
    pub fn check(&self, spectrum: SpectrumId, reference: Reference, regime: Regime) -> Option<&SpectrumCheck> {
        self.checks
            .iter()
            .find(|c| c.spectrum == spectrum && c.reference == reference && c.regime == regime)
    }

    /// Largest relative error for `spectrum` against `reference` over the
    /// regimes accepted by `filter`.
    pub fn max_error(&self, spectrum: SpectrumId, reference: Reference, filter: impl Fn(Regime) -> bool) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.spectrum == spectrum && c.reference == reference && filter(c.regime))
            .map(|c| c.max_rel_error)
            .fold(0.0, f64::max)
    }
}

pub(crate) fn relative_error(numeric: f64, reference: f64) -> f64 {
    let diff = (numeric - reference).abs();
    if reference == 0.0 {
        diff
    } else {
        diff / reference.abs()
    }
}

/// Compares the `α` and `β` combination spectra of the numeric model with the
/// closed forms at every grid point. Mismatches are report content.
pub fn validate_spectra(grid: &SweepGrid, pump_variance: f64) -> Result<ValidationReport> {
    let mut checks: Vec<SpectrumCheck> = Vec::new();
    let mut mismatches = Vec::new();

    let mut record = |spectrum, reference, sample: Sample| {
        let regime = Regime::of(sample.sigma, sample.coupling);
        if sample.rel_error >= SPECTRUM_TOLERANCE {
            mismatches.push(sample);
        }
        match checks
            .iter_mut()
            .find(|c| c.spectrum == spectrum && c.reference == reference && c.regime == regime)
        {
            Some(check) => {
                check.points += 1;
                if sample.rel_error > check.max_rel_error {
                    check.max_rel_error = sample.rel_error;
                    check.worst = sample;
                }
            }
            None => checks.push(SpectrumCheck {
                spectrum,
                reference,
                regime,
                points: 1,
                max_rel_error: sample.rel_error,
                worst: sample,
            }),
        }
    };

    for &sigma in &grid.sigmas {
        for &coupling in &grid.couplings {
            for &omega in &grid.omegas {
                let spectrum = spectral_matrix(omega, sigma, coupling, pump_variance)?;
                let printed = printed_spectra(omega, sigma, coupling)?;
                let model_q = phase_sum_spectrum(omega, sigma, coupling)?;
                for id in SpectrumId::ALL {
                    let published = match id {
                        SpectrumId::P => printed.p,
                        SpectrumId::Q => printed.q,
                        SpectrumId::R => printed.r,
                        SpectrumId::S => printed.s,
                    };
                    for combination in id.combinations() {
                        let numeric = combination_spectrum(&spectrum, &combination.coefficients())?;
                        let sample = |closed_form| Sample {
                            combination,
                            omega,
                            sigma,
                            coupling,
                            numeric,
                            closed_form,
                            rel_error: relative_error(numeric, closed_form),
                        };
                        record(id, Reference::Printed, sample(published));
                        if id == SpectrumId::Q {
                            record(id, Reference::Model, sample(model_q));
                        }
                    }
                }
            }
        }
    }

    checks.sort_by_key(|c| (c.spectrum, c.reference, c.regime));
    Ok(ValidationReport {
        pump_variance,
        checks,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn threshold_grid_agrees_except_published_phase_sum() {
        let grid = SweepGrid {
            omegas: log_grid(60),
            sigmas: vec![1.0],
            couplings: vec![0.0, 0.2, 1.0],
        };
        let report = validate_spectra(&grid, 2.0).unwrap();
        for id in [SpectrumId::P, SpectrumId::R, SpectrumId::S] {
            assert!(report.max_error(id, Reference::Printed, |_| true) < 1e-9, "{id}");
        }
        assert!(report.max_error(SpectrumId::Q, Reference::Model, |_| true) < 1e-9);
        assert!(report.max_error(SpectrumId::Q, Reference::Printed, |_| true) > 1e-2);
        assert!(report.mismatches.iter().all(|m| m.combination == Combination::QAlpha
            || m.combination == Combination::QBeta));
    }

    #[test]
    fn threshold_is_pump_independent() {
        let grid = SweepGrid {
            omegas: log_grid(20),
            sigmas: vec![1.0],
            couplings: vec![0.0, 1.0],
        };
        let a = validate_spectra(&grid, 1.0).unwrap();
        let b = validate_spectra(&grid, 2.0).unwrap();
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn unit_pump_density_deviates_above_threshold() {
        let grid = SweepGrid {
            omegas: log_grid(40),
            sigmas: vec![1.1],
            couplings: vec![0.0],
        };
        let v2 = validate_spectra(&grid, 2.0).unwrap();
        assert!(v2.max_error(SpectrumId::P, Reference::Printed, |_| true) < 1e-9);
        assert!(v2.max_error(SpectrumId::Q, Reference::Model, |_| true) < 1e-9);
        let v1 = validate_spectra(&grid, 1.0).unwrap();
        assert!(v1.max_error(SpectrumId::P, Reference::Printed, |_| true) > 1e-3);
        assert!(v1.max_error(SpectrumId::Q, Reference::Model, |_| true) > 1e-3);
        // The difference sector never sees the pump.
        assert!(v1.max_error(SpectrumId::R, Reference::Printed, |_| true) < 1e-9);
    }
}
