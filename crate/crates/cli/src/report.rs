//! The `validate` command: numeric model against every closed form, with
//! each check classified as strict, documented or informational.

use std::fmt::{self, Write as _};

use opo_core::cavity::{
    circular_mode, round_trip_reduced, stationarity_residual, threshold_branches, ReducedParams,
};
use opo_core::noise::{
    build_blocks, combination_spectrum, phase_sum_spectrum, printed_spectra, spectral_matrix,
    validate_spectra, Combination, PumpInjectionMap, Reference, Regime, SpectrumId, SweepGrid,
    SPECTRUM_TOLERANCE,
};
use opo_core::polarization::{printed_stokes_spectra, stokes_fluctuation_spectra};

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// Must pass; a failure exits with status 2.
    Strict,
    /// Deviation tied to the pump-noise convention; a failure exits with 3.
    Documented,
    /// Reported only (the published phase-sum expression).
    Informational,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Strict => "strict",
            Class::Documented => "documented",
            Class::Informational => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub section: &'static str,
    pub item: String,
    pub value: f64,
    pub tolerance: f64,
    /// `true` when `value` must stay below `tolerance`, `false` when above.
    pub upper_bound: bool,
    pub class: Class,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        if self.upper_bound {
            self.value < self.tolerance
        } else {
            self.value >= self.tolerance
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOutcome {
    pub lines: Vec<CheckLine>,
    /// Free-form tables appended after the checks.
    pub tables: String,
    pub pump_variance: f64,
}

impl ValidateOutcome {
    pub fn strict_failures(&self) -> usize {
        self.count(Class::Strict)
    }

    pub fn documented_deviations(&self) -> usize {
        self.count(Class::Documented)
    }

    fn count(&self, class: Class) -> usize {
        self.lines.iter().filter(|l| l.class == class && !l.passed()).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.strict_failures() > 0 {
            2
        } else if self.documented_deviations() > 0 {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "validation report (pump_variance = {})", self.pump_variance);
        let mut section = "";
        for l in &self.lines {
            if l.section != section {
                section = l.section;
                let _ = writeln!(s, "\n== {section}");
            }
            let cmp = if l.upper_bound { "<" } else { ">=" };
            let status = if l.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{status} [{}] {}: {:.3e} (need {cmp} {:.0e})",
                l.class, l.item, l.value, l.tolerance
            );
        }
        s.push('\n');
        s.push_str(&self.tables);
        let _ = writeln!(
            s,
            "\nstrict failures: {}, documented deviations: {}, exit status: {}",
            self.strict_failures(),
            self.documented_deviations(),
            self.exit_code()
        );
        s
    }
}

pub const DEFAULT_SIGMAS: [f64; 4] = [1.0, 1.1, 1.5, 2.0];
pub const DEFAULT_COUPLINGS: [f64; 4] = [0.0, 0.2, 1.0, 2.0];

fn classify(regime: Regime, pump_variance: f64) -> Class {
    let reference_variance = pump_variance == PumpInjectionMap::DEFAULT_VARIANCE;
    if regime.above_threshold && (regime.coupled || !reference_variance) {
        Class::Documented
    } else {
        Class::Strict
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn validate(config: &RunConfig) -> Result<ValidateOutcome> {
    config.validate()?;
    config.check_sweep()?;
    let v = config.pump_variance;
    let grid = SweepGrid {
        omegas: config.omega.values(),
        sigmas: config.sigma_list.clone().unwrap_or(DEFAULT_SIGMAS.to_vec()),
        couplings: config.c_list.clone().unwrap_or(DEFAULT_COUPLINGS.to_vec()),
    };
    let mut lines = Vec::new();

    let report = validate_spectra(&grid, v)?;
    for check in &report.checks {
        let (name, class) = match (check.spectrum, check.reference) {
            (SpectrumId::Q, Reference::Printed) => ("S_q published form", Class::Informational),
            (SpectrumId::Q, Reference::Model) => ("S_q model form", classify(check.regime, v)),
            (id, _) => (id_name(id), classify(check.regime, v)),
        };
        lines.push(CheckLine {
            section: "quadrature spectra vs closed forms (max rel. error)",
            item: format!("{name} [{}] over {} points", check.regime, check.points),
            value: check.max_rel_error,
            tolerance: SPECTRUM_TOLERANCE,
            upper_bound: true,
            class,
        });
    }

    let mut stokes: Vec<(Regime, &'static str, f64, usize)> = Vec::new();
    for &sigma in &grid.sigmas {
        for &c in &grid.couplings {
            for &omega in &grid.omegas {
                let n = stokes_fluctuation_spectra(&spectral_matrix(omega, sigma, c, v)?)?;
                let p = printed_stokes_spectra(omega, sigma, c)?;
                let regime = Regime::of(sigma, c);
                for (name, err) in [("S_S1p", rel(n.s1_plus, p.s1_plus)), ("S_S2m", rel(n.s2_minus, p.s2_minus))] {
                    match stokes.iter_mut().find(|e| e.0 == regime && e.1 == name) {
                        Some(e) => {
                            e.2 = e.2.max(err);
                            e.3 += 1;
                        }
                        None => stokes.push((regime, name, err, 1)),
                    }
                }
            }
        }
    }
    stokes.sort_by_key(|e| (e.1, e.0));
    for (regime, name, err, points) in stokes {
        let class = if name == "S_S1p" { Class::Strict } else { classify(regime, v) };
        lines.push(CheckLine {
            section: "Stokes spectra vs closed forms (max rel. error)",
            item: format!("{name} [{regime}] over {points} points"),
            value: err,
            tolerance: SPECTRUM_TOLERANCE,
            upper_bound: true,
            class,
        });
    }

    if grid.sigmas.contains(&1.0) {
        let other = if v == 1.0 { 2.0 } else { 1.0 };
        let mut worst: f64 = 0.0;
        for &c in &grid.couplings {
            for &omega in &grid.omegas {
                let a = spectral_matrix(omega, 1.0, c, v)?;
                let b = spectral_matrix(omega, 1.0, c, other)?;
                worst = worst.max((a.matrix() - b.matrix()).camax());
            }
        }
        lines.push(CheckLine {
            section: "pump decoupling at threshold",
            item: format!("max |S(v={v}) - S(v={other})| at sigma=1"),
            value: worst,
            tolerance: 1e-15,
            upper_bound: true,
            class: Class::Strict,
        });
    }

    cavity_checks(config, &mut lines)?;

    let mut tables = String::new();
    pump_variance_table(&grid, &mut tables)?;

    Ok(ValidateOutcome {
        lines,
        tables,
        pump_variance: v,
    })
}

fn id_name(id: SpectrumId) -> &'static str {
    match id {
        SpectrumId::P => "S_p",
        SpectrumId::Q => "S_q",
        SpectrumId::R => "S_r",
        SpectrumId::S => "S_s",
    }
}

fn cavity_checks(config: &RunConfig, lines: &mut Vec<CheckLine>) -> Result<()> {
    let g = config.cavity.gain;
    let mut eig: f64 = 0.0;
    for kappa in [1e-4, 1e-3, 1e-2] {
        for eps in [1e-4, 1e-3, 1e-2] {
            let p = ReducedParams::working_point(kappa, g, eps, 1.0);
            let v = circular_mode();
            let out = round_trip_reduced(&p, p.pump_amplitude()) * v;
            eig = eig.max((out - v).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    lines.push(CheckLine {
        section: "cavity",
        item: "eigenvector identity, kappa, epsilon0 in {1e-4, 1e-3, 1e-2}".into(),
        value: eig,
        tolerance: 1e-12,
        upper_bound: true,
        class: Class::Strict,
    });

    let (kappa, eps) = (config.cavity.kappa, config.cavity.epsilon0);
    let branches = threshold_branches(eps, eps, kappa, g)?;
    let expected = 2.0 * kappa * kappa / (g * g);
    lines.push(CheckLine {
        section: "cavity",
        item: format!("lowest threshold vs 2 kappa^2/g^2 (kappa={kappa}, g={g})"),
        value: rel(branches.lower, expected),
        tolerance: 1e-12,
        upper_bound: true,
        class: Class::Strict,
    });

    let wp = ReducedParams::working_point(1e-3, g, 1e-3, 1.0);
    let on = stationarity_residual(&wp, wp.pump_amplitude());
    let off_params = ReducedParams {
        detuning_b: -1e-3,
        ..wp
    };
    let off = stationarity_residual(&off_params, wp.pump_amplitude());
    lines.push(CheckLine {
        section: "cavity",
        item: "stationarity residual on the working point (kappa = epsilon0 = 1e-3)".into(),
        value: on,
        tolerance: 1e-9,
        upper_bound: true,
        class: Class::Strict,
    });
    lines.push(CheckLine {
        section: "cavity",
        item: "off-diagonal / on-diagonal residual ratio".into(),
        value: if on == 0.0 { f64::INFINITY } else { off / on },
        tolerance: 1e2,
        upper_bound: false,
        class: Class::Strict,
    });

    let mut blocks: f64 = 0.0;
    for sigma in [1.0, 1.25, 1.5, 2.0] {
        for c in [0.0, 0.2, 1.0, 2.0] {
            blocks = blocks.max(build_blocks(sigma, c)?.conjugation_error()?);
        }
    }
    lines.push(CheckLine {
        section: "noise drift",
        item: "block decomposition, sigma in {1, 1.25, 1.5, 2}, c in {0, 0.2, 1, 2}".into(),
        value: blocks,
        tolerance: 1e-12,
        upper_bound: true,
        class: Class::Strict,
    });
    Ok(())
}

/// Pump-variance reconciliation: how `v = 1` and `v = 2` compare with the
/// closed forms above threshold, plus the low-frequency phase-sum level.
fn pump_variance_table(grid: &SweepGrid, s: &mut String) -> Result<()> {
    let mut sigmas: Vec<f64> = grid.sigmas.iter().copied().filter(|&x| x > 1.0).collect();
    if sigmas.is_empty() {
        sigmas.push(1.1);
    }
    let _ = writeln!(s, "== pump-variance reconciliation (max rel. error vs closed forms, sigma > 1)");
    let _ = writeln!(s, "{:>6} {:>5} {:>4} {:>12} {:>12} {:>12}", "sigma", "c", "v", "S_p", "S_q model", "S_S2m");
    for &sigma in &sigmas {
        for &c in &grid.couplings {
            for v in [1.0, 2.0] {
                let (mut ep, mut eq, mut es) = (0.0f64, 0.0f64, 0.0f64);
                for &omega in &grid.omegas {
                    let m = spectral_matrix(omega, sigma, c, v)?;
                    let printed = printed_spectra(omega, sigma, c)?;
                    let sp = combination_spectrum(&m, &Combination::PAlpha.coefficients())?;
                    let sq = combination_spectrum(&m, &Combination::QAlpha.coefficients())?;
                    let st = stokes_fluctuation_spectra(&m)?;
                    ep = ep.max(rel(sp, printed.p));
                    eq = eq.max(rel(sq, phase_sum_spectrum(omega, sigma, c)?));
                    es = es.max(rel(st.s2_minus, printed_stokes_spectra(omega, sigma, c)?.s2_minus));
                }
                let _ = writeln!(s, "{sigma:>6} {c:>5} {v:>4} {ep:>12.3e} {eq:>12.3e} {es:>12.3e}");
            }
        }
    }

    let omega = 1e-4;
    let _ = writeln!(s, "\n== low-frequency phase-sum level, c = 0, Omega = {omega:e}");
    let _ = writeln!(
        s,
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "sigma", "v=1", "v=2", "model form", "published", "1-1/sigma", "1-1/sigma^2"
    );
    for &sigma in &sigmas {
        let q = |v| -> Result<f64> {
            Ok(combination_spectrum(&spectral_matrix(omega, sigma, 0.0, v)?, &Combination::QAlpha.coefficients())?)
        };
        let _ = writeln!(
            s,
            "{sigma:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            q(1.0)?,
            q(2.0)?,
            phase_sum_spectrum(omega, sigma, 0.0)?,
            printed_spectra(omega, sigma, 0.0)?.q,
            1.0 - 1.0 / sigma,
            1.0 - 1.0 / (sigma * sigma)
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OmegaGrid;

    fn small(config: &mut RunConfig) {
        config.omega = OmegaGrid {
            points: 25,
            ..OmegaGrid::default()
        };
    }

    #[test]
    fn default_grid_passes() {
        let mut c = RunConfig::default();
        small(&mut c);
        let out = validate(&c).unwrap();
        assert_eq!(out.exit_code(), 0, "{}", out.render());
        // the published phase-sum form is reported, and it does deviate
        assert!(out
            .lines
            .iter()
            .any(|l| l.class == Class::Informational && !l.passed()));
    }

    #[test]
    fn unit_pump_variance_is_documented_deviation() {
        let mut c = RunConfig::default();
        small(&mut c);
        c.pump_variance = 1.0;
        c.sigma_list = Some(vec![1.0, 1.1]);
        c.c_list = Some(vec![0.0]);
        let out = validate(&c).unwrap();
        assert_eq!(out.exit_code(), 3, "{}", out.render());
        let p = out
            .lines
            .iter()
            .find(|l| l.item.starts_with("S_p [sigma>1, c=0]"))
            .unwrap();
        assert!(p.value > 1e-3);
    }

    #[test]
    fn threshold_only_is_variance_independent() {
        let mut c = RunConfig::default();
        small(&mut c);
        c.sigma_list = Some(vec![1.0]);
        c.pump_variance = 1.0;
        let one = validate(&c).unwrap();
        c.pump_variance = 2.0;
        let two = validate(&c).unwrap();
        assert_eq!(one.exit_code(), 0);
        let values = |o: &ValidateOutcome| o.lines.iter().map(|l| l.value).collect::<Vec<_>>();
        assert_eq!(values(&one), values(&two));
    }
}
