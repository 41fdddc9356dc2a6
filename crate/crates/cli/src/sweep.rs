use opo_core::noise::{combination_spectrum, spectral_matrix, Combination};
use opo_core::polarization::criteria_record;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// One output line. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub omega: f64,
    pub c: f64,
    pub sigma: f64,
    #[serde(rename = "S_p")]
    pub s_p: f64,
    #[serde(rename = "S_q")]
    pub s_q: f64,
    #[serde(rename = "S_r")]
    pub s_r: f64,
    #[serde(rename = "S_s")]
    pub s_s: f64,
    #[serde(rename = "S_S1p")]
    pub s_s1p: f64,
    #[serde(rename = "S_S2m")]
    pub s_s2m: f64,
    pub sum_crit: f64,
    pub prod_crit: f64,
    pub epr_crit: f64,
}

pub const CSV_HEADER: &str = "omega,c,sigma,S_p,S_q,S_r,S_s,S_S1p,S_S2m,sum_crit,prod_crit,epr_crit";

/// Evaluates one grid point. `S_p`..`S_s` are the `α`-set spectra.
pub fn sweep_row(omega: f64, sigma: f64, coupling: f64, pump_variance: f64) -> Result<SweepRow> {
    let at = |source| CliError::Numeric {
        omega,
        sigma,
        coupling,
        source,
    };
    let s = spectral_matrix(omega, sigma, coupling, pump_variance).map_err(at)?;
    let spec = |comb: Combination| combination_spectrum(&s, &comb.coefficients()).map_err(at);
    let crit = criteria_record(&s).map_err(at)?;
    let row = SweepRow {
        omega,
        c: coupling,
        sigma,
        s_p: spec(Combination::PAlpha)?,
        s_q: spec(Combination::QAlpha)?,
        s_r: spec(Combination::RAlpha)?,
        s_s: spec(Combination::SAlpha)?,
        s_s1p: crit.s1_plus,
        s_s2m: crit.s2_minus,
        sum_crit: crit.sum_value,
        prod_crit: crit.product_value,
        epr_crit: crit.epr_value,
    };
    if row.values().iter().all(|v| v.is_finite()) {
        Ok(row)
    } else {
        Err(at(opo_core::Error::Numeric("non-finite spectrum".into())))
    }
}

impl SweepRow {
    pub fn values(&self) -> [f64; 12] {
        [
            self.omega,
            self.c,
            self.sigma,
            self.s_p,
            self.s_q,
            self.s_r,
            self.s_s,
            self.s_s1p,
            self.s_s2m,
            self.sum_crit,
            self.prod_crit,
            self.epr_crit,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    /// Rayon pool with this many threads; 0 uses the global pool.
    Threads(usize),
}

/// `(σ, c, Ω)` triples in output order: σ, then c, then ascending Ω.
pub fn grid_points(sigmas: &[f64], couplings: &[f64], omegas: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(sigmas.len() * couplings.len() * omegas.len());
    for &s in sigmas {
        for &c in couplings {
            for &w in omegas {
                out.push((s, c, w));
            }
        }
    }
    out
}

pub fn evaluate(points: &[(f64, f64, f64)], pump_variance: f64, mode: Parallelism) -> Result<Vec<SweepRow>> {
    let one = |&(s, c, w): &(f64, f64, f64)| sweep_row(w, s, c, pump_variance);
    match mode {
        Parallelism::Serial => points.iter().map(one).collect(),
        Parallelism::Threads(0) => points.par_iter().map(one).collect(),
        Parallelism::Threads(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| points.par_iter().map(one).collect()),
    }
}

pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with(config, Parallelism::Threads(0))
}

pub fn run_sweep_with(config: &RunConfig, mode: Parallelism) -> Result<Vec<SweepRow>> {
    config.validate()?;
    config.check_sweep()?;
    let points = grid_points(&config.sigmas(), &config.couplings(), &config.omega.values());
    evaluate(&points, config.pump_variance, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OmegaGrid;

    #[test]
    fn ordering_is_sigma_then_c_then_omega() {
        let pts = grid_points(&[1.0, 2.0], &[0.0, 1.0], &[0.1, 1.0]);
        assert_eq!(pts[0], (1.0, 0.0, 0.1));
        assert_eq!(pts[1], (1.0, 0.0, 1.0));
        assert_eq!(pts[2], (1.0, 1.0, 0.1));
        assert_eq!(pts[4], (2.0, 0.0, 0.1));
    }

    #[test]
    fn threshold_row_at_unit_frequency() {
        let r = sweep_row(1.0, 1.0, 0.0, 2.0).unwrap();
        assert!((r.s_r - 0.5).abs() < 1e-12);
        assert!((r.sum_crit - 0.5).abs() < 1e-12);
        assert!((r.prod_crit - 0.25).abs() < 1e-12);
    }

    #[test]
    fn default_sweep_size() {
        let c = RunConfig {
            sigma_list: Some(vec![1.0, 1.1]),
            c_list: Some(vec![0.0, 0.2, 1.0]),
            omega: OmegaGrid {
                points: 5,
                ..OmegaGrid::default()
            },
            ..RunConfig::default()
        };
        let rows = run_sweep_with(&c, Parallelism::Serial).unwrap();
        assert_eq!(rows.len(), 30);
        assert_eq!(rows, run_sweep_with(&c, Parallelism::Threads(3)).unwrap());
    }

    #[test]
    fn below_threshold_sweep_is_a_config_error() {
        let c = RunConfig {
            drive: crate::config::Drive::Sigma(0.5),
            ..RunConfig::default()
        };
        assert_eq!(run_sweep(&c).unwrap_err().exit_code(), 1);
    }
}
