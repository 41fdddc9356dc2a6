//! Run configuration: a flat, sectioned `key = value` document in TOML syntax.
//!
//! ```toml
//! [cavity]
//! kappa = 0.01
//! g = 0.001
//! epsilon0 = 0.002
//!
//! [drive]
//! sigma = 1.0
//!
//! [sweep]
//! omega_points = 200
//! c_list = [0, 0.2, 1]
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use opo_core::cavity::{sigma_from_pump, ReducedParams};
use opo_core::noise::{OMEGA_MAX, OMEGA_MIN, PumpInjectionMap};
use toml::{Table, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "log" => Ok(Spacing::Log),
            "linear" => Ok(Spacing::Linear),
            other => Err(format!("expected `log` or `linear`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(format!("expected `csv` or `svg`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    pub kappa: f64,
    pub gain: f64,
    pub epsilon0: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    Sigma(f64),
    /// Input pump intensity together with the `σ` it resolves to.
    PumpIntensity { intensity: f64, sigma: f64 },
}

impl Drive {
    pub fn sigma(&self) -> f64 {
        match *self {
            Drive::Sigma(s) => s,
            Drive::PumpIntensity { sigma, .. } => sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        OmegaGrid {
            min: 0.01,
            max: 100.0,
            points: 200,
            spacing: Spacing::Log,
        }
    }
}

impl OmegaGrid {
    /// Ascending grid points; both end points are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let mut out: Vec<f64> = match self.spacing {
            Spacing::Log => {
                let (lo, hi) = (self.min.log10(), self.max.log10());
                (0..self.points)
                    .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / last))
                    .collect()
            }
            Spacing::Linear => (0..self.points)
                .map(|i| self.min + (self.max - self.min) * i as f64 / last)
                .collect(),
        };
        out[0] = self.min;
        out[self.points - 1] = self.max;
        out
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.min >= OMEGA_MIN && self.min <= OMEGA_MAX) {
            return Err(CliError::config(
                "sweep.omega_min",
                format!("must lie in [{OMEGA_MIN:e}, {OMEGA_MAX:e}], got {}", self.min),
            ));
        }
        if !(self.max.is_finite() && self.max >= OMEGA_MIN && self.max <= OMEGA_MAX) {
            return Err(CliError::config(
                "sweep.omega_max",
                format!("must lie in [{OMEGA_MIN:e}, {OMEGA_MAX:e}], got {}", self.max),
            ));
        }
        if self.points < 2 {
            return Err(CliError::config("sweep.omega_points", "need at least 2 points"));
        }
        if self.min >= self.max {
            return Err(CliError::config(
                "sweep.omega_max",
                format!("degenerate grid: omega_max ({}) must exceed omega_min ({})", self.max, self.min),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub drive: Drive,
    pub pump_variance: f64,
    pub omega: OmegaGrid,
    pub sigma_list: Option<Vec<f64>>,
    pub c_list: Option<Vec<f64>>,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cavity: CavityConfig {
                kappa: 0.01,
                gain: 0.001,
                epsilon0: 0.0,
                delta_a: 0.0,
                delta_b: 0.0,
                psi: 0.0,
            },
            drive: Drive::Sigma(1.0),
            pump_variance: PumpInjectionMap::DEFAULT_VARIANCE,
            omega: OmegaGrid::default(),
            sigma_list: None,
            c_list: None,
            output: OutputConfig {
                path: None,
                format: Format::Csv,
            },
        }
    }
}

impl RunConfig {
    /// Pump parameters swept over: `sweep.sigma_list`, else the drive.
    pub fn sigmas(&self) -> Vec<f64> {
        self.sigma_list
            .clone()
            .unwrap_or_else(|| vec![self.drive.sigma()])
    }

    /// Normalized couplings swept over: `sweep.c_list`, else `ε₀/κ`.
    pub fn couplings(&self) -> Vec<f64> {
        self.c_list
            .clone()
            .unwrap_or_else(|| vec![self.cavity.epsilon0 / self.cavity.kappa])
    }

    pub fn reduced(&self) -> ReducedParams {
        ReducedParams {
            kappa: self.cavity.kappa,
            gain: self.cavity.gain,
            plate_coupling: self.cavity.epsilon0,
            detuning_a: self.cavity.delta_a,
            detuning_b: self.cavity.delta_b,
            crystal_phase: self.cavity.psi,
            sigma: self.drive.sigma(),
        }
    }

    /// Checks the sweep ranges used by the spectral commands.
    pub fn check_sweep(&self) -> Result<()> {
        let key = if self.sigma_list.is_some() {
            "sweep.sigma_list"
        } else {
            "drive.sigma"
        };
        for s in self.sigmas() {
            if s < 1.0 {
                return Err(CliError::config(key, format!("noise spectra need sigma >= 1, got {s}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.cavity;
        positive("cavity.kappa", c.kappa)?;
        positive("cavity.g", c.gain)?;
        non_negative("cavity.epsilon0", c.epsilon0)?;
        finite("cavity.delta_a", c.delta_a)?;
        finite("cavity.delta_b", c.delta_b)?;
        finite("cavity.psi", c.psi)?;
        match self.drive {
            Drive::Sigma(s) => non_negative("drive.sigma", s)?,
            Drive::PumpIntensity { intensity, .. } => non_negative("drive.pump_intensity", intensity)?,
        }
        positive("noise.pump_variance", self.pump_variance)?;
        self.omega.validate()?;
        if let Some(list) = &self.sigma_list {
            if list.is_empty() {
                return Err(CliError::config("sweep.sigma_list", "empty list"));
            }
            for &s in list {
                if !(s.is_finite() && s >= 1.0) {
                    return Err(CliError::config("sweep.sigma_list", format!("values must be >= 1, got {s}")));
                }
            }
        }
        if let Some(list) = &self.c_list {
            if list.is_empty() {
                return Err(CliError::config("sweep.c_list", "empty list"));
            }
            for &v in list {
                non_negative("sweep.c_list", v)?;
            }
        }
        Ok(())
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(key, format!("must be finite, got {v}")))
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(key, format!("must be positive, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CliError::config(key, format!("must be non-negative, got {v}")))
    }
}

const SECTIONS: [(&str, &[&str]); 5] = [
    ("cavity", &["kappa", "g", "epsilon0", "delta_a", "delta_b", "psi"]),
    ("drive", &["sigma", "pump_intensity"]),
    ("noise", &["pump_variance"]),
    (
        "sweep",
        &["omega_min", "omega_max", "omega_points", "spacing", "sigma_list", "c_list"],
    ),
    ("output", &["path", "format"]),
];

struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
}

impl<'a> Section<'a> {
    fn key(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn raw(&self, key: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => as_number(v)
                .map(Some)
                .ok_or_else(|| CliError::config(self.key(key), format!("expected a number, got {v}"))),
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| CliError::config(self.key(key), "missing required key"))
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Integer(n)) if *n >= 0 => Ok(Some(*n as usize)),
            Some(v) => Err(CliError::config(self.key(key), format!("expected a non-negative integer, got {v}"))),
        }
    }

    fn text(&self, key: &str) -> Result<Option<&'a str>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(CliError::config(self.key(key), format!("expected a string, got {v}"))),
        }
    }

    fn parsed<T: FromStr<Err = String>>(&self, key: &str) -> Result<Option<T>> {
        self.text(key)?
            .map(|s| s.parse().map_err(|e| CliError::config(self.key(key), e)))
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    as_number(v).ok_or_else(|| {
                        CliError::config(self.key(key), format!("expected numbers, got {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(v) => Err(CliError::config(self.key(key), format!("expected a list of numbers, got {v}"))),
        }
    }
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(n) => Some(*n as f64),
        _ => None,
    }
}

/// Parses and validates a configuration document. Defaults:
/// `pump_variance = 2`, `spacing = "log"`, `format = "csv"`, 200 points on
/// `[0.01, 100]`, `epsilon0 = 0`, `delta_a = delta_b = epsilon0`, `psi = 0`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::config("<document>", e.message().to_string()))?;

    for (name, value) in &doc {
        let Some((_, known)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            return Err(CliError::config(name.as_str(), "unknown section"));
        };
        let Value::Table(table) = value else {
            return Err(CliError::config(name.as_str(), "expected a [section]"));
        };
        if let Some(key) = table.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::config(format!("{name}.{key}"), "unknown key"));
        }
    }
    let section = |name: &'static str| Section {
        name,
        table: doc.get(name).and_then(Value::as_table),
    };

    let cav = section("cavity");
    let kappa = cav.required("kappa")?;
    let gain = cav.required("g")?;
    let epsilon0 = cav.number("epsilon0")?.unwrap_or(0.0);
    let cavity = CavityConfig {
        kappa,
        gain,
        epsilon0,
        delta_a: cav.number("delta_a")?.unwrap_or(epsilon0),
        delta_b: cav.number("delta_b")?.unwrap_or(epsilon0),
        psi: cav.number("psi")?.unwrap_or(0.0),
    };

    let drv = section("drive");
    let drive = match (drv.number("sigma")?, drv.number("pump_intensity")?) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "drive.sigma, drive.pump_intensity",
                "give exactly one of `sigma` and `pump_intensity`, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "drive.sigma, drive.pump_intensity",
                "one of `sigma` and `pump_intensity` is required",
            ))
        }
        (Some(s), None) => Drive::Sigma(s),
        (None, Some(intensity)) => {
            non_negative("drive.pump_intensity", intensity)?;
            positive("cavity.kappa", kappa)?;
            positive("cavity.g", gain)?;
            let sigma = sigma_from_pump(intensity, kappa, gain)
                .map_err(|e| CliError::config("drive.pump_intensity", e.to_string()))?;
            Drive::PumpIntensity { intensity, sigma }
        }
    };

    let noise = section("noise");
    let pump_variance = noise
        .number("pump_variance")?
        .unwrap_or(PumpInjectionMap::DEFAULT_VARIANCE);

    let sw = section("sweep");
    let defaults = OmegaGrid::default();
    let omega = OmegaGrid {
        min: sw.number("omega_min")?.unwrap_or(defaults.min),
        max: sw.number("omega_max")?.unwrap_or(defaults.max),
        points: sw.count("omega_points")?.unwrap_or(defaults.points),
        spacing: sw.parsed("spacing")?.unwrap_or(defaults.spacing),
    };

    let out = section("output");
    let output = OutputConfig {
        path: out.text("path")?.map(PathBuf::from),
        format: out.parsed("format")?.unwrap_or(Format::Csv),
    };

    let config = RunConfig {
        cavity,
        drive,
        pump_variance,
        omega,
        sigma_list: sw.list("sigma_list")?,
        c_list: sw.list("c_list")?,
        output,
    };
    config.validate()?;
    Ok(config)
}

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sigma: Option<f64>,
    pub coupling: Option<f64>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_points: Option<usize>,
    pub pump_variance: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) -> Result<()> {
        if let Some(s) = self.sigma {
            config.drive = Drive::Sigma(s);
            config.sigma_list = Some(vec![s]);
        }
        if let Some(c) = self.coupling {
            config.c_list = Some(vec![c]);
        }
        if let Some(v) = self.omega_min {
            config.omega.min = v;
        }
        if let Some(v) = self.omega_max {
            config.omega.max = v;
        }
        if let Some(n) = self.omega_points {
            config.omega.points = n;
        }
        if let Some(v) = self.pump_variance {
            config.pump_variance = v;
        }
        if let Some(p) = &self.output {
            config.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            config.output.format = f;
        }
        config.validate()
    }
}
