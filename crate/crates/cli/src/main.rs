use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opo_cli::config::Drive;
use opo_cli::emit::{write_csv, write_svg, Column, PlotSpec, Trace};
use opo_cli::figure::{write_figure, FigureId};
use opo_cli::sweep::SweepRow;
use opo_cli::{parse_config, report, run_sweep_with, CliError, Format, Overrides, Parallelism, Result, RunConfig};
use opo_core::cavity::{
    depletion_residual, is_stationary, stationarity_residual, steady_state, threshold_branches,
    ReducedParams,
};
use opo_core::polarization::{heisenberg_bound, raw_product_criterion, stokes_means};

#[derive(Debug, Parser)]
#[command(name = "opo", version, about = "Noise spectra and polarization entanglement of a self-phase-locked OPO")]
struct Cli {
    /// Configuration file (sectioned key = value, TOML syntax).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Normalized plate coupling c = epsilon0/kappa.
    #[arg(long, global = true)]
    coupling: Option<f64>,
    #[arg(long, global = true)]
    omega_min: Option<f64>,
    #[arg(long, global = true)]
    omega_max: Option<f64>,
    #[arg(long, global = true)]
    omega_points: Option<usize>,
    #[arg(long, global = true)]
    pump_variance: Option<f64>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps; 0 uses every core, 1 runs serially.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quadrature and Stokes spectra over the frequency grid.
    Spectra,
    /// Sum, product and EPR criteria over the frequency grid.
    Criteria,
    /// Threshold branches and stationarity at the configured detunings.
    Threshold,
    /// Classical steady state and Stokes means.
    SteadyState,
    /// Reproduce a figure as CSV plus SVG.
    Figure {
        #[arg(long)]
        id: u32,
    },
    /// Compare the numeric model with every closed form.
    Validate,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    Overrides {
        sigma: cli.sigma,
        coupling: cli.coupling,
        omega_min: cli.omega_min,
        omega_max: cli.omega_max,
        omega_points: cli.omega_points,
        pump_variance: cli.pump_variance,
        output: cli.output.clone(),
        format: cli.format,
    }
    .apply(&mut config)?;
    Ok(config)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => io::stdout().write_all(bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn emit(rows: &[SweepRow], config: &RunConfig, plot: &PlotSpec) -> Result<()> {
    let mut buf = Vec::new();
    match config.output.format {
        Format::Csv => write_csv(rows, &mut buf)?,
        Format::Svg => write_svg(rows, plot, &mut buf).map_err(|source| CliError::Io {
            path: PathBuf::from("<buffer>"),
            source,
        })?,
    }
    write_out(config.output.path.as_deref(), &buf)
}

fn parallelism(threads: usize) -> Parallelism {
    if threads == 1 {
        Parallelism::Serial
    } else {
        Parallelism::Threads(threads)
    }
}

fn criteria_summary(rows: &[SweepRow], config: &RunConfig) -> Result<()> {
    let mut seen: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        if !seen.contains(&(row.sigma, row.c)) {
            seen.push((row.sigma, row.c));
        }
    }
    for (sigma, c) in seen {
        let best = rows
            .iter()
            .filter(|r| r.sigma == sigma && r.c == c)
            .min_by(|a, b| a.sum_crit.total_cmp(&b.sum_crit))
            .expect("group is non-empty");
        let p = ReducedParams::working_point(config.cavity.kappa, config.cavity.gain, c * config.cavity.kappa, sigma);
        let intensity = steady_state(&p, 0.0)?.intensity();
        let raw = raw_product_criterion(best.s_s1p, best.s_s2m, intensity);
        eprintln!(
            "sigma={sigma} c={c}: min sum {:.6} at Omega={:.6}; product {:.6}, EPR {:.6}; unnormalized product {:.6e} vs {:.6e}",
            best.sum_crit, best.omega, best.prod_crit, best.epr_crit, raw.lhs, raw.rhs
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32> {
    let config = load(cli)?;
    let mode = parallelism(cli.threads);
    match &cli.command {
        Command::Spectra => {
            let rows = run_sweep_with(&config, mode)?;
            let plot = PlotSpec {
                title: "Output noise spectra".into(),
                y_label: "normalized noise".into(),
                traces: [Column::Sp, Column::Sq, Column::Sr, Column::Ss, Column::S1Plus, Column::S2Minus]
                    .into_iter()
                    .map(Trace::of)
                    .collect(),
            };
            emit(&rows, &config, &plot)?;
        }
        Command::Criteria => {
            let rows = run_sweep_with(&config, mode)?;
            let plot = PlotSpec {
                title: "Entanglement criteria".into(),
                y_label: "criterion value".into(),
                traces: vec![Trace::of(Column::Sum), Trace::of(Column::Product), Trace::of(Column::Epr)],
            };
            emit(&rows, &config, &plot)?;
            criteria_summary(&rows, &config)?;
        }
        Command::Threshold => {
            let c = &config.cavity;
            let p = config.reduced();
            let branches = threshold_branches(c.delta_a, c.epsilon0, c.kappa, c.gain)?;
            let pump = p.pump_amplitude();
            let text = format!(
                "kappa = {}\ng = {}\nepsilon0 = {}\ndelta_a = {}\ndelta_b = {}\npsi = {}\n\
                 threshold_lower = {:e}\nthreshold_upper = {:e}\nlowest_threshold = {:e}\n\
                 stationarity_residual = {:e}\nstationary = {}\n",
                c.kappa,
                c.gain,
                c.epsilon0,
                c.delta_a,
                c.delta_b,
                c.psi,
                branches.lower,
                branches.upper,
                p.threshold_intensity(),
                stationarity_residual(&p, pump),
                is_stationary(&p, pump),
            );
            write_out(config.output.path.as_deref(), text.as_bytes())?;
        }
        Command::SteadyState => {
            let p = config.reduced();
            let state = steady_state(&p, 0.0)?;
            let stokes = stokes_means(&state);
            let mut text = format!(
                "sigma = {}\nmode_intensity = {:e}\nphase = {}\nbeam_power = {:e}\n\
                 stokes_a = {} {} {} {}\nstokes_b = {} {} {} {}\nheisenberg_bound = {:e}\n",
                p.sigma,
                state.intensity(),
                state.phase,
                state.beam_power(),
                stokes.a.s0,
                stokes.a.s1,
                stokes.a.s2,
                stokes.a.s3,
                stokes.b.s0,
                stokes.b.s1,
                stokes.b.s2,
                stokes.b.s3,
                heisenberg_bound(&state),
            );
            if let Drive::PumpIntensity { intensity, .. } = config.drive {
                if p.sigma >= 1.0 {
                    let r = depletion_residual(intensity, p.kappa, p.gain)?;
                    text.push_str(&format!("depletion_residual = {r:e}\n"));
                }
            }
            write_out(config.output.path.as_deref(), text.as_bytes())?;
        }
        Command::Figure { id } => {
            let id = FigureId::from_number(*id)?;
            let stem = config
                .output
                .path
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("figure{}", id.number())));
            for path in write_figure(id, &config.omega, config.pump_variance, &stem, mode)? {
                println!("{}", path.display());
            }
        }
        Command::Validate => {
            let outcome = report::validate(&config)?;
            write_out(config.output.path.as_deref(), outcome.render().as_bytes())?;
            return Ok(outcome.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
