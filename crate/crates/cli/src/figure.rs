use std::path::{Path, PathBuf};

use crate::config::OmegaGrid;
use crate::emit::{emit_csv, emit_svg, Column, PlotSpec, Trace};
use crate::error::{CliError, Result};
use crate::sweep::{evaluate, grid_points, Parallelism, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Amplitude-difference and phase-sum spectra.
    QuadratureSpectra,
    /// Sum, EPR and product criteria.
    Criteria,
}

impl FigureId {
    pub fn from_number(id: u32) -> Result<Self> {
        match id {
            2 => Ok(FigureId::QuadratureSpectra),
            3 => Ok(FigureId::Criteria),
            other => Err(CliError::config("figure.id", format!("expected 2 or 3, got {other}"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            FigureId::QuadratureSpectra => 2,
            FigureId::Criteria => 3,
        }
    }

    pub fn sigmas(self) -> &'static [f64] {
        match self {
            FigureId::QuadratureSpectra => &[1.0, 1.1],
            FigureId::Criteria => &[1.0],
        }
    }

    pub fn couplings(self) -> &'static [f64] {
        match self {
            FigureId::QuadratureSpectra => &[1.0, 0.2, 0.0],
            FigureId::Criteria => &[0.0, 1.0],
        }
    }

    pub fn plot(self) -> PlotSpec {
        match self {
            FigureId::QuadratureSpectra => PlotSpec {
                title: "Amplitude-difference and phase-sum noise spectra".into(),
                y_label: "normalized noise".into(),
                traces: vec![Trace::of(Column::Sr), Trace::of(Column::Sq)],
            },
            FigureId::Criteria => PlotSpec {
                title: "Entanglement criteria".into(),
                y_label: "criterion value".into(),
                traces: vec![
                    Trace::of(Column::Sum),
                    Trace::of(Column::Epr),
                    Trace::scaled(Column::Product, 0.5, "product/2"),
                ],
            },
        }
    }
}

pub fn figure_rows(id: FigureId, grid: &OmegaGrid, pump_variance: f64, mode: Parallelism) -> Result<Vec<SweepRow>> {
    let points = grid_points(id.sigmas(), id.couplings(), &grid.values());
    evaluate(&points, pump_variance, mode)
}

/// Writes `<stem>.csv` and `<stem>.svg`; returns both paths.
pub fn write_figure(
    id: FigureId,
    grid: &OmegaGrid,
    pump_variance: f64,
    stem: &Path,
    mode: Parallelism,
) -> Result<[PathBuf; 2]> {
    let rows = figure_rows(id, grid, pump_variance, mode)?;
    let csv = stem.with_extension("csv");
    let svg = stem.with_extension("svg");
    emit_csv(&rows, &csv)?;
    emit_svg(&rows, &id.plot(), &svg)?;
    Ok([csv, svg])
}
