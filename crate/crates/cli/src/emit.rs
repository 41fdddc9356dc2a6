//! CSV and SVG writers. Both are byte-deterministic for a given row set.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, Result};
use crate::sweep::SweepRow;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn non_empty(rows: &[SweepRow]) -> Result<()> {
    if rows.is_empty() {
        Err(CliError::config("output", "nothing to emit: the sweep produced no rows"))
    } else {
        Ok(())
    }
}

/// Header plus one line per row; floats use the shortest round-trip form.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    non_empty(rows)?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn csv_bytes(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(buf)
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    non_empty(rows)?;
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_csv(rows, &mut w)?;
    w.flush().map_err(io_err(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Sp,
    Sq,
    Sr,
    Ss,
    S1Plus,
    S2Minus,
    Sum,
    Product,
    Epr,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Sp => "S_p",
            Column::Sq => "S_q",
            Column::Sr => "S_r",
            Column::Ss => "S_s",
            Column::S1Plus => "S_S1p",
            Column::S2Minus => "S_S2m",
            Column::Sum => "sum",
            Column::Product => "product",
            Column::Epr => "EPR",
        }
    }

    pub fn get(self, row: &SweepRow) -> f64 {
        match self {
            Column::Sp => row.s_p,
            Column::Sq => row.s_q,
            Column::Sr => row.s_r,
            Column::Ss => row.s_s,
            Column::S1Plus => row.s_s1p,
            Column::S2Minus => row.s_s2m,
            Column::Sum => row.sum_crit,
            Column::Product => row.prod_crit,
            Column::Epr => row.epr_crit,
        }
    }
}

/// A plotted quantity: `scale * column`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub column: Column,
    pub scale: f64,
    pub label: String,
}

impl Trace {
    pub fn of(column: Column) -> Self {
        Trace {
            column,
            scale: 1.0,
            label: column.name().to_string(),
        }
    }

    pub fn scaled(column: Column, scale: f64, label: &str) -> Self {
        Trace {
            column,
            scale,
            label: label.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub y_label: String,
    pub traces: Vec<Trace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One series per `(σ, c)` group and trace, in row order.
pub fn series(rows: &[SweepRow], spec: &PlotSpec) -> Vec<Series> {
    let mut groups: Vec<((f64, f64), Vec<&SweepRow>)> = Vec::new();
    for row in rows {
        let key = (row.sigma, row.c);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    let mut out = Vec::new();
    for ((sigma, c), members) in &groups {
        for trace in &spec.traces {
            out.push(Series {
                label: format!("{} (sigma={sigma}, c={c})", trace.label),
                points: members
                    .iter()
                    .map(|r| (r.omega, trace.scale * trace.column.get(r)))
                    .collect(),
            });
        }
    }
    out
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 250.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Self-contained line plot with a logarithmic frequency axis.
pub fn render_svg(series: &[Series], spec: &PlotSpec) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (mut y_lo, mut y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let decade_lo = x_lo.log10().floor();
    let mut decade_hi = x_hi.log10().ceil();
    if decade_hi <= decade_lo {
        decade_hi = decade_lo + 1.0;
    }
    if y_hi - y_lo < 1e-12 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + plot_w * (x.log10() - decade_lo) / (decade_hi - decade_lo);
    let py = |y: f64| TOP + plot_h * (y_hi - y) / (y_hi - y_lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    let mut k = decade_lo;
    while k <= decade_hi + 0.5 {
        let x = px(10f64.powf(k));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            TOP + plot_h
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{}</text>"#,
            TOP + plot_h + 16.0,
            k as i64
        );
        k += 1.0;
    }
    for i in 0..=5 {
        let y = y_lo + (y_hi - y_lo) * i as f64 / 5.0;
        let yy = py(y);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.3}</text>"#,
            LEFT - 6.0,
            yy + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">Omega</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(&spec.y_label)
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg<W: Write>(rows: &[SweepRow], spec: &PlotSpec, mut out: W) -> io::Result<()> {
    out.write_all(render_svg(&series(rows, spec), spec).as_bytes())
}

pub fn emit_svg(rows: &[SweepRow], spec: &PlotSpec, path: &Path) -> Result<()> {
    non_empty(rows)?;
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_svg(rows, spec, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{sweep_row, CSV_HEADER};

    #[test]
    fn single_row_is_two_lines() {
        let row = sweep_row(1.0, 1.0, 0.0, 2.0).unwrap();
        let text = String::from_utf8(csv_bytes(&[row]).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("1.0,0.0,1.0,"));
    }

    #[test]
    fn values_round_trip() {
        let row = sweep_row(0.37, 1.3, 0.2, 2.0).unwrap();
        let text = String::from_utf8(csv_bytes(&[row]).unwrap()).unwrap();
        let fields: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields, row.values().to_vec());
    }

    #[test]
    fn empty_rows_are_rejected() {
        assert!(csv_bytes(&[]).is_err());
    }

    #[test]
    fn polyline_per_curve() {
        let mut rows = Vec::new();
        for c in [0.0, 0.2, 1.0] {
            for i in 0..200 {
                rows.push(sweep_row(10f64.powf(-2.0 + 4.0 * i as f64 / 199.0), 1.0, c, 2.0).unwrap());
            }
        }
        let spec = PlotSpec {
            title: "t".into(),
            y_label: "y".into(),
            traces: vec![Trace::of(Column::Sr)],
        };
        let mut buf = Vec::new();
        write_svg(&rows, &spec, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches("<polyline").count(), 3);
        let mut again = Vec::new();
        write_svg(&rows, &spec, &mut again).unwrap();
        assert_eq!(text.as_bytes(), &again[..]);
    }
}
