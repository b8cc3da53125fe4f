//! Figure data: bound curves for the three justifications and grouped bar
//! charts of the survey tables. CSV is canonical; SVG renders the same rows.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bounds::JustificationId;
use crate::error::{Error, Result};
use crate::gamma::gamma_plus_one_series;
use crate::survey::{percent_units, LikertCategory, StatementId, StatementTable};

pub const DEFAULT_RESOLUTION: usize = 512;
pub const T_MIN: f64 = 0.001;
pub const T_MAX: f64 = 0.999;
/// Amplitude and angular frequency of the illustrative symbolic curve.
pub const SYMBOLIC_AMPLITUDE: f64 = 0.3;
pub const SYMBOLIC_FREQUENCY: f64 = 6.0 * std::f64::consts::PI;

pub const CURVE_HEADER: &str = "t,a,b,gamma,symbolic";
pub const BAR_HEADER: &str = "statement_id,category,count,percentage";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Svg,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            _ => Err(format!("unknown format `{s}` (expected csv or svg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureSpec {
    pub figure_id: u8,
    pub resolution: usize,
    pub format: OutputFormat,
}

impl FigureSpec {
    pub fn new(figure_id: u8) -> Self {
        FigureSpec {
            figure_id,
            resolution: DEFAULT_RESOLUTION,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=7).contains(&self.figure_id) {
            return Err(Error::InvalidSpec {
                what: "figure_id",
                reason: format!("{} is not in 1..=7", self.figure_id),
            });
        }
        if self.resolution < 2 {
            return Err(Error::InvalidSpec {
                what: "resolution",
                reason: format!("{} curve points, need at least 2", self.resolution),
            });
        }
        Ok(())
    }

    /// Justification drawn by figures 1 to 3.
    pub fn justification(&self) -> Option<JustificationId> {
        JustificationId::from_number(self.figure_id).filter(|_| self.figure_id <= 3)
    }

    pub fn file_name(&self) -> String {
        format!("figure{}.{}", self.figure_id, self.format.extension())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StyleHint {
    LowerBound,
    UpperBound,
    Gamma,
    Symbolic,
    Bar,
}

impl StyleHint {
    fn colour(self) -> &'static str {
        match self {
            StyleHint::LowerBound => "#d62728",
            StyleHint::UpperBound => "#1f77b4",
            StyleHint::Gamma => "#000000",
            StyleHint::Symbolic => "#2ca02c",
            StyleHint::Bar => "#7f7f7f",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    pub samples: Vec<(f64, f64)>,
    pub style: StyleHint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub symbolic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarRow {
    pub statement_id: StatementId,
    pub category: LikertCategory,
    pub count: u32,
    pub percentage: f64,
}

/// Illustrative stand-in for an unspecified function squeezed between the
/// bounds: a sinusoid whose amplitude shrinks with the distance to the nearer
/// bound, so it stays inside `[a, b]` whenever `gamma` does.
pub fn symbolic_curve(t: f64, a: f64, b: f64, gamma: f64) -> f64 {
    let room = (gamma - a).min(b - gamma).max(0.0);
    gamma + SYMBOLIC_AMPLITUDE * room * (SYMBOLIC_FREQUENCY * t).sin()
}

/// Evenly spaced samples on `[T_MIN, T_MAX]`.
pub fn curve_grid(resolution: usize) -> Vec<f64> {
    let step = (T_MAX - T_MIN) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                T_MAX
            } else {
                T_MIN + i as f64 * step
            }
        })
        .collect()
}

pub fn curve_rows(id: JustificationId, resolution: usize) -> Result<Vec<CurveRow>> {
    if resolution < 2 {
        return Err(Error::InvalidSpec {
            what: "resolution",
            reason: format!("{resolution} curve points, need at least 2"),
        });
    }
    curve_grid(resolution)
        .into_iter()
        .map(|t| {
            let a = id.lower(t)?;
            let b = id.upper(t)?;
            let gamma = gamma_plus_one_series(t)?.value;
            Ok(CurveRow {
                t,
                a,
                b,
                gamma,
                symbolic: symbolic_curve(t, a, b, gamma),
            })
        })
        .collect()
}

pub fn curve_series(rows: &[CurveRow]) -> Vec<PlotSeries> {
    let series = |name: &str, style, f: fn(&CurveRow) -> f64| PlotSeries {
        name: name.to_string(),
        samples: rows.iter().map(|r| (r.t, f(r))).collect(),
        style,
    };
    vec![
        series("a(t)", StyleHint::LowerBound, |r| r.a),
        series("b(t)", StyleHint::UpperBound, |r| r.b),
        series("Γ(t+1)", StyleHint::Gamma, |r| r.gamma),
        series("symbolic t! (illustrative)", StyleHint::Symbolic, |r| {
            r.symbolic
        }),
    ]
}

/// Statements shown by bar figures 4 to 7.
pub fn bar_statements(figure_id: u8) -> Option<&'static [StatementId]> {
    use StatementId::*;
    match figure_id {
        4 => Some(&[S1a, S2a, S3a]),
        5 => Some(&[S1b, S2b, S3b]),
        6 => Some(&[S1c, S2c, S3c]),
        7 => Some(&[S0, S4]),
        _ => None,
    }
}

/// Bar rows for a survey figure, drawn from `tables`.
pub fn bar_rows(figure_id: u8, tables: &[StatementTable]) -> Result<Vec<BarRow>> {
    let ids = bar_statements(figure_id).ok_or_else(|| Error::InvalidSpec {
        what: "figure_id",
        reason: format!("{figure_id} is not a survey figure (4..=7)"),
    })?;
    let mut rows = Vec::with_capacity(ids.len() * 5);
    for &id in ids {
        let table = tables
            .iter()
            .find(|t| t.statement_id == id)
            .ok_or(Error::EmptyTable)?;
        for c in LikertCategory::ALL {
            let units = percent_units(table.count(c) as u64, table.total() as u64, 2)?;
            rows.push(BarRow {
                statement_id: id,
                category: c,
                count: table.count(c),
                percentage: units as f64 / 100.0,
            });
        }
    }
    Ok(rows)
}

/// Fixed ten-significant-digit decimal rendering.
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000".to_string();
    }
    let sci = format!("{v:.9e}");
    let exp: i32 = sci[sci.find('e').map_or(0, |i| i + 1)..]
        .parse()
        .unwrap_or(0);
    let decimals = (9 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 64);
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_sig10(r.t),
            format_sig10(r.a),
            format_sig10(r.b),
            format_sig10(r.gamma),
            format_sig10(r.symbolic)
        );
    }
    out
}

pub fn bar_csv(rows: &[BarRow]) -> String {
    let mut out = String::from(BAR_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.2}",
            r.statement_id,
            r.category.name(),
            r.count,
            r.percentage
        );
    }
    out
}

/// Renders the figure in the requested format.
pub fn render_figure(spec: &FigureSpec, tables: &[StatementTable]) -> Result<String> {
    spec.validate()?;
    match spec.justification() {
        Some(id) => {
            let rows = curve_rows(id, spec.resolution)?;
            Ok(match spec.format {
                OutputFormat::Csv => curve_csv(&rows),
                OutputFormat::Svg => curve_svg(spec.figure_id, id, &rows),
            })
        }
        None => {
            let rows = bar_rows(spec.figure_id, tables)?;
            Ok(match spec.format {
                OutputFormat::Csv => bar_csv(&rows),
                OutputFormat::Svg => bar_svg(spec.figure_id, &rows),
            })
        }
    }
}

/// Writes the figure into `dir` and returns the file path.
pub fn emit_figure(spec: &FigureSpec, tables: &[StatementTable], dir: &Path) -> Result<PathBuf> {
    let body = render_figure(spec, tables)?;
    let path = dir.join(spec.file_name());
    std::fs::write(&path, body).map_err(|e| Error::io_at(&path, e))?;
    Ok(path)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn svg_open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axes(out: &mut String, x_label: &str, y_lo: f64, y_hi: f64) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1},{y1:.1}V{y0:.1}H{x1:.1}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let v = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let y = y0 - (y0 - y1) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    let x = WIDTH - RIGHT + 15.0;
    for (i, (name, colour)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{colour}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            y - 10.0,
            x + 18.0,
            y,
            escape(name)
        );
    }
}

fn curve_svg(figure_id: u8, id: JustificationId, rows: &[CurveRow]) -> String {
    let series = curve_series(rows);
    let (lo, hi) = series
        .iter()
        .flat_map(|s| s.samples.iter().map(|p| p.1))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let margin = 0.05 * (hi - lo).max(1e-12);
    let (y_lo, y_hi) = (lo - margin, hi + margin);
    let sx = |t: f64| LEFT + (t - T_MIN) / (T_MAX - T_MIN) * (WIDTH - RIGHT - LEFT);
    let sy = |v: f64| HEIGHT - BOTTOM - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - BOTTOM - TOP);

    let mut out = String::new();
    svg_open(
        &mut out,
        &format!(
            "Figure {figure_id}: bounds of justification {}",
            id.number()
        ),
    );
    axes(&mut out, "t", y_lo, y_hi);
    for s in &series {
        let mut d = String::new();
        for (i, &(t, v)) in s.samples.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2}",
                if i == 0 { "M" } else { "L" },
                sx(t),
                sy(v)
            );
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            s.style.colour()
        );
    }
    let names: Vec<(&str, &str)> = series
        .iter()
        .map(|s| (s.name.as_str(), s.style.colour()))
        .collect();
    legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}

const CATEGORY_COLOURS: [&str; 5] = ["#1a9641", "#a6d96a", "#ffffbf", "#fdae61", "#d7191c"];

fn bar_svg(figure_id: u8, rows: &[BarRow]) -> String {
    let groups: Vec<StatementId> = rows.iter().fold(Vec::new(), |mut acc, r| {
        if !acc.contains(&r.statement_id) {
            acc.push(r.statement_id);
        }
        acc
    });
    let y_hi = 100.0;
    let plot_w = WIDTH - RIGHT - LEFT;
    let plot_h = HEIGHT - BOTTOM - TOP;
    let group_w = plot_w / groups.len().max(1) as f64;
    let bar_w = group_w * 0.8 / 5.0;

    let mut out = String::new();
    svg_open(
        &mut out,
        &format!("Figure {figure_id}: survey responses (%)"),
    );
    axes(&mut out, "statement", 0.0, y_hi);
    for (g, id) in groups.iter().enumerate() {
        let gx = LEFT + g as f64 * group_w + group_w * 0.1;
        for r in rows.iter().filter(|r| r.statement_id == *id) {
            let h = r.percentage / y_hi * plot_h;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{bar_w:.2}" height="{h:.2}" fill="{}" stroke="black" stroke-width="0.5"/>"#,
                gx + r.category.index() as f64 * bar_w,
                HEIGHT - BOTTOM - h,
                CATEGORY_COLOURS[r.category.index()]
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.1}" text-anchor="middle">{id}</text>"#,
            gx + 2.5 * bar_w,
            HEIGHT - BOTTOM + 16.0
        );
    }
    let names: Vec<(&str, &str)> = LikertCategory::ALL
        .iter()
        .map(|c| (c.label(), CATEGORY_COLOURS[c.index()]))
        .collect();
    legend(&mut out, &names);
    out.push_str("</svg>\n");
    out
}
