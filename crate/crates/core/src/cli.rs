//! Command-line front end. `run` parses arguments, executes one subcommand and
//! returns the process exit code: 0 success, 1 verification failure, 2 usage
//! or I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, JustificationId, MAX_CHAIN_N};
use crate::error::{Error, Result};
use crate::figures::{self, FigureSpec, OutputFormat, DEFAULT_RESOLUTION};
use crate::gamma::{self, QuadratureSpec};
use crate::moments::{self, McSpec};
use crate::squeeze::{self, GridSpec, Spacing, DEFAULT_GRID_POINTS};
use crate::survey::{self, compare, data, ingest, Alternative, StatementTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zerofact", version, about = "Numerical checks of why 0! = 1")]
pub struct Cli {
    /// Seed for Monte Carlo sampling and synthetic pairings.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Absolute tolerance for adaptive quadrature.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Output directory for `plot`; report file for other commands.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Γ(t+1) on [0, 1] with both evaluators.
    Gamma(GammaArgs),
    /// Certify the bound sandwiches and the supporting inequalities.
    Verify(VerifyArgs),
    /// Extrapolate a function to t = 0 along t = 2^-k.
    Limit(LimitArgs),
    /// Compare the three routes to E[X^t] for X ~ Exp(1).
    Moments(MomentsArgs),
    /// Recompute the survey tables and compare with the printed figures.
    Survey(SurveyArgs),
    /// Write figure data as CSV or SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Points t in [0, 1].
    #[arg(default_values_t = [0.0, 0.5, 1.0], allow_negative_numbers = true)]
    pub t: Vec<f64>,
    /// Also locate the minimum of Γ(t+1) on (0, 1).
    #[arg(long)]
    pub minimum: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check every justification (the default).
    #[arg(long, conflicts_with = "justification")]
    pub all: bool,
    /// Check a single justification: 1, 2 or 3.
    #[arg(long)]
    pub justification: Option<JustificationId>,
    /// Number of grid points in (0, 1).
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::Uniform)]
    pub spacing: SpacingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Uniform,
    Geometric,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Uniform => Spacing::Uniform,
            SpacingArg::Geometric => Spacing::Geometric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitTarget {
    Gamma,
    J1Lower,
    J1Upper,
    J2Lower,
    J2Upper,
    J3Lower,
    J3Upper,
}

impl LimitTarget {
    pub fn eval(self, t: f64) -> Result<f64> {
        use JustificationId::*;
        match self {
            LimitTarget::Gamma => Ok(gamma::gamma_plus_one_series(t)?.value),
            LimitTarget::J1Lower => J1.lower(t),
            LimitTarget::J1Upper => J1.upper(t),
            LimitTarget::J2Lower => J2.lower(t),
            LimitTarget::J2Upper => J2.upper(t),
            LimitTarget::J3Lower => J3.lower(t),
            LimitTarget::J3Upper => J3.upper(t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LimitTarget::Gamma => "gamma",
            LimitTarget::J1Lower => "j1-lower",
            LimitTarget::J1Upper => "j1-upper",
            LimitTarget::J2Lower => "j2-lower",
            LimitTarget::J2Upper => "j2-upper",
            LimitTarget::J3Lower => "j3-lower",
            LimitTarget::J3Upper => "j3-upper",
        }
    }
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, value_enum)]
    pub target: LimitTarget,
    /// Deepest level k; samples are taken at t = 2^-k for k = 1..=k_max.
    #[arg(long, default_value_t = 40)]
    pub k_max: u32,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Exponents t in (0, 1]; defaults to 0.1, 0.2, ..., 0.9.
    pub t: Vec<f64>,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    /// Table CSV (`statement_id,category,count`); the published tables if absent.
    pub tables: Option<PathBuf>,
    /// Paired responses CSV (`respondent_id,before,after`) for the t-test.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Run the t-test on a synthetic pairing consistent with Table 4.
    #[arg(long)]
    pub synthetic_ttest: bool,
    /// Use a two-sided alternative instead of `before - after < 0`.
    #[arg(long)]
    pub two_sided: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Figure number 1..=7.
    #[arg(long, required_unless_present = "all", value_parser = clap::value_parser!(u8).range(1..=7))]
    pub figure: Option<u8>,
    /// Write all seven figures.
    #[arg(long, conflicts_with = "figure")]
    pub all: bool,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
}

/// Exit code for an error escaping a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain { .. }
        | Error::InvalidSpec { .. }
        | Error::Parse { .. }
        | Error::Io(_)
        | Error::EmptyTable
        | Error::FactorialOverflow { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    execute(&cli, stdout, stderr)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut report = String::new();
    let outcome = match &cli.command {
        Command::Gamma(a) => cmd_gamma(cli, a, &mut report),
        Command::Verify(a) => cmd_verify(a, cli.seed, &mut report),
        Command::Limit(a) => cmd_limit(a, &mut report),
        Command::Moments(a) => cmd_moments(cli, a, &mut report),
        Command::Survey(a) => cmd_survey(a, cli.seed, &mut report),
        Command::Plot(a) => cmd_plot(a, cli.out.as_deref(), &mut report),
    };
    let code = match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = stdout.write_all(report.as_bytes());
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match (&cli.command, &cli.out) {
        (Command::Plot(_), _) | (_, None) => {
            stdout.write_all(report.as_bytes()).map_err(Error::from)
        }
        (_, Some(path)) => std::fs::write(path, &report).map_err(|e| Error::io_at(path, e)),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    code
}

fn quadrature_spec(tolerance: Option<f64>) -> Result<QuadratureSpec> {
    let spec = tolerance.map_or_else(QuadratureSpec::default, QuadratureSpec::with_tolerance);
    spec.validate()?;
    Ok(spec)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

/// Allowed disagreement between the two gamma evaluators.
const CROSS_CHECK_TOL: f64 = 1e-8;

fn cmd_gamma(cli: &Cli, args: &GammaArgs, out: &mut String) -> Result<bool> {
    let spec = quadrature_spec(cli.tolerance)?;
    let tol = CROSS_CHECK_TOL.max(10.0 * spec.abs_tolerance);
    let mut ok = true;
    let _ = writeln!(
        out,
        "{:>8}  {:>18}  {:>18}  {:>10}  {:>10}",
        "t", "series", "quadrature", "|diff|", "status"
    );
    for &t in &args.t {
        let s = gamma::gamma_plus_one_series(t)?;
        let q = gamma::gamma_plus_one_quadrature(t, &spec)?;
        let diff = (s.value - q.value).abs();
        ok &= diff <= tol;
        let _ = writeln!(
            out,
            "{t:>8.4}  {:>18.15}  {:>18.15}  {diff:>10.2e}  {:>10}",
            s.value,
            q.value,
            status(diff <= tol)
        );
    }
    if args.minimum {
        let (t, v) = gamma::gamma_minimum(&spec)?;
        let _ = writeln!(out, "minimum of Γ(t+1): {v:.10} at t = {t:.6}");
    }
    Ok(ok)
}

fn cmd_verify(args: &VerifyArgs, seed: u64, out: &mut String) -> Result<bool> {
    let grid = GridSpec {
        points: args.grid,
        spacing: args.spacing.into(),
    };
    grid.validate()?;
    let ids: Vec<JustificationId> = match args.justification {
        Some(id) if !args.all => vec![id],
        _ => JustificationId::ALL.to_vec(),
    };
    let mut ok = true;

    for &id in &ids {
        let r = squeeze::certify(id, &grid)?;
        ok &= r.passed();
        let _ = writeln!(
            out,
            "certify {id}: {} grid points ({:?}), {} violations{}",
            grid.points,
            grid.spacing,
            r.violations.len(),
            if r.refined {
                ", minimum refined off-grid"
            } else {
                ""
            }
        );
        for (name, p) in [
            ("min lower slack", r.min_lower_slack),
            ("max lower slack", r.max_lower_slack),
            ("min upper slack", r.min_upper_slack),
            ("max upper slack", r.max_upper_slack),
        ] {
            let _ = writeln!(out, "  {name}: {:.6e} at t = {:.6}", p.value, p.t);
        }
        for v in r.violations.iter().take(10) {
            let _ = writeln!(
                out,
                "  VIOLATION at t = {:.9}: lower slack {:.3e}, upper slack {:.3e}",
                v.t, v.lower_slack, v.upper_slack
            );
        }
    }

    for &id in &ids {
        let mut failures = Vec::new();
        for n in 1..=20 {
            let r = bounds::integer_chain_check(n, id)?;
            for l in r.links.iter().filter(|l| !l.holds) {
                failures.push(format!("n = {n}: {} (slack {:.3e})", l.relation, l.slack));
            }
        }
        let _ = writeln!(
            out,
            "integer chain {id}, n = 1..20: {}",
            status(failures.is_empty())
        );
        for f in &failures {
            let _ = writeln!(out, "  {f}");
        }
        ok &= failures.is_empty();
    }

    let premise_fail: Vec<u64> = (1..=MAX_CHAIN_N)
        .filter(|&n| !bounds::exponent_premise(n))
        .collect();
    ok &= premise_fail.is_empty();
    let _ = writeln!(
        out,
        "premise n < 2^n, n = 1..{MAX_CHAIN_N}: {}",
        status(premise_fail.is_empty())
    );
    for n in premise_fail {
        let _ = writeln!(out, "  fails at n = {n}");
    }

    let mut gm_ok = true;
    for n in 1..=20 {
        let r = bounds::gm_am_check(n)?;
        let this = if n == 1 {
            r.slack.abs() <= 1e-15
        } else {
            r.holds && r.slack > 0.0
        };
        if !this {
            let _ = writeln!(out, "  GM <= AM fails at n = {n}: slack {:.3e}", r.slack);
        }
        gm_ok &= this;
    }
    ok &= gm_ok;
    let _ = writeln!(
        out,
        "GM <= AM, n = 1..20 (equality only at n = 1): {}",
        status(gm_ok)
    );

    let mc = McSpec {
        seed,
        ..McSpec::default()
    };
    let mut routes_ok = true;
    let mut bounds_ok = true;
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        let r = moments::route_agreement(t, &mc)?;
        if !r.holds {
            let _ = writeln!(
                out,
                "  moment routes disagree at t = {t}: quadrature {:.12}, survival {:.12}, monte carlo {:.6} ± {:.1e}",
                r.quadrature.value, r.survival.value, r.monte_carlo.value, r.monte_carlo.uncertainty
            );
        }
        routes_ok &= r.holds;
        let b = moments::moment_bounds_check(t)?;
        if !b.holds {
            let _ = writeln!(
                out,
                "  1/(1+t) <= E[X^t] <= 1 fails at t = {t}: slacks {:.3e}, {:.3e}, identity error {:.3e}",
                b.lower_slack, b.upper_slack, b.identity_error
            );
        }
        bounds_ok &= b.holds;
    }
    ok &= routes_ok && bounds_ok;
    let _ = writeln!(
        out,
        "moment routes agree, t = 0.1..0.9: {}",
        status(routes_ok)
    );
    let _ = writeln!(
        out,
        "1/(1+t) <= E[X^t] <= 1, t = 0.1..0.9: {}",
        status(bounds_ok)
    );

    let mut ineq_ok = true;
    for i in 1..=10 {
        let t = i as f64 / 10.0;
        let j = moments::jensen_check(t)?;
        if !j.holds {
            let _ = writeln!(out, "  Jensen fails at t = {t}: slack {:.3e}", j.slack);
        }
        ineq_ok &= j.holds;
    }
    for i in 0..=50 {
        let theta = i as f64 / 10.0;
        let l = moments::linear_lower_check(theta)?;
        if !l.holds {
            let _ = writeln!(
                out,
                "  e^-θ >= 1 - θ fails at θ = {theta}: slack {:.3e}",
                l.slack
            );
        }
        ineq_ok &= l.holds;
    }
    ok &= ineq_ok;
    let _ = writeln!(out, "Jensen and tangent-line bounds: {}", status(ineq_ok));

    let mut max_diff: f64 = 0.0;
    for i in 0..=1000 {
        max_diff = max_diff.max(gamma::gamma_cross_check(i as f64 / 1000.0)?);
    }
    let cross_ok = max_diff <= CROSS_CHECK_TOL;
    ok &= cross_ok;
    let _ = writeln!(
        out,
        "gamma evaluators, 1001 points: max |diff| {max_diff:.2e}: {}",
        status(cross_ok)
    );

    let _ = writeln!(out, "result: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn cmd_limit(args: &LimitArgs, out: &mut String) -> Result<bool> {
    let target = args.target;
    let est = squeeze::limit_at_zero(|t| target.eval(t), args.k_max)?;
    let _ = writeln!(out, "target: {}", target.name());
    let _ = writeln!(
        out,
        "{:>3}  {:>12}  {:>20}  {:>20}",
        "k", "t", "f(t)", "extrapolant"
    );
    let offset = est.sample_points.len() - est.extrapolants.len();
    for (i, &(t, v)) in est.sample_points.iter().enumerate() {
        let ex = i
            .checked_sub(offset)
            .map(|j| format!("{:.15}", est.extrapolants[j]))
            .unwrap_or_default();
        let _ = writeln!(out, "{:>3}  {t:>12.6e}  {v:>20.15}  {ex:>20}", i + 1);
    }
    let _ = writeln!(out, "limit: {:.12}", est.estimated_limit);
    let settled = slope_settled(&est);
    let _ = writeln!(
        out,
        "slope: {:.10}{}",
        est.estimated_slope,
        if settled {
            ""
        } else {
            " (unsettled: f(t) - L is not O(t))"
        }
    );
    let _ = writeln!(out, "converged: {}", est.converged);
    Ok(est.converged)
}

/// Whether the slope read off at the deepest two levels agrees, which fails
/// when `f(t) - L` carries a `t ln t` term.
fn slope_settled(est: &squeeze::LimitEstimate) -> bool {
    let p = &est.sample_points;
    let k = squeeze::SLOPE_LEVEL.min(p.len() - 1);
    if k < 2 {
        return false;
    }
    let q = |i: usize| (p[i].1 - est.estimated_limit) / p[i].0;
    let prev = 2.0 * q(k - 1) - q(k - 2);
    (est.estimated_slope - prev).abs() <= 1e-3 * est.estimated_slope.abs().max(1.0)
}

fn cmd_moments(cli: &Cli, args: &MomentsArgs, out: &mut String) -> Result<bool> {
    let spec = quadrature_spec(cli.tolerance)?;
    let mc = McSpec {
        sample_count: args.samples,
        seed: cli.seed,
    };
    mc.validate()?;
    let ts: Vec<f64> = if args.t.is_empty() {
        (1..=9).map(|i| i as f64 / 10.0).collect()
    } else {
        args.t.clone()
    };
    let mut ok = true;
    let _ = writeln!(
        out,
        "{:>6}  {:>16}  {:>16}  {:>12}  {:>10}  {:>6}",
        "t", "quadrature", "survival", "monte carlo", "std err", "status"
    );
    for t in ts {
        let q = moments::moment_quadrature_with(t, &spec)?;
        let s = moments::moment_survival_form(t, &spec)?;
        let m = moments::moment_monte_carlo(t, &mc)?;
        let this = (q.value - s.value).abs() <= moments::SURVIVAL_AGREEMENT_TOL
            && (q.value - m.value).abs() <= moments::MC_AGREEMENT_SIGMAS * m.uncertainty;
        ok &= this;
        let _ = writeln!(
            out,
            "{t:>6.3}  {:>16.12}  {:>16.12}  {:>12.8}  {:>10.2e}  {:>6}",
            q.value,
            s.value,
            m.value,
            m.uncertainty,
            status(this)
        );
    }
    Ok(ok)
}

fn load_tables(path: Option<&Path>) -> Result<Vec<StatementTable>> {
    match path {
        Some(p) => ingest::read_tables_path(p),
        None => Ok(data::all_statements()),
    }
}

/// Report section for one published table, restricted to the statements in `tables`.
pub fn table_section(number: u8, tables: &[StatementTable]) -> String {
    let mut out = String::new();
    let Some((_, rows)) = data::tables().into_iter().find(|(n, _)| *n == number) else {
        return out;
    };
    let present: Vec<_> = rows
        .iter()
        .filter_map(|(id, _, printed)| {
            tables
                .iter()
                .find(|t| t.statement_id == *id)
                .map(|t| (t, printed))
        })
        .collect();
    if present.is_empty() {
        return out;
    }
    let _ = writeln!(out, "Table {number}");
    let _ = writeln!(
        out,
        "  {:<9}  {:<28}  {:>5}  {:>8}  {:>8}  status",
        "statement", "category", "count", "computed", "printed"
    );
    for (table, printed) in present {
        for (entry, c) in compare::table_entries(table, printed)
            .iter()
            .zip(survey::LikertCategory::ALL)
        {
            let _ = writeln!(
                out,
                "  {:<9}  {:<28}  {:>5}  {:>8.2}  {:>8.2}  {}",
                table.statement_id.as_str(),
                c.label(),
                table.count(c),
                entry.computed,
                entry.printed,
                if entry.flagged { "FLAG" } else { "ok" }
            );
        }
        let _ = writeln!(
            out,
            "  {:<9}  {:<28}  {:>5}",
            table.statement_id.as_str(),
            "total",
            table.total()
        );
    }
    out
}

fn is_known_flag(e: &compare::ComparisonEntry) -> bool {
    compare::KNOWN_FLAGS
        .iter()
        .any(|(label, printed, computed)| {
            e.label == *label && e.printed == *printed && e.computed == *computed
        })
}

fn cmd_survey(args: &SurveyArgs, seed: u64, out: &mut String) -> Result<bool> {
    let tables = load_tables(args.tables.as_deref())?;
    if tables.is_empty() {
        return Err(Error::EmptyTable);
    }
    for (number, _) in data::tables() {
        out.push_str(&table_section(number, &tables));
    }
    let report = compare::compare_tables(&tables);
    let summary: Vec<_> = report
        .entries
        .iter()
        .filter(|e| !e.label.starts_with("statement "))
        .collect();
    if !summary.is_empty() {
        let _ = writeln!(out, "Summary figures");
        for e in summary {
            let _ = writeln!(
                out,
                "  {:<36}  computed {:>8.*}  printed {:>8.*}  {}",
                e.label,
                e.decimals as usize,
                e.computed,
                e.decimals as usize,
                e.printed,
                if e.flagged { "FLAG" } else { "ok" }
            );
        }
    }
    let unexpected: Vec<_> = report.flagged().filter(|e| !is_known_flag(e)).collect();
    let known = report.flag_count() - unexpected.len();
    let _ = writeln!(
        out,
        "flagged: {} ({known} known discrepancies in the printed text, {} unexpected)",
        report.flag_count(),
        unexpected.len()
    );
    for e in &unexpected {
        let _ = writeln!(
            out,
            "  unexpected: {}: computed {:.*}, printed {:.*}",
            e.label, e.decimals as usize, e.computed, e.decimals as usize, e.printed
        );
    }

    let alternative = if args.two_sided {
        Alternative::TwoSided
    } else {
        Alternative::Less
    };
    let alt_name = if args.two_sided {
        "two-sided"
    } else {
        "before - after < 0"
    };
    if let Some(path) = &args.pairs {
        let pairs = ingest::read_pairs_path(path)?;
        let r = survey::paired_t_test_with(&pairs, alternative)?;
        let _ = writeln!(
            out,
            "paired t-test ({alt_name}): n = {}, mean diff {:.4}, t = {:.4}, df = {}, p = {:.6}",
            r.n, r.mean_diff, r.t_stat, r.df, r.p_value
        );
    }
    if args.synthetic_ttest {
        let pairs = survey::synthetic_pairing(seed);
        let r = survey::paired_t_test_with(&pairs, alternative)?;
        let _ = writeln!(
            out,
            "SYNTHETIC paired t-test (generated pairing, seed {seed}; the real pairings are unpublished): \
             n = {}, mean diff {:.4}, t = {:.4}, df = {}, p = {:.6} ({alt_name})",
            r.n, r.mean_diff, r.t_stat, r.df, r.p_value
        );
    }
    Ok(unexpected.is_empty())
}

fn cmd_plot(args: &PlotArgs, dir: Option<&Path>, out: &mut String) -> Result<bool> {
    let dir = dir.unwrap_or_else(|| Path::new("."));
    let ids: Vec<u8> = match args.figure {
        Some(id) if !args.all => vec![id],
        _ => (1..=7).collect(),
    };
    let tables = data::all_statements();
    for figure_id in ids {
        let spec = FigureSpec {
            figure_id,
            resolution: args.resolution,
            format: args.format,
        };
        let path = figures::emit_figure(&spec, &tables, dir)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(true)
}
