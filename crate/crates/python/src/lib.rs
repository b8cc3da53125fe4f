//! Python bindings: `import zerofact`.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zerofact::bounds::{self, JustificationId};
use zerofact::cli::LimitTarget;
use zerofact::error::Error;
use zerofact::figures::{self, FigureSpec, OutputFormat};
use zerofact::gamma::{self, QuadratureSpec};
use zerofact::moments::{self, McSpec};
use zerofact::squeeze::{self, GridSpec, Spacing};
use zerofact::survey::{self, compare, Alternative, PairedResponses};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Convergence { .. } => PyArithmeticError::new_err(e.to_string()),
        Error::Io(_)
        | Error::LimitSample { .. }
        | Error::Inconsistent { .. }
        | Error::Violations { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn justification(n: u8) -> Result<JustificationId, Error> {
    JustificationId::from_number(n).ok_or_else(|| Error::InvalidSpec {
        what: "justification",
        reason: format!("{n} is not 1, 2 or 3"),
    })
}

fn spacing(name: &str) -> Result<Spacing, Error> {
    match name {
        "uniform" => Ok(Spacing::Uniform),
        "geometric" => Ok(Spacing::Geometric),
        _ => Err(Error::InvalidSpec {
            what: "spacing",
            reason: format!("`{name}` is not uniform or geometric"),
        }),
    }
}

fn alternative(name: &str) -> Result<Alternative, Error> {
    match name {
        "less" => Ok(Alternative::Less),
        "greater" => Ok(Alternative::Greater),
        "two-sided" | "two_sided" => Ok(Alternative::TwoSided),
        _ => Err(Error::InvalidSpec {
            what: "alternative",
            reason: format!("`{name}` is not less, greater or two-sided"),
        }),
    }
}

fn limit_target(name: &str) -> Result<LimitTarget, Error> {
    <LimitTarget as clap::ValueEnum>::from_str(name, true).map_err(|_| Error::InvalidSpec {
        what: "target",
        reason: format!("unknown limit target `{name}`"),
    })
}

fn quadrature_spec(tolerance: Option<f64>) -> Result<QuadratureSpec, Error> {
    let spec = tolerance.map_or_else(QuadratureSpec::default, QuadratureSpec::with_tolerance);
    spec.validate()?;
    Ok(spec)
}

/// Γ(t+1) for t in [0, 1] as `(value, error_estimate)`; method is "series" or "quadrature".
#[pyfunction]
#[pyo3(signature = (t, method = "series", tolerance = None))]
fn gamma_plus_one(t: f64, method: &str, tolerance: Option<f64>) -> PyResult<(f64, f64)> {
    let r = match method {
        "series" => gamma::gamma_plus_one_series(t),
        "quadrature" => {
            quadrature_spec(tolerance).and_then(|s| gamma::gamma_plus_one_quadrature(t, &s))
        }
        _ => Err(Error::InvalidSpec {
            what: "method",
            reason: format!("`{method}` is not series or quadrature"),
        }),
    }
    .map_err(to_py)?;
    Ok((r.value, r.error_estimate))
}

/// Exact n! for n <= 20.
#[pyfunction]
fn factorial(n: u64) -> PyResult<u64> {
    gamma::factorial_int(n).map_err(to_py)
}

/// Location and value of the minimum of Γ(t+1) on (0, 1).
#[pyfunction]
fn gamma_minimum() -> PyResult<(f64, f64)> {
    gamma::gamma_minimum(&QuadratureSpec::default()).map_err(to_py)
}

/// `(a(t), b(t))` for a justification 1, 2 or 3.
#[pyfunction]
fn bound_pair(justification_id: u8, t: f64) -> PyResult<(f64, f64)> {
    let id = justification(justification_id).map_err(to_py)?;
    Ok((id.lower(t).map_err(to_py)?, id.upper(t).map_err(to_py)?))
}

/// Whether every integer-chain link of a justification holds at n.
#[pyfunction]
fn integer_chain_holds(n: u64, justification_id: u8) -> PyResult<bool> {
    let id = justification(justification_id).map_err(to_py)?;
    Ok(bounds::integer_chain_check(n, id).map_err(to_py)?.holds())
}

/// `ln((n+1)/2) - ln(n!)/n`.
#[pyfunction]
fn gm_am_slack(n: u64) -> PyResult<f64> {
    Ok(bounds::gm_am_check(n).map_err(to_py)?.slack)
}

#[pyclass(name = "CertificationReport", frozen, get_all)]
struct PyCertificationReport {
    justification: u8,
    points: usize,
    violations: usize,
    /// `(value, t)`
    min_lower_slack: (f64, f64),
    min_upper_slack: (f64, f64),
    max_lower_slack: (f64, f64),
    max_upper_slack: (f64, f64),
}

#[pymethods]
impl PyCertificationReport {
    fn passed(&self) -> bool {
        self.violations == 0
    }

    fn __repr__(&self) -> String {
        format!(
            "CertificationReport(J{}, points={}, violations={})",
            self.justification, self.points, self.violations
        )
    }
}

/// Checks `a(t) <= Γ(t+1) <= b(t)` on a grid in (0, 1).
#[pyfunction]
#[pyo3(signature = (justification_id, points = squeeze::DEFAULT_GRID_POINTS, spacing_name = "uniform"))]
fn certify(
    justification_id: u8,
    points: usize,
    spacing_name: &str,
) -> PyResult<PyCertificationReport> {
    let id = justification(justification_id).map_err(to_py)?;
    let grid = GridSpec {
        points,
        spacing: spacing(spacing_name).map_err(to_py)?,
    };
    let r = squeeze::certify(id, &grid).map_err(to_py)?;
    let pair = |p: squeeze::SlackPoint| (p.value, p.t);
    Ok(PyCertificationReport {
        justification: justification_id,
        points,
        violations: r.violations.len(),
        min_lower_slack: pair(r.min_lower_slack),
        min_upper_slack: pair(r.min_upper_slack),
        max_lower_slack: pair(r.max_lower_slack),
        max_upper_slack: pair(r.max_upper_slack),
    })
}

#[pyclass(name = "LimitEstimate", frozen, get_all)]
struct PyLimitEstimate {
    limit: f64,
    slope: f64,
    converged: bool,
    extrapolants: Vec<f64>,
}

/// Limit at 0 of "gamma", "j1-lower", ..., "j3-upper" from samples at 2^-k.
#[pyfunction]
#[pyo3(signature = (target, k_max = 40))]
fn limit_at_zero(target: &str, k_max: u32) -> PyResult<PyLimitEstimate> {
    let target = limit_target(target).map_err(to_py)?;
    let est = squeeze::limit_at_zero(|t| target.eval(t), k_max).map_err(to_py)?;
    Ok(PyLimitEstimate {
        limit: est.estimated_limit,
        slope: est.estimated_slope,
        converged: est.converged,
        extrapolants: est.extrapolants,
    })
}

/// E[X^t] for X ~ Exp(1) as `(value, uncertainty)`; route is "quadrature", "survival" or "monte-carlo".
#[pyfunction]
#[pyo3(signature = (t, route = "quadrature", samples = 1_000_000, seed = 42))]
fn moment(t: f64, route: &str, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let r = match route {
        "quadrature" => moments::moment_quadrature(t),
        "survival" => moments::moment_survival_form(t, &QuadratureSpec::default()),
        "monte-carlo" | "monte_carlo" => moments::moment_monte_carlo(
            t,
            &McSpec {
                sample_count: samples,
                seed,
            },
        ),
        _ => Err(Error::InvalidSpec {
            what: "route",
            reason: format!("`{route}` is not quadrature, survival or monte-carlo"),
        }),
    }
    .map_err(to_py)?;
    Ok((r.value, r.uncertainty))
}

/// Every recomputed survey figure as `(label, printed, computed, flagged)`.
#[pyfunction]
fn compare_to_paper() -> Vec<(String, f64, f64, bool)> {
    compare::compare_to_paper()
        .entries
        .into_iter()
        .map(|e| (e.label, e.printed, e.computed, e.flagged))
        .collect()
}

#[pyclass(name = "TTestResult", frozen, get_all)]
struct PyTTestResult {
    n: usize,
    mean_diff: f64,
    sd_diff: f64,
    t_stat: f64,
    df: usize,
    p_value: f64,
}

#[pymethods]
impl PyTTestResult {
    fn __repr__(&self) -> String {
        format!(
            "TTestResult(n={}, t={:.6}, df={}, p={:.6})",
            self.n, self.t_stat, self.df, self.p_value
        )
    }
}

/// Matched-pairs t-test on Likert codes 1-5 of `before - after`.
#[pyfunction]
#[pyo3(signature = (before, after, alternative_name = "less"))]
fn paired_t_test(
    before: Vec<u8>,
    after: Vec<u8>,
    alternative_name: &str,
) -> PyResult<PyTTestResult> {
    let data = PairedResponses::from_columns(&before, &after).map_err(to_py)?;
    let alt = alternative(alternative_name).map_err(to_py)?;
    let r = survey::paired_t_test_with(&data, alt).map_err(to_py)?;
    Ok(PyTTestResult {
        n: r.n,
        mean_diff: r.mean_diff,
        sd_diff: r.sd_diff,
        t_stat: r.t_stat,
        df: r.df,
        p_value: r.p_value,
    })
}

/// Synthetic `(before, after)` pairs consistent with the published marginals.
#[pyfunction]
#[pyo3(signature = (seed = 42))]
fn synthetic_pairing(seed: u64) -> Vec<(u8, u8)> {
    survey::synthetic_pairing(seed).pairs().to_vec()
}

/// Figure 1-7 as CSV or SVG text.
#[pyfunction]
#[pyo3(signature = (figure_id, resolution = figures::DEFAULT_RESOLUTION, format = "csv"))]
fn render_figure(figure_id: u8, resolution: usize, format: &str) -> PyResult<String> {
    let format: OutputFormat = format.parse().map_err(PyValueError::new_err)?;
    let spec = FigureSpec {
        figure_id,
        resolution,
        format,
    };
    figures::render_figure(&spec, &survey::data::all_statements()).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "zerofact")]
fn zerofact_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma_plus_one, m)?)?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_minimum, m)?)?;
    m.add_function(wrap_pyfunction!(bound_pair, m)?)?;
    m.add_function(wrap_pyfunction!(integer_chain_holds, m)?)?;
    m.add_function(wrap_pyfunction!(gm_am_slack, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(limit_at_zero, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(compare_to_paper, m)?)?;
    m.add_function(wrap_pyfunction!(paired_t_test, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(render_figure, m)?)?;
    m.add_class::<PyCertificationReport>()?;
    m.add_class::<PyLimitEstimate>()?;
    m.add_class::<PyTTestResult>()?;
    Ok(())
}
