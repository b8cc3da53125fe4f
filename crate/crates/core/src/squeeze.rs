//! Certifies `a(t) <= Γ(t+1) <= b(t)` on `(0, 1)` and estimates limits at `0⁺`.
//!
//! Certification is a dense grid scan of both slacks followed by a
//! golden-section refinement around the smallest (and largest) slack. Limits
//! are extrapolated from dyadic samples `t_k = 2^{-k}`.

use crate::bounds::JustificationId;
use crate::error::{Error, Result};
use crate::gamma::{gamma_plus_one_quadrature, gamma_plus_one_series, QuadratureSpec};
use crate::search::golden_section_min;

/// Slacks above this are not violations; absorbs rounding at touching points.
pub const SLACK_TOLERANCE: f64 = -1e-12;

/// Refinement stops once the bracket is this narrow in `t`.
pub const REFINE_TOL: f64 = 1e-6;

/// Successive extrapolants closer than this count as converged.
pub const LIMIT_TOL: f64 = 1e-9;

pub const MIN_GRID_POINTS: usize = 3;
pub const DEFAULT_GRID_POINTS: usize = 10_001;

/// Ends of the geometric grid.
const GEOMETRIC_LO: f64 = 1e-9;
const GEOMETRIC_HI: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// `t_i = i / (n + 1)`, `i = 1..=n`
    Uniform,
    /// Log-spaced between `1e-9` and `1 - 1e-6`
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: DEFAULT_GRID_POINTS,
            spacing: Spacing::Uniform,
        }
    }
}

impl GridSpec {
    pub fn uniform(points: usize) -> Self {
        GridSpec {
            points,
            spacing: Spacing::Uniform,
        }
    }

    pub fn geometric(points: usize) -> Self {
        GridSpec {
            points,
            spacing: Spacing::Geometric,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < MIN_GRID_POINTS {
            return Err(Error::InvalidSpec {
                what: "GridSpec",
                reason: format!(
                    "need at least {MIN_GRID_POINTS} points, got {}",
                    self.points
                ),
            });
        }
        Ok(())
    }

    /// Grid points, strictly increasing and strictly inside `(0, 1)`.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.points;
        Ok(match self.spacing {
            Spacing::Uniform => (1..=n).map(|i| i as f64 / (n + 1) as f64).collect(),
            Spacing::Geometric => {
                let ratio = (GEOMETRIC_HI / GEOMETRIC_LO).ln();
                (0..n)
                    .map(|i| GEOMETRIC_LO * (ratio * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        })
    }
}

/// Which evaluator supplies the certified middle term.
#[derive(Debug, Clone, Copy, Default)]
pub enum GammaSource {
    #[default]
    Series,
    Quadrature(QuadratureSpec),
    /// Any other interpolant, e.g. for fault injection.
    Custom(fn(f64) -> f64),
}

impl GammaSource {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            GammaSource::Series => Ok(gamma_plus_one_series(t)?.value),
            GammaSource::Quadrature(spec) => Ok(gamma_plus_one_quadrature(t, spec)?.value),
            GammaSource::Custom(f) => Ok(f(t)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

/// An extreme slack value and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackPoint {
    pub value: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub id: JustificationId,
    pub grid: GridSpec,
    pub violations: Vec<Violation>,
    pub min_lower_slack: SlackPoint,
    pub min_upper_slack: SlackPoint,
    pub max_lower_slack: SlackPoint,
    pub max_upper_slack: SlackPoint,
    /// Refinement found a smaller minimum slack than any grid point.
    pub refined: bool,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `Γ(t+1) - a(t)` and `b(t) - Γ(t+1)` at `t`.
pub fn slacks(id: JustificationId, t: f64, source: &GammaSource) -> Result<(f64, f64)> {
    let g = source.eval(t)?;
    Ok((g - id.lower(t)?, id.upper(t)? - g))
}

pub fn certify(id: JustificationId, grid: &GridSpec) -> Result<CertificationReport> {
    certify_with(id, grid, &GammaSource::Series)
}

pub fn certify_with(
    id: JustificationId,
    grid: &GridSpec,
    source: &GammaSource,
) -> Result<CertificationReport> {
    let ts = grid.points()?;
    let mut lower = Vec::with_capacity(ts.len());
    let mut upper = Vec::with_capacity(ts.len());
    let mut violations = Vec::new();
    for &t in &ts {
        let (lo, up) = slacks(id, t, source)?;
        if lo < SLACK_TOLERANCE || up < SLACK_TOLERANCE {
            violations.push(Violation {
                t,
                lower_slack: lo,
                upper_slack: up,
            });
        }
        lower.push(lo);
        upper.push(up);
    }

    let lower_of = |t: f64| slacks(id, t, source).map(|s| s.0);
    let upper_of = |t: f64| slacks(id, t, source).map(|s| s.1);

    let (min_lower_slack, r1) = refine(&ts, &lower, lower_of, Extreme::Min)?;
    let (min_upper_slack, r2) = refine(&ts, &upper, upper_of, Extreme::Min)?;
    let (max_lower_slack, _) = refine(&ts, &lower, lower_of, Extreme::Max)?;
    let (max_upper_slack, _) = refine(&ts, &upper, upper_of, Extreme::Max)?;

    Ok(CertificationReport {
        id,
        grid: *grid,
        violations,
        min_lower_slack,
        min_upper_slack,
        max_lower_slack,
        max_upper_slack,
        refined: r1 || r2,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Extreme {
    Min,
    Max,
}

/// Locates the grid extreme (smallest `t` on ties) and polishes it by
/// golden-section search on the neighbouring bracket.
fn refine<F>(ts: &[f64], values: &[f64], f: F, which: Extreme) -> Result<(SlackPoint, bool)>
where
    F: Fn(f64) -> Result<f64>,
{
    let sign = if which == Extreme::Min { 1.0 } else { -1.0 };
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if sign * v < sign * values[best] {
            best = i;
        }
    }
    let grid_point = SlackPoint {
        value: values[best],
        t: ts[best],
    };
    let lo = ts[best.saturating_sub(1)];
    let hi = ts[(best + 1).min(ts.len() - 1)];

    let mut failure = None;
    let (t, v) = golden_section_min(
        |t| match f(t) {
            Ok(v) => sign * v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        REFINE_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let v = sign * v;
    if sign * v < sign * grid_point.value {
        Ok((SlackPoint { value: v, t }, true))
    } else {
        Ok((grid_point, false))
    }
}

/// Pointwise `b(t) - a(t)` on the grid.
pub fn gap_profile(id: JustificationId, grid: &GridSpec) -> Result<Vec<(f64, f64)>> {
    let pair = id.pair();
    grid.points()?
        .into_iter()
        .map(|t| Ok((t, pair.gap(t)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    /// `(t_k, f(t_k))` for `t_k = 2^{-k}`, `k = 1..=k_max`.
    pub sample_points: Vec<(f64, f64)>,
    pub estimated_limit: f64,
    /// `lim (f(t) - L) / t`; diverges for functions with a `t ln t` term.
    pub estimated_slope: f64,
    /// Every extrapolant from the first usable level on.
    pub extrapolants: Vec<f64>,
    pub converged: bool,
}

pub const MIN_K: u32 = 10;
pub const MAX_K: u32 = 50;

/// Level at which the slope is read off; deep enough that the `O(t)` error
/// is negligible, shallow enough that `eps / t` stays small.
pub const SLOPE_LEVEL: usize = 16;

/// Weights of the extrapolant over six consecutive dyadic samples.
///
/// They are the coefficients of `(E - 1/2)² (E - 1/4)³ / P(1)` in the shift
/// operator `E`, which annihilate `t ln t`, `t`, `t² ln² t`, `t² ln t` and `t²`
/// along `t_k = 2^{-k}` and leave constants untouched.
fn extrapolation_weights() -> [f64; 6] {
    let roots = [0.5, 0.5, 0.25, 0.25, 0.25];
    // Coefficients in increasing powers of E.
    let mut poly = vec![1.0];
    for r in roots {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        poly = next;
    }
    let at_one: f64 = poly.iter().sum();
    let mut w = [0.0; 6];
    for (wi, c) in w.iter_mut().zip(&poly) {
        *wi = c / at_one;
    }
    w
}

/// Estimates `lim_{t→0⁺} f(t)` from `f(2^{-k})`, `k = 1..=k_max`.
pub fn limit_at_zero<F>(f: F, k_max: u32) -> Result<LimitEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(MIN_K..=MAX_K).contains(&k_max) {
        return Err(Error::InvalidSpec {
            what: "k_max",
            reason: format!("must lie in [{MIN_K}, {MAX_K}], got {k_max}"),
        });
    }
    let mut samples = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let t = (-(k as f64)).exp2();
        let v = f(t).map_err(|e| Error::LimitSample {
            k,
            t,
            source: Box::new(e),
        })?;
        samples.push((t, v));
    }

    let w = extrapolation_weights();
    let extrapolants: Vec<f64> = samples
        .windows(w.len())
        .map(|win| win.iter().zip(&w).map(|(&(_, v), &wi)| wi * v).sum())
        .collect();
    let estimated_limit = *extrapolants.last().expect("k_max >= 10 gives extrapolants");
    let prev = extrapolants[extrapolants.len() - 2];
    let converged = (estimated_limit - prev).abs() < LIMIT_TOL;

    let k = SLOPE_LEVEL.min(samples.len() - 1);
    let quotient = |(t, v): (f64, f64)| (v - estimated_limit) / t;
    let estimated_slope = 2.0 * quotient(samples[k]) - quotient(samples[k - 1]);

    Ok(LimitEstimate {
        sample_points: samples,
        estimated_limit,
        estimated_slope,
        extrapolants,
        converged,
    })
}

/// Common limit of a justification's bounds at `0⁺`, which equals `0!`.
///
/// Requires a clean certification on the default grid and converged limits
/// for both bounds agreeing within [`LIMIT_TOL`].
pub fn squeeze_conclusion(id: JustificationId) -> Result<f64> {
    let report = certify(id, &GridSpec::default())?;
    if !report.passed() {
        return Err(Error::Violations {
            count: report.violations.len(),
        });
    }
    let lower = limit_at_zero(|t| id.lower(t), 40)?;
    let upper = limit_at_zero(|t| id.upper(t), 40)?;
    let agree = (lower.estimated_limit - upper.estimated_limit).abs() < LIMIT_TOL;
    if !(lower.converged && upper.converged && agree) {
        return Err(Error::Inconsistent {
            lower: lower.estimated_limit,
            upper: upper.estimated_limit,
        });
    }
    let limit = 0.5 * (lower.estimated_limit + upper.estimated_limit);
    if (limit - 1.0).abs() >= LIMIT_TOL {
        return Err(Error::Inconsistent {
            lower: lower.estimated_limit,
            upper: upper.estimated_limit,
        });
    }
    Ok(limit)
}
