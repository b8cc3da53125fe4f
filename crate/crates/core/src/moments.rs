//! Fractional moments `E[X^t]` of a unit-rate exponential variable.
//!
//! Three routes are provided so they can be checked against each other:
//! the direct moment integral, the survival-form integral
//! `∫₀^∞ e^{-x^{1/t}} dx`, and a seeded Monte Carlo estimate.
//!
//! # Monte Carlo reproducibility
//!
//! Samples come from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha 0.9),
//! drawn sequentially on one thread. Each draw maps a 64-bit output `w` to
//! `U = 1 - (w >> 11) · 2^{-53}`, which lies in `(0, 1]`, and then to
//! `X = -ln U`. The running mean and variance use Welford's update, so a
//! given `(seed, sample_count, t)` produces the same bits everywhere.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bounds::{j3_lower, require_interior};
use crate::error::{domain, Error, Result};
use crate::gamma::{gamma_plus_one_quadrature, QuadratureSpec};
use crate::quadrature;

/// The unit-rate exponential distribution: rate 1, mean 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExponentialModel;

impl ExponentialModel {
    pub const RATE: f64 = 1.0;
    pub const MEAN: f64 = 1.0;
}

/// Density `e^{-x}` for `x > 0`.
pub fn exp_pdf(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("exp_pdf", x, "(0, inf)"));
    }
    Ok((-x).exp())
}

pub const MIN_MC_SAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub sample_count: u64,
    pub seed: u64,
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec {
            sample_count: 1_000_000,
            seed: 42,
        }
    }
}

impl McSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_MC_SAMPLES {
            return Err(Error::InvalidSpec {
                what: "McSpec",
                reason: format!(
                    "sample_count must be >= {MIN_MC_SAMPLES}, got {}",
                    self.sample_count
                ),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentRoute {
    Quadrature,
    SurvivalForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: f64,
    pub route: MomentRoute,
    /// Quadrature error bound, or Monte Carlo standard error.
    pub uncertainty: f64,
}

/// `E[X^t] = ∫₀^∞ x^t e^{-x} dx`.
pub fn moment_quadrature(t: f64) -> Result<MomentResult> {
    moment_quadrature_with(t, &QuadratureSpec::default())
}

pub fn moment_quadrature_with(t: f64, spec: &QuadratureSpec) -> Result<MomentResult> {
    let g = gamma_plus_one_quadrature(t, spec)?;
    Ok(MomentResult {
        value: g.value,
        route: MomentRoute::Quadrature,
        uncertainty: g.error_estimate,
    })
}

/// `E[X^t] = ∫₀^∞ P(X^t > y) dy = ∫₀^∞ e^{-y^{1/t}} dy`, for `t ∈ (0, 1]`.
///
/// The integral is cut where `y^{1/t}` reaches `spec.upper_truncation`;
/// the remainder is at most `t · U^{t-1} e^{-U}`.
pub fn moment_survival_form(t: f64, spec: &QuadratureSpec) -> Result<MomentResult> {
    spec.validate()?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("moment_survival_form", t, "(0, 1]"));
    }
    let u = spec.upper_truncation;
    let cut = u.powf(t);
    let inv = 1.0 / t;
    let tail = t * ((t - 1.0) * u.ln() - u).exp();
    let r = quadrature::integrate(
        |y: f64| (-y.powf(inv)).exp(),
        0.0,
        cut,
        spec.abs_tolerance,
        spec.max_depth,
    )?;
    Ok(MomentResult {
        value: r.value,
        route: MomentRoute::SurvivalForm,
        uncertainty: r.error + tail,
    })
}

/// Sample mean of `X^t` over `spec.sample_count` seeded exponential draws.
pub fn moment_monte_carlo(t: f64, spec: &McSpec) -> Result<MomentResult> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return Err(domain("moment_monte_carlo", t, "[0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 1..=spec.sample_count {
        let x = unit_exponential(&mut rng);
        let v = x.powf(t);
        let delta = v - mean;
        mean += delta / i as f64;
        m2 += delta * (v - mean);
    }
    let n = spec.sample_count as f64;
    let sd = (m2 / (n - 1.0)).sqrt();
    Ok(MomentResult {
        value: mean,
        route: MomentRoute::MonteCarlo,
        uncertainty: sd / n.sqrt(),
    })
}

fn unit_exponential(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u = 1.0 - (rng.next_u64() >> 11) as f64 * SCALE;
    0.0 - u.ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackCheck {
    pub holds: bool,
    pub slack: f64,
}

/// Tolerance for the equality cases at the ends of the unit interval.
pub const EQUALITY_TOL: f64 = 1e-12;

/// Jensen: `E[X^t] <= (E[X])^t = 1`; slack `1 - E[X^t]`.
///
/// Strict inside `(0, 1)`; at `t = 1` the slack vanishes up to [`EQUALITY_TOL`].
pub fn jensen_check(t: f64) -> Result<SlackCheck> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("jensen_check", t, "(0, 1]"));
    }
    let slack = 1.0 - moment_quadrature(t)?.value;
    let holds = if t < 1.0 {
        slack > 0.0
    } else {
        slack.abs() <= EQUALITY_TOL
    };
    Ok(SlackCheck { holds, slack })
}

/// Tangent-line bound `e^{-θ} >= 1 - θ` for `θ >= 0`.
pub fn linear_lower_check(theta: f64) -> Result<SlackCheck> {
    if !(theta >= 0.0) {
        return Err(domain("linear_lower_check", theta, "[0, inf)"));
    }
    // expm1 avoids cancellation near the tangency point.
    let slack = (-theta).exp_m1() + theta;
    Ok(SlackCheck {
        holds: slack >= 0.0,
        slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBoundsReport {
    pub t: f64,
    pub lower: f64,
    pub moment: f64,
    /// `E[X^t] - 1/(1+t)`
    pub lower_slack: f64,
    /// `1 - E[X^t]`
    pub upper_slack: f64,
    /// `|∫₀¹ x^{1/t} dx - t/(1+t)|` by direct quadrature.
    pub identity_error: f64,
    pub holds: bool,
}

pub const IDENTITY_TOL: f64 = 1e-10;

/// `1/(1+t) <= E[X^t] <= 1` together with `∫₀¹ x^{1/t} dx = t/(1+t)`.
pub fn moment_bounds_check(t: f64) -> Result<MomentBoundsReport> {
    require_interior("moment_bounds_check", t)?;
    let lower = j3_lower(t)?;
    let moment = moment_quadrature(t)?.value;
    let inv = 1.0 / t;
    let integral = quadrature::integrate(|x: f64| x.powf(inv), 0.0, 1.0, 1e-13, 50)?.value;
    let identity_error = (integral - t / (1.0 + t)).abs();
    let lower_slack = moment - lower;
    let upper_slack = 1.0 - moment;
    Ok(MomentBoundsReport {
        t,
        lower,
        moment,
        lower_slack,
        upper_slack,
        identity_error,
        holds: lower_slack >= 0.0 && upper_slack >= 0.0 && identity_error <= IDENTITY_TOL,
    })
}

/// All three routes at one `t`, with the agreement thresholds applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteAgreement {
    pub t: f64,
    pub quadrature: MomentResult,
    pub survival: MomentResult,
    pub monte_carlo: MomentResult,
    pub holds: bool,
}

pub const SURVIVAL_AGREEMENT_TOL: f64 = 1e-6;
pub const MC_AGREEMENT_SIGMAS: f64 = 4.0;

pub fn route_agreement(t: f64, mc: &McSpec) -> Result<RouteAgreement> {
    let quadrature = moment_quadrature(t)?;
    let survival = moment_survival_form(t, &QuadratureSpec::default())?;
    let monte_carlo = moment_monte_carlo(t, mc)?;
    let holds = (quadrature.value - survival.value).abs() <= SURVIVAL_AGREEMENT_TOL
        && (quadrature.value - monte_carlo.value).abs()
            <= MC_AGREEMENT_SIGMAS * monte_carlo.uncertainty;
    Ok(RouteAgreement {
        t,
        quadrature,
        survival,
        monte_carlo,
        holds,
    })
}
