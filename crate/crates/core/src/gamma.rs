//! Exact small factorials and two independent evaluators of `Γ(t + 1)`.
//!
//! The series evaluator uses the Lanczos approximation with Pugh's
//! `r = 10.900511`, `n = 10` coefficient set. The quadrature evaluator
//! integrates `x^t e^{-x}` over `[0, U]` adaptively and adds an analytic bound
//! on the discarded tail. The two share no code, so their agreement is a
//! meaningful check on both.

use crate::error::{domain, Error, Result};
use crate::quadrature;

const LANCZOS_R: f64 = 10.900511;

// Published to 21 digits; kept verbatim.
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_557_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];

/// `2 * sqrt(e / pi)`
const TWO_SQRT_E_OVER_PI: f64 =
    1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;

/// Nominal relative accuracy claimed for the Lanczos evaluator.
pub const SERIES_REL_ERROR: f64 = 1e-14;

/// Largest `n` whose factorial fits in a `u64`.
pub const MAX_EXACT_FACTORIAL: u64 = 20;

/// Which evaluator produced a [`GammaResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaMethod {
    SeriesApprox,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult {
    pub value: f64,
    /// Upper bound on `|value - Γ(t + 1)|`.
    pub error_estimate: f64,
    pub method: GammaMethod,
}

/// Settings for the improper-integral evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// The integral is evaluated on `[0, upper_truncation]`; the rest is bounded analytically.
    pub upper_truncation: f64,
    pub abs_tolerance: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            upper_truncation: 50.0,
            abs_tolerance: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        QuadratureSpec {
            abs_tolerance: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidSpec {
            what: "QuadratureSpec",
            reason,
        };
        if !(self.upper_truncation > 1.0) || !self.upper_truncation.is_finite() {
            return Err(bad(format!(
                "upper_truncation must be > 1, got {}",
                self.upper_truncation
            )));
        }
        if !(self.abs_tolerance > 0.0) {
            return Err(bad(format!(
                "abs_tolerance must be > 0, got {}",
                self.abs_tolerance
            )));
        }
        if self.max_depth < 1 {
            return Err(bad("max_depth must be >= 1".into()));
        }
        Ok(())
    }
}

/// `n!` in exact integer arithmetic, for `n <= 20`.
pub fn factorial_int(n: u64) -> Result<u64> {
    if n > MAX_EXACT_FACTORIAL {
        return Err(Error::FactorialOverflow { n });
    }
    Ok((1..=n).product())
}

/// `ln(n!)` as the sum `ln 1 + ... + ln n`.
pub fn log_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln Γ(x)` for `x >= 0.5`, from the Lanczos sum.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    let s = lanczos_sum(x);
    s.ln()
        + TWO_SQRT_E_OVER_PI.ln()
        + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

fn check_unit(what: &'static str, t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(domain(what, t, "[0, 1]"))
    }
}

/// `Γ(t + 1)` for `t ∈ [0, 1]` by the Lanczos approximation.
pub fn gamma_plus_one_series(t: f64) -> Result<GammaResult> {
    check_unit("gamma_plus_one_series", t)?;
    let x = t + 1.0;
    let value = lanczos_sum(x)
        * TWO_SQRT_E_OVER_PI
        * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).powf(x - 0.5);
    Ok(GammaResult {
        value,
        error_estimate: SERIES_REL_ERROR * value,
        method: GammaMethod::SeriesApprox,
    })
}

/// `∫₀^∞ x^p e^{-x} dx = Γ(p + 1)` for any `p >= 0` with `U > p`.
///
/// The tail past `U` is bounded by `U^p e^{-U} · U / (U - p)`, which is at
/// most `2 U^p e^{-U}` whenever `U >= 2p`.
pub fn power_exp_integral(p: f64, spec: &QuadratureSpec) -> Result<GammaResult> {
    spec.validate()?;
    if !(p >= 0.0) || !p.is_finite() {
        return Err(domain("power_exp_integral", p, "[0, inf)"));
    }
    let u = spec.upper_truncation;
    if u <= p {
        return Err(Error::InvalidSpec {
            what: "QuadratureSpec",
            reason: format!("upper_truncation {u} must exceed the power {p}"),
        });
    }
    let tail = tail_bound(p, u);
    // exp(p ln x - x) keeps large powers from overflowing before the decay wins.
    let integrand = |x: f64| {
        if p == 0.0 {
            (-x).exp()
        } else {
            (p * x.ln() - x).exp()
        }
    };
    let r = quadrature::integrate(integrand, 0.0, u, spec.abs_tolerance, spec.max_depth).map_err(
        |e| match e {
            Error::Convergence {
                value,
                estimate,
                tolerance,
            } => Error::Convergence {
                value,
                estimate: estimate + tail,
                tolerance,
            },
            other => other,
        },
    )?;
    Ok(GammaResult {
        value: r.value,
        error_estimate: r.error + tail,
        method: GammaMethod::Quadrature,
    })
}

pub(crate) fn tail_bound(p: f64, u: f64) -> f64 {
    (p * u.ln() - u).exp() * u / (u - p)
}

/// `Γ(t + 1)` for `t ∈ [0, 1]` by adaptive quadrature of `∫₀^∞ x^t e^{-x} dx`.
pub fn gamma_plus_one_quadrature(t: f64, spec: &QuadratureSpec) -> Result<GammaResult> {
    check_unit("gamma_plus_one_quadrature", t)?;
    power_exp_integral(t, spec)
}

/// `|series - quadrature|` at `t`, using the default quadrature settings.
pub fn gamma_cross_check(t: f64) -> Result<f64> {
    let s = gamma_plus_one_series(t)?;
    let q = gamma_plus_one_quadrature(t, &QuadratureSpec::default())?;
    Ok((s.value - q.value).abs())
}

/// Location and value of the minimum of `Γ(1 + t)` on `(0, 1)`, by golden-section
/// search over quadrature values.
pub fn gamma_minimum(spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let mut failure = None;
    let (t, v) = crate::search::golden_section_min(
        |t| match gamma_plus_one_quadrature(t, spec) {
            Ok(g) => g.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        1e-7,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok((t, v)),
    }
}
