//! Matched-pairs t-test with a Student-t CDF built on the regularized
//! incomplete beta function.

use super::PairedResponses;
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;

/// Alternative hypothesis about the mean of `before - after`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternative {
    /// Mean difference below zero, i.e. responses improved.
    #[default]
    Less,
    Greater,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub n: usize,
    pub mean_diff: f64,
    pub sd_diff: f64,
    pub t_stat: f64,
    pub df: usize,
    pub alternative: Alternative,
    pub p_value: f64,
}

/// One-sided test of `before - after < 0`.
pub fn paired_t_test(data: &PairedResponses) -> Result<TTestResult> {
    paired_t_test_with(data, Alternative::Less)
}

pub fn paired_t_test_with(data: &PairedResponses, alternative: Alternative) -> Result<TTestResult> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData { n });
    }
    let diffs: Vec<f64> = data
        .pairs()
        .iter()
        .map(|&(b, a)| b as f64 - a as f64)
        .collect();
    let nf = n as f64;
    let mean = diffs.iter().sum::<f64>() / nf;
    let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
    let sd = (ss / (nf - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let t = mean / (sd / nf.sqrt());
    let df = n - 1;
    let p = match alternative {
        Alternative::Less => student_t_cdf(t, df as f64),
        Alternative::Greater => student_t_cdf(-t, df as f64),
        Alternative::TwoSided => (2.0 * student_t_cdf(-t.abs(), df as f64)).min(1.0),
    };
    Ok(TTestResult {
        n,
        mean_diff: mean,
        sd_diff: sd,
        t_stat: t,
        df,
        alternative,
        p_value: p,
    })
}

/// `P(T <= t)` for Student's t with `nu > 0` degrees of freedom.
pub fn student_t_cdf(t: f64, nu: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let x = nu / (nu + t * t);
    let tail = 0.5 * regularized_incomplete_beta(0.5 * nu, 0.5, x);
    if t <= 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// `I_x(a, b)` for `a, b >= 0.5` and `x ∈ [0, 1]`.
///
/// Continued fraction evaluated with the modified Lentz method, using the
/// symmetry `I_x(a, b) = 1 - I_{1-x}(b, a)` on whichever side converges faster.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a >= 0.5 && b >= 0.5);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (-x).ln_1p();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 500;

    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_matches_closed_form() {
        let data = PairedResponses::from_columns(&[3, 4, 2, 5, 3], &[4, 5, 3, 5, 4]).unwrap();
        let r = paired_t_test(&data).unwrap();
        assert!((r.mean_diff + 0.8).abs() < 1e-15);
        assert!((r.sd_diff - 0.2f64.sqrt()).abs() < 1e-15);
        assert!((r.t_stat + 4.0).abs() < 1e-12);
        assert_eq!(r.df, 4);
        // I_x(2, 1/2) = 1 - (3/2)sqrt(1-x) + (1/2)(1-x)^{3/2} at x = 0.2
        let y: f64 = 0.8;
        let oracle = 0.5 * (1.0 - 1.5 * y.sqrt() + 0.5 * y.powf(1.5));
        assert!((r.p_value - oracle).abs() < 1e-12);
        assert!((r.p_value - 0.00807).abs() < 1e-5);
    }

    #[test]
    fn degenerate_inputs() {
        let same = PairedResponses::from_columns(&[3, 4, 5], &[3, 4, 5]).unwrap();
        assert_eq!(paired_t_test(&same), Err(Error::DegenerateVariance));
        let one = PairedResponses::from_columns(&[3], &[4]).unwrap();
        assert_eq!(paired_t_test(&one), Err(Error::InsufficientData { n: 1 }));
    }

    #[test]
    fn alternatives_are_consistent() {
        let data = PairedResponses::from_columns(&[3, 4, 2, 5, 3, 1], &[4, 5, 3, 5, 2, 3]).unwrap();
        let less = paired_t_test_with(&data, Alternative::Less)
            .unwrap()
            .p_value;
        let greater = paired_t_test_with(&data, Alternative::Greater)
            .unwrap()
            .p_value;
        let two = paired_t_test_with(&data, Alternative::TwoSided)
            .unwrap()
            .p_value;
        assert!((less + greater - 1.0).abs() < 1e-14);
        assert!((two - 2.0 * less.min(greater)).abs() < 1e-14);
    }

    #[test]
    fn cdf_closed_forms() {
        // nu = 1 is Cauchy, nu = 2 has F(t) = 1/2 + t / (2 sqrt(2 + t^2)).
        for &t in &[-10.0, -2.0, -0.3, 0.0, 0.7, 3.0] {
            let cauchy = 0.5 + f64::atan(t) / std::f64::consts::PI;
            assert!((student_t_cdf(t, 1.0) - cauchy).abs() < 1e-13, "t = {t}");
            let two = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
            assert!((student_t_cdf(t, 2.0) - two).abs() < 1e-13, "t = {t}");
        }
        assert_eq!(student_t_cdf(f64::INFINITY, 3.0), 1.0);
        assert_eq!(student_t_cdf(f64::NEG_INFINITY, 3.0), 0.0);
    }

    #[test]
    fn incomplete_beta_symmetry_and_ends() {
        for &(a, b, x) in &[
            (2.0, 0.5, 0.2),
            (30.5, 0.5, 0.9),
            (0.5, 0.5, 0.4),
            (5.0, 3.0, 0.7),
        ] {
            let lhs = regularized_incomplete_beta(a, b, x);
            let rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
            assert!((lhs - rhs).abs() < 1e-14);
        }
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
        // I_x(1/2, 1/2) = (2/pi) asin(sqrt x)
        let x: f64 = 0.3;
        let arcsine = 2.0 / std::f64::consts::PI * x.sqrt().asin();
        assert!((regularized_incomplete_beta(0.5, 0.5, x) - arcsine).abs() < 1e-14);
    }
}
