//! Globally adaptive Gauss–Legendre quadrature on finite intervals.
//!
//! Each panel is integrated with a fixed-order Gauss–Legendre rule both as a
//! whole and as two halves. The halves are kept as the panel's value and the
//! difference between the two results is its error estimate. The panel with
//! the largest estimate is bisected until the summed estimate falls below
//! the requested absolute tolerance or every offending panel has hit the
//! depth limit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 10;

/// Nodes and weights of the `ORDER`-point Gauss–Legendre rule on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut rule = [(0.0, 0.0); ORDER];
        let n = ORDER as f64;
        for (i, slot) in rule.iter_mut().enumerate() {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(ORDER, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-17 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(ORDER, x);
            if d != 0.0 {
                dp = d;
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

fn rule_on<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Bisection budget for one call to [`integrate`].
pub const MAX_SPLITS: usize = 200_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Summed panel error estimates plus a rounding allowance.
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> Self {
        let m = 0.5 * (a + b);
        let left = rule_on(f, a, m);
        let right = rule_on(f, m, b);
        let fine = left + right;
        Panel {
            a,
            b,
            depth,
            left,
            right,
            err: (whole - fine).abs() + f64::EPSILON * (left.abs() + right.abs()),
        }
    }

    /// Whole-vs-halves disagreement is at the level of rounding, so splitting
    /// further cannot reduce the error.
    fn at_rounding_floor(&self) -> bool {
        self.err <= 4.0 * f64::EPSILON * (self.left.abs() + self.right.abs())
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by position for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// A panel at `max_depth` bisections, or whose error is down to rounding, is
/// never split again, and at most [`MAX_SPLITS`] bisections are made. If the
/// tolerance cannot be met under those limits, [`Error::Convergence`] carries
/// the best value reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidSpec {
            what: "integration interval",
            reason: format!("[{a}, {b}] is not a finite, non-empty interval"),
        });
    }
    if !(abs_tol > 0.0) || max_depth == 0 {
        return Err(Error::InvalidSpec {
            what: "quadrature tolerance",
            reason: format!("abs_tol = {abs_tol}, max_depth = {max_depth}"),
        });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen = Vec::new();
    heap.push(Panel::new(&f, a, b, rule_on(&f, a, b), 0));
    let mut total_err = heap.peek().map_or(0.0, |p| p.err);
    let mut frozen_err = 0.0;
    let mut splits = 0;

    while total_err + frozen_err > abs_tol && splits < MAX_SPLITS {
        let Some(worst) = heap.pop() else { break };
        total_err -= worst.err;
        if worst.depth >= max_depth || worst.at_rounding_floor() {
            frozen_err += worst.err;
            frozen.push(worst);
            continue;
        }
        splits += 1;
        let m = 0.5 * (worst.a + worst.b);
        let lo = Panel::new(&f, worst.a, m, worst.left, worst.depth + 1);
        let hi = Panel::new(&f, m, worst.b, worst.right, worst.depth + 1);
        total_err += lo.err + hi.err;
        heap.push(lo);
        heap.push(hi);
        // Running sums drift; resynchronise occasionally.
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(Panel::value).sum();
    let error: f64 = panels.iter().map(|p| p.err).sum();
    let out = Integral {
        value,
        error,
        panels: panels.len(),
    };
    if error > abs_tol {
        return Err(Error::Convergence {
            value,
            estimate: error,
            tolerance: abs_tol,
        });
    }
    Ok(out)
}
