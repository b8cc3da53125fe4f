//! Lower and upper bound families for `t!` on `(0, 1)` and the integer
//! inequality chains they are extrapolated from.
//!
//! Every integer check runs in log space so that `2^{n²}` never has to be
//! formed; `n` may go up to 170.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::gamma::{log_factorial, power_exp_integral, QuadratureSpec};

const LN_2: f64 = std::f64::consts::LN_2;

/// Largest `n` accepted by the integer checks.
pub const MAX_CHAIN_N: u64 = 170;

/// Relative tolerance for the moment identity `E[X^n] = n!`.
pub const MOMENT_ANCHOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JustificationId {
    J1,
    J2,
    J3,
}

impl JustificationId {
    pub const ALL: [JustificationId; 3] = [Self::J1, Self::J2, Self::J3];

    pub fn number(self) -> u8 {
        match self {
            Self::J1 => 1,
            Self::J2 => 2,
            Self::J3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::J1),
            2 => Some(Self::J2),
            3 => Some(Self::J3),
            _ => None,
        }
    }

    pub fn lower(self, t: f64) -> Result<f64> {
        match self {
            Self::J1 => j1_lower(t),
            Self::J2 => j2_lower(t),
            Self::J3 => j3_lower(t),
        }
    }

    pub fn upper(self, t: f64) -> Result<f64> {
        match self {
            Self::J1 => j1_upper(t),
            Self::J2 => j2_upper(t),
            Self::J3 => j3_upper(t),
        }
    }

    pub fn pair(self) -> BoundPair {
        BoundPair::new(self)
    }
}

impl fmt::Display for JustificationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{}", self.number())
    }
}

impl FromStr for JustificationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits = s.trim().trim_start_matches(['J', 'j']);
        digits
            .parse::<u8>()
            .ok()
            .and_then(Self::from_number)
            .ok_or_else(|| format!("unknown justification {s:?} (expected 1, 2 or 3)"))
    }
}

pub type BoundFn = fn(f64) -> Result<f64>;

/// A justification's bound functions on `(0, 1)`.
#[derive(Clone, Copy)]
pub struct BoundPair {
    pub id: JustificationId,
    pub lower: BoundFn,
    pub upper: BoundFn,
    /// The integer-domain ancestor of this pair has lower and upper swapped.
    pub swapped_for_integers: bool,
}

impl BoundPair {
    pub fn new(id: JustificationId) -> Self {
        let (lower, upper): (BoundFn, BoundFn) = match id {
            JustificationId::J1 => (j1_lower, j1_upper),
            JustificationId::J2 => (j2_lower, j2_upper),
            JustificationId::J3 => (j3_lower, j3_upper),
        };
        BoundPair {
            id,
            lower,
            upper,
            swapped_for_integers: id == JustificationId::J2,
        }
    }

    /// `upper(t) - lower(t)`.
    pub fn gap(&self, t: f64) -> Result<f64> {
        Ok((self.upper)(t)? - (self.lower)(t)?)
    }
}

impl fmt::Debug for BoundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundPair")
            .field("id", &self.id)
            .field("swapped_for_integers", &self.swapped_for_integers)
            .finish()
    }
}

fn in_closed_unit(what: &'static str, t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(domain(what, t, "[0, 1]"))
    }
}

/// `(t/2)^{t/2}`, defined on `(0, 1]`.
pub fn j1_lower(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("j1_lower", t, "(0, 1]"));
    }
    let h = 0.5 * t;
    Ok((h * h.ln()).exp())
}

/// `2^{t²}`
pub fn j1_upper(t: f64) -> Result<f64> {
    in_closed_unit("j1_upper", t)?;
    Ok((t * t * LN_2).exp())
}

/// `((t+1)/2)^t`
pub fn j2_lower(t: f64) -> Result<f64> {
    in_closed_unit("j2_lower", t)?;
    Ok((t * (0.5 * (t + 1.0)).ln()).exp())
}

pub fn j2_upper(t: f64) -> Result<f64> {
    in_closed_unit("j2_upper", t)?;
    Ok(1.0)
}

/// `1/(1+t)`
pub fn j3_lower(t: f64) -> Result<f64> {
    in_closed_unit("j3_lower", t)?;
    Ok(1.0 / (1.0 + t))
}

pub fn j3_upper(t: f64) -> Result<f64> {
    in_closed_unit("j3_upper", t)?;
    Ok(1.0)
}

/// One inequality `lhs <= rhs` of an integer chain, held in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub relation: &'static str,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    /// `ln_rhs - ln_lhs`; for equality links, minus the relative mismatch.
    pub slack: f64,
    pub holds: bool,
}

impl ChainLink {
    fn le(relation: &'static str, ln_lhs: f64, ln_rhs: f64) -> Self {
        let slack = ln_rhs - ln_lhs;
        ChainLink {
            relation,
            ln_lhs,
            ln_rhs,
            slack,
            holds: slack >= 0.0,
        }
    }

    /// `lhs` and `rhs` agree to `rel_tol` relative.
    fn approx_eq(relation: &'static str, ln_lhs: f64, ln_rhs: f64, rel_tol: f64) -> Self {
        let mismatch = (ln_lhs - ln_rhs).exp_m1().abs();
        ChainLink {
            relation,
            ln_lhs,
            ln_rhs,
            slack: rel_tol - mismatch,
            holds: mismatch <= rel_tol,
        }
    }

    pub fn lhs(&self) -> f64 {
        self.ln_lhs.exp()
    }

    pub fn rhs(&self) -> f64 {
        self.ln_rhs.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub id: JustificationId,
    pub n: u64,
    pub links: Vec<ChainLink>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

fn check_chain_n(what: &'static str, n: u64) -> Result<()> {
    if n == 0 || n > MAX_CHAIN_N {
        return Err(domain(what, n as f64, "1..=170"));
    }
    Ok(())
}

/// Checks the integer-domain inequalities behind justification `id` at `n`.
///
/// * J1: `(n/2)^{n/2} <= n! <= n^n <= 2^{n²}`, plus the premise `n < 2^n`.
/// * J2: `1 <= n! <= ((n+1)/2)^n`.
/// * J3: `E[X^n] = n!` for a unit exponential, by quadrature.
pub fn integer_chain_check(n: u64, id: JustificationId) -> Result<ChainReport> {
    check_chain_n("integer_chain_check", n)?;
    let nf = n as f64;
    let ln_fact = log_factorial(n);
    let links = match id {
        JustificationId::J1 => vec![
            ChainLink::le("(n/2)^(n/2) <= n!", 0.5 * nf * (0.5 * nf).ln(), ln_fact),
            ChainLink::le("n! <= n^n", ln_fact, nf * nf.ln()),
            ChainLink::le("n < 2^n", nf.ln(), nf * LN_2),
            ChainLink::le("n^n <= 2^(n^2)", nf * nf.ln(), nf * nf * LN_2),
        ],
        JustificationId::J2 => vec![
            ChainLink::le("1 <= n!", 0.0, ln_fact),
            ChainLink::le("n! <= ((n+1)/2)^n", ln_fact, nf * (0.5 * (nf + 1.0)).ln()),
        ],
        JustificationId::J3 => {
            let m = integer_moment(n)?;
            vec![ChainLink::approx_eq(
                "E[X^n] = n!",
                m.ln(),
                ln_fact,
                MOMENT_ANCHOR_TOL,
            )]
        }
    };
    Ok(ChainReport { id, n, links })
}

/// `∫₀^∞ x^n e^{-x} dx` with truncation and tolerance scaled to `n!`.
fn integer_moment(n: u64) -> Result<f64> {
    let nf = n as f64;
    let scale = log_factorial(n).exp();
    let spec = QuadratureSpec {
        upper_truncation: (2.0 * nf + 50.0).max(50.0),
        abs_tolerance: 1e-11 * scale,
        max_depth: 40,
    };
    Ok(power_exp_integral(nf, &spec)?.value)
}

/// The premise `n < 2^n` used to pass from `n^n` to `2^{n²}`.
pub fn exponent_premise(n: u64) -> bool {
    let nf = n as f64;
    nf.ln() < nf * LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmAmReport {
    pub n: u64,
    /// `ln((n+1)/2) - ln(n!)/n`
    pub slack: f64,
    pub holds: bool,
}

/// Geometric mean of `{1, ..., n}` against its arithmetic mean `(n+1)/2`.
pub fn gm_am_check(n: u64) -> Result<GmAmReport> {
    if n == 0 {
        return Err(domain("gm_am_check", 0.0, "n >= 1"));
    }
    let nf = n as f64;
    let slack = (0.5 * (nf + 1.0)).ln() - log_factorial(n) / nf;
    Ok(GmAmReport {
        n,
        slack,
        holds: slack >= 0.0,
    })
}

pub(crate) fn require_interior(what: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: t,
            domain: "(0, 1)",
        })
    }
}
