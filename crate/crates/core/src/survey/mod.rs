//! Likert survey tables, agreement aggregates and the paired t-test.
//!
//! Percentages are rounded half-up in integer arithmetic, so `3.125` becomes
//! `3.13` and `96.875` becomes `96.88` exactly.

pub mod compare;
pub mod data;
pub mod ingest;
pub mod ttest;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

pub use compare::{compare_to_paper, ComparisonEntry, ComparisonReport};
pub use ttest::{paired_t_test, paired_t_test_with, Alternative, TTestResult};

/// Five-point agreement scale, ordered from most to least agreeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LikertCategory {
    StronglyAgree,
    SomewhatAgree,
    Neutral,
    SomewhatDisagree,
    StronglyDisagree,
}

impl LikertCategory {
    pub const ALL: [LikertCategory; 5] = [
        Self::StronglyAgree,
        Self::SomewhatAgree,
        Self::Neutral,
        Self::SomewhatDisagree,
        Self::StronglyDisagree,
    ];

    /// Numeric score: 5 for strongly agree down to 1 for strongly disagree.
    pub fn code(self) -> u8 {
        5 - self.index() as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1..=5 => Some(Self::ALL[(5 - code) as usize]),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::StronglyAgree => "strongly_agree",
            Self::SomewhatAgree => "somewhat_agree",
            Self::Neutral => "neutral",
            Self::SomewhatDisagree => "somewhat_disagree",
            Self::StronglyDisagree => "strongly_disagree",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::StronglyAgree => "Strongly agree",
            Self::SomewhatAgree => "Somewhat agree",
            Self::Neutral => "Neither agree nor disagree",
            Self::SomewhatDisagree => "Somewhat disagree",
            Self::StronglyDisagree => "Strongly disagree",
        }
    }
}

impl FromStr for LikertCategory {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        match norm.as_str() {
            "strongly_agree" => Ok(Self::StronglyAgree),
            "somewhat_agree" => Ok(Self::SomewhatAgree),
            "neutral" | "neither_agree_nor_disagree" => Ok(Self::Neutral),
            "somewhat_disagree" => Ok(Self::SomewhatDisagree),
            "strongly_disagree" => Ok(Self::StronglyDisagree),
            _ => Err(format!("unknown Likert category {s:?}")),
        }
    }
}

/// Survey statements: `0` before the presentation, `1a`..`3c` and `4` after.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatementId {
    S0,
    S1a,
    S1b,
    S1c,
    S2a,
    S2b,
    S2c,
    S3a,
    S3b,
    S3c,
    S4,
}

impl StatementId {
    pub const ALL: [StatementId; 11] = [
        Self::S0,
        Self::S1a,
        Self::S1b,
        Self::S1c,
        Self::S2a,
        Self::S2b,
        Self::S2c,
        Self::S3a,
        Self::S3b,
        Self::S3c,
        Self::S4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::S0 => "0",
            Self::S1a => "1a",
            Self::S1b => "1b",
            Self::S1c => "1c",
            Self::S2a => "2a",
            Self::S2b => "2b",
            Self::S2c => "2c",
            Self::S3a => "3a",
            Self::S3b => "3b",
            Self::S3c => "3c",
            Self::S4 => "4",
        }
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatementId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown statement id {s:?}"))
    }
}

/// Response counts for one statement, indexed by [`LikertCategory::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementTable {
    pub statement_id: StatementId,
    pub counts: [u32; 5],
}

impl StatementTable {
    pub fn new(statement_id: StatementId, counts: [u32; 5]) -> Self {
        StatementTable {
            statement_id,
            counts,
        }
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn count(&self, c: LikertCategory) -> u32 {
        self.counts[c.index()]
    }

    /// Responses in the two agreeing categories.
    pub fn agree_count(&self) -> u32 {
        self.count(LikertCategory::StronglyAgree) + self.count(LikertCategory::SomewhatAgree)
    }
}

/// `100 · part / whole` rounded half-up to `decimals` places, as an integer
/// number of `10^{-decimals}` percent units.
pub fn percent_units(part: u64, whole: u64, decimals: u32) -> Result<i64> {
    if whole == 0 {
        return Err(Error::EmptyTable);
    }
    let scale = 10u128.pow(decimals + 2);
    let num = 2 * part as u128 * scale + whole as u128;
    Ok((num / (2 * whole as u128)) as i64)
}

/// [`percent_units`] as a decimal value.
pub fn rounded_percent(part: u64, whole: u64, decimals: u32) -> Result<f64> {
    Ok(percent_units(part, whole, decimals)? as f64 / 10f64.powi(decimals as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Percentages {
    /// Rounded half-up to two decimals.
    pub rounded: [f64; 5],
    pub unrounded: [f64; 5],
}

pub fn percentages(table: &StatementTable) -> Result<Percentages> {
    let total = table.total() as u64;
    if total == 0 {
        return Err(Error::EmptyTable);
    }
    let mut rounded = [0.0; 5];
    let mut unrounded = [0.0; 5];
    for (i, &c) in table.counts.iter().enumerate() {
        rounded[i] = rounded_percent(c as u64, total, 2)?;
        unrounded[i] = 100.0 * c as f64 / total as f64;
    }
    Ok(Percentages { rounded, unrounded })
}

/// Agreeing responses and their share of the total, in percent (two decimals).
pub fn aggregate_agree(table: &StatementTable) -> Result<(u32, f64)> {
    let agree = table.agree_count();
    Ok((
        agree,
        rounded_percent(agree as u64, table.total() as u64, 2)?,
    ))
}

pub fn response_rate(responded: u32, invited: u32) -> Result<f64> {
    if invited == 0 {
        return Err(Error::EmptyTable);
    }
    if responded > invited {
        return Err(Error::InvalidSpec {
            what: "response_rate",
            reason: format!("{responded} responses from {invited} invitations"),
        });
    }
    rounded_percent(responded as u64, invited as u64, 2)
}

/// Per-respondent `(before, after)` Likert codes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairedResponses {
    pairs: Vec<(u8, u8)>,
}

impl PairedResponses {
    pub fn new(pairs: Vec<(u8, u8)>) -> Result<Self> {
        for (i, &(b, a)) in pairs.iter().enumerate() {
            if !(1..=5).contains(&b) || !(1..=5).contains(&a) {
                return Err(Error::InvalidSpec {
                    what: "PairedResponses",
                    reason: format!("pair {i} = ({b}, {a}) has a code outside 1..=5"),
                });
            }
        }
        Ok(PairedResponses { pairs })
    }

    pub fn from_columns(before: &[u8], after: &[u8]) -> Result<Self> {
        if before.len() != after.len() {
            return Err(Error::InvalidSpec {
                what: "PairedResponses",
                reason: format!("{} before vs {} after values", before.len(), after.len()),
            });
        }
        Self::new(before.iter().copied().zip(after.iter().copied()).collect())
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Category counts of the before and after columns.
    pub fn marginals(&self) -> ([u32; 5], [u32; 5]) {
        let mut before = [0; 5];
        let mut after = [0; 5];
        for &(b, a) in &self.pairs {
            before[(5 - b) as usize] += 1;
            after[(5 - a) as usize] += 1;
        }
        (before, after)
    }
}

/// Whether `data` reproduces the tables' column marginals.
///
/// The after column must match `after_table` exactly. When `before_table`
/// has more respondents than `data` (statement 0 had 64 answers, only 62 of
/// whom answered both), the before column must fit inside it with exactly
/// the surplus left over; otherwise it must match exactly.
pub fn marginal_consistency(
    data: &PairedResponses,
    before_table: &StatementTable,
    after_table: &StatementTable,
) -> bool {
    let (before, after) = data.marginals();
    if data.is_empty() || after != after_table.counts {
        return false;
    }
    let n = data.len() as u32;
    let total = before_table.total();
    if total < n {
        return false;
    }
    before
        .iter()
        .zip(&before_table.counts)
        .all(|(&got, &cap)| got <= cap)
        && before_table
            .counts
            .iter()
            .zip(&before)
            .map(|(cap, got)| cap - got)
            .sum::<u32>()
            == total - n
}

/// Statement 0 respondents assumed not to have answered statement 4.
///
/// The published tables do not say who they were; this fixes one choice
/// (one strongly-agree and one somewhat-agree respondent) so synthetic
/// pairings are reproducible.
pub const SYNTHETIC_DROPPED_BEFORE: [u32; 5] = [1, 1, 0, 0, 0];

/// The statement 0 table restricted to the assumed dual responders.
pub fn dual_responder_before_table() -> StatementTable {
    let mut counts = data::statement(StatementId::S0).counts;
    for (c, d) in counts.iter_mut().zip(SYNTHETIC_DROPPED_BEFORE) {
        *c -= d;
    }
    StatementTable::new(StatementId::S0, counts)
}

/// A SYNTHETIC before/after pairing consistent with the statement 0 and 4
/// marginals (62 pairs).
///
/// The per-respondent data behind the published test were never released.
/// This pairs the dual-responder before codes (descending) with the after
/// codes in an order shuffled by Fisher–Yates over `ChaCha8Rng::seed_from_u64(seed)`.
/// It exercises the t-test; it does not recover the published p-value.
pub fn synthetic_pairing(seed: u64) -> PairedResponses {
    let expand = |t: &StatementTable| -> Vec<u8> {
        LikertCategory::ALL
            .iter()
            .flat_map(|&c| std::iter::repeat_n(c.code(), t.count(c) as usize))
            .collect()
    };
    let before = expand(&dual_responder_before_table());
    let mut after = expand(&data::statement(StatementId::S4));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..after.len()).rev() {
        let j = ((rng.next_u64() as u128 * (i as u128 + 1)) >> 64) as usize;
        after.swap(i, j);
    }
    PairedResponses::from_columns(&before, &after).expect("codes come from the tables")
}
