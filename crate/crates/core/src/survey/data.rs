//! Published survey counts and the figures printed alongside them.
//!
//! Category order in every array: strongly agree, somewhat agree, neither,
//! somewhat disagree, strongly disagree.

use super::{StatementId, StatementTable};

/// Students invited to take part.
pub const INVITED: u32 = 64;
/// Students who answered both statement 0 and statement 4.
pub const DUAL_RESPONDERS: u32 = 62;

/// (statement, counts, printed percentages)
pub type PublishedRow = (StatementId, [u32; 5], [f64; 5]);

/// Table 1: "the explanation of symbolic t! is helpful" (1a, 2a, 3a).
pub const TABLE_1: [PublishedRow; 3] = [
    (
        StatementId::S1a,
        [21, 34, 5, 1, 1],
        [33.87, 54.84, 8.06, 1.61, 1.61],
    ),
    (
        StatementId::S2a,
        [21, 30, 9, 1, 1],
        [33.87, 48.39, 14.52, 1.61, 1.61],
    ),
    (
        StatementId::S3a,
        [20, 25, 8, 7, 2],
        [32.26, 40.32, 12.90, 11.29, 3.23],
    ),
];

/// Table 2: "the pictorial summary by the graph aided further" (1b, 2b, 3b).
pub const TABLE_2: [PublishedRow; 3] = [
    (
        StatementId::S1b,
        [24, 33, 3, 0, 2],
        [38.71, 53.23, 4.84, 0.00, 3.23],
    ),
    (
        StatementId::S2b,
        [28, 29, 4, 0, 1],
        [45.16, 46.77, 6.45, 0.00, 1.61],
    ),
    (
        StatementId::S3b,
        [27, 24, 7, 2, 2],
        [43.55, 38.71, 11.29, 3.23, 3.23],
    ),
];

/// Table 3: "justification is helpful in believing that 0! = 1" (1c, 2c, 3c).
pub const TABLE_3: [PublishedRow; 3] = [
    (
        StatementId::S1c,
        [28, 25, 5, 3, 1],
        [45.16, 40.32, 8.06, 4.84, 1.61],
    ),
    (
        StatementId::S2c,
        [27, 22, 9, 3, 1],
        [43.55, 35.48, 14.52, 4.84, 1.61],
    ),
    (
        StatementId::S3c,
        [22, 22, 11, 5, 2],
        [35.48, 35.48, 17.74, 8.06, 3.23],
    ),
];

/// Table 4: pre-presentation statement 0 and post-presentation statement 4.
pub const TABLE_4: [PublishedRow; 2] = [
    (
        StatementId::S0,
        [30, 25, 4, 2, 3],
        [46.88, 39.06, 6.25, 3.13, 4.69],
    ),
    (
        StatementId::S4,
        [39, 20, 0, 2, 1],
        [62.90, 32.26, 0.00, 3.23, 1.61],
    ),
];

/// Published tables by number, 1 through 4.
pub fn tables() -> [(u8, &'static [PublishedRow]); 4] {
    [(1, &TABLE_1), (2, &TABLE_2), (3, &TABLE_3), (4, &TABLE_4)]
}

pub fn published_rows() -> impl Iterator<Item = &'static PublishedRow> {
    TABLE_1
        .iter()
        .chain(TABLE_2.iter())
        .chain(TABLE_3.iter())
        .chain(TABLE_4.iter())
}

pub fn statement(id: StatementId) -> StatementTable {
    let row = published_rows()
        .find(|r| r.0 == id)
        .expect("every statement id is published");
    StatementTable::new(id, row.1)
}

pub fn all_statements() -> Vec<StatementTable> {
    published_rows()
        .map(|r| StatementTable::new(r.0, r.1))
        .collect()
}

/// Which published table a statement belongs to.
pub fn table_number(id: StatementId) -> u8 {
    tables()
        .into_iter()
        .find(|(_, rows)| rows.iter().any(|r| r.0 == id))
        .map(|(n, _)| n)
        .expect("every statement id is published")
}

/// Summary figures quoted in the text.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Claim {
    /// `agree/total (pct%)` for a statement.
    AggregateAgree {
        statement: StatementId,
        count: u32,
        percent: f64,
    },
    /// Change in strongly-agree share from statement 0 to 4.
    StronglyAgreeIncrease { percent: f64 },
    /// Change in aggregate agreement from statement 0 to 4.
    AggregateIncrease { percent: f64 },
    /// Share neither agreeing nor disagreeing or disagreeing, printed to one decimal.
    Undecided {
        statement: StatementId,
        count: u32,
        percent: f64,
    },
    /// Neutral share for a statement.
    NeutralShare {
        statement: StatementId,
        percent: f64,
    },
    ResponseRate {
        responded: u32,
        invited: u32,
        percent: f64,
    },
}

pub const CLAIMS: [Claim; 18] = [
    Claim::AggregateAgree {
        statement: StatementId::S1a,
        count: 55,
        percent: 88.71,
    },
    Claim::AggregateAgree {
        statement: StatementId::S2a,
        count: 51,
        percent: 82.26,
    },
    Claim::AggregateAgree {
        statement: StatementId::S3a,
        count: 45,
        percent: 72.85,
    },
    Claim::AggregateAgree {
        statement: StatementId::S1b,
        count: 57,
        percent: 91.94,
    },
    Claim::AggregateAgree {
        statement: StatementId::S2b,
        count: 57,
        percent: 91.94,
    },
    Claim::AggregateAgree {
        statement: StatementId::S3b,
        count: 51,
        percent: 82.26,
    },
    Claim::AggregateAgree {
        statement: StatementId::S1c,
        count: 53,
        percent: 85.48,
    },
    Claim::AggregateAgree {
        statement: StatementId::S2c,
        count: 49,
        percent: 79.03,
    },
    Claim::AggregateAgree {
        statement: StatementId::S3c,
        count: 44,
        percent: 70.97,
    },
    Claim::AggregateAgree {
        statement: StatementId::S0,
        count: 55,
        percent: 85.94,
    },
    Claim::AggregateAgree {
        statement: StatementId::S4,
        count: 59,
        percent: 95.15,
    },
    Claim::AggregateIncrease { percent: 9.21 },
    Claim::StronglyAgreeIncrease { percent: 16.02 },
    Claim::NeutralShare {
        statement: StatementId::S0,
        percent: 6.25,
    },
    Claim::NeutralShare {
        statement: StatementId::S4,
        percent: 0.0,
    },
    Claim::Undecided {
        statement: StatementId::S0,
        count: 9,
        percent: 14.1,
    },
    Claim::Undecided {
        statement: StatementId::S4,
        count: 3,
        percent: 4.8,
    },
    Claim::ResponseRate {
        responded: 62,
        invited: 64,
        percent: 96.88,
    },
];
