//! Recomputes every published percentage and summary figure from raw counts.
//!
//! A figure is flagged when the recomputed value, rounded half-up to the
//! printed number of decimals, differs from what was printed.

use super::data::{self, Claim};
use super::{percent_units, LikertCategory, StatementId, StatementTable};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub label: String,
    pub printed: f64,
    pub computed: f64,
    pub decimals: u32,
    pub flagged: bool,
}

impl ComparisonEntry {
    fn new(label: String, printed: f64, computed_units: i64, decimals: u32) -> Self {
        let scale = 10f64.powi(decimals as i32);
        let printed_units = (printed * scale).round() as i64;
        ComparisonEntry {
            label,
            printed,
            computed: computed_units as f64 / scale,
            decimals,
            flagged: printed_units != computed_units,
        }
    }

    pub fn diff(&self) -> f64 {
        self.computed - self.printed
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    pub fn flagged(&self) -> impl Iterator<Item = &ComparisonEntry> {
        self.entries.iter().filter(|e| e.flagged)
    }

    pub fn flag_count(&self) -> usize {
        self.flagged().count()
    }
}

/// Known discrepancies in the published text: (label, printed, recomputed).
pub const KNOWN_FLAGS: [(&str, f64, f64); 3] = [
    ("aggregate agree 3a", 72.85, 72.58),
    ("aggregate agree 4", 95.15, 95.16),
    ("aggregate increase 0 -> 4", 9.21, 9.22),
];

/// Compares the embedded counts against every printed figure.
pub fn compare_to_paper() -> ComparisonReport {
    compare_tables(&data::all_statements())
}

/// Compares the given counts against the printed figures for whichever
/// statements they cover. Claims needing an absent statement are skipped.
pub fn compare_tables(tables: &[StatementTable]) -> ComparisonReport {
    let find = |id: StatementId| tables.iter().find(|t| t.statement_id == id);
    let mut entries = Vec::new();

    for (_, rows) in data::tables() {
        for (id, _, printed) in rows.iter() {
            let Some(table) = find(*id) else { continue };
            entries.extend(table_entries(table, printed));
        }
    }

    let pct = |t: &StatementTable, part: u32, decimals: u32| {
        percent_units(part as u64, t.total() as u64, decimals).unwrap_or(i64::MIN)
    };
    let sa = |t: &StatementTable| t.count(LikertCategory::StronglyAgree);

    for claim in data::CLAIMS {
        match claim {
            Claim::AggregateAgree {
                statement,
                count,
                percent,
            } => {
                let Some(t) = find(statement) else { continue };
                entries.push(ComparisonEntry::new(
                    format!("agree count {statement}"),
                    count as f64,
                    t.agree_count() as i64,
                    0,
                ));
                entries.push(ComparisonEntry::new(
                    format!("aggregate agree {statement}"),
                    percent,
                    pct(t, t.agree_count(), 2),
                    2,
                ));
            }
            Claim::StronglyAgreeIncrease { percent } => {
                let (Some(pre), Some(post)) = (find(StatementId::S0), find(StatementId::S4)) else {
                    continue;
                };
                entries.push(ComparisonEntry::new(
                    "strongly agree increase 0 -> 4".into(),
                    percent,
                    pct(post, sa(post), 2) - pct(pre, sa(pre), 2),
                    2,
                ));
            }
            Claim::AggregateIncrease { percent } => {
                let (Some(pre), Some(post)) = (find(StatementId::S0), find(StatementId::S4)) else {
                    continue;
                };
                entries.push(ComparisonEntry::new(
                    "aggregate increase 0 -> 4".into(),
                    percent,
                    pct(post, post.agree_count(), 2) - pct(pre, pre.agree_count(), 2),
                    2,
                ));
            }
            Claim::NeutralShare { statement, percent } => {
                let Some(t) = find(statement) else { continue };
                entries.push(ComparisonEntry::new(
                    format!("neutral share {statement}"),
                    percent,
                    pct(t, t.count(LikertCategory::Neutral), 2),
                    2,
                ));
            }
            Claim::Undecided {
                statement,
                count,
                percent,
            } => {
                let Some(t) = find(statement) else { continue };
                let undecided = t.total() - t.agree_count();
                entries.push(ComparisonEntry::new(
                    format!("not agreeing count {statement}"),
                    count as f64,
                    undecided as i64,
                    0,
                ));
                entries.push(ComparisonEntry::new(
                    format!("not agreeing share {statement}"),
                    percent,
                    pct(t, undecided, 1),
                    1,
                ));
            }
            Claim::ResponseRate {
                responded,
                invited,
                percent,
            } => {
                // Only meaningful alongside the statement 4 table it describes.
                let Some(post) = find(StatementId::S4) else {
                    continue;
                };
                entries.push(ComparisonEntry::new(
                    "response rate".into(),
                    percent,
                    percent_units(post.total().min(responded) as u64, invited as u64, 2)
                        .unwrap_or(i64::MIN),
                    2,
                ));
            }
        }
    }
    ComparisonReport { entries }
}

/// Per-category percentage entries for one published row.
pub fn table_entries(table: &StatementTable, printed: &[f64; 5]) -> Vec<ComparisonEntry> {
    LikertCategory::ALL
        .iter()
        .zip(printed)
        .map(|(&c, &p)| {
            ComparisonEntry::new(
                format!("statement {} {}", table.statement_id, c.name()),
                p,
                percent_units(table.count(c) as u64, table.total() as u64, 2).unwrap_or(i64::MIN),
                2,
            )
        })
        .collect()
}
