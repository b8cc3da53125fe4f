//! CSV ingestion for survey tables and paired responses.
//!
//! Tables: header `statement_id,category,count`, one row per category.
//! Pairs: header `respondent_id,before,after` with Likert codes 1-5.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use super::{LikertCategory, PairedResponses, StatementId, StatementTable};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct TableRecord {
    statement_id: String,
    category: String,
    count: u32,
}

#[derive(Debug, Deserialize)]
struct PairRecord {
    #[serde(rename = "respondent_id")]
    _respondent_id: String,
    before: u8,
    after: u8,
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    let reason = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => e.to_string(),
    };
    Error::Parse { line, reason }
}

fn reader<R: Read>(input: R, expected: &[&str]) -> Result<csv::Reader<R>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers().map_err(csv_error)?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Parse {
            line: 1,
            reason: format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(rdr)
}

/// Reads statement tables in order of first appearance. Categories left out
/// of the file count as zero; a repeated `(statement, category)` is an error.
pub fn read_tables<R: Read>(input: R) -> Result<Vec<StatementTable>> {
    let mut tables: Vec<StatementTable> = Vec::new();
    let mut seen: Vec<(StatementId, LikertCategory)> = Vec::new();
    for_each_record(
        input,
        &["statement_id", "category", "count"],
        |line, rec: TableRecord| {
            let id: StatementId = rec
                .statement_id
                .parse()
                .map_err(|reason| Error::Parse { line, reason })?;
            let cat: LikertCategory = rec
                .category
                .parse()
                .map_err(|reason| Error::Parse { line, reason })?;
            if seen.contains(&(id, cat)) {
                return Err(Error::Parse {
                    line,
                    reason: format!("duplicate row for statement {id}, {}", cat.name()),
                });
            }
            seen.push((id, cat));
            match tables.iter_mut().find(|t| t.statement_id == id) {
                Some(t) => t.counts[cat.index()] = rec.count,
                None => {
                    let mut counts = [0; 5];
                    counts[cat.index()] = rec.count;
                    tables.push(StatementTable::new(id, counts));
                }
            }
            Ok(())
        },
    )?;
    Ok(tables)
}

fn for_each_record<R, T, F>(input: R, expected: &[&str], mut f: F) -> Result<()>
where
    R: Read,
    T: for<'de> Deserialize<'de>,
    F: FnMut(u64, T) -> Result<()>,
{
    let mut rdr = reader(input, expected)?;
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record).map_err(csv_error)? {
        let line = record.position().map_or(0, |p| p.line());
        let value: T = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::Parse {
                line,
                reason: match e.kind() {
                    csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                    _ => e.to_string(),
                },
            })?;
        f(line, value)?;
    }
    Ok(())
}

pub fn read_tables_path(path: &Path) -> Result<Vec<StatementTable>> {
    read_tables(std::fs::File::open(path).map_err(|e| Error::io_at(path, e))?)
}

pub fn read_pairs<R: Read>(input: R) -> Result<PairedResponses> {
    let mut pairs = Vec::new();
    for_each_record(
        input,
        &["respondent_id", "before", "after"],
        |line, rec: PairRecord| {
            if !(1..=5).contains(&rec.before) || !(1..=5).contains(&rec.after) {
                return Err(Error::Parse {
                    line,
                    reason: format!("codes ({}, {}) outside 1..=5", rec.before, rec.after),
                });
            }
            pairs.push((rec.before, rec.after));
            Ok(())
        },
    )?;
    PairedResponses::new(pairs)
}

pub fn read_pairs_path(path: &Path) -> Result<PairedResponses> {
    read_pairs(std::fs::File::open(path).map_err(|e| Error::io_at(path, e))?)
}

/// Writes tables in the ingest format.
pub fn write_tables(tables: &[StatementTable]) -> String {
    let mut out = String::from("statement_id,category,count\n");
    for t in tables {
        for c in LikertCategory::ALL {
            out.push_str(&format!("{},{},{}\n", t.statement_id, c.name(), t.count(c)));
        }
    }
    out
}
