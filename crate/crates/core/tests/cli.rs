use std::path::Path;
use std::process::{Command, Output};

use zerofact::cli::table_section;
use zerofact::survey::{data, ingest};

const BIN: &str = env!("CARGO_BIN_EXE_zerofact");

fn zerofact(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn zerofact_path(args: &[&str], path: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg(path)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_single_justification() {
    let o = zerofact(&["verify", "--justification", "2", "--grid", "101"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.contains("max upper slack"))
        .unwrap();
    let value: f64 = line
        .split(':')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(
        (value - 0.1144).abs() < 5e-5 && line.contains("t = 0.46"),
        "{line}"
    );
    assert!(!text.contains("certify J1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(zerofact(&["verify", "--grid", "2"]).status.code(), Some(2));
    assert_eq!(
        zerofact(&["verify", "--justification", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        zerofact(&["limit", "--target", "nosuch"]).status.code(),
        Some(2)
    );
    assert_eq!(
        zerofact(&["limit", "--target", "gamma", "--k-max", "60"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(zerofact(&["gamma", "1.5"]).status.code(), Some(2));
    assert_eq!(zerofact(&["plot", "--figure", "8"]).status.code(), Some(2));
    assert_eq!(
        zerofact(&["survey", "/no/such/file.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(zerofact(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zerofact(&["--help"]).status.code(), Some(0));
}

#[test]
fn limit_reports_limit_and_slope() {
    let text = stdout(&zerofact(&["limit", "--target", "gamma"]));
    assert!(text.contains("limit: 1.000000000000"), "{text}");
    assert!(text.contains("slope: -0.5772"), "{text}");
    let text = stdout(&zerofact(&["limit", "--target", "j3-lower"]));
    assert!(text.contains("limit: 1.000000000000"));
    assert!(
        text.contains("slope: -1.0000") || text.contains("slope: -0.9999"),
        "{text}"
    );
    let text = stdout(&zerofact(&["limit", "--target", "j1-lower"]));
    assert!(text.contains("unsettled"), "{text}");
}

#[test]
fn embedded_survey_flags_only_known_discrepancies() {
    let o = zerofact(&["survey"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let flags: Vec<&str> = text.lines().filter(|l| l.ends_with("FLAG")).collect();
    assert_eq!(flags.len(), 3, "{flags:#?}");
    assert!(flags[0].contains("aggregate agree 3a") && flags[0].contains("72.85"));
    assert!(flags[1].contains("aggregate agree 4") && flags[1].contains("95.15"));
    assert!(flags[2].contains("aggregate increase 0 -> 4") && flags[2].contains("9.21"));
}

#[test]
fn synthetic_ttest_is_labelled() {
    let text = stdout(&zerofact(&["survey", "--synthetic-ttest", "--seed", "3"]));
    let line = text.lines().find(|l| l.contains("t-test")).unwrap();
    assert!(line.starts_with("SYNTHETIC"), "{line}");
    assert!(line.contains("n = 62"));
}

#[test]
fn external_table_one_matches_embedded_section() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1.csv");
    let table1: Vec<_> = data::TABLE_1.iter().map(|r| data::statement(r.0)).collect();
    std::fs::write(&path, ingest::write_tables(&table1)).unwrap();
    let o = zerofact_path(&["survey"], &path);
    assert_eq!(o.status.code(), Some(0));
    let embedded = table_section(1, &data::all_statements());
    assert!(stdout(&o).starts_with(&embedded));
    assert!(!stdout(&o).contains("Table 2"));
}

#[test]
fn corrupted_table_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupt.csv");
    let mut tables = data::all_statements();
    tables[10].counts[0] -= 1;
    std::fs::write(&path, ingest::write_tables(&tables)).unwrap();
    let o = zerofact_path(&["survey"], &path);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unexpected"));
}

#[test]
fn malformed_count_exits_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(
        &path,
        "statement_id,category,count\n1a,strongly_agree,21\n1a,neutral,abc\n",
    )
    .unwrap();
    let o = zerofact_path(&["survey"], &path);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn paired_csv_runs_real_ttest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.csv");
    std::fs::write(
        &path,
        "respondent_id,before,after\na,3,4\nb,4,5\nc,2,3\nd,5,5\ne,3,4\n",
    )
    .unwrap();
    let o = Command::new(BIN)
        .arg("survey")
        .arg("--pairs")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("paired t-test"))
        .unwrap();
    assert!(
        line.contains("t = -4.0000") && line.contains("df = 4") && line.contains("p = 0.008065"),
        "{line}"
    );
}

#[test]
fn plot_is_deterministic_in_both_formats() {
    for format in ["csv", "svg"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for dir in [&a, &b] {
            let o = Command::new(BIN)
                .args([
                    "plot",
                    "--all",
                    "--resolution",
                    "64",
                    "--format",
                    format,
                    "--out",
                ])
                .arg(dir.path())
                .output()
                .unwrap();
            assert_eq!(o.status.code(), Some(0));
        }
        for id in 1..=7 {
            let name = format!("figure{id}.{format}");
            let x = std::fs::read(a.path().join(&name)).unwrap();
            let y = std::fs::read(b.path().join(&name)).unwrap();
            assert_eq!(x, y, "{name}");
            assert!(!x.contains(&b'\r'));
        }
    }
}

#[test]
fn figure_three_has_closed_form_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["plot", "--figure", "3", "--resolution", "100", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("figure3.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,a,b,gamma,symbolic"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - 1.0 / (1.0 + v[0])).abs() <= 1e-9, "{line}");
        assert_eq!(v[2], 1.0);
    }
}

#[test]
fn unwritable_output_exits_two() {
    let o = zerofact(&["plot", "--figure", "1", "--out", "/no/such/dir"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zerofact(&["gamma", "--out", "/no/such/dir/report.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_can_be_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.txt");
    let o = Command::new(BIN)
        .args(["gamma", "0.5", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .contains("0.886226925452"));
}

#[test]
fn moments_subcommand_agrees() {
    let o = zerofact(&[
        "moments",
        "0.25",
        "0.5",
        "--samples",
        "100000",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        zerofact(&["moments", "--samples", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(zerofact(&["moments", "0"]).status.code(), Some(2));
}
