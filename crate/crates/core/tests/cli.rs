use std::collections::BTreeMap;
use std::process::{Command, Output};

use deltagreen::cli::{render, Column, Metadata, ResultTable};
use deltagreen::cli::OutputFormat;
use proptest::prelude::*;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltagreen"))
        .env_remove("DELTAGREEN_BRANCH_POLICY")
        .args(args)
        .output()
        .unwrap()
}

fn error_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a structured error")
}

#[test]
fn bound_state_table() {
    let out = run(&["bound", "--dim", "1", "--center", "0:lambda=-2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "energy[1/length^2],kappa[1/length]\r\n-1.0,1.0\r\n");
}

#[test]
fn json_output_parses() {
    let out = run(&["scatter", "--dim", "3", "--eb", "-1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let t: ResultTable = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t.metadata.command, "scatter");
    assert_eq!(t.metadata.branch_policy, "unitary");
    assert_eq!(t.metadata.params["eb"], vec!["-1"]);
    let sigma = t.column("sigma").unwrap();
    assert!((t.rows[0][sigma] - 6.283185).abs() < 1e-6);
    assert!(t.rows[0][t.column("optical_residual").unwrap()].abs() <= 1e-14);
}

#[test]
fn paper_policy_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_deltagreen"))
        .env("DELTAGREEN_BRANCH_POLICY", "paper")
        .args(["scatter", "--dim", "3", "--eb", "-1", "--k", "1"])
        .output()
        .unwrap();
    let t: ResultTable = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t.metadata.branch_policy, "paper");
    assert!((t.rows[0][t.column("optical_residual").unwrap()] + 1.0).abs() < 1e-15);
}

#[test]
fn coincident_points_exit_3() {
    let out = run(&["g0", "--dim", "2", "--energy", "-1", "--r", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let e = error_json(&out);
    assert_eq!(e["error"]["kind"], "CoincidentPoints");
    assert_eq!(e["error"]["exit_code"], 3);
    assert!(out.stdout.is_empty());
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["bound", "--dim", "1"][..],
        &["bound", "--dim", "1", "--center", "0:lambda=-2", "--nope", "1"],
        &["bound", "--dim", "2", "--center", "0,0:lambda=-2"],
        &["g0", "--dim", "5", "--energy", "-1", "--r", "1"],
        &["g0", "--dim", "1", "--energy", "2", "--r", "1"],
        &["scatter", "--dim", "2", "--eb", "-1", "--k", "1"],
        &["frobnicate"],
        &["bound", "--dim", "x", "--center", "0:lambda=-2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&out)["error"]["exit_code"], 2);
    }
}

#[test]
fn pole_hit_exits_3() {
    let out = run(&["green", "--dim", "3", "--energy", "-1", "--center", "0,0,0:eb=-1", "--x", "1,0,0", "--y", "0,1,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["error"]["kind"], "AtPole");
}

#[test]
fn verify_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let t: ResultTable = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t.metadata.labels.len(), t.rows.len());
    let passed = t.column("passed").unwrap();
    assert!(t.rows.iter().all(|r| r[passed] == 1.0));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rg.csv");
    let args = ["rgflow", "--dim", "3", "--lambdar", "4", "--cutoff", "10,100", "--format", "csv"];
    let out = run(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
}

#[test]
fn unwritable_output_is_structured() {
    let out = run(&["friedman", "--k", "1", "--cutoff", "10", "--output", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["error"]["kind"], "Io");
}

#[test]
fn help_is_not_an_error() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
    ]
}

proptest! {
    #[test]
    fn json_round_trip(
        width in 0usize..5,
        rows in proptest::collection::vec(proptest::collection::vec(finite(), 5), 0..6),
        name in "[a-z_]{1,8}",
        value in "[ -~]{0,12}",
    ) {
        let columns: Vec<Column> = (0..width).map(|i| Column::new(&format!("c{i}"), "1/length")).collect();
        let mut table = ResultTable::new(
            Metadata {
                command: "g0".into(),
                params: BTreeMap::from([(name, vec![value])]),
                version: "0".into(),
                branch_policy: "unitary".into(),
                labels: vec![],
            },
            columns,
        );
        for r in rows {
            table.push(r[..width].to_vec());
        }
        let bytes = render(&table, OutputFormat::Json).unwrap();
        let back: ResultTable = serde_json::from_slice(&bytes).unwrap();
        prop_assert_eq!(back.rows.len(), table.rows.len());
        for (a, b) in back.rows.iter().zip(&table.rows) {
            // -0.0 == 0.0 under PartialEq; compare bits to be exact
            prop_assert_eq!(
                a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
        }
        prop_assert_eq!(back, table);
    }
}
