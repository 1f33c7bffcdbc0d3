use std::fs;
use std::path::PathBuf;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eigperturb").chain(args.iter().copied());
    let code = eigperturb_cli::dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).expect("valid json")
}

#[test]
fn analyze_identity() {
    let (code, out, _) = cli(&["analyze", &fixture("identity3.mat"), "--format", "json"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(
        (
            doc["distinct"].as_u64(),
            doc["defectivity"].as_u64(),
            doc["derogatory_index"].as_u64()
        ),
        (Some(1), Some(0), Some(2))
    );
    assert_eq!(doc["min_poly"], "x - 1");
    assert_eq!(doc["eigenvalues"][0]["geometric"], 3);
}

#[test]
fn analyze_text_has_same_fields() {
    let (code, out, _) = cli(&["analyze", &fixture("paper_A.mat")]);
    assert_eq!(code, 0);
    for line in [
        "distinct: 1",
        "defectivity: 2",
        "derogatory_index: 2",
        "diagonalizable: false",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn bound_json_keys_are_stable() {
    let (code, out, _) = cli(&[
        "bound",
        "--a",
        &fixture("paper_A.mat"),
        "--b",
        &fixture("paper_B.mat"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let doc = json(&out);
    let keys: Vec<&str> = doc
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        keys,
        [
            "n",
            "rank_b",
            "distinct_a",
            "defectivity_a",
            "derogatory_a",
            "distinct_c",
            "defectivity_c",
            "derogatory_c",
            "farrell_bound",
            "improved_bound",
            "actual_distinct",
            "slack",
            "s1_size",
            "s2_size",
            "checks"
        ]
    );
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .all(|c| c["status"] == "pass" || c["status"] == "not_applicable"));
    assert!(checks
        .iter()
        .any(|c| c["name"] == "geometric_multiplicity_drop"));
}

#[test]
fn split_fixture() {
    let (code, out, _) = cli(&["split", &fixture("paper_A.mat"), "--format", "json"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    let la = doc["distinct_a"].as_i64().unwrap();
    let (m, c44, c45) = (
        doc["rem46_min_bound"].as_i64().unwrap(),
        doc["cor44_bound"].as_i64().unwrap(),
        doc["rem45_bound"].as_i64().unwrap(),
    );
    assert!(la <= m && m <= c44 && c44 <= c45);
}

#[test]
fn examples_default_dimension() {
    let (code, out, _) = cli(&["examples"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("r=9, farrell_bound=19, improved_bound=19"),
        "{out}"
    );
}

#[test]
fn fuzz_text_reports_elapsed_and_json_moves_it_to_stderr() {
    let (code, out, _) = cli(&[
        "fuzz", "--n", "4", "--rank", "1", "--trials", "5", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.contains("trials_run: 5") && out.contains("elapsed:"),
        "{out}"
    );

    let (code, out, err) = cli(&[
        "fuzz", "--n", "4", "--rank", "1", "--trials", "5", "--seed", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert!(err.starts_with("elapsed:"));
    let doc = json(&out);
    assert_eq!(doc["report"]["violations"], 0);
    assert_eq!(doc["config"]["unimodular_ops"], 12);
}

#[test]
fn parse_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mat");
    fs::write(&path, "matrix 2 2\n1 0\n0 1/0\n").unwrap();
    let (code, _, err) = cli(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        err.contains("line 3, column 3") && err.contains("1/0"),
        "{err}"
    );
}

#[test]
fn dimension_mismatch_exits_two() {
    let (code, _, err) = cli(&[
        "bound",
        "--a",
        &fixture("paper_A.mat"),
        "--b",
        &fixture("identity3.mat"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("dimension mismatch"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&["analyze", "/nonexistent/file.mat"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["fuzz", "--n", "3"]).0, 2);
    assert_eq!(
        cli(&["fuzz", "--n", "3", "--rank", "4", "--trials", "1", "--seed", "0"]).0,
        2
    );
    assert_eq!(cli(&["examples", "--n", "1"]).0, 2);
    assert_eq!(
        cli(&["analyze", &fixture("identity3.mat"), "--format", "yaml"]).0,
        2
    );
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze") && out.contains("fuzz"));
}

#[test]
fn non_square_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rect.mat");
    fs::write(&path, "matrix 2 3\n1 2 3\n4 5 6\n").unwrap();
    assert_eq!(cli(&["analyze", path.to_str().unwrap()]).0, 2);
}
