use std::process::{Command, Output};

fn lcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcs")).args(args).env_remove("LCS_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn b2_of_the_two_variable_quotient_vanishes() {
    let o = lcs(&["dims", "--quotient", "B2", "--n", "1", "--omega", "--max-degree", "8", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[2] == "0" && r[3] == "0"));
}

#[test]
fn reduced_first_quotient_for_n_one() {
    let o = lcs(&["dims", "--quotient", "B1bar", "--n", "1", "--omega", "--max-degree", "5", "--format", "csv"]);
    let dims: Vec<String> = csv_rows(&o).into_iter().map(|r| r[2].clone()).collect();
    assert_eq!(dims, ["1", "2", "3", "4", "5", "6"]);
}

#[test]
fn free_b3_matches_its_prediction_column() {
    let o = lcs(&["dims", "--quotient", "B3", "--n", "2", "--max-degree", "6", "--format", "csv"]);
    let rows = csv_rows(&o);
    assert_eq!(rows[3][2], "20");
    assert!(rows.iter().all(|r| r[2] == r[3]));
}

#[test]
fn per_slice_json_sums_to_the_degree_total() {
    let o = lcs(&["dims", "--quotient", "B2", "--n", "2", "--omega", "--min-degree", "3", "--max-degree", "3", "--per-slice", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let total: u64 = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).sum();
    let plain = lcs(&["dims", "--quotient", "B2", "--n", "2", "--omega", "--min-degree", "3", "--max-degree", "3", "--format", "csv"]);
    assert_eq!(total.to_string(), csv_rows(&plain)[0][2]);
}

#[test]
fn exit_codes() {
    assert_eq!(lcs(&["verify", "conj-5.12", "--n", "2"]).status.code(), Some(0));
    assert_eq!(lcs(&["verify", "thm-1.3", "--n", "2", "--max-degree", "4"]).status.code(), Some(1));
    assert_eq!(lcs(&["verify", "no-such-claim"]).status.code(), Some(2));
    assert_eq!(lcs(&["dims", "--quotient", "Q2", "--n", "1"]).status.code(), Some(2));
    assert_eq!(lcs(&["dims", "--n", "1"]).status.code(), Some(2));
    let big = lcs(&["dims", "--quotient", "B2", "--n", "2", "--max-degree", "4", "--max-slice-dim", "10"]);
    assert_eq!(big.status.code(), Some(3));
}

#[test]
fn verify_reports_are_deterministic() {
    let run = || {
        let o = lcs(&["verify", "prop-2.11", "--n", "3", "--format", "json"]);
        assert!(o.status.success());
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("wall_ms");
        v
    };
    let a = run();
    assert_eq!(a["claim"], "prop-2.11");
    assert!(a["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(a.to_string(), run().to_string());
}

#[test]
fn list_names_every_claim() {
    let out = stdout(&lcs(&["verify", "--list"]));
    for id in ["thm-1.2", "lemma-5.9", "conj-5.12", "invariants"] {
        assert!(out.contains(id));
    }
}

#[test]
fn cache_warm_status_clear() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let warm = || stdout(&lcs(&["--cache-dir", d, "cache", "warm", "--n", "1", "--max-degree", "4"]));
    assert!(warm().contains("(0% hits)"));
    assert!(warm().contains("(100% hits)"));
    let status = lcs(&["--cache-dir", d, "cache", "status", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&status)).unwrap();
    assert!(!v["entries"].as_array().unwrap().is_empty());
    assert!(lcs(&["--cache-dir", d, "cache", "clear"]).status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&lcs(&["--cache-dir", d, "cache", "status", "--format", "json"]))).unwrap();
    assert!(v["entries"].as_array().unwrap().is_empty());
}

#[test]
fn cache_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lcs"))
        .args(["dims", "--quotient", "B2", "--n", "1", "--max-degree", "3"])
        .env("LCS_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}
