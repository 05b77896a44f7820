use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pslsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslsearch"))
        .args(args)
        .env_remove("PSL_THREADS")
        .output()
        .expect("spawn pslsearch")
}

fn stdout(args: &[&str]) -> String {
    let out = pslsearch(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(args: &[&str]) -> Vec<Value> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    stdout(&full).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn assert_fails(args: &[&str]) {
    let out = pslsearch(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "diagnostic should be one line: {err:?}");
}

#[test]
fn psl_of_barker_11() {
    assert_eq!(stdout(&["psl", "--hex", "712", "--n", "11"]), "1\n");
}

#[test]
fn decode_all_minus() {
    assert_eq!(stdout(&["decode", "--hex", "0", "--n", "2"]), "--\n");
}

#[test]
fn encode_round_trips_decode() {
    let signs = stdout(&["decode", "--hex", "fa87fce54c5e3d9964a49", "--n", "84"]);
    assert_eq!(stdout(&["encode", "--signs", signs.trim()]), "fa87fce54c5e3d9964a49\n");
}

#[test]
fn exhaustive_13() {
    let out = stdout(&["exhaustive", "--n", "13"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("psl 1"));
    let witness = lines.next().unwrap().strip_prefix("witness ").unwrap();
    assert_eq!(stdout(&["psl", "--hex", witness, "--n", "13"]), "1\n");
}

#[test]
fn json_output_has_versioned_header() {
    let lines = json_lines(&["psl", "--hex", "712", "--n", "11"]);
    assert_eq!(lines[0]["format"], "pslsearch");
    assert_eq!(lines[0]["version"], 1);
    assert_eq!(lines[0]["command"], "psl");
    assert_eq!(lines[1]["psl"], 1);
    assert_eq!(lines.len(), 2);
}

#[test]
fn sequence_from_stdin_and_file() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pslsearch"))
        .args(["psl"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1f35 13\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    std::fs::write(&path, "712\n").unwrap();
    assert_eq!(stdout(&["psl", "--file", path.to_str().unwrap(), "--n", "11"]), "1\n");
}

#[test]
fn errors_are_one_line_and_nonzero() {
    assert_fails(&["psl", "--hex", "xyz", "--n", "11"]);
    assert_fails(&["psl", "--hex", "fff", "--n", "4"]);
    assert_fails(&["frobnicate"]);
    assert_fails(&["optimize", "--n", "twenty"]);
    assert_fails(&["optimize", "--n", "20", "--alpha", "0", "--seed", "1"]);
    assert_fails(&["gen", "legendre", "--p", "9"]);
    assert_fails(&["gen", "mseq", "--poly", "15"]);
    assert_fails(&["exhaustive", "--n", "30"]);
}

#[test]
fn gen_mseq_and_legendre() {
    assert_eq!(stdout(&["gen", "mseq", "--poly", "b", "--state", "1"]).trim().len(), 2);
    let mseq = json_lines(&["gen", "mseq", "--poly", "0xb"]);
    assert_eq!(mseq[1]["n"], 7);
    let leg = json_lines(&["gen", "legendre", "--p", "11"]);
    assert_eq!(leg[1]["n"], 11);
    assert_eq!(leg[1]["kind"], "legendre");
}

#[test]
fn optimize_prints_seed_and_appends_results() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("runs.jsonl");
    let path = results.to_str().unwrap();
    let text =
        stdout(&["optimize", "--n", "30", "--alpha", "2", "--threshold", "2000", "--restarts", "2", "--results", path]);
    assert!(text.lines().next().unwrap().starts_with("seed "));
    stdout(&["optimize", "--n", "30", "--alpha", "2", "--threshold", "2000", "--seed", "7", "--results", path]);
    let records: Vec<Value> =
        std::fs::read_to_string(&results).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[1]["master_seed"], 7);
    assert_eq!(records[0]["restarts"], 2);
}

#[test]
fn optimize_from_initial_hex() {
    let lines = json_lines(&[
        "optimize",
        "--n",
        "13",
        "--alpha",
        "2",
        "--threshold",
        "50",
        "--seed",
        "3",
        "--init-hex",
        "1f35",
    ]);
    assert_eq!(lines[1]["best_psl"], 1);
    assert_eq!(lines[1]["seed_provenance"], "provided");
}

#[test]
fn default_alpha_follows_length_band() {
    let lines = json_lines(&["optimize", "--n", "20", "--threshold", "10", "--seed", "1"]);
    assert_eq!(lines[1]["alpha"], 3);
    let lines = json_lines(&["optimize", "--n", "600", "--threshold", "1", "--seed", "1"]);
    assert_eq!(lines[1]["alpha"], 4);
}

#[test]
fn sweep_table_layout() {
    let out =
        stdout(&["sweep", "--n", "20", "--alphas", "2,3", "--restarts", "2", "--threshold", "500", "--seed", "4"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "seed 4");
    assert!(lines[1].split_whitespace().eq(["n", "alpha", "R", "T", "V*", "V∇"]));
    assert_eq!(lines.len(), 4);
    let widths: Vec<usize> = lines[1..].iter().map(|l| l.chars().count()).collect();
    assert!(widths.windows(2).all(|w| w[0] == w[1]), "{lines:?}");
}

#[test]
fn rotate_scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let lines = json_lines(&["rotate-scan", "--hex", "712", "--n", "11", "--csv", csv.to_str().unwrap()]);
    assert_eq!(lines[1]["min_psl"], 1);
    assert_eq!(lines[1]["rho_max"], 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert_eq!(text.lines().next(), Some("0,1"));
}

#[test]
fn verify_table_passes() {
    let out = stdout(&["verify-table"]);
    assert_eq!(out.trim_end(), "99 entries checked, 0 mismatches");
}

#[test]
fn hybrid_legendre_runs() {
    let lines = json_lines(&["hybrid", "legendre", "--p", "61", "--alpha", "3", "--threshold", "200", "--seed", "2"]);
    let record = &lines[1];
    assert!(record["best_psl"].as_u64() <= record["rotation_psl"].as_u64());
    assert!(record["rotation_psl"].as_u64() <= record["unrotated_psl"].as_u64());
    assert!(record["seed_provenance"].as_str().unwrap().starts_with("legendre:<61,"));
}
