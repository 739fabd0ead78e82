//! End-to-end runs of the `ordlaw` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ordlaw(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordlaw"));
    // keep the caller's environment from leaking into the assertions
    cmd.env_remove("ORDLAW_CONFIG");
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    ordlaw(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "args {:?}, stderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

const EVEN_REC: &str = r#"{"K":2,"a":0,"W":[0],"F":[[1,0],[0,0]]}"#;

fn write_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_emits_the_tree_counts() {
    let out = stdout_ok(&["count", "e0", "--n", "6"]);
    assert_eq!(out, "0,1\n1,1\n2,2\n3,4\n4,9\n5,20\n6,48\n");
}

#[test]
fn count_below_omega_is_constant() {
    let out = stdout_ok(&["count", "w", "--n", "5"]);
    assert_eq!(out, "0,1\n1,1\n2,1\n3,1\n4,1\n5,1\n");
}

#[test]
fn count_json_carries_values_as_strings() {
    let out = stdout_ok(&["count", "e0", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["segment"], "e0");
    assert_eq!(v["values"][3], "4");
}

#[test]
fn prob_reports_the_cesaro_limit_below_omega() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let out = stdout_ok(&["prob", "--rec", arg(&rec), "--segment", "w", "--n", "4"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "0,1/1,1/1");
    assert_eq!(lines[1], "1,0/1,1/2");
    assert!(out.contains("regime,A\nlimit,1/2\nkind,cesaro\ngrid,2\n"), "{}", out);
}

#[test]
fn spectrum_output_feeds_density_and_limit() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let dumped = stdout_ok(&[
        "spectrum", "--rec", arg(&rec), "--segment", "w^w", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&dumped).unwrap();
    assert_eq!(v["parts"][0]["b"][0], 2);

    let set = write_file(&dir, "even-set.json", &dumped);
    let limit = stdout_ok(&["limit", "--set", arg(&set)]);
    assert_eq!(limit, "regime,B\nlimit,1/2\nkind,plain\ngrid,1\n");

    let density = stdout_ok(&["density", "--set", arg(&set), "--n", "2"]);
    assert_eq!(density, "0,1/1,1/1\n1,0/1,1/2\n2,1/1,2/3\n");
}

#[test]
fn spectrum_csv_lists_one_row_per_part() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let out = stdout_ok(&["spectrum", "--rec", arg(&rec), "--segment", "w^w"]);
    assert_eq!(out, "0,0,2,none\n1,0,2,positive\n");
}

#[test]
fn rho_limit_over_epsilon_zero_prints_the_expression() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let out = stdout_ok(&["prob", "--rec", arg(&rec), "--segment", "e0", "--n", "0"]);
    assert!(out.contains("limit,(1) / (1 + rho)"), "{}", out);
    assert!(out.contains("value,7.44772"), "{}", out);
    assert!(out.contains("kind,plain"), "{}", out);
}

#[test]
fn usage_errors_exit_one_computation_errors_exit_two() {
    assert_eq!(exit_code(&run(&["count"])), 1);
    assert_eq!(exit_code(&run(&["no-such-command"])), 1);
    assert_eq!(exit_code(&run(&["--help"])), 0);

    let missing = run(&["limit", "--set", "/no/such/file.json"]);
    assert_eq!(exit_code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("set file"));

    let over = run(&["count", "w", "--n", "100000"]);
    assert_eq!(exit_code(&over), 2);
    assert!(String::from_utf8_lossy(&over.stderr).contains("cap"));
}

#[test]
fn schema_violations_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let bad_tail = write_file(
        &dir,
        "bad-tail.json",
        r#"{"parts":[{"r":0,"a":[0],"b":[2],"tail":"sideways","ambient":"w^w"}]}"#,
    );
    let out = run(&["limit", "--set", arg(&bad_tail)]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("tail mode"));

    let bad_shape = write_file(
        &dir,
        "bad-shape.json",
        r#"{"parts":[{"r":1,"a":[0],"b":[2],"tail":"any","ambient":"w^w"}]}"#,
    );
    let out = run(&["limit", "--set", arg(&bad_shape)]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("coordinates"));

    let broken = write_file(&dir, "broken.json", r#"{"K":2,"a":0,"W":[0],"F":[[0,1],[1,0]]}"#);
    let out = run(&["spectrum", "--rec", arg(&broken), "--segment", "w^w"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("axioms"));
}

#[test]
fn config_file_overrides_caps_and_format() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(&dir, "cfg.json", r#"{"truncation_cap":10}"#);
    let out = ordlaw(&["count", "w", "--n", "11"])
        .env("ORDLAW_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);

    let cfg = write_file(&dir, "cfg-json.json", r#"{"format":"json"}"#);
    let out = ordlaw(&["count", "w", "--n", "1"])
        .env("ORDLAW_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with('{'));

    let cfg = write_file(&dir, "cfg-bad.json", r#"{"truncation":10}"#);
    let out = ordlaw(&["count", "w", "--n", "1"])
        .env("ORDLAW_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn matula_commands_round_trip() {
    assert_eq!(stdout_ok(&["matula", "encode", "w^w"]), "5\n");
    assert_eq!(stdout_ok(&["matula", "decode", "5"]), "w^w\n");
    assert_eq!(stdout_ok(&["matula", "encode", "0"]), "1\n");

    assert_eq!(exit_code(&run(&["matula", "decode", "0"])), 2);
    assert_eq!(exit_code(&run(&["matula", "encode", "seven"])), 2);
    // cap guards the trial-division table
    assert_eq!(exit_code(&run(&["matula", "decode", "1000001"])), 2);
}

#[test]
fn census_counts_recognizer_hits() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let plain = stdout_ok(&["matula", "census", "e0", "--n", "12"]);
    assert!(plain.ends_with("12,12\n"));
    let with_rec = stdout_ok(&[
        "matula", "census", "e0", "--n", "12", "--rec", arg(&rec),
    ]);
    assert!(with_rec.ends_with("12,12,8\n"), "{}", with_rec);
}

#[test]
fn catalog_dump_loads_back() {
    let dir = TempDir::new().unwrap();
    let dump = stdout_ok(&["catalog", "even-last-coefficient"]);
    let rec = write_file(&dir, "dump.json", &dump);
    let out = stdout_ok(&["spectrum", "--rec", arg(&rec), "--segment", "w^w"]);
    assert_eq!(out, "0,0,2,none\n1,0,2,positive\n");

    assert_eq!(exit_code(&run(&["catalog", "no-such-entry"])), 2);

    let listing = stdout_ok(&["catalog"]);
    assert_eq!(listing.lines().count(), 6);
    assert!(listing.contains("divisible-by-omega-squared"));
}

#[test]
fn check_passes_and_reports_a_table() {
    let out = stdout_ok(&["check"]);
    assert!(out.contains("10 checks, 10 passed, 0 failed"), "{}", out);
    assert_eq!(out.matches("ok  ").count(), 10, "{}", out);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let rec = write_file(&dir, "even.json", EVEN_REC);
    let args = [
        "prob", "--rec", arg(&rec), "--segment", "e0", "--n", "6", "--format", "json",
    ];
    assert_eq!(stdout_ok(&args), stdout_ok(&args));
}
