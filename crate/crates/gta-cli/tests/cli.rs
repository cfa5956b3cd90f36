//! End-to-end runs of the `gta` binary: exit codes, JSON reports, round trips.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gta")).args(args).output().expect("gta runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_passes_on_the_corpus() {
    for spec in ["corpus:ground", "corpus:matrix:2", "corpus:poly:8", "corpus:e1:8", "corpus:nilhecke2:8", "corpus:twin"] {
        let out = gta(&["verify", spec]);
        assert_eq!(code(&out), 0, "{spec}: {}", stdout(&out));
    }
}

#[test]
fn bgg_reports_json() {
    let out = gta(&["bgg", "corpus:e1:8", "--format", "json", "--window", "8"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["command"], "bgg");
    assert_eq!(v["verdict"], "pass");
    let text = v.to_string();
    assert!(text.contains("1#0") && text.contains("0#0"), "{text}");
}

#[test]
fn bgg_with_tau_passes() {
    let out = gta(&["bgg", "corpus:e1:8", "--b", "1#0", "--tau"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn mutants_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    for m in gradtri::corpus::mutants(8).into_iter().filter(|m| m.name != "deleted-y") {
        let path = write(dir.path(), &format!("{}.gta", m.name), &gradtri::gta::export_gta(&m.data));
        let out = gta(&["verify", &path, "--format", "json"]);
        assert_eq!(code(&out), 1, "{}: {}", m.name, stdout(&out));
        assert_eq!(json(&out)["verdict"], "fail");
        assert!(stdout(&out).contains(m.axiom), "{}", m.name);
    }
}

#[test]
fn dangling_ids_are_integrity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let m = gradtri::corpus::mutants(8).into_iter().find(|m| m.name == "deleted-y").unwrap();
    let path = write(dir.path(), "deleted.gta", &gradtri::gta::export_gta(&m.data));
    let out = gta(&["verify", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta"));
}

#[test]
fn window_beyond_the_cutoff_is_inconclusive() {
    let out = gta(&["bgg", "corpus:e1:4", "--window", "9"]);
    assert_eq!(code(&out), 3);
    let out = gta(&["bgg", "corpus:e1:4", "--window", "9", "--format", "json"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["exit_code"], 3);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.gta", "[objects]\nu\n[basis]\n1 NOPE u u 0 (u,u)\n");
    let out = gta(&["verify", &path]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 4, column 3"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&gta(&["bgg"])), 2);
    assert_eq!(code(&gta(&["verify", "corpus:e1", "--format", "yaml"])), 2);
    assert_eq!(code(&gta(&["module", "corpus:e1:8", "STD:9#9"])), 2);
}

#[test]
fn export_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = gta(&["export", "corpus:e1:8"]);
    assert_eq!(code(&first), 0);
    let path = write(dir.path(), "e1.gta", &stdout(&first));
    let second = gta(&["export", &path]);
    assert_eq!(stdout(&first), stdout(&second));
    let verify = gta(&["verify", &path]);
    assert_eq!(code(&verify), 0);
}

#[test]
fn modules_and_homs() {
    let out = gta(&["module", "corpus:e1:8", "PROPER_STD:0#0", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gta(&["hom", "corpus:e1:8", "STD:1#0", "PROPER_COSTD:1#0", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gta(&["ext1", "corpus:e1:8", "STD:0#0", "PROPER_COSTD:1#0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gta(&["decompose", "corpus:e1:8", "P:1#0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn flags_and_truncations() {
    let out = gta(&["flag", "corpus:e1:8", "--b", "1#0", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(json(&out)["verdict"], "pass");
    let out = gta(&["truncate", "corpus:e1:8", "--gamma", "0", "--op", "SUB", "P:1#0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gta(&["ascending", "corpus:e1:8", "P:1#0", "--gamma", "0", "--gamma", "0,1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gta(&["truncate", "corpus:e1:8", "--gamma", "1", "--op", "SUB", "P:1#0"]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
}

#[test]
fn reports_are_deterministic_across_runs_and_threads() {
    for args in [
        vec!["verify", "corpus:e1:8", "--format", "json"],
        vec!["bgg", "corpus:e1:8", "--format", "json", "--tau"],
        vec!["flag", "corpus:e1:8", "--b", "1#0", "--format", "json"],
        vec!["cartan", "corpus:twin", "--format", "json"],
    ] {
        let a = gta(&args);
        let b = gta(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut threaded = args.clone();
        threaded.extend(["--threads", "4"]);
        let c = gta(&threaded);
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}
