//! End-to-end tests of the `detpsi` binary: exit codes, report files and
//! the report round trips.

use std::path::Path;
use std::process::{Command, Output};

use detpsi::{Report, RunConfig, Task};
use detpsi_core::report::{CheckResult, Verdict};
use detpsi_core::RingSpec;

fn detpsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detpsi")).args(args).env_remove("DETPSI_JOBS").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_report(path: &Path) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&detpsi(&["run", "--bogus"])), 2);
    assert_eq!(code(&detpsi(&["appendix", "--count", "many"])), 2);
    assert_eq!(code(&detpsi(&["main-seq", "--scenario", "/nonexistent/s.json"])), 2);
    assert_eq!(code(&detpsi(&["show", "/nonexistent/report.json"])), 2);
    // degrees [1,2] at CM rank 1 give l = 2
    let o = detpsi(&["l1-seq", "--d", "1", "--degs", "1,2", "--quiet"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn appendix_run_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = detpsi(&["appendix", "--q", "3", "--d", "2", "--seed", "7", "--count", "25", "-o", p(&out), "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out);
    assert_eq!(report.checks.len(), 100);
    assert!(report.checks.iter().all(|c| c.verdict == Verdict::Pass));
    assert_eq!(report.summary.pass, 100);
    // the atomic writer leaves nothing but the report behind
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, vec![std::ffi::OsString::from("out.json")]);
}

#[test]
fn generated_scenario_file_drives_main_seq() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.json");
    let report = dir.path().join("r.json");
    assert_eq!(code(&detpsi(&["gen-scenario", "--d", "1", "--group", "3", "--seed", "2", "-o", p(&scenario)])), 0);
    let o = detpsi(&["main-seq", "--scenario", p(&scenario), "--prime", "x", "-o", p(&report), "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("main.snake"), "{stderr}");
    let r = read_report(&report);
    assert!(r.checks.iter().any(|c| c.check == "main.local" && c.subject.ends_with("@(x)")));
    assert!(r.checks.iter().all(|c| c.verdict != Verdict::Fail));
}

#[test]
fn show_and_rerun_reproduce_the_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    assert_eq!(code(&detpsi(&["psi-suite", "--group", "3", "--seed", "4", "--count", "5", "-o", p(&first), "--quiet"])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_detpsi"))
        .args(["rerun", p(&first), "-o", p(&second), "--quiet"])
        .env("DETPSI_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let a = detpsi(&["show", "--verdicts", p(&first)]);
    let b = detpsi(&["show", "--verdicts", p(&second)]);
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let shown = String::from_utf8(detpsi(&["show", p(&first)]).stdout).unwrap();
    let report = read_report(&first);
    assert_eq!(shown.lines().count(), report.checks.len() + 1);
    assert!(shown.lines().filter(|l| l.starts_with("PASS")).count() == report.summary.pass);
}

#[test]
fn a_failing_check_gives_exit_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fail.json");
    let config = RunConfig { task: Task::Appendix { ring: RingSpec::new(3, 2, &[]), seed: 1, count: 1 }, max_resample: 200 };
    let checks = vec![
        CheckResult::pass("appendix.pd1", "sample-0"),
        CheckResult::fail("appendix.pd2", "sample-0", "Fitting ideals differ".into()),
    ];
    std::fs::write(&path, serde_json::to_string(&Report::new(config, checks, 1.0)).unwrap()).unwrap();
    let o = detpsi(&["show", p(&path)]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("FAIL") && text.contains("Fitting ideals differ"), "{text}");
}
