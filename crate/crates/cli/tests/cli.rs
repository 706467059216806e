use std::fs;
use std::process::{Command, Output};

fn dynbin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynbin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const INSTANCE_A: &str = "1, 0, 4, 1/2\n2, 0, 2, 1/2\n3, 1, 3, 1/2\n4, 2, 4, 1/2\n";

#[test]
fn run_reports_covering_on_instance_a() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("a.trace");
    fs::write(&trace, INSTANCE_A).unwrap();
    let out = dynbin(&["run", "--algorithm", "covering", "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("norm1_raw = 5\n"), "{text}");
    assert!(text.contains("bound.covering = 12\n"));
    assert!(text.contains("bound.covering.holds = true\n"));
    assert!(text.contains("opt = 6\n"));
}

#[test]
fn generate_run_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("g.trace");
    let sched = dir.path().join("g.sched");
    let out = dynbin(&[
        "generate",
        "--generator",
        "nonuniform:beta=1/2,n=30,t=40,len=1-8",
        "--seed",
        "5",
        "--output",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = dynbin(&[
        "run",
        "--algorithm",
        "transform:harmonic-6",
        "--trace",
        trace.to_str().unwrap(),
        "--schedule-out",
        sched.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cost_line = stdout(&out)
        .lines()
        .find(|l| l.starts_with("cost = "))
        .unwrap()
        .to_string();
    let out = dynbin(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--schedule",
        sched.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(&cost_line));
}

#[test]
fn verify_fails_on_overloaded_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("a.trace");
    let sched = dir.path().join("bad.sched");
    fs::write(&trace, INSTANCE_A).unwrap();
    fs::write(&sched, "1, 1\n1, 2\n1, 3\n1, 4\n").unwrap();
    let out = dynbin(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--schedule",
        sched.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("valid = false"));
}

#[test]
fn same_seed_gives_identical_reports() {
    let args = [
        "run",
        "--algorithm",
        "combined",
        "--generator",
        "uniform:g=3,n=20,t=30,len=log:16",
        "--seed",
        "42",
        "--delta",
        "0.25",
        "--lambda",
        "1",
    ];
    let a = dynbin(&args);
    let b = dynbin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_prints_one_row_per_seed() {
    let out = dynbin(&[
        "sweep",
        "--algorithm",
        "online-covering",
        "--generator",
        "uniform:g=2,n=10,t=12,len=1-4",
        "--seeds",
        "10..14",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("1")).collect();
    assert_eq!(rows.len(), 4);
    assert!(text.contains("runs = 4\nfailed = 0\n"));
}

#[test]
fn bad_input_exits_with_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bad.trace");
    fs::write(&trace, "1, 0, 4, 3/2\n").unwrap();
    let out = dynbin(&["run", "--algorithm", "covering", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let out = dynbin(&["run", "--algorithm", "covering", "--generator", "uniform:g=0,n=1,t=1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn short_forecast_window_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("a.trace");
    fs::write(&trace, INSTANCE_A).unwrap();
    let out = dynbin(&[
        "run",
        "--algorithm",
        "online-covering",
        "--trace",
        trace.to_str().unwrap(),
        "--window",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("forecast"));
}
