use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_curvesum"));
    c.env_remove("CURVESUM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const LENS: &str = r#"{"version":1,"curves":[
 {"id":"a","vertices":[["0","0"],["4","0"],["4","4"],["0","4"]]},
 {"id":"b","vertices":[["2","1"],["6","1"],["6","3"],["2","3"]]}],"bridges":[]}"#;

#[test]
fn standard_curve_piped_into_invariants() {
    let g = run(&["gen", "--standard", "3"]);
    assert!(g.status.success());
    let o = run_stdin(&["invariants"], &g.stdout);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(-4, -6, 2)");
}

#[test]
fn lens_tangency_counts_agree() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "lens.json", LENS);
    let o = run(&["tpm", &f, "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("closed-form (0, -1)") && s.contains("simulate (0, -1)") && s.contains("agree"),
        "{s}"
    );
}

#[test]
fn random_verify_batch_passes() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&[
        "verify",
        "--random",
        "--seed",
        "7",
        "--count",
        "100",
        "--repro-dir",
        d.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("t-st-oracle"));
    assert_eq!(fs::read_dir(d.path()).unwrap().count(), 0);
}

#[test]
fn seed_comes_from_environment() {
    let a = bin()
        .args(["gen", "--random", "--index", "3"])
        .env("CURVESUM_SEED", "11")
        .output()
        .unwrap();
    let b = run(&["gen", "--random", "--index", "3", "--seed", "11"]);
    let c = run(&["gen", "--random", "--index", "3", "--seed", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(b.stdout, c.stdout);
}

#[test]
fn random_instance_round_trips_through_every_command() {
    let d = tempfile::tempdir().unwrap();
    let g = run(&["gen", "--random", "--seed", "5", "--index", "1"]);
    assert!(g.status.success());
    let f = write(d.path(), "inst.json", &stdout(&g));

    assert_eq!(run(&["validate", &f]).status.code(), Some(0));
    let a = run(&["analyze", &f]);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["faces"].as_u64().unwrap() >= 2);
    assert_eq!(run(&["tst", &f]).status.code(), Some(0));

    // the sum file carries a ledger that agrees with its own crossings
    let s = run(&["sum", &f]);
    assert_eq!(s.status.code(), Some(0));
    let sf = write(d.path(), "sum.json", &stdout(&s));
    let from_sum = run(&["invariants", &sf]);
    assert_eq!(from_sum.status.code(), Some(0));
    let direct = run(&["invariants", &f]);
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(stdout(&from_sum), stdout(&direct));

    let out = d.path().join("pic.svg");
    let r = run(&["render", &f, "--sum", "-o", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(fs::read_to_string(out).unwrap().starts_with("<svg"));
    let fs_ = run(&["render", &f, "--filmstrip", "0", "--no-labels"]);
    assert_eq!(fs_.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    // validation failure
    let bad = write(
        d.path(),
        "bad.json",
        r#"{"version":1,"curves":[{"id":"a","vertices":[["0","0"],["4","0"],["0","0"]]}],"bridges":[]}"#,
    );
    assert_eq!(run(&["validate", &bad]).status.code(), Some(1));
    // unreadable or unparsable input
    assert_eq!(
        run(&["validate", "/definitely/not/here.json"])
            .status
            .code(),
        Some(3)
    );
    let junk = write(d.path(), "junk.json", "{ not json");
    assert_eq!(run(&["analyze", &junk]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    // a ledger that contradicts the drawn curve
    let g = stdout(&run(&["gen", "--standard", "2"]));
    let lie = g.replacen("\"j_plus\": -2", "\"j_plus\": 4", 1);
    assert_ne!(g, lie);
    let o = run_stdin(&["invariants"], lie.as_bytes());
    assert_eq!(o.status.code(), Some(2));
}
