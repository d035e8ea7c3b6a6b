use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hecke(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run hecke")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn theta_identities_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["1", "2"] {
        let out = hecke(dir.path(), &["theta", "check", "--identity", id, "--nmax", "100"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    }
    assert_eq!(code(&hecke(dir.path(), &["theta", "primes", "--pmax", "100"])), 0);
}

#[test]
fn eq21_range_verifies_and_persists() {
    let dir = tempfile::tempdir().unwrap();
    let out = hecke(dir.path(), &["verify", "eq21", "--nmax", "50"]);
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("witness/eq21/50.json").exists());
}

#[test]
fn tampered_witness_fails_and_intact_one_passes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hecke(dir.path(), &["verify", "prop31", "--n", "6"])), 0);
    let path = dir.path().join("witness/prop31/6.json");
    let file = path.to_str().unwrap();
    assert_eq!(code(&hecke(dir.path(), &["check-witness", "--file", file])), 0);

    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let terms = v["witnesses"][0]["terms"].as_array_mut().unwrap();
    terms[0][1] = serde_json::json!("12345");
    fs::write(&path, v.to_string()).unwrap();
    assert_eq!(code(&hecke(dir.path(), &["check-witness", "--file", file])), 2);
}

#[test]
fn swapped_claim_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hecke(dir.path(), &["verify", "eq21", "--n", "4"])), 0);
    let path = dir.path().join("witness/eq21/4.json");
    let text = fs::read_to_string(&path).unwrap().replace("\"eq21\"", "\"eq1\"");
    fs::write(&path, text).unwrap();
    let out = hecke(dir.path(), &["check-witness", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn shallow_search_is_undetermined_not_failed() {
    let dir = tempfile::tempdir().unwrap();
    let out = hecke(dir.path(), &["--depth", "4", "verify", "h1", "--n", "11"]);
    assert_eq!(code(&out), 3);
    let out = hecke(dir.path(), &["--depth", "6", "verify", "h1", "--n", "11"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hecke(dir.path(), &["verify", "nonsense", "--n", "2"])), 64);
    assert_eq!(code(&hecke(dir.path(), &["verify", "eq21"])), 64);
    assert_eq!(code(&hecke(dir.path(), &["verify", "eq21", "--n", "0"])), 64);
    assert_eq!(code(&hecke(dir.path(), &["theta", "check", "--identity", "3", "--nmax", "5"])), 64);
}

#[test]
fn resource_limit_exits_70_with_partial_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = hecke(dir.path(), &["--max-unknowns", "150", "verify", "h1", "--nmax", "3"]);
    assert_eq!(code(&out), 70);
    assert!(String::from_utf8_lossy(&out.stdout).contains("h1 n=1 verified"));
}

#[test]
fn json_reports_and_witnesses_do_not_depend_on_thread_count() {
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    let args = ["--format", "json", "--out", "report.json", "verify", "prop24", "--nmax", "6"];
    let a = hecke(one.path(), &[&["--threads", "1"], &args[..]].concat());
    let b = hecke(many.path(), &[&["--threads", "4"], &args[..]].concat());
    assert_eq!((code(&a), code(&b)), (0, 0));
    let read = |d: &Path, p: &str| fs::read(d.join(p)).unwrap();
    assert_eq!(read(one.path(), "report.json"), read(many.path(), "report.json"));
    for n in 1..=6 {
        let p = format!("witness/prop24a/{n}.json");
        assert_eq!(read(one.path(), &p), read(many.path(), &p));
    }
}

#[test]
fn other_claims_verify() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "eq1", "--nmax", "10"][..],
        &["verify", "eq1", "--method", "solve", "--n", "7"],
        &["verify", "thm11", "--nmax", "4"],
        &["verify", "prop35", "--nmax", "4"],
        &["verify", "starsum", "--nmax", "8"],
        &["build", "--n", "5"],
    ] {
        let out = hecke(dir.path(), args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
    for claim in ["eq1", "thm11"] {
        let path = dir.path().join(format!("witness/{claim}/3.json"));
        assert_eq!(code(&hecke(dir.path(), &["check-witness", "--file", path.to_str().unwrap()])), 0);
    }
}

#[test]
fn series_and_dump_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = hecke(dir.path(), &["--format", "csv", "theta", "series", "--identity", "1", "--nmax", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,lhs,rhs,diff"));
    assert_eq!(text.lines().nth(4), Some("4,14,14,0"));

    let out = hecke(dir.path(), &["--format", "json", "dump", "tninf", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);

    let out = hecke(dir.path(), &["--format", "json", "dump", "set", "--n", "3", "--label", "XnEq"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["label"], "XnEq");
}
