use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellhecke")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn theta_check_passes_with_json_report() {
    let o = run(&["--json", "theta-check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["suite"], "theta-check");
    assert_eq!(v["pass"], true);
    assert!(o.stderr.is_empty());
}

#[test]
fn summary_goes_to_stderr() {
    let o = run(&["theta-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theta-check"));
}

#[test]
fn tampered_identity_exits_one() {
    let o = run(&["--json", "--tamper", "theta-check"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn list_names_every_suite() {
    let o = run(&["--list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8_lossy(&o.stdout);
    for name in ["theta-check", "hecke-verify", "klr-verify", "params"] {
        assert!(s.contains(name), "{name} missing from {s}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["hecke-verify", "--datum", "e8"]).status.code(), Some(2));
    assert_eq!(run(&["klr-verify", "--n1", "2", "--n2", "2", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "short.json", r#"{"trunc": 5}"#);
    assert_eq!(run(&["--config", &short, "theta-check"]).status.code(), Some(2));
    let unknown = write(dir.path(), "unknown.json", r#"{"colour": 1}"#);
    assert_eq!(run(&["--config", &unknown, "theta-check"]).status.code(), Some(2));
    let ok = write(dir.path(), "ok.json", r#"{"tau": [0.1, 0.9], "seed": 3}"#);
    let o = run(&["--json", "--config", &ok, "theta-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["seed"], 3);
}

#[test]
fn torsion_t_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "torsion.json", r#"{"points": [[0.2, 0.3]], "t": [0.5, 0.0]}"#);
    assert_eq!(run(&["params", "--input", &f]).status.code(), Some(2));
}

#[test]
fn two_point_string_has_two_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "pair.json", r#"{"points": [[0.2, 0.3], [0.3234567, 1.0654321]], "t": [0.1234567, 0.7654321]}"#);
    let o = run(&["--json", "params", "--input", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["count"], 2);
}

#[test]
fn klr_verify_small_case() {
    let o = run(&["--json", "klr-verify", "--n1", "2", "--n2", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], true);
}
