use std::path::Path;
use std::process::{Command, Output};

fn lagmhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagmhd")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&lagmhd(&["bogus"])), 1);
    assert_eq!(code(&lagmhd(&["railgun", "--case", "4"])), 1);
    assert_eq!(code(&lagmhd(&["run", "--config", "/nonexistent/run.toml"])), 1);
    let o = lagmhd(&["run", "--config", &config("mod2.toml"), "--override", "initial.kind=\"smooth_random\""]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("isentropic"));
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = lagmhd(&["run", "--config", &config("extended.toml"), "--out", &out, "--override", "mesh.steps=12"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["config.toml", "budgets.csv", "conservation.json", "final.json", "snapshots/0010.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn solver_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let args = ["--override", "scheme.max_iter=1", "--override", "scheme.tol=1e-15"];
    let o = lagmhd(&[&["run", "--config", &config("extended.toml"), "--out", &out][..], &args].concat());
    assert_eq!(code(&o), 2);
}

#[test]
fn verification_failure_exits_with_three() {
    // an unreachable audit threshold fails the audit, not the solver
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let args = ["--override", "mesh.steps=5", "--override", "output.audit_threshold=1e-30"];
    let o = lagmhd(&[&["run", "--config", &config("mod2.toml"), "--out", &out][..], &args].concat());
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_symmetry_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = lagmhd(&["verify", "symmetry", "--out", &dir.path().display().to_string()]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("PASS")));
    assert!(!stdout.lines().any(|l| l.starts_with("FAIL")));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("symmetry.json")).unwrap()).unwrap();
    assert_eq!(v["suite"], "symmetry");
}
