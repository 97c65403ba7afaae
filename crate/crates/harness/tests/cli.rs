use std::process::{Command, Output};

fn cubelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelab"))
        .args(args)
        .env_remove("CUBELAB_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_majority_stats() {
    let o = cubelab(&["analyze", "maj3", "--stats"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Tinf=1.5 H=2 deg=3"), "{out}");
    assert!(!out.contains("Stab="));
}

#[test]
fn analyze_accepts_hex() {
    let o = cubelab(&["analyze", "3:e8", "--sens"]);
    assert!(stdout(&o).contains("s=2 avg_s=3/2 bs=2"));
}

#[test]
fn verify_exits_zero_and_prints_json() {
    let o = cubelab(&["verify", "tomaszewski-sharp", "--no-persist", "-p", "vectors=50"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r["verdict"], "holds-at-scale");
}

#[test]
fn search_prints_value_and_witness() {
    let o = cubelab(&["search", "all-n3", "fei-ratio", "--max", "--no-persist"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("max fei-ratio = 2.95"), "{}", stdout(&o));
    assert!(stdout(&o).contains("at 3:"));
}

#[test]
fn persisted_reports_render_and_reverify() {
    let o = cubelab(&["search", "random:10:1:ltf-n3", "mls-gap@0.5", "--min", "--no-persist"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict holds-at-scale"));
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().to_str().unwrap();
    let o = cubelab(&["verify", "linear-coefficients", "--run-dir", run_dir]);
    assert_eq!(o.status.code(), Some(0));
    let file = dir.path().join("reports.jsonl");
    let o = cubelab(&["report", file.to_str().unwrap(), "--verify"]);
    assert!(stdout(&o).contains("1 reports verified"));
    let o = cubelab(&["report", file.to_str().unwrap(), "--format", "csv"]);
    assert!(stdout(&o).starts_with("conjecture_id,verdict"));
}

#[test]
fn errors_exit_one() {
    assert_eq!(cubelab(&["analyze", "3:zz"]).status.code(), Some(1));
    assert_eq!(cubelab(&["verify", "nope", "--no-persist"]).status.code(), Some(1));
    assert_eq!(cubelab(&["search", "all-n3", "doubling", "--no-persist"]).status.code(), Some(1));
    assert_ne!(cubelab(&["frobnicate"]).status.code(), Some(0));
}

#[test]
fn gauss_ball_radius_csv() {
    let o = cubelab(&["gauss", "ball-radius", "--dim", "2", "--mu", "0.5"]);
    let out = stdout(&o);
    let r: f64 = out.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((r - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-9);
}

#[test]
fn gauss_joint_prob_csv() {
    let h = r#"{"kind":"halfspace","normal":[1.0,0.0],"offset":0.0}"#;
    let o = cubelab(&["gauss", "joint-prob", "--a", h, "--b", h, "--rho", "0", "--samples", "20000"]);
    let out = stdout(&o);
    assert!(out.starts_with("value,std_error,samples,seed"), "{out}");
}
