//! End-to-end checks of the `porewet` binary: exit codes, artifact layout,
//! and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn porewet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porewet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, body).expect("config written");
    path.to_string_lossy().into_owned()
}

const STOCK: &str = r#"
[physical]
a = 1.0
a0 = 1.0
H = 1.0
k = 1.0
T = 1.0

[constitutive]
beta_max = 0.5
phi_max = 0.5
r_phi = 1.0

[boundary]
h = 1.0

[initial]
s0 = 2.0
u0 = 0.5

[stepper]
steps = 200

[run]
n = 64
"#;

#[test]
fn run_writes_the_artifact_set_and_passes_audits() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let out = dir.path().join("artifacts");
    let result = porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    for name in ["config.toml", "timeseries.csv", "fields.csv", "report.txt"] {
        assert!(out.join(name).is_file(), "missing artifact {name}");
    }
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("mode:          monolithic"));
    assert!(report.contains("mass ledger"));
}

#[test]
fn mode_override_switches_the_route() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let out = dir.path().join("artifacts");
    let result = porewet(&[
        "run",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--mode",
        "gamma",
    ]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("mode:          gamma"));
    assert!(report.contains("fixed point:"));
    // The override must also land in the echoed config, so `verify` replays
    // the run the way it actually happened.
    let echoed = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(echoed.contains("mode = \"gamma\""));
}

#[test]
fn runs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let result = porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()]);
        assert!(result.status.success());
    }
    for name in ["timeseries.csv", "fields.csv", "report.txt"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn rejected_config_reports_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[physical]
a = -1.0
a0 = 1.0
H = 1.0
k = 0.0
T = 1.0

[constitutive]
beta_max = 0.5
phi_max = 0.5
r_phi = 1.0

[boundary]
h = 1.0

[initial]
s0 = 2.0
u0 = 5.0
"#,
    );
    let out = dir.path().join("artifacts");
    let result = porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    // One failed run, every problem reported: both bad constants and the
    // out-of-band initial content.
    assert!(stderr.contains("A1"), "stderr: {stderr}");
    assert!(stderr.contains("`a`"), "stderr: {stderr}");
    assert!(stderr.contains("`k`"), "stderr: {stderr}");
    assert!(stderr.contains("A5"), "stderr: {stderr}");
}

#[test]
fn missing_config_is_a_usage_error() {
    let result = porewet(&["run", "--config", "/nonexistent.toml", "--out", "/tmp/unused"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn collapsing_front_exits_with_the_solver_code() {
    let dir = tempfile::tempdir().unwrap();
    // Content at the wall level with a huge time step: the front law drives
    // the region inward by more than its own width in one step.
    let config = write_config(
        dir.path(),
        r#"
[physical]
a = 1.0
a0 = 1.0
H = 1.0
k = 1.0
T = 50.0

[constitutive]
beta_max = 0.5
phi_max = 0.5
r_phi = 1.0

[boundary]
h = 1.0

[initial]
s0 = 2.0
u0 = 0.25

[stepper]
steps = 5

[run]
n = 16
"#,
    );
    let out = dir.path().join("artifacts");
    let result = porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("width"), "stderr: {stderr}");
}

#[test]
fn verify_accepts_fresh_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let out = dir.path().join("artifacts");
    assert!(porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()])
        .status
        .success());
    let result = porewet(&["verify", "--artifacts", out.to_str().unwrap()]);
    assert!(result.status.success(), "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("verify ok"), "stdout: {stdout}");
}

#[test]
fn verify_rejects_tampered_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let out = dir.path().join("artifacts");
    assert!(porewet(&["run", "--config", &config, "--out", out.to_str().unwrap()])
        .status
        .success());

    // Truncated field history: row counts no longer match.
    let fields_path = out.join("fields.csv");
    let full = fs::read_to_string(&fields_path).unwrap();
    let truncated: String = full.lines().take(50).map(|l| format!("{l}\n")).collect();
    fs::write(&fields_path, truncated).unwrap();
    let result = porewet(&["verify", "--artifacts", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(5));

    // Mangled header: the parser itself refuses.
    fs::write(&fields_path, "not,a,field,history\n1,2,3,4\n").unwrap();
    let result = porewet(&["verify", "--artifacts", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(5));
}

#[test]
fn converge_needs_at_least_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let result = porewet(&["converge", "--config", &config, "--axis", "space", "--levels", "2"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn sweep_keeps_input_order_and_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let result = Command::new(env!("CARGO_BIN_EXE_porewet"))
        .args([
            "sweep",
            "--config",
            &config,
            "--param",
            "physical.a0",
            "--values",
            "2.0,-1.0,0.5",
        ])
        .env("PW_THREADS", "2")
        .output()
        .expect("binary runs");
    // The bad member fails validation; the sweep still finishes the others
    // and exits with the first failure's code.
    assert_eq!(result.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&result.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "param,value,status,final_s,final_mass");
    assert!(lines[1].starts_with("physical.a0,2.0,ok,"), "line: {}", lines[1]);
    assert!(lines[2].starts_with("physical.a0,-1.0,rejected,"), "line: {}", lines[2]);
    assert!(lines[3].starts_with("physical.a0,0.5,ok,"), "line: {}", lines[3]);
}

#[test]
fn sweep_rejects_an_unknown_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), STOCK);
    let result = porewet(&[
        "sweep",
        "--config",
        &config,
        "--param",
        "physical.zeta",
        "--values",
        "1.0",
    ]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("unknown sweep parameter"));
}
