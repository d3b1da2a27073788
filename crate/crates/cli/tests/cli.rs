use std::path::Path;
use std::process::{Command, Output};

fn dressed_atom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dressed-atom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(
        dressed_atom(&["validate", "--preset", "fig2"])
            .status
            .code(),
        Some(0)
    );
    let tiny = dressed_atom(&["validate", "--preset", "fig2", "--set", "radius_m=1e-9"]);
    assert_eq!(tiny.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&tiny.stdout).contains("condition_c1 = false"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "radius_m = 1e-6\ntemperature_K = 0\n");
    let out = dressed_atom(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega_bar"));

    let cfg = write_config(dir.path(), "omega_bar = 4e14\n\nradious_m = 1e-6\n");
    let out = dressed_atom(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains(":3:") && err.contains("radious_m"), "{err}");

    assert_eq!(
        dressed_atom(&["bound", "--preset", "fig7"]).status.code(),
        Some(1)
    );
    assert_eq!(dressed_atom(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        dressed_atom(&["spectrum", "--preset", "fig2", "--set", "K=0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn regime_violation_in_compute_commands_exits_three() {
    let out = dressed_atom(&["bound", "--preset", "fig2", "--set", "radius_m=1e-9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn file_then_set_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# trimmed run\nK = 40\nL = 10\nn_points = 5\n");
    let csv = dir.path().join("out.csv");
    let out = dressed_atom(&[
        "evolve",
        "--preset",
        "fig3",
        "--config",
        &cfg,
        "--set",
        "temperature_K=0",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with('#'));
    assert!(header.contains(" K=40 ") && header.contains(" temperature_K=0e0 "));
    assert_eq!(lines.next().unwrap(), "tau_s,n0,f00_sq,thermal_part");
    assert_eq!(lines.count(), 5);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "spectrum",
        "--preset",
        "fig2",
        "--set",
        "K=50",
        "--with-couplings",
    ];
    let a = dressed_atom(&args);
    let b = dressed_atom(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 2 + 51);
}

#[test]
fn help_exits_zero() {
    assert_eq!(dressed_atom(&["--help"]).status.code(), Some(0));
}
