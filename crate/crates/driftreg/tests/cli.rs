use std::process::Command;

fn driftreg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_driftreg"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(driftreg().arg("run")), 2);
    assert_eq!(code(driftreg().args(["run", "--dataset", "synthetic", "--target", "y", "--detector", "ddm"])), 2);
    // adaptive detector without threshold
    assert_eq!(code(driftreg().args(["run", "--dataset", "synthetic", "--target", "y"])), 2);
    assert_eq!(
        code(driftreg().args([
            "run", "--dataset", "synthetic", "--target", "y", "--detector", "adwin+rmse",
            "--threshold", "0.1e-4",
        ])),
        2
    );
    assert_eq!(code(driftreg().args(["matrix", "--config", "/nonexistent.toml"])), 2);
    assert_eq!(code(driftreg().args(["run", "--dataset", "synthetic", "--target", "y", "--detector", "none", "--buffer", "20"])), 2);
}

#[test]
fn synthetic_run_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let trace = dir.path().join("t.csv");
    let o = driftreg()
        .args([
            "run", "--dataset", "synthetic", "--target", "y", "--detector", "adwin+rmse",
            "--working-points", "120", "--fit-window", "90", "--buffer", "30",
            "--threshold", "0.1e-4", "--adwin-delta", "0.1e-15", "--seed", "4",
        ])
        .arg("--out")
        .arg(&out)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let line = std::fs::read_to_string(&out).unwrap();
    assert!(line.contains("\"detector\":\"adwin+rmse\""));
    let trace = std::fs::read_to_string(&trace).unwrap();
    assert!(trace.starts_with("index,predicted,truth,drift_flag\n"));
}

#[test]
fn failed_experiment_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = driftreg()
        .args(["run", "--dataset", "protein", "--target", "RMSD", "--detector", "none"])
        .arg("--data-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file not found"));
}

#[test]
fn matrix_with_a_failure_exits_1_and_reports_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("m.toml");
    std::fs::write(
        &config,
        r#"
[[experiment]]
label = "synthetic (a)"
dataset = "synthetic"
target = "y"
detector = "rmse"
threshold = 0.05

[[experiment]]
label = "missing (c)"
dataset = "protein"
target = "RMSD"
detector = "none"
"#,
    )
    .unwrap();
    let results = dir.path().join("r.jsonl");
    let o = driftreg()
        .args(["matrix", "--parallel", "2"])
        .arg("--config")
        .arg(&config)
        .arg("--data-dir")
        .arg(dir.path())
        .arg("--results")
        .arg(&results)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAILED"));
    assert!(stdout.contains("missing (c): "));
    assert_eq!(std::fs::read_to_string(&results).unwrap().lines().count(), 1);
}

#[test]
fn default_matrix_lists_all_labels() {
    let o = driftreg().args(["matrix", "--print-default"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for n in 1..=8 {
        for s in ["a", "b", "c"] {
            assert!(text.contains(&format!("\"Exp. {n} - ({s})\"")));
        }
    }
}
