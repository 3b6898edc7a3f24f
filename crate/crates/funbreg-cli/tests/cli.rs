//! End-to-end checks of the `funbreg` binary: subcommand output, file
//! formats, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funbreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).expect("write test file");
}

#[test]
fn estimate_restricted_fisher_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    write(&samples, "1.0\n");
    let out = run(&[
        "estimate",
        "--estimator",
        "restricted",
        "--metric",
        "fisher",
        "--samples",
        samples.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "scale 2.0");
}

#[test]
fn estimate_all_estimators() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    write(&samples, "# three draws\n0.2\n0.9\n0.5\n");
    let path = samples.to_str().unwrap();

    let out = run(&["estimate", "--estimator", "mle", "--samples", path]);
    assert_eq!(stdout(&out).trim(), "scale 0.9");

    let out = run(&["estimate", "--estimator", "unrestricted", "--samples", path]);
    let text = stdout(&out);
    assert!(text.contains("n 3") && text.contains("x_max 0.9"));

    let out = run(&[
        "estimate",
        "--estimator",
        "bayes-param",
        "--t1",
        "1",
        "--t2",
        "1",
        "--samples",
        path,
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let theta: f64 = text.trim().strip_prefix("theta ").unwrap().parse().unwrap();
    assert!(theta > 0.9);
}

#[test]
fn divergence_of_equal_functions_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let space = funbreg::MeasureSpace::interval(0.0, 1.0, 8).unwrap();
    let mut body = String::new();
    for &x in space.nodes() {
        body.push_str(&format!("{x},{}\n", 1.0 + x));
    }
    let f = dir.path().join("f.csv");
    let g = dir.path().join("g.csv");
    write(&f, &body);
    write(&g, &body);
    let out = run(&[
        "divergence",
        "--phi",
        "tsd",
        "--f",
        f.to_str().unwrap(),
        "--g",
        g.to_str().unwrap(),
        "--grid",
        "0,1,8",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(json["phi"], "tsd");
    assert_eq!(json["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn divergence_rejects_off_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    write(&f, "0.1,1\n0.2,1\n");
    let out = run(&[
        "divergence",
        "--phi",
        "tsd",
        "--f",
        f.to_str().unwrap(),
        "--g",
        f.to_str().unwrap(),
        "--grid",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_theorem_suite_exits_zero() {
    let out = run(&["verify", "--suite", "theorem"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("perturbation probe (tsd)"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let out = run(&["estimate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    let out = run(&[
        "estimate",
        "--estimator",
        "mle",
        "--samples",
        "/nonexistent/samples.txt",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/samples.txt"));
}

#[test]
fn simulate_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.cfg");
    write(
        &config,
        "runs = 5\nn_values = 1, 4\nseed = 9\nestimators = mle, restricted_fisher, unrestricted\n",
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out_path in [&out_a, &out_b] {
        let out = run(&[
            "simulate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,estimator,mean_sq_error,runs"));
    // 2 sample sizes × 3 estimators.
    assert_eq!(lines.count(), 6);
}
