//! End-to-end tests of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_coordkit"));
    assert!(p.exists(), "binary not built at {}", p.display());
    p = p.canonicalize().unwrap();
    p
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("COORDKIT_SEED")
        .output()
        .expect("spawn coordkit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn hb(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

#[test]
fn eval_reports_the_perfect_channel_value() {
    let out = run(&["eval", data("fig2.json").to_str().unwrap(), "--restarts", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = doc["result"]["value"].as_f64().unwrap();
    assert!((value - 0.5 * 3.0f64.log2()).abs() < 1e-6);
    assert_eq!(doc["result"]["verdict"], "achievable");
    assert_eq!(doc["result"]["closed_form"]["label"], "perfect-channel");
    // Round trip: re-serializing the parsed document is lossless.
    let again: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
}

#[test]
fn noiseless_gamma_sweep_matches_the_single_letter_formula() {
    let out = run(&[
        "sweep-gamma",
        "--eps",
        "0",
        "--step",
        "0.25",
        "--restarts",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# run_spec: "));
    assert_eq!(lines.next().unwrap(), "gamma,lower,upper,certified");
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (gamma, lower, upper, certified) = (f[0], f[1], f[2], f[3]);
        let expect = hb(gamma) + (1.0 - gamma) * 3.0f64.log2() - 1.0;
        assert!((lower - expect).abs() < 1e-9, "gamma {gamma}");
        assert!((upper - expect).abs() < 1e-9, "gamma {gamma}");
        assert!((certified - expect).abs() < 1e-6, "gamma {gamma}");
    }
}

#[test]
fn pure_noise_region_keeps_only_the_half_distortion_row() {
    let out = run(&["dc-region", "--p", "0.5", "--eps", "0.5", "--grid-step", "0.1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        let beta: f64 = f[1].parse().unwrap();
        let achievable: u8 = f[3].parse().unwrap();
        assert_eq!(
            achievable == 1,
            (beta - 0.5).abs() < 1e-12,
            "row: {line}"
        );
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let st = run(&[
            "simulate",
            data("fig2.json").to_str().unwrap(),
            "--mode",
            "strict",
            "--n",
            "40",
            "--blocks",
            "5",
            "--delta",
            "0.05",
            "--trials",
            "4",
            "--seed",
            "9",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn validation_failures_exit_2_with_cell_indexed_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{
            "alphabets": {"u": 2, "x": 2, "y": 2, "v": 2},
            "source": [0.6, 0.6],
            "channel": [[1.0, 0.0], [0.0, 1.0]],
            "target": [[0.25, 0.25, 0.25, 0.25], [0.25, 0.25, 0.25, 0.25]]
        }"#,
    )
    .unwrap();
    let out = run(&["eval", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sums to"), "stderr: {err}");
}

#[test]
fn infeasible_simulation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy_noise.json");
    // V = U over pure noise: covering rate exceeds the packing budget.
    std::fs::write(
        &path,
        r#"{
            "alphabets": {"u": 2, "x": 2, "y": 2, "v": 2},
            "source": [0.5, 0.5],
            "channel": [[0.5, 0.5], [0.5, 0.5]],
            "target": [[0.5, 0.0, 0.5, 0.0], [0.0, 0.5, 0.0, 0.5]]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "simulate",
        path.to_str().unwrap(),
        "--mode",
        "strict",
        "--aux",
        "w-equals-x",
        "--n",
        "30",
        "--blocks",
        "4",
        "--trials",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn capacity_and_membership_agree_on_pure_noise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noise.json");
    std::fs::write(
        &path,
        r#"{
            "alphabets": {"u": 2, "x": 2, "y": 2, "v": 2},
            "source": [0.5, 0.5],
            "channel": [[0.5, 0.5], [0.5, 0.5]],
            "target": [[0.25, 0.25, 0.25, 0.25], [0.25, 0.25, 0.25, 0.25]]
        }"#,
    )
    .unwrap();
    let cap = run(&["capacity", path.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&cap)).unwrap();
    assert!(doc["result"]["capacity"].as_f64().unwrap().abs() < 1e-9);
    let mem = run(&["membership", path.to_str().unwrap(), "--restarts", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&mem)).unwrap();
    assert_eq!(doc["result"]["verdict"], "achievable");
}

#[test]
fn check_mode_distinguishes_factorizations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vy.json");
    // v = y through a noisy channel: causal-lawful, strictly-causal not.
    let mut joint = vec![vec![vec![vec![0.0; 2]; 2]; 2]; 2];
    for u in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                let t = if y == x { 0.75 } else { 0.25 };
                joint[u][x][y][y] = 0.25 * t;
            }
        }
    }
    let body = serde_json::json!({
        "alphabets": {"u": 2, "x": 2, "y": 2, "v": 2},
        "source": [0.5, 0.5],
        "channel": [[0.75, 0.25], [0.25, 0.75]],
        "joint": joint,
    });
    std::fs::write(&path, serde_json::to_string(&body).unwrap()).unwrap();
    let strict = run(&["check", path.to_str().unwrap(), "--mode", "strict"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&strict)).unwrap();
    assert_eq!(doc["result"]["pass"], false);
    let causal = run(&["check", path.to_str().unwrap(), "--mode", "causal"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&causal)).unwrap();
    assert_eq!(doc["result"]["pass"], true);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    let arg = |out: &Path| {
        vec![
            "simulate".to_string(),
            data("fig2.json").to_str().unwrap().to_string(),
            "--mode".into(),
            "zero-capacity".into(),
            "--n".into(),
            "50".into(),
            "--blocks".into(),
            "4".into(),
            "--trials".into(),
            "2".into(),
            "--output".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let st = Command::new(bin())
        .args(arg(&out1))
        .env("COORDKIT_SEED", "777")
        .output()
        .unwrap();
    assert!(st.status.success());
    let st = Command::new(bin())
        .args(arg(&out2))
        .env("COORDKIT_SEED", "778")
        .output()
        .unwrap();
    assert!(st.status.success());
    // Different environment seeds change the outcome (and are recorded
    // in the run spec).
    let a = std::fs::read_to_string(&out1).unwrap();
    let b = std::fs::read_to_string(&out2).unwrap();
    assert!(a.contains("\"seed\":777"));
    assert!(b.contains("\"seed\":778"));
    assert_ne!(a, b);
}
