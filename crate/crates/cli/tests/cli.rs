use std::fs;
use std::process::{Command, Output};

fn checkerboard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checkerboard"))
        .args(args)
        .env_remove("CHECKERBOARD_THREADS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn simulate_writes_one_row_per_site_and_direction() {
    let out = checkerboard(&["simulate", "--sites", "8", "--steps", "3", "--dt", "0.1", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,site,dir,re,im"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 8 * 2);
    assert_eq!(rows[0][..3], ["1", "0", "+"]);
    let total: f64 = rows
        .iter()
        .filter(|r| r[0] == "3")
        .map(|r| r[3].parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-15);
    // 17 significant digits
    assert_eq!(rows[0][3].split('e').next().unwrap().len(), 18);
}

#[test]
fn simulate_log_tracks_the_sum() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("sum.csv");
    let out = checkerboard(&[
        "simulate", "--sites", "16", "--steps", "40", "--log", log.to_str().unwrap(),
        "--output", dir.path().join("field.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(log).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 41);
    for row in rows {
        let re: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((re - 1.0).abs() < 1e-13, "{row}");
    }
}

#[test]
fn causal_simulation_labels_backward_field() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("causal.csv");
    let out = checkerboard(&[
        "simulate", "--mode", "causal", "--sites", "10", "--steps", "5", "--dt", "0.01",
        "--log", log.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 5 * 10 * 4);
    assert!(text.contains(",bar+,") && text.contains(",bar-,"));
    for row in fs::read_to_string(log).unwrap().lines().skip(1) {
        let residual: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(residual <= 1e-12);
    }
}

#[test]
fn zero_steps_prints_the_source() {
    let out = checkerboard(&["simulate", "--sites", "4", "--steps", "0", "--source-site", "1", "--source-dir", "-"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.contains("0,1,-,1.0000000000000000e0,0.0000000000000000e0"));
}

#[test]
fn chain_verification_for_one_momentum() {
    let out = checkerboard(&["verify", "--check", "chain", "--p", "1,2,2", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    let check = &report["checks"][0];
    assert_eq!(check["name"], "chain");
    let energies: Vec<f64> = check["spectra"][0]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (got, want) in energies.iter().zip([5.0, 5.0, -5.0, -5.0]) {
        assert!((got - want).abs() <= 1e-10);
    }
}

#[test]
fn failing_check_exits_with_one() {
    // |1 − iε| > 1, so a large ε overflows the imaginary run
    let out = checkerboard(&["verify", "--check", "conservation", "--epsilon", "0.9", "--a", "0.5"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("conservation"));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        vec!["simulate", "--sites", "lots"],
        vec!["simulate", "--boundary", "reflecting"],
        vec!["simulate", "--dt", "-1"],
        vec!["simulate", "--sites", "4", "--source-site", "9"],
        vec!["path-sum", "--n", "40"],
        vec!["converge", "--ladder", "0.1,0.05"],
        vec!["converge", "--ladder", "0.05,0.1,0.025"],
        vec!["frobnicate"],
        vec!["simulate", "--config", "/nonexistent/run.conf"],
    ] {
        let out = checkerboard(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_thread_count_is_a_configuration_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_checkerboard"))
        .args(["chain"])
        .env("CHECKERBOARD_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn path_sum_reports_histogram() {
    let out = checkerboard(&[
        "path-sum", "--n", "4", "--start-dir", "+", "--end-dir", "+", "--displacement", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["feasible"], true);
    // moves + + + −, + + − +, + − + +; each ends heading + after two reversals
    let hist: Vec<u64> = report["histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(hist, [0, 0, 3, 0, 0]);
    let amp = report["amplitude"][0].as_f64().unwrap();
    let (s, r) = (1.0f64 - 0.05, 0.05f64);
    assert!((amp - 3.0 * s * s * r * r).abs() < 1e-15);
}

#[test]
fn converge_reports_a_fitted_order() {
    let out = checkerboard(&["converge", "--case", "transport", "--ladder", "0.1,0.05,0.025"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["entries"].as_array().unwrap().len(), 3);
    assert!(report["order"].as_f64().unwrap() >= 1.0);
    assert_eq!(report["exact"], false);

    let free = json(&checkerboard(&["converge", "--case", "lattice-free", "--ladder", "0.1,0.05,0.025"]));
    assert_eq!(free["exact"], true);
    assert!(free["order"].is_null());
}

#[test]
fn chain_with_charge_adds_coupled_block() {
    let out = checkerboard(&["chain", "--p", "1,2,2", "--m", "4", "--charge", "1", "--a0", "0.5", "--a-vec", "1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let coupled = &report[0]["coupled"];
    let shifted: Vec<f64> = coupled["shifted_eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    // kinetic momentum (0, 2, 2)
    let e = (8.0f64 + 16.0).sqrt();
    for (got, want) in shifted.iter().zip([e + 0.5, e + 0.5, -e + 0.5, -e + 0.5]) {
        assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
    }
}

#[test]
fn config_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let first = checkerboard(&[
        "simulate", "--sites", "12", "--steps", "7", "--weight", "imaginary", "--epsilon", "0.0123456789012345",
        "--unit-straight", "--boundary", "absorbing", "--write-config", conf.to_str().unwrap(),
    ]);
    assert_eq!(first.status.code(), Some(0));
    let second = checkerboard(&["simulate", "--config", conf.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);

    // flags override the file
    let third = checkerboard(&["simulate", "--config", conf.to_str().unwrap(), "--steps", "1"]);
    assert_eq!(stdout(&third).lines().count(), 1 + 12 * 2);
}

#[test]
fn verify_is_identical_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_checkerboard"))
            .args(["verify", "--check", "conservation,causality,gauge", "--trials", "50"])
            .env("CHECKERBOARD_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one, run("0"));
}
