//! Flag handling, CSV schemas, exit codes and manifest round-trips of the
//! `siglab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn siglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siglab"))
        .args(args)
        .env_remove("SIGLAB_SEED")
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(2).filter(|l| !l.is_empty()).collect()
}

#[test]
fn exp1_default_battery_schema() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let res = siglab(&[
        "exp1",
        "--n",
        "5000",
        "--reps",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );

    let events = read(&out.join("exp1_events.csv"));
    let mut lines = events.lines();
    let meta = lines.next().unwrap();
    assert!(
        meta.starts_with("# seed=42 version=0.1.0 config_hash="),
        "{meta}"
    );
    assert_eq!(
        lines.next().unwrap(),
        "event,members,prob,rejections,reps,frequency,mc_se"
    );
    let rows = data_rows(&events);
    assert_eq!(rows.len(), 5, "five default event rows");
    assert!(rows[0].starts_with("repdigits,9,0.09,"));

    let fwer = read(&out.join("exp1_fwer.csv"));
    let rows = data_rows(&fwer);
    assert_eq!(rows.len(), 1, "one familywise row");
    assert!(rows[0].starts_with("5,"));

    let manifest = read(&out.join("exp1_manifest.json"));
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["subcommand"], "exp1");
    assert_eq!(parsed["seed"], 42);
    assert_eq!(parsed["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn exp1_custom_events_file() {
    let dir = TempDir::new().unwrap();
    let events_path = dir.path().join("events.txt");
    fs::write(&events_path, "sevens: 7,17,27,37,47,57,67,77,87,97\n").unwrap();
    let out = dir.path().join("run");
    let res = siglab(&[
        "exp1",
        "--n",
        "2000",
        "--reps",
        "50",
        "--events",
        events_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let events = read(&out.join("exp1_events.csv"));
    let rows = data_rows(&events);
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields[0], "sevens");
    assert_eq!(fields[2], "0.1", "prob column is 10/100");
}

#[test]
fn exp1_alpha_one_always_rejects() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let res = siglab(&[
        "exp1",
        "--n",
        "1000",
        "--reps",
        "40",
        "--alpha",
        "1.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let fwer = read(&out.join("exp1_fwer.csv"));
    let row = data_rows(&fwer)[0];
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "1", "fwer_freq must be 1.0 at alpha = 1");
}

#[test]
fn exp1_bad_events_file_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let events_path = dir.path().join("events.txt");
    fs::write(&events_path, "oops no colon\n").unwrap();
    let res = siglab(&[
        "exp1",
        "--events",
        events_path.to_str().unwrap(),
        "--out",
        dir.path().join("run").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("--events"), "{stderr}");
}

#[test]
fn exp2_schema_and_single_rep_frequencies() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let res = siglab(&[
        "exp2",
        "--reps",
        "1",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let csv = read(&out.join("exp2_size.csv"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 12, "2 alphas x 3 k x 2 statistics");
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 8);
        let freq: f64 = fields[5].parse().unwrap();
        assert!(freq == 0.0 || freq == 1.0, "reps=1 frequency {freq}");
        match fields[2] {
            "tmax" => assert!(!fields[7].is_empty(), "tmax rows carry analytic_sidak"),
            "f" => assert!(fields[7].is_empty(), "f rows have empty analytic_sidak"),
            other => panic!("unexpected stat {other}"),
        }
    }
    // analytic column spot check: alpha=0.05, k=2 -> 0.0975
    let tmax_row = data_rows(&csv)
        .into_iter()
        .find(|r| r.starts_with("0.05,2,tmax"))
        .unwrap();
    let sidak: f64 = tmax_row.split(',').nth(7).unwrap().parse().unwrap();
    assert!((sidak - 0.0975).abs() < 1e-12);
}

#[test]
fn exp2_rejects_k_too_large_for_n() {
    let dir = TempDir::new().unwrap();
    let res = siglab(&[
        "exp2",
        "--n",
        "10",
        "--k",
        "9",
        "--out",
        dir.path().join("run").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn exp3_default_grid_has_41_rows_per_rho() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let res = siglab(&["exp3", "--reps", "5", "--out", out.to_str().unwrap()]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    for rho in ["0.5", "0.9"] {
        let csv = read(&out.join(format!("exp3_rho{rho}.csv")));
        let mut lines = csv.lines();
        lines.next().unwrap();
        assert_eq!(
            lines.next().unwrap(),
            "gamma,rej_pms_au001,rej_pms_au005,rej_pms_au010,rej_unrestricted,reps"
        );
        assert_eq!(data_rows(&csv).len(), 41, "rho={rho}");
    }
}

#[test]
fn exp3_rejects_invalid_correlation() {
    let dir = TempDir::new().unwrap();
    let res = siglab(&[
        "exp3",
        "--rho",
        "1.5",
        "--out",
        dir.path().join("run").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("rho"), "{stderr}");
}

#[test]
fn dist_trivial_queries() {
    let res = siglab(&["dist", "--dist", "normal", "--cdf", "--at", "0"]);
    assert!(res.status.success());
    assert_eq!(String::from_utf8_lossy(&res.stdout).trim(), "0.5");

    let res = siglab(&[
        "dist", "--dist", "chisq", "--cdf", "--at", "0", "--df", "99",
    ]);
    assert!(res.status.success());
    assert_eq!(String::from_utf8_lossy(&res.stdout).trim(), "0");

    let res = siglab(&[
        "dist",
        "--dist",
        "t",
        "--quantile",
        "--at",
        "0.975",
        "--df",
        "97",
    ]);
    assert!(res.status.success());
    let v: f64 = String::from_utf8_lossy(&res.stdout).trim().parse().unwrap();
    assert!((v - 1.984_723_186_013_984_7).abs() < 1e-9);
}

#[test]
fn dist_domain_errors_exit_2() {
    let res = siglab(&[
        "dist", "--dist", "chisq", "--cdf", "--at", "-1", "--df", "99",
    ]);
    assert_eq!(res.status.code(), Some(2));
    let res = siglab(&["dist", "--dist", "normal", "--quantile", "--at", "1.5"]);
    assert_eq!(res.status.code(), Some(2));
    let res = siglab(&["dist", "--dist", "t", "--cdf", "--at", "1.0"]);
    assert_eq!(res.status.code(), Some(2), "missing --df");
    let res = siglab(&["dist", "--dist", "normal", "--at", "1.0"]);
    assert_eq!(res.status.code(), Some(2), "neither --cdf nor --quantile");
}

#[test]
fn seed_env_var_is_default_and_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("env_run");
    let res = Command::new(env!("CARGO_BIN_EXE_siglab"))
        .args([
            "exp1",
            "--n",
            "500",
            "--reps",
            "10",
            "--out",
            out.to_str().unwrap(),
        ])
        .env("SIGLAB_SEED", "777")
        .output()
        .unwrap();
    assert!(res.status.success());
    let csv = read(&out.join("exp1_events.csv"));
    assert!(csv.starts_with("# seed=777 "), "env seed should apply");

    let out2 = dir.path().join("flag_run");
    let res = Command::new(env!("CARGO_BIN_EXE_siglab"))
        .args([
            "exp1",
            "--n",
            "500",
            "--reps",
            "10",
            "--seed",
            "3",
            "--out",
            out2.to_str().unwrap(),
        ])
        .env("SIGLAB_SEED", "777")
        .output()
        .unwrap();
    assert!(res.status.success());
    let csv = read(&out2.join("exp1_events.csv"));
    assert!(csv.starts_with("# seed=3 "), "explicit flag beats env");
}

#[test]
fn manifest_round_trip_reproduces_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("first");
    let res = siglab(&[
        "exp2",
        "--n",
        "40",
        "--k",
        "2,3",
        "--reps",
        "60",
        "--seed",
        "2718",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("exp2_manifest.json"))).unwrap();
    let config = &manifest["config"];

    // rebuild the command line from the manifest's resolved config
    let k_list = config["k_values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let alpha_list = config["alphas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let out2 = dir.path().join("second");
    let res = siglab(&[
        "exp2",
        "--n",
        &config["n"].to_string(),
        "--k",
        &k_list,
        "--alpha",
        &alpha_list,
        "--reps",
        &config["reps"].to_string(),
        "--seed",
        &config["seed"].to_string(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    assert_eq!(
        read(&out.join("exp2_size.csv")),
        read(&out2.join("exp2_size.csv")),
        "manifest round trip must reproduce the data file"
    );
}
