use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qrand_core::entropy::cq_up_entropy_closed;
use qrand_core::extraction::{objective, output_length, Bound};
use qrand_core::intrinsic::mub_pvm;
use qrand_core::{DensityMatrix, RenyiOrder};
use serde_json::Value;
use tempfile::TempDir;

fn qrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrand")).args(args).output().expect("binary runs")
}

fn state_file(dir: &Path, name: &str, re: &[&[f64]]) -> PathBuf {
    let path = dir.join(name);
    let body = serde_json::json!({ "dim": re.len(), "re": re });
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const FIG3: &[&[f64]] = &[&[4.0 / 7.0, 0.0, 0.0], &[0.0, 2.0 / 7.0, 0.0], &[0.0, 0.0, 1.0 / 7.0]];
const EXAMPLE: &[&[f64]] = &[&[0.75, 0.25], &[0.25, 0.25]];

fn rate_json(state: &Path, eps: &str, n: &str, class: &str) -> Value {
    let out = qrand(&["rate", "--state", s(state), "--epsilon", eps, "--n", n, "--class", class, "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn rate_examples() {
    let dir = TempDir::new().unwrap();
    let mixed = state_file(dir.path(), "mixed.json", &[&[0.5, 0.0], &[0.0, 0.5]]);
    assert!(rate_json(&mixed, "1", "10", "pvm")["rate_bits_per_copy"].as_f64().unwrap().abs() < 1e-12);
    let pure = state_file(dir.path(), "pure.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    assert!((rate_json(&pure, "1", "10", "povm")["rate_bits_per_copy"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let fig = state_file(dir.path(), "fig3.json", FIG3);
    let r = rate_json(&fig, "1e-12", "1000000", "povm");
    let alpha = r["alpha_star"].as_f64().unwrap();
    let rho = DensityMatrix::diagonal(&[4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]).unwrap();
    let expected = 2.0 * 3f64.log2() - objective(&rho, alpha, 1e-12, 1_000_000, Bound::Up).unwrap();
    assert!((r["rate_bits_per_copy"].as_f64().unwrap() - expected).abs() < 1e-6);
    assert!(r["rate_bits_per_copy"].as_f64().unwrap() < r["asymptotic_rate"].as_f64().unwrap());

    let text = qrand(&["rate", "--state", s(&fig), "--epsilon", "1e-12", "--n", "100"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("at_boundary: true"));
}

#[test]
fn bad_input_gives_error_json_and_exit_two() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"dim": 2, "re": [[0.5, 0.1], [0.2, 0.5]]}"#).unwrap();
    for args in [
        vec!["rate", "--state", s(&broken), "--epsilon", "0.1", "--n", "10"],
        vec!["rate", "--state", "/nonexistent", "--epsilon", "0.1", "--n", "10"],
        vec!["rate", "--state", s(&broken), "--epsilon", "2", "--n", "10"],
        vec!["rate", "--unknown-flag"],
    ] {
        let out = qrand(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"].is_string() && err["message"].is_string());
    }
    let out = qrand(&["rate", "--state", s(&broken), "--epsilon", "0.1", "--n", "10"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_hermitian");
}

#[test]
fn sweep_alpha_curves() {
    let dir = TempDir::new().unwrap();
    let state = state_file(dir.path(), "example.json", EXAMPLE);
    let out = dir.path().join("down.csv");
    let run = qrand(&["sweep-alpha", "--state", s(&state), "--alpha-min", "0.5", "--alpha-max", "4", "--points", "15", "--family", "down", "--out", s(&out)]);
    assert!(run.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, "alpha,value_bits");
    assert_eq!(rows.len(), 15);
    assert!((num(&rows[0][1]) - (1.0 + 0.75f64.log2())).abs() < 1e-9);
    let values: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
    let alphas: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    assert!(alphas.windows(2).all(|w| w[0] < w[1]));

    let up = dir.path().join("up.csv");
    let run = qrand(&["sweep-alpha", "--state", s(&state), "--alpha-min", "0.5", "--alpha-max", "4", "--points", "8", "--family", "up", "--out", s(&up)]);
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("warning"));
    let (_, rows) = csv_rows(&up);
    assert!(rows.iter().all(|r| num(&r[0]) > 1.0));

    let mixed = state_file(dir.path(), "mixed.json", &[&[0.5, 0.0], &[0.0, 0.5]]);
    let flat = dir.path().join("flat.csv");
    assert!(qrand(&["sweep-alpha", "--state", s(&mixed), "--class", "pvm", "--out", s(&flat)]).status.success());
    let (_, rows) = csv_rows(&flat);
    assert!(rows.iter().all(|r| num(&r[1]).abs() < 1e-12));

    let bad = qrand(&["sweep-alpha", "--state", s(&state), "--alpha-min", "0.3", "--out", s(&flat)]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = qrand(&["sweep-alpha", "--state", s(&state), "--points", "1", "--out", s(&flat)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_n_curves() {
    let dir = TempDir::new().unwrap();
    let state = state_file(dir.path(), "fig3.json", FIG3);
    let mut curves = Vec::new();
    for bound in ["up", "down"] {
        let out = dir.path().join(format!("{bound}.csv"));
        let run = qrand(&["sweep-n", "--state", s(&state), "--epsilon", "1e-4,1e-12,1e-20", "--n-min", "100", "--n-max", "1000000", "--points", "9", "--bound", bound, "--out", s(&out)]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        let (header, rows) = csv_rows(&out);
        assert_eq!(header, "n,epsilon,rate,alpha_star,at_boundary");
        assert_eq!(rows.len(), 27);
        curves.push(rows);
    }
    for (u, d) in curves[0].iter().zip(&curves[1]) {
        assert_eq!(u[0], d[0]);
        assert!(num(&u[2]) >= num(&d[2]) - 1e-12);
    }
    assert!(curves[0].iter().any(|r| r[1] == "1e-20" && r[4] == "true"));
    let bad = qrand(&["sweep-n", "--state", s(&state), "--epsilon", "0", "--out", "/dev/null"]);
    assert_eq!(bad.status.code(), Some(2));
}

fn construct(state: &Path, out: &Path, extra: &[&str]) -> Value {
    let mut args = vec!["construct", "--state", s(state), "--out", s(out)];
    args.extend_from_slice(extra);
    let run = qrand(&args);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn construct_examples() {
    let dir = TempDir::new().unwrap();
    let qubit = state_file(dir.path(), "qubit.json", &[&[0.75, 0.0], &[0.0, 0.25]]);
    let out = dir.path().join("m.json");
    let v = construct(&qubit, &out, &["--kind", "qubit-opt", "--alpha", "2", "--family", "up"]);
    assert!(v["optimality_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["certificate"]["is_extremal"], true);
    assert_eq!(v["kind"], "povm");
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);

    let qutrit = state_file(dir.path(), "qutrit.json", &[&[0.5, 0.1, 0.0], &[0.1, 0.3, 0.05], &[0.0, 0.05, 0.2]]);
    for alpha in ["0.7", "2", "inf"] {
        let v = construct(&qutrit, &out, &["--kind", "mub", "--alpha", alpha, "--family", "down"]);
        assert!(v["optimality_residual"].as_f64().unwrap() < 1e-12);
    }
    let v = construct(&qutrit, &out, &["--kind", "uniform-extremal", "--delta", "1e-2"]);
    assert_eq!(v["certificate"]["is_extremal"], true);
    assert!(v["max_distance"].as_f64().unwrap() <= 1e-2);
    let v = construct(&qutrit, &out, &["--kind", "uniform"]);
    assert_eq!(v["certificate"]["is_extremal"], false);

    let bad = qrand(&["construct", "--state", s(&qutrit), "--kind", "qubit-opt", "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn extract_examples() {
    let dir = TempDir::new().unwrap();
    let state = state_file(dir.path(), "state.json", &[&[0.9, 0.0], &[0.0, 0.1]]);
    let meas = dir.path().join("mub.json");
    construct(&state, &meas, &["--kind", "mub"]);
    let run = |n: &str, seed: &str, tag: &str| {
        let bits = dir.path().join(format!("{tag}.bin"));
        let meta = dir.path().join(format!("{tag}.json"));
        let out = qrand(&["extract", "--state", s(&state), "--measurement", s(&meas), "--n", n, "--epsilon", "1e-6", "--rng-seed", seed, "--hash-seed", "random", "--out", s(&bits), "--meta", s(&meta)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let meta: Value = serde_json::from_str(&std::fs::read_to_string(meta).unwrap()).unwrap();
        (std::fs::read(bits).unwrap(), meta)
    };

    let (bits, meta) = run("10000", "beef", "a");
    let alpha = meta["alpha_star"].as_f64().unwrap();
    let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
    let h = 1e4 * cq_up_entropy_closed(&rho, &mub_pvm(&rho), RenyiOrder::new(alpha).unwrap()).unwrap();
    let l = meta["out_bits"].as_u64().unwrap();
    assert!((l as i64 - output_length(h, 1e-6, alpha) as i64).abs() <= 1);
    assert_eq!(bits.len() as u64, l.div_ceil(8));
    assert_eq!(meta["rng_seed"], "000000000000beef");

    let (again, meta_again) = run("10000", "beef", "b");
    assert_eq!(bits, again);
    assert_eq!(meta, meta_again);

    let (empty, meta) = run("5", "1", "c");
    assert!(empty.is_empty());
    assert_eq!(meta["out_bits"], 0);

    let bad = qrand(&["extract", "--state", s(&state), "--measurement", s(&meas), "--n", "10", "--epsilon", "0.5", "--rng-seed", "xyz", "--out", "/dev/null", "--meta", "/dev/null"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("petz.json");
    let run = qrand(&["verify", "--suites", "petz", "--seed", "0", "--out", s(&out)]);
    assert!(run.status.success());
    let reports: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let petz = &reports[0];
    assert_eq!(petz["suite"], "petz");
    assert!((petz["values"]["unbiased"].as_f64().unwrap() - 0.684993873768).abs() < 1e-9);
    assert!((petz["values"]["second_basis"].as_f64().unwrap() - 0.715687140437).abs() < 1e-9);
    assert!(String::from_utf8_lossy(&run.stdout).contains("[PASS] petz"));

    let unknown = qrand(&["verify", "--suites", "petz,nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));
    let bad_seed = qrand(&["verify", "--seed", "not-hex"]);
    assert_eq!(bad_seed.status.code(), Some(2));
}
