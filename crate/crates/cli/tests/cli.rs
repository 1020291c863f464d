use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn entconc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entconc"))
        .args(args)
        .env_remove("ENTCONC_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = entconc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn files_in(dir: &Path) -> BTreeSet<String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect()
}

fn parse_records(path: &Path) -> Vec<(u64, f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.split('\n');
    assert_eq!(
        lines.next().unwrap(),
        "sample_index,negativity,normalized_negativity"
    );
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn full_dephasing_puts_all_mass_in_zero_bin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["sample", "--qubits", "2", "--p", "1.0", "--samples", "100", "--out", out]);
    let summary = json(&dir.path().join("summary.json"));
    let counts = summary["entries"][0]["histogram"]["counts"].as_array().unwrap();
    assert_eq!(counts[0].as_u64(), Some(100));
    assert!(counts[1..].iter().all(|c| c.as_u64() == Some(0)));
}

#[test]
fn identical_flags_give_identical_csvs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        ok(&[
            "sample", "--qubits", "3", "--p", "0,0.3,0.5", "--samples", "1000", "--seed", "42",
            "--out", d.path().to_str().unwrap(),
        ]);
    }
    let csvs: Vec<String> = files_in(a.path())
        .into_iter()
        .filter(|f| f.ends_with(".csv"))
        .collect();
    assert_eq!(csvs.len(), 3);
    for f in &csvs {
        let bytes = fs::read(a.path().join(f)).unwrap();
        assert_eq!(bytes, fs::read(b.path().join(f)).unwrap(), "{f}");
        assert!(!bytes.contains(&b'\r'));
        assert_eq!(parse_records(&a.path().join(f)).len(), 1000);
    }
}

#[test]
fn summary_matches_recomputation_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sample", "--qubits", "5", "--p", "0.3", "--samples", "300", "--seed", "3", "--out",
        dir.path().to_str().unwrap(),
    ]);
    let summary = json(&dir.path().join("summary.json"));
    let entry = &summary["entries"][0];
    let records = parse_records(&dir.path().join(entry["records_csv"].as_str().unwrap()));
    let n = records.len() as f64;
    let mean = records.iter().map(|r| r.1).sum::<f64>() / n;
    let var = records.iter().map(|r| (r.1 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((entry["mean"].as_f64().unwrap() - mean).abs() < 1e-12);
    assert!((entry["std"].as_f64().unwrap() - var.sqrt()).abs() < 1e-12);
    assert!(records.iter().enumerate().all(|(i, r)| r.0 == i as u64));
    // one-vs-rest split: normalized = negativity / (1/2)
    assert!(records.iter().all(|r| (r.2 - 2.0 * r.1).abs() < 1e-12));
}

#[test]
fn manifest_lists_outputs_and_replays_exactly() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ok(&[
        "sample", "--qubits", "3", "--p", "0,0.5", "--samples", "200", "--seed", "9", "--split",
        "1", "--bins", "20", "--out", a.path().to_str().unwrap(),
    ]);
    let manifest = json(&a.path().join("manifest.json"));
    let listed: BTreeSet<String> = manifest["output_paths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(listed, files_in(a.path()));
    assert_eq!(manifest["command"], "sample");
    assert_eq!(manifest["config"]["master_seed"], 9);
    assert_eq!(manifest["config"]["histogram_bins"], 20);
    assert_eq!(manifest["config"]["split"]["side_a"], serde_json::json!([1]));

    let manifest_path = a.path().join("manifest.json");
    ok(&["replay", manifest_path.to_str().unwrap(), "--out", b.path().to_str().unwrap()]);
    for f in listed.iter().filter(|f| f.as_str() != "manifest.json") {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn invalid_flags_exit_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = out_dir.to_str().unwrap();
    for args in [
        vec!["sample", "--qubits", "3", "--p", "1.5", "--out", out],
        vec!["sample", "--qubits", "3", "--p", "0.5", "--split", "0,1,2", "--out", out],
        vec!["sample", "--qubits", "3", "--p", "0.5", "--split", "x", "--out", out],
        vec!["sample", "--qubits", "3", "--p", "0.5", "--samples", "0", "--out", out],
        vec!["sample", "--p", "0.5", "--out", out],
        vec!["sample", "--qubits", "3", "--gamma", "1", "--out", out],
        vec!["sample", "--qubits", "3", "--gamma", "-1", "--t", "1", "--out", out],
        vec!["sample", "--qubits", "3", "--p", "0.5", "--bogus"],
        vec!["sweep", "--qubits-from", "4", "--qubits-to", "2", "--out", out],
        vec!["bound", "--dA", "1", "--dB", "2", "--epsilon", "0.1"],
        vec!["bound", "--dA", "2", "--dB", "2", "--epsilon", "0"],
        vec!["verify", "--suite", "haar", "--dim", "1"],
    ] {
        let status = entconc(&args).status;
        assert_eq!(status.code(), Some(2), "{args:?}");
    }
    assert!(!out_dir.exists());
}

#[test]
fn rates_are_converted_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sample", "--qubits", "2", "--gamma", "0.5", "--t", "0,1", "--samples", "50", "--out",
        dir.path().to_str().unwrap(),
    ]);
    let summary = json(&dir.path().join("summary.json"));
    let entry = &summary["entries"][1];
    assert_eq!(entry["gamma"].as_f64(), Some(0.5));
    assert_eq!(entry["t"].as_f64(), Some(1.0));
    assert!((entry["p"].as_f64().unwrap() - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["rates"]["t"], serde_json::json!([0.0, 1.0]));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "qubits = 3\np = [0.2]\nsamples = 40\nseed = 5\nbins = 10\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    ok(&["sample", "--config", cfg.to_str().unwrap(), "--samples", "30"]);
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["config"]["n_qubits"], 3);
    assert_eq!(manifest["config"]["n_samples"], 30);
    assert_eq!(manifest["config"]["histogram_bins"], 10);
    fs::write(&cfg, "qubitz = 3\n").unwrap();
    assert_eq!(entconc(&["sample", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_dir_defaults_to_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_entconc"))
        .args(["sample", "--qubits", "2", "--p", "0", "--samples", "10"])
        .env("ENTCONC_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("records_N2_p0.csv").exists());
}

#[test]
fn small_sweep_has_rows_per_p_and_positive_std() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sweep", "--qubits-from", "2", "--qubits-to", "4", "--p", "0", "--samples", "200",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,p,mean,std,n_samples");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let std: f64 = l.split(',').nth(3).unwrap().parse().unwrap();
        assert!(std > 0.0);
    }
    assert!(dir.path().join("scaling.svg").exists());
}

#[test]
fn synthetic_sweep_recovers_unit_slope() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sweep", "--qubits-from", "2", "--qubits-to", "7", "--p", "0,0.5", "--synthetic",
        "exp-decay", "--out", dir.path().to_str().unwrap(),
    ]);
    let fits = json(&dir.path().join("fits.json"));
    for f in fits["fits"].as_array().unwrap() {
        assert!((f["fit"]["slope"].as_f64().unwrap() + 1.0).abs() < 1e-12);
        assert!((f["fit"]["r_squared"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn dephasing_sweep_concentrates() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sweep", "--qubits-from", "2", "--qubits-to", "6", "--p", "0.3", "--samples", "1000",
        "--seed", "1", "--out", dir.path().to_str().unwrap(),
    ]);
    let fits = json(&dir.path().join("fits.json"));
    let fit = &fits["fits"][0]["fit"];
    assert!(fit["slope"].as_f64().unwrap() < 0.0);
    assert!(fit["r_squared"].as_f64().unwrap() > 0.9);
}

#[test]
fn bound_reports() {
    let text = ok(&["bound", "--dA", "2", "--dB", "128", "--epsilon", "0.1", "--cross-check"]);
    assert!(text.contains("3.9946"));
    assert!(text.contains("vacuous (>1)"));
    assert!(text.contains("generic form"));

    let csv = ok(&["bound", "--dA", "2", "--dB", "2", "--epsilon", "1e9", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let bound: f64 = row[header.iter().position(|h| *h == "bound").unwrap()]
        .parse()
        .unwrap();
    assert!(bound < 1e-300);
    assert_eq!(row[header.iter().position(|h| *h == "vacuous").unwrap()], "false");
}

#[test]
fn verify_suites_pass() {
    let out = ok(&["verify", "--suite", "contraction", "--trials", "100", "--seed", "7"]);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    ok(&["verify", "--suite", "lipschitz", "--trials", "200"]);
    ok(&["verify", "--suite", "chain", "--trials", "200"]);
    let haar = ok(&["verify", "--suite", "haar", "--dim", "8", "--trials", "5000"]);
    assert!(haar.contains("KS = "));
    let all = ok(&["verify", "--trials", "50", "--qubits", "2"]);
    assert_eq!(all.lines().count(), 5 + 2 + 3 + 1);
}

#[test]
fn fig2_full_protocol_file_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&[
        "reproduce-fig2", "--samples", "60", "--bins", "20", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.contains("N=8 done"));
    let files = files_in(dir.path());
    let hist = files.iter().filter(|f| f.starts_with("histogram_")).count();
    assert_eq!(hist, 9);
    for n in [3, 5, 8] {
        for p in ["0", "0.3", "0.5"] {
            assert!(files.contains(&format!("histogram_N{n}_p{p}.svg")));
            assert!(files.contains(&format!("records_N{n}_p{p}.csv")));
        }
    }
    assert!(files.contains("scaling.svg"));
    assert!(files.contains("manifest.json"));
    let sweep = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 1 + 7 * 3);
}

#[test]
fn fig2_fast_mode_caps_register_size() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "reproduce-fig2", "--fast", "--samples", "200", "--out",
        dir.path().to_str().unwrap(),
    ]);
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["fast"], true);
    assert_eq!(manifest["configs"].as_array().unwrap().len(), 5);
    assert!(dir.path().join("histogram_N6_p0.5.svg").exists());
}
