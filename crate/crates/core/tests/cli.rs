use std::fs;
use std::path::Path;
use std::process::Command;

use widthlab::cli::{main_with_args, EXIT_OK, EXIT_VALIDATION};
use widthlab::separation::{SeparationParams, WidthBound};

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("widthlab").chain(args.iter().copied()))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{}: {e}", dir.join(name).display()))
}

fn csv_column(text: &str, col: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == col).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn separation_example() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sep");
    assert_eq!(run(&["separation", "--alpha", "0.5", "--beta", "0.125", "--t", "1,10,100", "--out", out.to_str().unwrap()]), EXIT_OK);
    let csv = read(&out, "bounds.csv");
    assert!(csv.starts_with("t,bound,exponent,below_threshold\n"));
    let bound = WidthBound::from_params(&SeparationParams::new(0.5, 0.125, 1.0, 1.0, 1.0).unwrap()).unwrap();
    for (t, (e, b)) in [1.0, 10.0, 100.0].iter().zip(csv_column(&csv, "exponent").iter().zip(csv_column(&csv, "bound"))) {
        let e: f64 = e.parse().unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-15);
        // 17 significant digits round-trip exactly
        assert_eq!(b.parse::<f64>().unwrap(), bound.eval(*t).unwrap().bound);
    }
}

#[test]
fn missing_flag_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_widthlab"))
        .args(["separation", "--alpha", "0.5", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--beta"));
}

#[test]
fn invalid_input_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    assert_eq!(run(&["frobnicate"]), EXIT_VALIDATION);
    assert_eq!(run(&["separation", "--alpha", "0.1", "--beta", "0.5", "--out", o]), EXIT_VALIDATION);
    assert_eq!(run(&["kernels", "--kind", "bogus", "--out", o]), EXIT_VALIDATION);
    assert_eq!(run(&["--out", o]), EXIT_VALIDATION);
    assert_eq!(run(&["--help"]), EXIT_OK);
    let file = tmp.path().join("file");
    fs::write(&file, "").unwrap();
    let blocked = file.join("sub");
    assert_eq!(run(&["separation", "--alpha", "0.5", "--beta", "0.125", "--out", blocked.to_str().unwrap()]), EXIT_VALIDATION);
}

#[test]
fn same_seed_gives_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let code = run(&["transport", "--d", "2", "--n-list", "4,16", "--trials", "3", "--grid", "16", "--seed", "9", "--out", dir.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
    }
    assert_eq!(read(&a, "w1.csv"), read(&b, "w1.csv"));
    assert_eq!(read(&a, "fit.json"), read(&b, "fit.json"));
}

#[test]
fn manifest_replays_byte_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("w");
    let args = ["width", "--target", "distance", "--d", "2", "--t-grid", "0.5,2", "--width", "8", "--restarts", "1", "--steps", "200", "--quadrature", "512", "--seed", "4", "--plots", "--out"];
    let mut full: Vec<&str> = args.to_vec();
    full.push(out.to_str().unwrap());
    assert_eq!(run(&full), EXIT_OK);
    let files = ["curve.csv", "fit.json", "plot.svg", "manifest.json"];
    let first: Vec<String> = files.iter().map(|f| read(&out, f)).collect();
    let manifest = tmp.path().join("manifest.json");
    fs::copy(out.join("manifest.json"), &manifest).unwrap();
    fs::remove_dir_all(&out).unwrap();
    assert_eq!(run(&["--config", manifest.to_str().unwrap()]), EXIT_OK);
    for (f, before) in files.iter().zip(&first) {
        assert_eq!(&read(&out, f), before, "{f}");
    }
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let cfg = tmp.path().join("cfg.json");
    let body = format!(
        r#"{{"subcommand": "separation", "params": {{"alpha": 0.5, "beta": 0.25, "t": [2.0]}}, "output_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    fs::write(&cfg, body).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "separation", "--beta", "0.125"]), EXIT_OK);
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["params"]["beta"], 0.125);
    assert_eq!(manifest["params"]["alpha"], 0.5);
    assert_eq!(manifest["params"]["t"], serde_json::json!([2.0]));
    assert_eq!(manifest["params"]["c_fast"], 1.0);
    // a config for one subcommand cannot drive another
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "schedule"]), EXIT_VALIDATION);
    fs::write(&cfg, r#"{"subcommand": "separation", "params": {"alpha": 0.5, "beta": 0.25, "gamma": 1}}"#).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_VALIDATION);
}

#[test]
fn every_subcommand_writes_its_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &[&str])] = &[
        (&["schedule", "--alpha", "0.5", "--beta", "0.125", "--k-max", "3"], &["schedule.csv", "tail.csv", "schedule.json"]),
        (&["barron", "--mode", "rademacher", "--d", "2", "--n-list", "16,32", "--draws", "3", "--restarts", "2", "--steps", "10"], &["rademacher.csv", "fit.json"]),
        (&["kernels", "--kind", "spectrum", "--d", "3", "--degrees", "8"], &["spectrum.json", "spectrum.csv"]),
        (&["kernels", "--kind", "nystrom", "--d", "2", "--n", "200"], &["nystrom.csv", "plateaus.json"]),
        (&["kernels", "--kind", "ntk", "--d", "2", "--n", "20", "--param-samples", "500"], &["sandwich.json"]),
    ];
    for (i, (args, files)) in cases.iter().enumerate() {
        let out = tmp.path().join(i.to_string());
        let mut full = args.to_vec();
        full.extend(["--out", out.to_str().unwrap(), "--threads", "1"]);
        assert_eq!(run(&full), EXIT_OK, "{args:?}");
        for f in files.iter().chain(&["manifest.json"]) {
            assert!(out.join(f).exists(), "{args:?}: {f}");
        }
    }
}

#[test]
fn network_mode_reads_a_file() {
    let tmp = tempfile::tempdir().unwrap();
    let net = tmp.path().join("net.json");
    fs::write(&net, r#"{"activation": "relu", "averaged": false, "neurons": [[2.0, [1.0, 0.0], -1.0]]}"#).unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["barron", "--mode", "network", "--network", net.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&read(&out, "network.json")).unwrap();
    assert!(v.to_string().contains('4'), "{v}");
    fs::write(&net, "{").unwrap();
    assert_eq!(run(&["barron", "--mode", "network", "--network", net.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_VALIDATION);
}
