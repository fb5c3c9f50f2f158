use kappa_mu_secrecy::estimate::io::write_binary;
use kappa_mu_secrecy::estimate::{synthetic_envelope, EnvelopeTrace};
use serde_json::Value;
use std::process::{Command, Output};

fn kmsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

#[test]
fn spsc_record_fields() {
    let v = json(&kmsec(&["spsc", "--preset", "fig2-rice"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["metric"], "spsc");
    assert_eq!(v["method"], "closed_form");
    let x = v["value"].as_f64().unwrap();
    assert!((x - 0.5).abs() < 0.05 && x > 0.5);
}

#[test]
fn db_and_linear_inputs_agree() {
    let a = json(&kmsec(&["sop", "--preset", "fig4", "--gbar-m-db", "10", "--gbar-e-db", "-3"]));
    let lin = 10f64.powf(-0.3).to_string();
    let b = json(&kmsec(&["sop", "--preset", "fig4", "--gbar-m-linear", "10", "--gbar-e-linear", &lin]));
    let (x, y) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
    assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
}

#[test]
fn rate_bits_convert_with_ln2() {
    let a = json(&kmsec(&["sop", "--preset", "d2d", "--bound", "lower", "--rate-bits", "1"]));
    let nats = std::f64::consts::LN_2.to_string();
    let b = json(&kmsec(&["sop", "--preset", "d2d", "--bound", "lower", "--rate-nats", &nats]));
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(kmsec(&["spsc", "--km", "1"]).status.code(), Some(2));
    assert_eq!(kmsec(&["spsc", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(kmsec(&["spsc", "--km", "-1", "--um", "1", "--ke", "1", "--ue", "1"]).status.code(), Some(2));
    assert_eq!(kmsec(&["sop", "--preset", "fig4", "--method", "series"]).status.code(), Some(2));
    assert_eq!(kmsec(&["spsc", "--preset", "fig4", "--method", "closed"]).status.code(), Some(2));
    assert_eq!(kmsec(&["sweep", "--preset", "fig4", "--variable", "kappa_m", "--start", "1", "--stop", "2", "--assert-monotone"]).status.code(), Some(2));
}

#[test]
fn monte_carlo_output_is_reproducible() {
    let args = ["spsc", "--preset", "ban", "--method", "mc", "--mc-n", "50000", "--seed", "9"];
    let a = kmsec(&args);
    let b = kmsec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = kmsec(&["spsc", "--preset", "ban", "--method", "mc", "--mc-n", "50000", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sweep_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = kmsec(&[
        "sweep", "--preset", "fig4", "--steps", "9", "--assert-monotone", "--with-mc", "20000",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let mut r = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "gamma_bar_m_db");
    assert!(header.contains(&"mc_spsc".to_string()));
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    let first: f64 = rows[0][0].parse().unwrap();
    let last: f64 = rows[8][0].parse().unwrap();
    assert_eq!((first, last), (-10.0, 30.0));
    let spsc: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(spsc.windows(2).all(|w| w[1] >= w[0]));
    // the file matches what stdout would have carried
    let stdout = kmsec(&["sweep", "--preset", "fig4", "--steps", "9", "--with-mc", "20000"]);
    assert_eq!(stdout.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn validate_small_grid_and_negative_control() {
    let ok = kmsec(&["validate", "--mc-n", "20000"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["pass"], true);
    let bad = kmsec(&["validate", "--mc-n", "20000", "--self-test-break"]);
    assert_eq!(bad.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn fit_constant_trace_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    std::fs::write(&path, "envelope\n".to_string() + &"1.0\n".repeat(5000)).unwrap();
    let out = kmsec(&["fit", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = kmsec(&["fit", "--input", dir.path().join("absent.csv").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn fit_binary_trace_and_pdf_grid() {
    let dir = tempfile::tempdir().unwrap();
    let trace = synthetic_envelope(2.92, 0.75, 1.17, 50_000, 4).unwrap();
    let input = dir.path().join("ban.bin");
    write_binary(&input, &trace).unwrap();
    let grid = dir.path().join("grid.csv");
    let v = json(&kmsec(&[
        "fit", "--input", input.to_str().unwrap(), "--emit-pdf-grid", grid.to_str().unwrap(),
    ]));
    assert_eq!(v["schema"], 1);
    assert!((v["kappa_hat"].as_f64().unwrap() / 2.92 - 1.0).abs() < 0.2);
    assert!((v["mu_hat"].as_f64().unwrap() / 0.75 - 1.0).abs() < 0.2);
    let mut r = csv::Reader::from_path(&grid).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["envelope", "empirical_density", "fitted_density"]);
    assert_eq!(r.records().count() as u64, v["bins"].as_u64().unwrap());
}

#[test]
fn local_mean_window_improves_shadowed_fit() {
    let base = synthetic_envelope(2.0, 1.5, 1.0, 60_000, 12).unwrap();
    let shadowed: Vec<f64> = base
        .samples
        .iter()
        .enumerate()
        .map(|(i, r)| r * (1.0 + 0.5 * (2.0 * std::f64::consts::PI * i as f64 / 20_000.0).sin()))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("shadowed.bin");
    write_binary(&input, &EnvelopeTrace::new(shadowed, None).unwrap()).unwrap();
    let raw = json(&kmsec(&["fit", "--input", input.to_str().unwrap()]));
    let norm = json(&kmsec(&["fit", "--input", input.to_str().unwrap(), "--window", "501"]));
    assert!(norm["residual"].as_f64().unwrap() < raw["residual"].as_f64().unwrap());
    assert_eq!(kmsec(&["fit", "--input", input.to_str().unwrap(), "--window", "500"]).status.code(), Some(2));
}

fn value(args: &[&str]) -> f64 {
    let v = json(&kmsec(args))["value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&v));
    v
}

#[test]
fn documented_single_point_examples() {
    let r = value(&["spsc", "--preset", "rayleigh", "--gbar-m-db", "4.771", "--gbar-e-db", "0"]);
    assert!((r - 0.75).abs() < 1e-4, "{r}");
    let same = ["--km", "2.92", "--um", "0.75", "--ke", "2.92", "--ue", "0.75"];
    let s = value(&[&["spsc"][..], &same[..]].concat());
    assert!((s - 0.5).abs() < 1e-6);
    let chan = ["--km", "1.07", "--um", "0.91", "--ke", "1.11", "--ue", "0.92", "--gbar-m-db", "3"];
    let spsc = value(&[&["spsc"][..], &chan[..]].concat());
    let lower0 = value(&[&["sop", "--rate-nats", "0", "--bound", "lower"][..], &chan[..]].concat());
    assert!((spsc + lower0 - 1.0).abs() < 1e-8);
    let exact = value(&[&["sop", "--rate-nats", "0.7"][..], &chan[..]].concat());
    let lower = value(&[&["sop", "--rate-nats", "0.7", "--bound", "lower"][..], &chan[..]].concat());
    assert!(exact >= lower);
}

fn sweep_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let out = kmsec(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    csv::Reader::from_reader(out.stdout.as_slice()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn rayleigh_sweep_follows_snr_share() {
    for row in sweep_rows(&["sweep", "--preset", "rayleigh", "--steps", "11"]) {
        let b = 10f64.powf(row[0].parse::<f64>().unwrap() / 10.0);
        let spsc: f64 = row[1].parse().unwrap();
        assert!((spsc - b / (b + 1.0)).abs() < 1e-6);
    }
}

#[test]
fn identical_channel_sweep_is_flat() {
    let rows = sweep_rows(&[
        "sweep", "--km", "3", "--um", "1.5", "--ke", "3", "--ue", "1.5", "--variable", "kappa_m",
        "--start", "3", "--stop", "3.000000001", "--steps", "3",
    ]);
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!((row[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-6);
    }
}

#[test]
fn figure_presets_pass_monotone_assertion() {
    for preset in ["fig2-rice", "fig2-nakagami", "fig2-rayleigh", "fig3-nakagami-osg", "fig3-osg-osg", "fig4"] {
        let out = kmsec(&["sweep", "--preset", preset, "--assert-monotone"]);
        assert_eq!(out.status.code(), Some(0), "{preset}: {}", String::from_utf8_lossy(&out.stderr));
        for row in csv::Reader::from_reader(out.stdout.as_slice()).records() {
            let row = row.unwrap();
            for col in [1, 4, 6] {
                assert!((0.0..=1.0).contains(&row[col].parse::<f64>().unwrap()));
            }
        }
    }
}
