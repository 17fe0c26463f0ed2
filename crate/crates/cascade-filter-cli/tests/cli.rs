//! End-to-end runs of the command-line driver.

use std::fs;
use std::path::{Path, PathBuf};

use cascade_filter_cli::{execute, manifest_for};

const CONFIG: &str = "[atom]\ngamma = 1\nomega_rabi = 15.707963267948966\n\n\
[filter_a]\nn_side = 2\nmode_spacing = 0.5\nmode_halfwidth = 1.25\nphase_index = 1\ncenter_detuning = 15.707963267948966\n\n\
[filter_b]\nn_side = 2\nmode_spacing = 0.5\nmode_halfwidth = 1.25\nphase_index = 1\ncenter_detuning = 0\n";

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.toml");
    fs::write(&cfg, CONFIG).unwrap();
    (dir, cfg)
}

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["cascade-filter"];
    argv.extend_from_slice(args);
    execute(argv)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn g2auto_writes_csv_and_manifest() {
    let (dir, cfg) = setup();
    let out = dir.path().join("g2.csv");
    assert_eq!(run(&["g2auto", "--config", s(&cfg), "--out", s(&out), "--tau-max", "2", "--tau-points", "21"]), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau [1/gamma],g2");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 21);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[20][0] - 2.0).abs() < 1e-15);
    assert!(rows.iter().all(|r| r[1].is_finite() && r[1] >= 0.0));

    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(manifest_for(&out)).unwrap()).unwrap();
    assert_eq!(m["command"], "g2auto");
    assert_eq!(m["outputs"][0], s(&out));
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(m["tolerances"]["dark_threshold"], 1e-14);
    assert_eq!(m["parameters"]["system"]["filter_a"]["n_side"], 2);
    assert!(m["engine_version"].is_string());
}

#[test]
fn reruns_are_bitwise_identical() {
    let (dir, cfg) = setup();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, threads) in [(&a, "1"), (&b, "2")] {
        assert_eq!(run(&["g2cross", "--config", s(&cfg), "--out", s(out), "--tau-points", "51", "--threads", threads]), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn overrides_and_other_commands() {
    let (dir, cfg) = setup();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["response", "--K", "2", "--N", "4"], "omega [gamma],re,im,abs2"),
        (vec!["response", "--temporal", "--m", "0"], "t [1/gamma],re,im,abs2"),
        (vec!["spectrum", "--omega", "-20:20:41"], "omega [gamma],S [1/gamma]"),
        (vec!["spectrum", "--unfiltered"], "omega [gamma],S [1/gamma]"),
        (vec!["g1", "--method", "numeric", "--tau-points", "11"], "tau [1/gamma],re_g1,im_g1"),
        (vec!["scan-width", "--k-range", "1:10:3", "--peak", "central"], "K [gamma],g2_initial"),
        (vec!["intensity-ratio", "--k-range", "1:10:3"], "K [gamma],intensity_ratio"),
    ];
    for (i, (args, header)) in cases.into_iter().enumerate() {
        let out = dir.path().join(format!("o{i}.csv"));
        let mut argv = args.clone();
        argv.extend(["--config", s(&cfg), "--out", s(&out)]);
        assert_eq!(run(&argv), 0, "{args:?}");
        let text = fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().next().unwrap(), header, "{args:?}");
        assert!(manifest_for(&out).exists());
    }
}

#[test]
fn scan_grid_writes_matrix() {
    let (dir, cfg) = setup();
    let out = dir.path().join("grid.csv");
    let argv = ["scan-grid", "--config", s(&cfg), "--out", s(&out), "--N", "1", "--alpha", "-1:1:3", "--beta", "-1:1:5"];
    assert_eq!(run(&argv), 0);
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split(',').count() == 6));
    let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    assert_eq!(first, -1.0);
}

#[test]
fn usage_errors_exit_one() {
    let (dir, cfg) = setup();
    let out = dir.path().join("x.csv");
    assert_eq!(run(&["g2auto", "--out", s(&out)]), 1, "missing --config");
    assert_eq!(run(&["g2auto", "--config", s(&dir.path().join("nope.toml"))]), 1, "unreadable config");
    assert_eq!(run(&["g2auto", "--config", s(&cfg), "--bogus"]), 1, "unknown flag");
    assert_eq!(run(&["frobnicate"]), 1, "unknown command");
    assert_eq!(run(&["scan-grid", "--config", s(&cfg), "--alpha", "1:2"]), 1, "bad range");
    assert_eq!(run(&["g2auto", "--config", s(&cfg), "--K", "-1", "--out", s(&out)]), 1, "negative K");
    assert_eq!(run(&["g2auto", "--config", s(&cfg), "--threads", "0", "--out", s(&out)]), 1);
    assert!(!out.exists());
}

#[test]
fn dark_source_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dark.toml");
    fs::write(&cfg, CONFIG.replace("omega_rabi = 15.707963267948966", "omega_rabi = 0")).unwrap();
    let out = dir.path().join("g2.csv");
    assert_eq!(run(&["g2auto", "--config", s(&cfg), "--out", s(&out), "--tau-points", "11"]), 1);
    assert!(!out.exists());
}

#[test]
fn missing_filter_b_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a.toml");
    fs::write(&cfg, CONFIG.split("[filter_b]").next().unwrap()).unwrap();
    assert_eq!(run(&["g2cross", "--config", s(&cfg), "--out", s(&dir.path().join("c.csv"))]), 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]), 0);
    assert_eq!(run(&["--version"]), 0);
}

#[test]
fn validate_passes_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("validate.csv");
    assert_eq!(run(&["validate", "--out", s(&out)]), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
}
