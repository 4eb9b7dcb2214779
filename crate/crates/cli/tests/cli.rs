use std::path::Path;
use std::process::{Command, Output};

fn hotbang(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hotbang"));
    cmd.args(args).env_remove("HOTBANG_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_digest: "));
    lines.next().expect("header row");
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn scan_reproduces_the_temperature_profile() {
    let out = hotbang(&["--command", "scan"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 8);
    for r in rows {
        let t: f64 = r[0].parse().unwrap();
        let v: f64 = r[5].parse().unwrap();
        assert_eq!(r[4], "T2");
        assert!((v * t * t - 1.0).abs() < 1e-12, "t = {t}: {v}");
    }
}

#[test]
fn phase_space_density_falls_with_the_momentum_pairing() {
    let dir = tempfile::tempdir().unwrap();
    let observables: Vec<String> = (0..7)
        .map(|k| {
            let th = k as f64 * 0.5;
            format!(r#"{{"phasespace":{{"p":[1,{},0,{}]}}}}"#, th.sin(), th.cos())
        })
        .collect();
    let cfg = format!(
        r#"{{"state":{{"hotbang":{{"lambda":1}}}},"scan":{{"observables":[{}],"points":[[2,0,0,1]],"line":null}}}}"#,
        observables.join(",")
    );
    let path = write_config(dir.path(), &cfg);
    let out = hotbang(&["--command", "scan", "--config", &path], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 7);
    // (x, p) = 2 − cos θ grows with θ on [0, π].
    let values: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn empty_scan_grid_gives_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), r#"{"scan":{"points":[],"line":null}}"#);
    let out_dir = dir.path().join("out");
    let out = hotbang(&["--command", "scan", "--config", &path, "--out", out_dir.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(data_rows(&csv).is_empty());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        r#"{"positivity":{"lambdas":[0]}}"#,
        r#"{"state":{"hotbang":{"lambda":0}}}"#,
        r#"{"verify":{"tolerances":{"pde":-1e-5}}}"#,
        r#"{"unknown":1}"#,
        "not json",
    ] {
        let path = write_config(dir.path(), bad);
        let out = hotbang(&["--command", "positivity", "--config", &path], &[]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
    let out = hotbang(&["--command", "scan"], &[("HOTBANG_THREADS", "many")]);
    assert_eq!(out.status.code(), Some(2));
    let out = hotbang(&["--command", "nonsense"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = hotbang(&["--command", "scan", "--config", "/nonexistent/config.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_function_gives_zero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = r#"{"terms":[{"center":[2,0,0,0],"half_widths":[0.3,0.3,0.3,0.3],"amplitude":[[1,0],[0,0]],"scale":[0,0]}]}"#;
    let path = write_config(dir.path(), &format!(r#"{{"positivity":{{"explicit":[{f}],"lambdas":[1]}}}}"#));
    let out = hotbang(&["--command", "positivity", "--config", &path], &[]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[5].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn positivity_run_on_one_function() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), r#"{"positivity":{"functions":1,"lambdas":[0.5,2]}}"#);
    let out = hotbang(&["--command", "positivity", "--config", &path, "--seed", "7"], &[("HOTBANG_THREADS", "1")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r[0], "7");
        let v: f64 = r[3].parse().unwrap();
        let tail: f64 = r[4].parse().unwrap();
        assert!(v >= -tail);
        assert!(r[6].parse::<f64>().unwrap() < 1e-6);
    }
}

#[test]
fn verify_filter_selects_a_subset_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = hotbang(&["--command", "verify", "--filter", "transport", "--seed", "3", "--out", d.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = std::fs::read_to_string(a.join("verify.csv")).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[0].starts_with("transport/") && r[3] == "pass"));
    for f in ["verify.csv", "verify.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("verify.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["reports"].as_array().unwrap().len(), 11);
}

#[test]
fn different_seeds_change_the_digest() {
    let first = |seed: &str| {
        let out = hotbang(&["--command", "scan", "--seed", seed], &[]);
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string()
    };
    assert_ne!(first("1"), first("2"));
    assert_eq!(first("5"), first("5"));
}
