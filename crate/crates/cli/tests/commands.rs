use std::path::Path;
use std::process::{Command, Output};

use tfche_cli::commands::snapshot_name;

const SEEDED: &str = r#"{"seed": 42}"#;

fn tfche(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tfche"));
    cmd.args(args).env_remove("TFCHE_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, out: &Path, init: &str) -> std::path::PathBuf {
    let path = dir.join("run.json");
    let text = format!(
        r#"{{"alpha": 0.9, "epsilon": 0.1, "grid": {{"nx": 32, "lx": 6.283185307179586}},
            "dt": 0.01, "t_end": 0.2, "init": {init},
            "output": {{"dir": "{}", "snapshot_every": 10, "series_every": 2}}}}"#,
        out.display()
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn run_writes_outputs_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let cfg = write_config(tmp.path(), out, SEEDED);
        let res = tfche(&["run", cfg.to_str().unwrap()], &[]);
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut expected: Vec<String> = [0, 10, 20].map(snapshot_name).to_vec();
    expected.extend(["config.json".to_string(), "series.csv".to_string()]);
    expected.sort();
    assert_eq!(names, expected);
    for name in &names {
        if name == "config.json" {
            continue;
        }
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let series = std::fs::read_to_string(a.join("series.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(
        lines.next(),
        Some("step,t,energy,mass,length_sf,length_energy")
    );
    assert_eq!(lines.count(), 11);
}

#[test]
fn out_dir_env_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &tmp.path().join("ignored"), SEEDED);
    let target = tmp.path().join("from_env");
    let res = tfche(
        &["run", cfg.to_str().unwrap()],
        &[("TFCHE_OUT_DIR", &target)],
    );
    assert!(res.status.success());
    assert!(target.join("series.csv").exists());
    assert!(!tmp.path().join("ignored").exists());
}

#[test]
fn snapshot_converts_to_pgm() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), &out, SEEDED);
    assert!(tfche(&["run", cfg.to_str().unwrap()], &[]).status.success());
    let snap = out.join(snapshot_name(20));
    let pgm = tmp.path().join("u.pgm");
    let res = tfche(
        &[
            "snapshot",
            snap.to_str().unwrap(),
            "--pgm",
            pgm.to_str().unwrap(),
        ],
        &[],
    );
    assert!(res.status.success());
    let bytes = std::fs::read(&pgm).unwrap();
    assert!(bytes.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(bytes.len(), b"P5\n32 32\n255\n".len() + 32 * 32);
}

#[test]
fn fit_prints_single_line_json() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("series.csv");
    let mut text = String::from("step,t,energy,mass,length_sf,length_energy\n");
    for i in 1..=50 {
        let t = i as f64 * 0.5;
        text.push_str(&format!("{i},{t:e},{:e},0,1,1\n", t.powf(-0.3)));
    }
    std::fs::write(&csv, text).unwrap();
    let res = tfche(
        &["fit", csv.to_str().unwrap(), "--t-lo", "1", "--t-hi", "25"],
        &[],
    );
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!((v["slope"].as_f64().unwrap() + 0.3).abs() < 1e-12);

    let few = tfche(
        &["fit", csv.to_str().unwrap(), "--t-lo", "1", "--t-hi", "3"],
        &[],
    );
    assert_eq!(few.status.code(), Some(2));
    assert!(!few.stderr.is_empty());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(tfche(&["frobnicate"], &[]).status.code(), Some(1));
    assert_eq!(tfche(&["--help"], &[]).status.code(), Some(0));
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"alpha": 0.9, "typo": 1}"#).unwrap();
    assert_eq!(
        tfche(&["run", bad.to_str().unwrap()], &[]).status.code(),
        Some(1)
    );
    let missing = tmp.path().join("nope.tfch");
    let pgm = tmp.path().join("x.pgm");
    let res = tfche(
        &[
            "snapshot",
            missing.to_str().unwrap(),
            "--pgm",
            pgm.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(res.status.code(), Some(1));
    let blowup = write_config(
        tmp.path(),
        &tmp.path().join("o"),
        r#"{"seed": 1, "amplitude": 1e200}"#,
    );
    assert_eq!(
        tfche(&["run", blowup.to_str().unwrap()], &[]).status.code(),
        Some(2)
    );
}

#[test]
fn check_and_bench_succeed() {
    let res = tfche(&["check"], &[]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stdout)
    );
    let res = tfche(&["bench", "--n-steps", "10"], &[]);
    assert!(res.status.success());
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(v["n_steps"], 10);
    assert!(v["speedup"].as_f64().unwrap() > 0.0);
}
