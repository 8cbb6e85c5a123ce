use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn teich(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teich"))
        .current_dir(dir)
        .env_remove("TEICH_OUT_DIR")
        .args(args)
        .output()
        .expect("teich runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL_TRANSLATION: &str = r#"{"experiment": "pa-translation", "distances": [1, 2], "samples": 3, "bootstrap": 50}"#;

#[test]
fn distance_prints_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = teich(dir.path(), &["distance", "0", "1", "0", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("d = 0.346574"), "{}", stdout(&o));
}

#[test]
fn distance_accepts_negative_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let o = teich(dir.path(), &["distance", "-0.5", "1", "0.5", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn invalid_point_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = teich(dir.path(), &["distance", "0", "0", "0", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_field_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = teich(dir.path(), &["project", "--axis", "2", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing config field `sigma`"), "{}", stderr(&o));
}

#[test]
fn unknown_config_field_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"sigmaa": [0, 1]}"#);
    let o = teich(dir.path(), &["--config", &cfg, "project"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn project_worked_instance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "p.json",
        r#"{"geodesic": {"base": {"point": [0, 1], "direction": [1, 0]}}, "interval": [-2, 2], "sigma": [1, 1]}"#,
    );
    let o = teich(dir.path(), &["--config", &cfg, "--out", "res", "project"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("t* = 0.173287"), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("res/projection.json")).unwrap()).unwrap();
    let t_star = json["characterization"]["result"]["t_star"].as_f64().unwrap();
    assert!((t_star - 0.25 * std::f64::consts::LN_2).abs() < 1e-8);
}

#[test]
fn experiments_needing_constants_refuse_without_them() {
    let dir = tempfile::tempdir().unwrap();
    for exp in ["contract", "stability", "thin"] {
        let o = teich(dir.path(), &["run", exp]);
        assert_eq!(o.status.code(), Some(2), "{exp}");
        assert!(stderr(&o).contains("teich run constants"), "{exp}: {}", stderr(&o));
    }
}

#[test]
fn unknown_experiment_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = teich(dir.path(), &["run", "contraction"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pa-translation"), "{}", stderr(&o));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", SMALL_TRANSLATION);
    let csv = |seed: &str| {
        let o = teich(dir.path(), &["--config", &cfg, "--seed", seed, "--out", "res", "run", "pa-translation"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        fs::read(dir.path().join("res/pa-translation.csv")).unwrap()
    };
    let first = csv("5");
    assert!(first == csv("5"), "rerun with the same seed changed the CSV");
    assert!(first != csv("6"), "a different seed left the CSV unchanged");
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", SMALL_TRANSLATION);
    let o = Command::new(env!("CARGO_BIN_EXE_teich"))
        .current_dir(dir.path())
        .env("TEICH_OUT_DIR", "from_env")
        .args(["--config", &cfg, "run", "pa-translation"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("from_env/pa-translation.json").exists());
    assert!(dir.path().join("from_env/pa-translation_plot.py").exists());
}
