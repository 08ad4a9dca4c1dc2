use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qutrit_sim::report::CSV_HEADER;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qutrit-sim"))
}

fn write_config(dir: &Path, name: &str, body: &str, out: &str) -> (PathBuf, PathBuf) {
    let out = dir.join(out);
    let cfg = dir.join(format!("{name}.toml"));
    fs::write(
        &cfg,
        format!("{body}\noutput_path = {:?}\n", out.display().to_string()),
    )
    .unwrap();
    (cfg, out)
}

fn run(cfg: &Path) -> Output {
    bin().arg("run").arg("--config").arg(cfg).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort();
    k
}

#[test]
fn pulses_csv_layout_and_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "p", "scenario = \"pulses\"", "nested/p.csv");
    let o = run(&cfg);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4001);
    let last: Vec<f64> = rows[4000].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 10.0);
    assert!(last[4] >= 0.999);
    // 17 significant digits: one leading digit, 16 after the point
    let first = rows[0].split(',').nth(1).unwrap();
    let mantissa = first.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.len(), 18, "{first}");
}

#[test]
fn transfer_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(
        dir.path(),
        "t",
        "scenario = \"transfer\"\nchi = [[1, 0], [0, 0], [0, 0]]",
        "t.json",
    );
    assert_eq!(run(&cfg).status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        keys(&v),
        ["alpha2_final_l", "alpha2_final_r", "qutrit_fidelity"]
    );
    assert_eq!(v["qutrit_fidelity"].as_f64(), Some(1.0));
    assert!(v["alpha2_final_l"].as_f64().unwrap() >= 0.999);
}

#[test]
fn qss_report_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "q", "scenario = \"qss\"", "q.json");
    assert_eq!(run(&cfg).status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        keys(&v),
        ["branches", "identity_residual", "paper_exponents_match"]
    );
    let branches = v["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 27);
    for b in branches {
        assert_eq!(keys(b), ["a", "b", "fidelity", "l", "m", "mu"]);
        assert!((b["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    }
    assert_eq!(v["paper_exponents_match"], Value::Bool(false));
    assert!(v["identity_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn symmetrize_overlaps() {
    let dir = tempfile::tempdir().unwrap();
    for (name, antisym) in [("symmetrize", false), ("antisymmetrize", true)] {
        let (cfg, out) = write_config(
            dir.path(),
            name,
            &format!("scenario = \"{name}\""),
            "s.json",
        );
        assert_eq!(run(&cfg).status.code(), Some(0));
        let v = json(&out);
        assert_eq!(keys(&v), ["amplitudes", "overlaps"]);
        assert_eq!(v["amplitudes"].as_array().unwrap().len(), 27);
        let overlaps = v["overlaps"].as_array().unwrap();
        assert_eq!(overlaps.len(), 6);
        for o in overlaps {
            let expected = if antisym {
                o["sign"].as_f64().unwrap()
            } else {
                1.0
            };
            assert!((o["overlap"][0].as_f64().unwrap() - expected).abs() < 1e-10);
            assert!(o["overlap"][1].as_f64().unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn distribute_report() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = write_config(dir.path(), "d", "scenario = \"distribute\"", "d.json");
    assert_eq!(run(&cfg).status.code(), Some(0));
    let v = json(&out);
    assert_eq!(keys(&v), ["amplitudes", "fidelity"]);
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 9);
    assert!(v["fidelity"].as_f64().unwrap() > 0.9999);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (bad, _) = write_config(
        dir.path(),
        "bad",
        "scenario = \"transfer\"\ndt = 0.5",
        "x.json",
    );
    let o = bin()
        .arg("validate")
        .arg("--config")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&bad).status.code(), Some(1));

    let missing = dir.path().join("nope.toml");
    assert_eq!(run(&missing).status.code(), Some(1));

    let (good, out) = write_config(dir.path(), "good", "scenario = \"qss\"", "g.json");
    let o = bin()
        .arg("validate")
        .arg("--config")
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(!out.exists(), "validate must not write output");

    let (stiff, _) = write_config(
        dir.path(),
        "stiff",
        "scenario = \"pulses\"\nt_max = 10.0\ndt = 0.1\nlambda1_table = [50.0, 50.0]",
        "s.csv",
    );
    assert_eq!(run(&stiff).status.code(), Some(2));
}

#[test]
fn shipped_scenarios_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let text = fs::read_to_string(&path).unwrap();
            qutrit_sim::parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert_eq!(seen, 6);
}
