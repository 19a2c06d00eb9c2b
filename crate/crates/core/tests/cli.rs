use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use inhomoreg::harness::{relative_errors, ExperimentConfig, Method, TABLE_HEADER};
use inhomoreg::io::{decode_pgm, read_csv};
use inhomoreg::phantoms::{make_phantom, PhantomId, PhantomSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inhomoreg"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, cfg.to_json()).unwrap();
    path
}

fn small(methods: &[&str]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        PhantomSpec::new(PhantomId::A, 32),
        methods.iter().map(|s| s.parse::<Method>().unwrap()).collect(),
    );
    cfg.ensemble.size = 6;
    cfg
}

#[test]
fn single_method_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small(&["p1"]));
    let out = dir.path().join("out");
    let o = run(bin().args(["experiment", "--config"]).arg(&cfg).arg("--out").arg(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(out.join("errors.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], TABLE_HEADER);
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols.len(), 4);
    assert_eq!(cols[0], "p1");
    for c in &cols[1..] {
        // d.dddde±dd
        assert_eq!(c.len(), 10, "{c}");
        c.parse::<f64>().unwrap();
    }
    assert_eq!(String::from_utf8(o.stdout).unwrap(), csv);
    // no design stage for plain p1
    assert!(!out.join("exponent.csv").exists());
}

#[test]
fn stored_errors_match_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small(&["p2", "proposed+weight", "standard+vbjs"]));
    let out = dir.path().join("out");
    let o = run(bin().args(["experiment", "--config"]).arg(&cfg).arg("--out").arg(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let truth = read_csv(out.join("truth.csv")).unwrap();
    assert_eq!(truth, make_phantom(&PhantomSpec::new(PhantomId::A, 32)).unwrap());

    let prov: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("provenance.json")).unwrap()).unwrap();
    let methods = prov["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 3);
    for m in methods {
        let name = m["method"].as_str().unwrap();
        let recon = read_csv(out.join(format!("recon_{name}.csv"))).unwrap();
        let errors = relative_errors(&recon, &truth).unwrap();
        for (k, key) in ["relative_l1", "relative_l2", "relative_linf"].iter().enumerate() {
            let stored = m[key].as_f64().unwrap();
            assert!((errors[k] - stored).abs() <= 1e-12, "{name} {key}");
        }
        let pterr = read_csv(out.join(format!("pterr_{name}.csv"))).unwrap();
        for ((e, u), t) in pterr.values().iter().zip(recon.values()).zip(truth.values()) {
            assert_eq!(*e, (u - t).abs());
        }
    }
    for stem in ["exponent", "standard_exponent", "weight", "jump", "vbjs_p1", "vbjs_p2"] {
        let field = read_csv(out.join(format!("{stem}.csv"))).unwrap();
        assert_eq!(field.len(), 32 * 32);
        let pgm = decode_pgm(&std::fs::read(out.join(format!("{stem}.pgm"))).unwrap()).unwrap();
        assert_eq!(pgm.shape(), field.shape());
    }
    let labels: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("labels.json")).unwrap()).unwrap();
    assert!(!labels.as_array().unwrap().is_empty());
    assert!(out.join("mask.json").exists());
    assert_eq!(prov["schedule_seed"], 0);
    assert_eq!(prov["ensembles"].as_array().unwrap().len(), 2);
}

#[test]
fn recover_runs_one_method_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small(&["p1", "p2"]));
    let out = dir.path().join("out");
    let o = run(bin()
        .args(["recover", "--method", "p2", "--lambda", "0.01", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("errors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("p2,"));
    let prov: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["methods"][0]["lambda"], 0.01);
}

#[test]
fn design_writes_fields_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("design");
    let o = run(bin()
        .args(["design", "--phantom", "c", "--size", "32", "--ensemble-size", "4", "--out"])
        .arg(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let exps = read_csv(out.join("exponent.csv")).unwrap();
    assert!(exps.values().iter().all(|p| (1.0..=2.0).contains(p)));
    assert!(!out.join("errors.csv").exists());
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(out.join("design.json")).unwrap()).unwrap();
    assert_eq!(sidecar["params"]["kernel"], "triangular");
    assert_eq!(sidecar["schedule"]["values"].as_array().unwrap().len(), 4);
}

#[test]
fn phantom_subcommand_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let pgm = dir.path().join("b.pgm");
    let o = run(bin()
        .args(["phantom", "--id", "b", "--size", "48", "--out"])
        .arg(&csv)
        .arg("--pgm")
        .arg(&pgm));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read_csv(&csv).unwrap(), make_phantom(&PhantomSpec::new(PhantomId::B, 48)).unwrap());
    assert!(pgm.exists());
}

#[test]
fn invalid_config_exits_with_2_and_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut value: Value = serde_json::from_str(&small(&["p1"]).to_json()).unwrap();
    value["solver"]["rho"] = Value::from(-1.0);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, value.to_string()).unwrap();
    let o = run(bin().args(["experiment", "--config"]).arg(&path));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("solver.rho"));

    let mut value: Value = serde_json::from_str(&small(&["p1"]).to_json()).unwrap();
    value["methods"] = serde_json::json!(["p3"]);
    std::fs::write(&path, value.to_string()).unwrap();
    let o = run(bin().args(["experiment", "--config"]).arg(&path));
    assert_eq!(o.status.code(), Some(2));

    let o = run(bin().args(["experiment", "--phantom", "a", "--size", "8"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("phantom.size"));
}

#[test]
fn missing_files_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin().args(["experiment", "--config"]).arg(dir.path().join("nope.json")));
    assert_eq!(o.status.code(), Some(3));

    let o = run(bin()
        .args(["phantom", "--id", "file", "--size", "32", "--path"])
        .arg(dir.path().join("nope.pgm"))
        .arg("--out")
        .arg(dir.path().join("x.csv")));
    assert_eq!(o.status.code(), Some(3));
}
