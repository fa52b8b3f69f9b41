use std::io::Write;
use std::process::{Command, Output};

fn pseudospin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudospin"))
        .args(args)
        .env_remove("PSEUDOSPIN_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and data rows of a CSV document, skipping the `#` preamble.
fn csv_body(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn config_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn solve_reports_table_energy() {
    let o = pseudospin(&["solve", "--n", "1", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_body(&stdout(&o));
    assert_eq!(header[..6], ["n", "kappa", "H", "Lambda_or_Eta", "spectroscopic_label", "E_selected"]);
    let e: f64 = rows[0][5].parse().unwrap();
    assert!((e + 4.672750523).abs() < 1e-6);
    assert_eq!(rows[0][4], "1s1/2");
}

#[test]
fn exit_codes() {
    assert_eq!(pseudospin(&["solve"]).status.code(), Some(2));
    assert_eq!(pseudospin(&["solve", "--n", "1"]).status.code(), Some(2));
    assert_eq!(pseudospin(&["solve", "--n", "0", "--kappa", "0"]).status.code(), Some(2));
    assert_eq!(pseudospin(&["solve", "--n", "0", "--kappa", "-1", "--mass", "-5"]).status.code(), Some(2));
    assert_eq!(pseudospin(&["bogus"]).status.code(), Some(2));
    assert_eq!(pseudospin(&["--help"]).status.code(), Some(0));
    // η = 1/2 has no root: computation failure with partial output
    let o = pseudospin(&[
        "solve", "--symmetry", "spin", "--tensor-h", "0.5", "--n", "0", "--kappa", "-2", "--n", "0", "--kappa", "-1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let (_, rows) = csv_body(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][5], "—");
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_config_key_is_named() {
    let f = config_file(r#"{"mass": 5, "tensor_hh": 1}"#);
    let o = pseudospin(&["solve", "--config", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tensor_hh"));
}

#[test]
fn config_from_environment_and_flag_precedence() {
    let f = config_file(r#"{"tensor_h": 0.0, "states": [{"n": 1, "kappa": 2}]}"#);
    let run = |extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pseudospin"));
        c.arg("solve").args(extra).env("PSEUDOSPIN_CONFIG", f.path());
        c.output().unwrap()
    };
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_body(&stdout(&o));
    assert!((rows[0][5].parse::<f64>().unwrap() + 4.556531257).abs() < 1e-6);

    let o = run(&["--tensor-h", "1"]);
    let (_, rows) = csv_body(&stdout(&o));
    assert!((rows[0][5].parse::<f64>().unwrap() + 4.352818702).abs() < 1e-6);
}

#[test]
fn wavefunction_csv_is_normalized() {
    let o = pseudospin(&["wavefunction", "--n", "1", "--kappa", "-1", "--points", "4000", "--r-min", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (header, rows) = csv_body(&text);
    assert_eq!(header, ["r", "G", "F"]);
    let cols: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| [r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()])
        .collect();
    assert!(cols.windows(2).all(|w| w[1][0] > w[0][0]));
    let integral: f64 = cols
        .windows(2)
        .map(|w| 0.5 * (w[1][0] - w[0][0]) * (w[0][1].powi(2) + w[0][2].powi(2) + w[1][1].powi(2) + w[1][2].powi(2)))
        .sum();
    assert!((integral - 1.0).abs() < 1e-4, "{integral}");

    let sign_changes = cols.windows(2).filter(|w| w[0][1] * w[1][1] < 0.0).count();
    let nodes: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("# node_count = "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(nodes, 1);
    assert_eq!(sign_changes, nodes);
}

#[test]
fn analysis_headers() {
    for (which, header) in [
        ("approx", vec!["r", "exact", "approx", "rel_err"]),
        ("potential", vec!["r", "V", "U"]),
        ("sweep", vec!["H", "state", "E_selected", "delta_E"]),
    ] {
        let o = pseudospin(&["analyze", which]);
        assert_eq!(o.status.code(), Some(0), "{which}");
        let (h, rows) = csv_body(&stdout(&o));
        assert_eq!(h, header);
        assert!(!rows.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "spin3"];
    let a = pseudospin(&args);
    let b = pseudospin(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = pseudospin(&["analyze", "sweep", "--format", "json"]);
    let b = pseudospin(&["analyze", "sweep", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_documents_have_params_and_records() {
    let o = pseudospin(&["solve", "--n", "1", "--kappa", "-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["params"]["mass"], serde_json::json!(5));
    let rec = &v["records"][0];
    assert_eq!(rec["kappa"], serde_json::json!(-1));
    assert!((rec["E_selected"].as_f64().unwrap() + 4.672750523).abs() < 1e-6);

    let o = pseudospin(&["table", "pseudospin2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 32);
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("DISCREPANCY")));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pot.csv");
    let o = pseudospin(&["analyze", "potential", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "r,V,U"));
}
