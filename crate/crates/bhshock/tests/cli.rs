use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bhshock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhshock"))
        .args(args)
        .output()
        .expect("spawn bhshock")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn column(csv_text: &str, name: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let ix = reader.headers().unwrap().iter().position(|h| h == name).unwrap();
    reader.records().map(|r| r.unwrap()[ix].to_string()).collect()
}

#[test]
fn radiation_run_writes_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bhshock(&[
        "run", "--sigma", "0.333333", "--h0", "1", "--smin", "1e-9", "--out", out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = fs::read_to_string(dir.path().join("shock.csv")).unwrap();
    assert!(text.starts_with("S,N,u,v,rbar,r,t,rho,p,pbar,rhobar,s,B,B_valid,entropy_ok,invariant_ok\n"));
    assert!(!text.contains('\r'));
    let n: Vec<f64> = column(&text, "N").iter().map(|x| x.parse().unwrap()).collect();
    assert!(n.windows(2).all(|w| w[1] < w[0]));

    let s = summary(dir.path());
    let m = s["m_star"].as_f64().unwrap();
    assert!((m - 4.0 / 3.0).abs() < 0.02 * 4.0 / 3.0);
    assert_eq!(s["speed_class"], "luminal");
    assert_eq!(s["settings"]["b_variant"], "radial");
    assert_eq!(s["settings"]["s_min"].as_f64().unwrap(), 1e-9);

    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stdout, s);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = bhshock(&["run", "--sigma", "0.2", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    for f in ["shock.csv", "summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(bhshock(&["run", "--sigma", "0.1", "--out", out]).status.success());
    let text = fs::read_to_string(dir.path().join("shock.csv")).unwrap();
    for x in column(&text, "rho") {
        let v: f64 = x.parse().unwrap();
        assert_eq!(format!("{v:.16e}"), x);
    }
}

#[test]
fn dust_limit_uses_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bhshock(&["run", "--sigma", "0", "--out", out]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("shock.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    let s = summary(dir.path());
    assert_eq!(s["report"]["sqrt_n0_numeric"].as_f64().unwrap(), 2.0);
    assert_eq!(s["report"]["h0_r_emergence"].as_f64().unwrap(), 2.0);
    assert_eq!(s["speed_class"], "zero");
}

#[test]
fn stiff_sigma_is_exploratory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bhshock(&["run", "--sigma", "0.4", "--format", "json", "--out", out]);
    assert!(o.status.success());
    let s = summary(dir.path());
    assert_eq!(s["speed_class"], "divergent");
    assert_eq!(s["exploratory"], true);
    let rows: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("shock.json")).unwrap()).unwrap();
    assert!(rows.as_array().unwrap().len() > 100);
}

#[test]
fn bad_arguments_exit_nonzero() {
    for args in [
        &["run", "--sigma", "1.5"][..],
        &["run", "--sigma", "abc"],
        &["run", "--b-variant", "nope"],
        &["run", "--smin", "0"],
    ] {
        let o = bhshock(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn sweep_orders_dedups_and_records_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bhshock(&["sweep", "1/3,0.01", "0.1", "0.01", "0.5", "--out", out]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let sigmas: Vec<f64> = column(&text, "sigma").iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(sigmas, vec![0.01, 0.1, 1.0 / 3.0, 0.5]);
    assert_eq!(column(&text, "sqrt_n0_ok")[..3], ["true", "true", "true"]);
    assert!(!column(&text, "error")[3].is_empty());
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bhshock(&["sweep", "--format", "json", "--out", out]);
    assert!(o.status.success());
    let rows: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(rows, Value::Array(vec![]));
}

#[test]
fn verify_filter_and_fault_injection() {
    let o = bhshock(&["verify", "--only", "det-jump"]);
    assert!(o.status.success());
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.starts_with("PASS  det-jump"));
    assert_eq!(
        table
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        1
    );

    let o = bhshock(&["verify", "--only", "b-variants", "--b-mismatch-tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first failure: b-variants"));
}

#[test]
fn full_verify_names_the_first_failure() {
    let o = bhshock(&["verify"]);
    let table = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        table
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        18
    );
    match o.status.code() {
        Some(0) => assert!(!table.contains("FAIL")),
        Some(1) => {
            let first = table.lines().find(|l| l.starts_with("FAIL")).unwrap();
            let name = first.split_whitespace().nth(1).unwrap();
            assert!(String::from_utf8_lossy(&o.stderr).contains(&format!("first failure: {name}")));
        }
        other => panic!("unexpected exit {other:?}"),
    }
}
