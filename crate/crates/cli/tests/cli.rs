use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "snlcm-cli-{}-{name}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn snlcm(out: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snlcm"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("spawn snlcm")
}

fn manifest(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn psi_matches_integer_lcm() {
    let out = scratch("psi");
    let o = snlcm(&out, &["psi", "--field", "x", "--poly", "x^2+1", "--m", "5", "--degree-check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lcm = (1u32..=5).fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l * l + 1)));
    let m = manifest(out.join("psi.manifest.json"));
    let psi = m["summary"]["psi"].as_f64().unwrap();
    assert!((psi - (lcm.to_u64_digits()[0] as f64).ln()).abs() < 1e-12);
    assert_eq!(m["summary"]["oracle_match"], Value::Bool(true));
}

#[test]
fn linear_polynomial_is_refused_by_psi() {
    let out = scratch("linear");
    let o = snlcm(&out, &["psi", "--field", "x", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("linear"));
}

#[test]
fn census_agrees_with_brute_force() {
    let out = scratch("census");
    let o = snlcm(&out, &["census", "--n", "3", "--q", "2,3,5", "--oracle"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("census.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().ends_with(",match"));
    let rows: Vec<&str> = lines.collect();
    // three splitting types of degree 3, three field sizes
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert!(row.ends_with(",true"), "{row}");
    }
}

#[test]
fn replay_reproduces_csv() {
    let out = scratch("replay");
    let args = [
        "psi-ensemble", "--field", "x", "--n", "3", "--height", "20", "--samples", "12", "--seed", "7", "--m",
        "50,100",
    ];
    let first = snlcm(&out, &args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let original = fs::read(out.join("psi-ensemble.csv")).unwrap();
    let m = manifest(out.join("psi-ensemble.manifest.json"));
    assert_eq!(m["seed"], Value::from(7));
    assert_eq!(m["schema_version"], Value::from(1));

    let again = out.join("again");
    let o = Command::new(env!("CARGO_BIN_EXE_snlcm"))
        .arg("--out")
        .arg(&again)
        .arg("--workers")
        .arg("3")
        .arg("replay")
        .arg(out.join("psi-ensemble.manifest.json"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(again.join("psi-ensemble.csv")).unwrap(), original);
    let m2 = manifest(again.join("psi-ensemble.manifest.json"));
    assert_eq!(m["csv_header_hash"], m2["csv_header_hash"]);
}

#[test]
fn config_file_runs_a_command() {
    let out = scratch("config");
    fs::create_dir_all(&out).unwrap();
    let cfg = out.join("run.toml");
    fs::write(&cfg, "command = \"factor-field\"\nfield = \"x^2+1\"\nfrom = 2\nto = 13\n").unwrap();
    let o = snlcm(&out, &["config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(out.join("factor-field.manifest.json"));
    assert_eq!(m["summary"]["ramified_primes"], serde_json::json!([2]));
}

#[test]
fn bad_xi_is_a_parameter_error() {
    let out = scratch("xi");
    let o = snlcm(&out, &["lemma11", "--n", "2", "--xi", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}
