use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pancake(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pancake"))
        .args(args)
        .env("PANCAKE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(cache: &Path, args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = pancake(cache, &all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

fn check<'a>(report: &'a Value, prefix: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with(prefix))
        .unwrap_or_else(|| panic!("no check starting with {prefix:?}"))
}

#[test]
fn build_writes_matrix_market() {
    let dir = tempfile::tempdir().unwrap();
    let bp3 = dir.path().join("bp3.mtx");
    let o = pancake(
        dir.path(),
        &[
            "build",
            "--family",
            "burnt",
            "-n",
            "3",
            "--out",
            bp3.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&bp3).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("%%MatrixMarket matrix coordinate pattern symmetric")
    );
    assert_eq!(lines.next(), Some("48 48 72"));
    assert_eq!(lines.count(), 72);

    let p3 = dir.path().join("p3.mtx");
    let o = pancake(
        dir.path(),
        &[
            "build",
            "--family",
            "plain",
            "-n",
            "3",
            "--out",
            p3.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&p3).unwrap().contains("\n6 6 6\n"));

    let o = pancake(dir.path(), &["build", "-n", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("2 2 1\n2 1\n"));
}

#[test]
fn build_refuses_large_n() {
    let dir = tempfile::tempdir().unwrap();
    let o = pancake(dir.path(), &["build", "--family", "burnt", "-n", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the budget"));
    assert!(o.stdout.is_empty());
    let o = pancake(dir.path(), &["build", "--family", "plain", "-n", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quotient_prints_matrix_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m3.csv");
    let o = pancake(
        dir.path(),
        &[
            "quotient",
            "-n",
            "3",
            "--check-partition",
            "--csv",
            csv.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let out = stdout(&o);
    for row in [
        "2 0 0 1 0 0",
        "0 1 0 1 1 0",
        "0 0 0 1 1 1",
        "1 1 1 0 0 0",
        "0 1 1 0 1 0",
        "0 0 1 0 0 2",
    ] {
        assert!(out.contains(row), "{out}");
    }
    assert!(out.contains("PASS    block form equals sum of P(r_i)"));
    assert!(out.contains("PASS    position partition equitable over 48 vertices"));
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap().lines().next(),
        Some("2,0,0,1,0,0")
    );

    let (r, code) = json(dir.path(), &["quotient", "-n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["outcome"], "pass");
    assert_eq!(check(&r, "block form")["method"], "exact");
    assert_eq!(check(&r, "block form")["detail"]["matrix"][15][15], 7);
}

#[test]
fn verify_theorem_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (r, code) = json(dir.path(), &["verify-theorem", "-n", "10"]);
    assert_eq!(code, 0);
    assert_eq!(r["outcome"], "finding");
    let set = &check(&r, "λ-set")["detail"]["lambda_set"];
    assert_eq!(set, &serde_json::json!([0, 1, 2, 3, 4, 6, 7, 8, 9, 10]));
    assert_eq!(check(&r, "10 certificates")["outcome"], "pass");

    let (r, code) = json(dir.path(), &["verify-theorem", "-n", "4", "--lift"]);
    assert_eq!(code, 0);
    assert_eq!(
        check(&r, "4 lifted certificates over 384 vertices")["outcome"],
        "pass"
    );

    let (r, code) = json(dir.path(), &["verify-theorem", "-n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(
        check(&r, "λ-set")["detail"]["lambda_set"],
        serde_json::json!([1])
    );

    let (r, _) = json(dir.path(), &["verify-theorem", "-n", "6"]);
    let general = check(&r, "printed eigenvector: first family, general i = 2");
    assert_eq!(general["outcome"], "finding");
    assert_eq!(general["detail"]["outcome"]["status"], "fails_at_row");
    assert_eq!(general["detail"]["corrected_verified"], true);

    let o = pancake(dir.path(), &["verify-theorem", "-n", "6", "--lift"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cover_findings_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (r, code) = json(dir.path(), &["cover", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["outcome"], "finding");
    assert_eq!(check(&r, "ℒ(B̃) spectrum")["outcome"], "pass");
    assert_eq!(check(&r, "ℒ(B̃) spectrum")["tolerance"], 1e-10);
    assert_eq!(check(&r, "covering condition (1)")["outcome"], "finding");
    assert_eq!(check(&r, "covering condition (2)")["detail"]["index"], "8");

    let o = pancake(dir.path(), &["cover", "-n", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS    multiplicity of 3 in sp(BP_4) is at least 2"));

    let o = pancake(dir.path(), &["cover", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_small() {
    let dir = tempfile::tempdir().unwrap();
    let (r, code) = json(dir.path(), &["scan", "--nmax", "2"]);
    assert_eq!(code, 0);
    let gap = check(&r, "n = 2: spectral gap")["detail"]["gap"]
        .as_f64()
        .unwrap();
    assert!((gap - (2.0 - std::f64::consts::SQRT_2)).abs() < 1e-10);

    let csv_dir = dir.path().join("csv");
    let (r, code) = json(
        dir.path(),
        &[
            "scan",
            "--nmax",
            "4",
            "--csv-dir",
            csv_dir.to_str().unwrap(),
        ],
    );
    assert_eq!(code, 0);
    for n in 2..=4 {
        let c = check(&r, &format!("n = {n}: spectral gap"));
        assert_eq!(c["outcome"], "pass");
        assert_eq!(c["method"], "dense");
    }
    assert_eq!(
        check(&r, "n = 3: every integer")["detail"]["absent"],
        serde_json::json!([1])
    );
    assert_eq!(check(&r, "n = 4: every integer")["outcome"], "pass");
    let gaps = std::fs::read_to_string(csv_dir.join("gaps.csv")).unwrap();
    assert_eq!(gaps.lines().count(), 4);
    assert!(gaps.starts_with("n,lambda2,gap,method,residual,tolerance\n2,"));
    let ints = std::fs::read_to_string(csv_dir.join("integers.csv")).unwrap();
    assert!(ints.contains("\n3,1,false,exact,exact_absent\n"));
    assert!(csv_dir.join("spectrum-n4.csv").exists());

    let o = pancake(dir.path(), &["scan", "--nmax", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_is_reused_and_can_be_bypassed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let (first, _) = json(&cache, &["cover", "-n", "3"]);
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    let (second, _) = json(&cache, &["cover", "-n", "3"]);
    assert_eq!(first, second);

    let other = dir.path().join("unused");
    let (fresh, _) = json(&other, &["--no-cache", "cover", "-n", "3"]);
    assert!(!other.exists());
    assert_eq!(fresh["checks"], first["checks"]);
}
