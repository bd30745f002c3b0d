use std::path::PathBuf;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliffordlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cliffordlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rs_gen_prints_the_first_signs() {
    let out = run(&["rs", "gen", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).trim(), "[1,1,1,-1]");

    let out = run(&["rs", "gen", "--n", "4", "--branch", "Q"]);
    assert_eq!(stdout_of(&out).trim(), "[1,1,-1,1]");
}

#[test]
fn matelem_reports_the_pinned_value() {
    let out = run(&[
        "matelem", "--N", "1", "--k", "0", "--symbol", "g=0,b1=1,b2=-1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["case"], "case2");
    assert_eq!(v["method"], "closed_sum");
    assert_eq!(v["n"], 1);
    let re = v["value"]["re"].as_f64().unwrap();
    let im = v["value"]["im"].as_f64().unwrap();
    assert!((re - std::f64::consts::FRAC_PI_8).abs() <= 1e-12, "re = {re}");
    assert_eq!(im, 0.0);
}

#[test]
fn matelem_oracle_agrees_with_the_closed_sum() {
    let closed = run(&["matelem", "--N", "6", "--k", "2", "--symbol", "g=1,b1=1,b2=-1"]);
    let oracle = run(&[
        "matelem", "--N", "6", "--k", "2", "--symbol", "g=1,b1=1,b2=-1", "--oracle",
    ]);
    assert_eq!(closed.status.code(), Some(0));
    assert_eq!(oracle.status.code(), Some(0));
    let c: serde_json::Value = serde_json::from_str(&stdout_of(&closed)).unwrap();
    let o: serde_json::Value = serde_json::from_str(&stdout_of(&oracle)).unwrap();
    assert_eq!(o["method"], "quadrature");
    let dc = c["value"]["re"].as_f64().unwrap() - o["value"]["re"].as_f64().unwrap();
    let di = c["value"]["im"].as_f64().unwrap() - o["value"]["im"].as_f64().unwrap();
    assert!(dc.hypot(di) <= 1e-10, "engines differ by {:e}", dc.hypot(di));
}

#[test]
fn limit_of_rho_is_one_half() {
    let out = run(&["limit", "--symbol", "g=1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["re"].as_f64().unwrap(), 0.5);
    assert_eq!(v["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn usage_errors_exit_64() {
    let out = run(&["matelem", "--N", "1", "--k", "0", "--symbol", "g=1", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(64));

    let out = run(&["matelem", "--N", "1", "--k", "0", "--symbol", "q=3"]);
    assert_eq!(out.status.code(), Some(64));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));

    let csv = scratch("nodyadic.csv");
    let out = run(&["rs", "autocorr", "--nmax", "512", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn domain_errors_exit_65() {
    let out = run(&["matelem", "--N", "0", "--k", "0", "--symbol", "g=1"]);
    assert_eq!(out.status.code(), Some(65));

    let out = run(&["matelem", "--N", "4", "--k", "9", "--symbol", "g=1"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn autocorr_sweep_writes_ladder_and_slope() {
    let csv = scratch("autocorr.csv");
    let out = run(&[
        "rs", "autocorr", "--nmax", "256", "--dyadic", "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,beta_max_abs_corr,fitted_slope");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("64,13,"));
    assert!(lines[2].starts_with("128,19,"));
    assert!(lines[3].starts_with("256,33,"));
    let slope: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!(slope < 0.74, "slope {slope}");
    // the whole-ladder fit repeats on every row
    assert!(lines[2].ends_with(lines[1].split(',').nth(2).unwrap()));
}

#[test]
fn supnorm_writes_the_documented_columns() {
    let csv = scratch("sup.csv");
    let out = run(&["harmonic", "supnorm", "--N", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,k,sup,rho_argmax,phi_argmax");
    assert_eq!(lines.len(), 4, "rows for k = 0, 2, 4");
    for (row, k) in lines[1..].iter().zip(["4,0,", "4,2,", "4,4,"]) {
        assert!(row.starts_with(k), "{row}");
    }
    assert!(csv.with_extension("csv.manifest.json").exists());
}

#[test]
fn converge_is_reproducible_and_manifested() {
    let a = scratch("conv-a.csv");
    let b = scratch("conv-b.csv");
    let args = |csv: &PathBuf| {
        vec![
            "converge".to_string(),
            "--symbol".into(),
            "g=0,b1=1,b2=-1".into(),
            "--nmin".into(),
            "16".into(),
            "--nmax".into(),
            "128".into(),
            "--csv".into(),
            csv.to_str().unwrap().to_string(),
        ]
    };
    let out_a = bin().args(args(&a)).output().unwrap();
    let out_b = bin().args(args(&b)).output().unwrap();
    assert_eq!(out_a.status.code(), Some(0));
    assert_eq!(out_b.status.code(), Some(0));
    assert_eq!(stdout_of(&out_a), stdout_of(&out_b), "fit JSON must be stable");

    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "identical invocations, identical data");
    let header = String::from_utf8(bytes_a.clone()).unwrap();
    assert!(header.starts_with("N,re,im,abs_deviation\n"));

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{}.manifest.json", a.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["tool"], "cliffordlab");
    assert_eq!(manifest["branch"], "P");
    let digest = Sha256::digest(&bytes_a);
    let expected: String = digest.iter().map(|x| format!("{x:02x}")).collect();
    assert_eq!(manifest["outputs"][0]["sha256"], expected.as_str());
    assert_eq!(
        manifest["outputs"][0]["bytes"].as_u64().unwrap(),
        bytes_a.len() as u64
    );
    assert!(manifest["timestamp_utc"].as_str().unwrap().contains('T'));
}

#[test]
fn verify_exact_suite_exits_zero() {
    let out = run(&["verify", "--suite", "exact"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("case1_identity: PASS"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}
