use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn stepdown(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stepdown"))
        .args(args)
        .env_remove("STEPDOWN_TRIALS")
        .env_remove("STEPDOWN_WORKERS")
        .output()
        .expect("run binary")
}

fn ok(args: &[&str]) -> String {
    let out = stepdown(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stderr.is_empty());
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = stepdown(args);
    assert!(!out.status.success(), "{args:?} should fail");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

fn temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn column(csv: &str, k: usize) -> Vec<String> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(k).unwrap().to_string())
        .collect()
}

#[test]
fn constants_examples() {
    let out = ok(&[
        "constants",
        "--method",
        "fdp-improved",
        "--s",
        "100",
        "--gamma",
        "0.1",
        "--alpha",
        "0.05",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "i,alpha_i");
    assert_eq!(lines.len(), 101);
    let v1: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v1 / 2.4528e-4 - 1.0).abs() < 5e-5);

    let out = ok(&[
        "constants",
        "--method",
        "fdr-sd",
        "--s",
        "3",
        "--alpha",
        "0.05",
    ]);
    assert_eq!(column(&out, 1), ["0.0166667", "0.0375", "0.15"]);

    let out = ok(&[
        "constants",
        "--method",
        "holm",
        "--s",
        "1",
        "--alpha",
        "0.05",
    ]);
    assert_eq!(out, "i,alpha_i\n1,0.05\n");
}

#[test]
fn constants_errors() {
    assert!(fails(&["constants", "--method", "holm", "--alpha", "0.05"]).contains("--s"));
    assert!(fails(&[
        "constants",
        "--method",
        "fdp-base",
        "--s",
        "5",
        "--alpha",
        "0.05"
    ])
    .contains("gamma"));
    fails(&[
        "constants",
        "--method",
        "nope",
        "--s",
        "5",
        "--alpha",
        "0.05",
    ]);
    fails(&[
        "constants",
        "--method",
        "holm",
        "--s",
        "5",
        "--alpha",
        "1.5",
    ]);
    fails(&[
        "constants",
        "--method",
        "kfwer",
        "--s",
        "5",
        "--alpha",
        "0.05",
    ]);
    fails(&[
        "constants",
        "--method",
        "rescaled-custom",
        "--s",
        "5",
        "--gamma",
        "0.1",
        "--alpha",
        "0.05",
    ]);
}

#[test]
fn rescaled_custom_from_file() {
    let d = temp("delta\n1\n2\n3\n4\n");
    let out = ok(&[
        "constants",
        "--method",
        "rescaled-custom",
        "--s",
        "4",
        "--gamma",
        "0.25",
        "--alpha",
        "0.1",
        "--deltas",
        d.path().to_str().unwrap(),
    ]);
    let v: Vec<f64> = column(&out, 1).iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(v.len(), 4);
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn apply_holm_trace() {
    let f = temp("id,p\nh1,0.001\nh2,0.01\nh3,0.02\nh4,0.9\n");
    let path = f.path().to_str().unwrap();
    let out = ok(&[
        "apply",
        "--pvalues",
        path,
        "--method",
        "holm",
        "--alpha",
        "0.05",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["num_rejected"], 3);
    assert_eq!(v["rejected_ids"], serde_json::json!(["h1", "h2", "h3"]));
    assert_eq!(v["thresholds"].as_array().unwrap().len(), 4);
    assert_eq!(v["trace"][3]["rejected"], false);

    let up = ok(&[
        "apply",
        "--pvalues",
        path,
        "--method",
        "holm",
        "--alpha",
        "0.05",
        "--mode",
        "stepup",
    ]);
    let u: Value = serde_json::from_str(&up).unwrap();
    assert!(u["num_rejected"].as_u64() >= v["num_rejected"].as_u64());
}

#[test]
fn apply_empty_rejection_and_plain_column() {
    let f = temp("0.5\n0.6\n0.7\n");
    let out = ok(&[
        "apply",
        "--pvalues",
        f.path().to_str().unwrap(),
        "--method",
        "holm",
        "--alpha",
        "0.05",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["num_rejected"], 0);
    assert_eq!(v["rejected_ids"], serde_json::json!([]));
}

#[test]
fn apply_reports_bad_lines() {
    let f = temp("p\n0.1\n0.2\n1.2\n");
    let err = fails(&[
        "apply",
        "--pvalues",
        f.path().to_str().unwrap(),
        "--method",
        "holm",
        "--alpha",
        "0.05",
    ]);
    assert!(err.contains(":4:"), "{err}");
    let f = temp("id,p\na,0.1\nb,zero\n");
    let err = fails(&[
        "apply",
        "--pvalues",
        f.path().to_str().unwrap(),
        "--method",
        "holm",
        "--alpha",
        "0.05",
    ]);
    assert!(err.contains(":3:"), "{err}");
    fails(&[
        "apply",
        "--pvalues",
        "/nonexistent.csv",
        "--method",
        "holm",
        "--alpha",
        "0.05",
    ]);
}

#[test]
fn tables() {
    let t1 = ok(&["table", "1"]);
    assert!(t1.starts_with("s,gamma,D,C_or_bound,ratio\n"));
    assert_eq!(t1.lines().count(), 24);
    assert!(t1.contains("\n100,0.1,2.0385,3.0199,1.4814\n"));
    let t2 = ok(&["table", "2"]);
    assert!(t2.contains("\n100,0.1,13.02,29.29,2.2496\n"));
    assert!(t2.contains("\n10,0.1,3,10,3.3333\n"));
    assert!(t2.contains("\n25,0.05,6.76,20,2.9586\n"));
    fails(&["table", "3"]);
}

#[test]
fn figures() {
    let f1 = ok(&["figure", "1"]);
    assert!(f1.starts_with("i,alpha_improved,eta_prime,ratio\n"));
    let below: Vec<usize> = f1
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(3).unwrap().parse::<f64>().unwrap() < 1.0)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    let want: Vec<usize> = (7..=9).chain(15..=19).chain(25..=29).collect();
    assert_eq!(below, want);
    let f2 = ok(&["figure", "2"]);
    assert!(f2.starts_with("i,alpha_fdp,alpha_fdr_tuned_for_fdp,ratio\n"));
    let f3 = ok(&["figure", "3"]);
    assert!(f3.starts_with("i,alpha_fdp_tuned_for_fdr,alpha_fdr,ratio\n"));
    assert!(column(&f3, 3)
        .iter()
        .all(|r| r.parse::<f64>().unwrap() < 1.0));
}

fn estimate(report: &str, key: &str) -> (f64, f64) {
    let v: Value = serde_json::from_str(report).unwrap();
    let e = &v["estimates"][key];
    (e["mean"].as_f64().unwrap(), e["se"].as_f64().unwrap())
}

#[test]
fn simulate_example31() {
    let out = ok(&[
        "simulate",
        "--scenario",
        "example31",
        "--alpha",
        "0.05",
        "--gamma",
        "0.1",
        "--method",
        "fdp-base",
        "--trials",
        "200000",
        "--seed",
        "7",
    ]);
    let (m, se) = estimate(&out, "fdp_exceeds_gamma");
    assert!((m - 0.0740).abs() <= 3.0 * se, "{m} +- {se}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["trials"], 200000);
}

#[test]
fn simulate_example41() {
    let out = ok(&[
        "simulate",
        "--scenario",
        "example41",
        "--alpha",
        "0.12",
        "--method",
        "fdr-sd",
        "--trials",
        "100000",
        "--seed",
        "7",
    ]);
    let (m, se) = estimate(&out, "fdr");
    assert!(m >= 0.13 - 3.0 * se, "{m} +- {se}");
}

#[test]
fn simulate_no_true_nulls() {
    let out = ok(&[
        "simulate",
        "--scenario",
        "independent",
        "--s",
        "20",
        "--I",
        "0",
        "--alpha",
        "0.05",
        "--gamma",
        "0.1",
        "--method",
        "fdp-improved",
        "--trials",
        "2000",
    ]);
    assert_eq!(estimate(&out, "fdp_exceeds_gamma"), (0.0, 0.0));
    assert_eq!(estimate(&out, "fdr"), (0.0, 0.0));
}

#[test]
fn simulate_errors() {
    fails(&[
        "simulate",
        "--scenario",
        "nope",
        "--alpha",
        "0.05",
        "--method",
        "holm",
    ]);
    fails(&[
        "simulate",
        "--scenario",
        "independent",
        "--alpha",
        "0.05",
        "--method",
        "holm",
    ]);
    fails(&[
        "simulate",
        "--scenario",
        "example31",
        "--s",
        "50",
        "--alpha",
        "0.05",
        "--gamma",
        "0.1",
        "--method",
        "fdp-base",
    ]);
    fails(&[
        "simulate",
        "--scenario",
        "equicorrelated",
        "--s",
        "10",
        "--alpha",
        "0.05",
        "--method",
        "holm",
    ]);
    fails(&[
        "simulate",
        "--scenario",
        "example41",
        "--alpha",
        "0.5",
        "--method",
        "fdr-sd",
    ]);
}

#[test]
fn worker_count_and_env_overrides() {
    let base = [
        "simulate",
        "--scenario",
        "equicorrelated",
        "--s",
        "30",
        "--I",
        "20",
        "--rho",
        "0.5",
        "--alpha",
        "0.1",
        "--gamma",
        "0.1",
        "--method",
        "fdp-base",
        "--seed",
        "3",
    ];
    let run = |extra: &[&str], envs: &[(&str, &str)]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_stepdown"));
        cmd.args(&args)
            .env_remove("STEPDOWN_TRIALS")
            .env_remove("STEPDOWN_WORKERS");
        for (k, v) in envs {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let one = run(&["--trials", "3000", "--workers", "1"], &[]);
    let many = run(&["--trials", "3000"], &[("STEPDOWN_WORKERS", "4")]);
    assert_eq!(one, many);
    let env_trials = run(&[], &[("STEPDOWN_TRIALS", "1234")]);
    assert_eq!(env_trials["trials"], 1234);
    let flag_trials = run(&["--trials", "500"], &[("STEPDOWN_TRIALS", "1234")]);
    assert_eq!(flag_trials["trials"], 500);
    assert_eq!(run(&[], &[])["trials"], 10000);
}

#[test]
fn config_file_and_out() {
    let cfg = temp("# holm run\nmethod = holm\ns = 4\nalpha = 0.05\n");
    let out = ok(&["constants", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.lines().count(), 5);
    let flag_wins = ok(&[
        "constants",
        "--config",
        cfg.path().to_str().unwrap(),
        "--s",
        "2",
    ]);
    assert_eq!(flag_wins.lines().count(), 3);

    let bad = temp("method = holm\nsize = 4\n");
    assert!(fails(&["constants", "--config", bad.path().to_str().unwrap()]).contains("size"));

    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("t.csv");
    let stdout = ok(&["table", "1", "--out", dest.to_str().unwrap()]);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&dest).unwrap().contains("2.0385"));
}

#[test]
fn gamma_must_be_decimal() {
    let err = fails(&[
        "constants",
        "--method",
        "fdp-base",
        "--s",
        "10",
        "--gamma",
        "1/3",
        "--alpha",
        "0.05",
    ]);
    assert!(err.contains("decimal"), "{err}");
    fails(&[
        "constants",
        "--method",
        "fdp-base",
        "--s",
        "10",
        "--gamma",
        "1e-1",
        "--alpha",
        "0.05",
    ]);
    let out = ok(&[
        "constants",
        "--method",
        "fdp-base",
        "--s",
        "10",
        "--gamma",
        "0.1",
        "--alpha",
        "0.3",
    ]);
    let col = column(&out, 1);
    assert_eq!(col[8], "0.15");
    assert_eq!(col[9], "0.3");
}

#[test]
fn remark31_defaults_to_worst_case_nulls() {
    let out = ok(&[
        "simulate",
        "--scenario",
        "remark31",
        "--s",
        "100",
        "--alpha",
        "0.05",
        "--gamma",
        "0.1",
        "--method",
        "fdp-improved",
        "--trials",
        "2000",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scenario"]["true_nulls"], 55);
}
