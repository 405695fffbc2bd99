use std::fs;
use std::path::Path;
use std::process::Command;

use hbharness::suite::{run_criterion, SuiteOptions};
use hbharness::{run_experiment, ExperimentSpec, VerifyOptions};

fn hbcert() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hbcert"))
}

fn fig1_like_spec(dir: &Path, verify: bool) -> String {
    let n = 50;
    let x0 = vec![2.0 / (n as f64).sqrt(); n];
    serde_json::json!({
        "oracle": {"kind": "moreau", "c": 5.0, "n": n},
        "methods": [
            {"method": "gradient_descent", "alpha": 1.0},
            {"method": "heavy_ball", "alpha": 1.0, "beta": 0.5},
            {"method": "heavy_ball_tv", "alpha0": 1.0},
            {"method": "nesterov", "beta": 0.3}
        ],
        "run": {"x0": x0, "iterations": 1000},
        "outputs": {
            "csv_path": dir.join("csv"),
            "svg_path": dir.join("plot.svg"),
            "verify": verify
        }
    })
    .to_string()
}

#[test]
fn run_writes_one_csv_per_method_and_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let spec_path = tmp.path().join("spec.json");
    fs::write(&spec_path, fig1_like_spec(tmp.path(), true)).unwrap();
    let out = hbcert().arg("run").arg(&spec_path).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{stdout}{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for label in [
        "gd_alpha1",
        "hb_alpha1_beta0.5",
        "hbtv_alpha01",
        "nesterov_beta0.3",
    ] {
        let csv = fs::read_to_string(tmp.path().join("csv").join(format!("{label}.csv"))).unwrap();
        assert!(csv.starts_with("k,f_gap,cesaro_gap,best_gap,grad_norm,dist,alpha_k,beta_k\n"));
        assert_eq!(csv.lines().count(), 1002);
    }
    let svg = fs::read_to_string(tmp.path().join("plot.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("csv/verification.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["pass"], true);
    // the boundary pair is plotted but carries no certificate
    let hb = &report["methods"][1];
    assert_eq!(hb["certified"], false);
    assert!(stdout.contains("no certificate"));
}

#[test]
fn run_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |sub: &str| {
        let dir = tmp.path().join(sub);
        let spec = ExperimentSpec::from_json(&fig1_like_spec(&dir, false)).unwrap();
        run_experiment(&spec, &VerifyOptions::default()).unwrap();
        fs::read(dir.join("csv/hb_alpha1_beta0.5.csv")).unwrap()
    };
    assert_eq!(read("a"), read("b"));
}

#[test]
fn tampered_run_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let spec_path = tmp.path().join("spec.json");
    fs::write(&spec_path, fig1_like_spec(tmp.path(), true)).unwrap();
    let out = hbcert()
        .args(["run", "--tamper", "0.5"])
        .arg(&spec_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("VIOLATED"));
}

#[test]
fn invalid_spec_exits_two_with_field_path() {
    let tmp = tempfile::tempdir().unwrap();
    let spec_path = tmp.path().join("spec.json");
    let text = fig1_like_spec(tmp.path(), false)
        .replace("\"iterations\":1000", "\"iterations\":1000,\"extra\":1");
    fs::write(&spec_path, text).unwrap();
    let out = hbcert().arg("run").arg(&spec_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("run") && err.contains("extra"), "{err}");

    let no_methods = fig1_like_spec(tmp.path(), false);
    let v: serde_json::Value = serde_json::from_str(&no_methods).unwrap();
    let mut v = v;
    v["methods"] = serde_json::json!([]);
    fs::write(&spec_path, v.to_string()).unwrap();
    let out = hbcert().arg("run").arg(&spec_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("methods"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        hbcert().arg("bogus").output().unwrap().status.code(),
        Some(2)
    );
    let out = hbcert()
        .args(["region", "--L", "1", "--mu", "2", "--out", "/tmp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = hbcert()
        .args(["verify", "--instances", "0", "--out", "/tmp/x.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn region_presets() {
    let tmp = tempfile::tempdir().unwrap();
    for (l, mu) in [("2", "1"), ("10", "1")] {
        let out = hbcert()
            .args(["region", "--L", l, "--mu", mu, "--res", "50", "--out"])
            .arg(tmp.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stdout).contains("0 containment violations"));
        let csv = fs::read_to_string(tmp.path().join(format!("region_L{l}_mu{mu}.csv"))).unwrap();
        assert_eq!(
            csv.lines().next(),
            Some("alpha,beta,hb_fl,hb_smu,polyak_s21")
        );
        assert_eq!(csv.lines().count(), 2501);
        assert!(tmp.path().join(format!("region_L{l}_mu{mu}.svg")).exists());
    }
}

#[test]
fn reproduce_all_figures() {
    let tmp = tempfile::tempdir().unwrap();
    for fig in ["fig1", "fig2", "fig3"] {
        let out = hbcert()
            .args(["reproduce", fig, "--out"])
            .arg(tmp.path())
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let svg = fs::read_to_string(tmp.path().join("fig1.svg")).unwrap();
    // three methods plus the O(1/k) reference
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(tmp.path().join("region_L2_mu1.svg").exists());
    assert!(tmp.path().join("region_L10_mu1.svg").exists());
    assert_eq!(
        fs::read_to_string(tmp.path().join("fig3.svg"))
            .unwrap()
            .matches("<polyline")
            .count(),
        4
    );
}

#[test]
fn minimal_verify_is_quick() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("report.json");
    let start = std::time::Instant::now();
    let out = hbcert()
        .args(["verify", "--seed", "7", "--instances", "1", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(out.status.code() == Some(0), v["pass"] == true);
    assert!(elapsed < 5.0, "{elapsed} s");
}

#[test]
fn tampered_bounds_are_reported() {
    let opts = SuiteOptions {
        instances: 3,
        tamper: 0.5,
        ..SuiteOptions::default()
    };
    for id in [1, 2, 3, 4, 5, 8] {
        let r = run_criterion(id, &opts);
        assert!(!r.pass && r.failures > 0, "criterion {id}: {}", r.detail);
    }
    let honest = SuiteOptions {
        instances: 3,
        ..SuiteOptions::default()
    };
    for id in [1, 2, 3, 4, 5, 8] {
        assert!(run_criterion(id, &honest).pass);
    }
}
