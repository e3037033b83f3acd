use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cre")).args(args).output().expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn lie_preset_passes_reflection_and_yang_baxter_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = cre(&["verify", "--preset", "sl3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path());
    for name in ["cre_defect", "cybe_defect", "mcybe_defect"] {
        assert_eq!(check(&r, name)["pass"], true);
    }
    assert_eq!(r["pass"], true);
}

#[test]
fn toda_preset_writes_trajectory_and_passes_isospectrality() {
    let dir = tempfile::tempdir().unwrap();
    let out = cre(&["simulate", "--preset", "toda_coxeter", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path());
    assert_eq!(check(&r, "isospectral_rk4")["pass"], true);
    let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,p_1,p_2,q_1,q_2,"));
    let inv = fs::read_to_string(dir.path().join("invariants.csv")).unwrap();
    assert!(inv.starts_with("t,eig_1,eig_2,eig_3,trT,trT2,trT3\n"));
    // 17 significant digits: one leading digit and 16 after the point
    let first = traj.lines().nth(1).unwrap();
    for field in first.split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{field}");
    }
    assert!(!traj.contains('\r'));
}

#[test]
fn same_config_and_seed_give_identical_artifacts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = cre(&["simulate", "--preset", "gl2_loop_xxz", "--seed", "11", "--out", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["report.json", "trajectory.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_changes_digest() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    cre(&["verify", "--preset", "ac07", "--out", a.path().to_str().unwrap()]);
    cre(&["verify", "--preset", "ac07", "--seed", "5", "--out", b.path().to_str().unwrap()]);
    assert_ne!(report(a.path())["config_digest"], report(b.path())["config_digest"]);
}

#[test]
fn empty_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    fs::write(&cfg, "").unwrap();
    let out = cre(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 1"));
}

#[test]
fn unknown_key_reports_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "kind = \"xxz\"\n\n[xxz]\nsites = 2\n  colour = 1\n").unwrap();
    let out = cre(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5, column 3"));
}

#[test]
fn tightened_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = cre(&["verify", "--preset", "ac10", "--tol", "tau_drift=1e-14", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path());
    assert_eq!(r["pass"], false);
    assert_eq!(check(&r, "tau_drift")["tolerance"], 1e-14);
    assert_eq!(check(&r, "omega_drift")["pass"], true);
}

#[test]
fn unknown_tolerance_name_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = cre(&["verify", "--preset", "ac11", "--tol", "nonsense=1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_name_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pole.toml");
    fs::write(&cfg, "kind = \"xxz\"\n[xxz]\nsites = 1\nz = 1.2\nw = 1.2\nt_final = 0.1\ndt = 0.05\n").unwrap();
    let out = cre(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path());
    let c = check(&r, "reflection_defect");
    assert_eq!(c["pass"], false);
    assert!(c["defect"].is_null());
    assert!(c["error"].as_str().unwrap().contains("pole"));
}

#[test]
fn presets_listing_is_stable() {
    let a = cre(&["presets"]);
    let b = cre(&["presets"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["sl2", "sl3", "gl2_loop_xxz", "toda_coxeter", "ac01", "ac11"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn calibrate_reports_kappa() {
    let out = cre(&["calibrate", "--n", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["kappa"].as_f64().unwrap() + 2.0).abs() < 1e-10);
}

#[test]
fn simulate_rejects_lie_configs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cre(&["simulate", "--preset", "sl2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
