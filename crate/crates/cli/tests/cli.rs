use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spdc(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spdc"));
    cmd.args(args).env_remove("SPDC_SIM_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn spdc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn figure_writes_csv_svg_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = spdc(&["figure", "fig10", "--panel", "c", "--out", out], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("fig10_c.csv"));
    assert!(csv.contains("omega0_dt,w_split_xi=0.6"));
    assert!(read(&dir.path().join("fig10_c.svg")).contains("<svg"));
    let m: Value = serde_json::from_str(&read(&dir.path().join("fig10_c.manifest.json"))).unwrap();
    assert_eq!(m["command"], "figure");
    assert_eq!(m["outputs"][0], "fig10_c.csv");
    assert_eq!(m["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(m["setup"]["phi0_rad"], 0.5007589);
}

#[test]
fn identical_runs_give_identical_bytes_and_hashes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = spdc(&["figure", "fig13", "--panel", "a", "--format", "csv", "--out", d.path().to_str().unwrap()], &[]);
        assert_eq!(code(&o), 0);
    }
    let (ca, cb) = (read(&a.path().join("fig13_a.csv")), read(&b.path().join("fig13_a.csv")));
    assert_eq!(ca, cb);
    assert_eq!(read(&a.path().join("fig13_a.manifest.json")), read(&b.path().join("fig13_a.manifest.json")));
}

#[test]
fn thread_cap_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |d: &tempfile::TempDir| {
        vec!["figure".to_string(), "fig14".into(), "--panel".into(), "c".into(), "--format".into(), "csv".into(), "--out".into(), d.path().to_str().unwrap().into()]
    };
    let run = |d: &tempfile::TempDir, threads: &str| {
        let args = args(d);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(code(&spdc(&refs, &[("SPDC_SIM_THREADS", threads)])), 0);
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(read(&a.path().join("fig14_c.csv")), read(&b.path().join("fig14_c.csv")));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("setup.json");
    std::fs::write(&cfg, r#"{"phi0_rad": 0.6, "L_cm": 1.0}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();

    let o = spdc(&["coeffs", "--xi", "0.3", "--config", cfg, "--out", out], &[]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["phi0_rad"], 0.6);

    let o = spdc(&["coeffs", "--xi", "0.3", "--config", cfg, "--phi0", "0.7"], &[]);
    let w: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(w["phi0_rad"], 0.7);
    // length from the file still applies: T_decoh doubles with L
    let d = spdc(&["coeffs", "--xi", "0.3"], &[]);
    let d: Value = serde_json::from_slice(&d.stdout).unwrap();
    let ratio = w["omega0_T_decoh"].as_f64().unwrap() / d["omega0_T_decoh"].as_f64().unwrap();
    assert!((ratio - 2.0).abs() < 1e-12);

    let m: Value = serde_json::from_str(&read(&Path::new(out).join("coeffs.manifest.json"))).unwrap();
    assert_eq!(m["setup"]["L_cm"], 1.0);
}

#[test]
fn sweep_flags_forbidden_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = spdc(&["sweep", "theta_pm", "--axis", "phi0", "--from", "0.3", "--to", "0.7", "--points", "9", "--xi", "0.2", "--out", out], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("sweep_theta_pm_phi0.csv"));
    assert!(csv.contains("phi0,theta_plus,theta_minus,status"));
    assert!(csv.lines().any(|l| l.ends_with(",,forbidden")));
    assert!(csv.lines().any(|l| l.ends_with(",ok")));
}

#[test]
fn sweep_over_delay_accepts_negative_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = spdc(
        &["sweep", "w_split_4", "--axis", "dt", "--from", "-300", "--to", "300", "--points", "61", "--xi", "0.1", "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("sweep_w_split_4_omega0_dt.csv"));
    assert!(csv.contains("0.00000000000e0,0.00000000000e0,ok"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&spdc(&["figure", "fig99", "--out", out], &[])), 1);
    assert_eq!(code(&spdc(&["figure", "fig1", "--panel", "z", "--out", out], &[])), 1);
    assert_eq!(code(&spdc(&["figure", "fig1", "--phi0", "2.5", "--out", out], &[])), 1);
    assert_eq!(code(&spdc(&["figure", "fig1", "--scheme", "three", "--out", out], &[])), 1);
    assert_eq!(code(&spdc(&["coeffs", "--xi", "0.1"], &[("SPDC_SIM_THREADS", "zero")])), 1);
    assert_eq!(code(&spdc(&["coeffs"], &[])), 1);
    assert_eq!(code(&spdc(&["figure", "fig1", "--config", "/nonexistent/setup.json"], &[])), 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"L_cm": -1}"#).unwrap();
    let o = spdc(&["figure", "fig1", "--config", bad.to_str().unwrap(), "--out", out], &[]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("L_cm"));

    // output directory blocked by a regular file
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    assert_eq!(code(&spdc(&["figure", "fig1", "--out", blocker.join("sub").to_str().unwrap()], &[])), 3);
    assert_eq!(code(&spdc(&["--help"], &[])), 0);
}

#[test]
fn verify_reports_corrupted_crystal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"crystal":{"name":"broken","sellmeier_o":[0.5,0,0,0],"sellmeier_e":[0.4,0,0,0],"window_um":[0.19,13.29]}}"#,
    )
    .unwrap();
    let out = dir.path().join("o");
    let o = spdc(&["verify", "--quick", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("crystal_invariants"));
    let report: Value = serde_json::from_str(&read(&out.join("verify_report.json"))).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["checks"][0]["check"], "crystal_invariants");
    assert_eq!(report["checks"][0]["pass"], false);
}

#[test]
fn quick_verify_passes_on_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let start = std::time::Instant::now();
    let o = spdc(&["verify", "--quick", "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: Value = serde_json::from_str(&read(&dir.path().join("verify_report.json"))).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| !c["check"].as_str().unwrap().starts_with("monte_carlo")));
    eprintln!("verify --quick took {:?}", start.elapsed());
}
