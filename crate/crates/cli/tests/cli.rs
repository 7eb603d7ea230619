use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zerok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerok"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn verify_example11_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = zerok(&[
        "verify",
        shipped("example11.cfg").to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "-q",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["config_echo", "per_check", "exclusions", "wall_time_ms"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let h = &report["per_check"]["H"];
    assert!(h["max_abs"].as_f64().unwrap() <= 1e-6);
    for key in ["max_abs", "mean_abs", "worst_point", "tolerance", "pass"] {
        assert!(h.get(key).is_some(), "per_check entry lacks {key}");
    }
    assert!(report["wall_time_ms"].is_null());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,z,x1,x2,x3,x4,x5,lambda1,lambda2,lambda3,H,H2,K"));
    assert_eq!(lines.count(), 11 * 11 * 11);

    let shown = zerok(&["report", json.to_str().unwrap()]);
    assert_eq!(shown.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&shown.stdout).contains("result: PASS"));
}

#[test]
fn ode_subcommand() {
    let out = zerok(&["ode", "--c1", "0.5", "--c2", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty validity interval (c2 <= 2*c1)"));

    let out = zerok(&["ode", "--c1", "0.1", "--c2", "1", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("validity interval: (5.07671171643"));
    assert_eq!(lines[1], "v,phi,g,h,residual");
    assert_eq!(lines.len(), 6);
    for row in &lines[2..] {
        let residual: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!(residual < 1e-6);
    }
}

#[test]
fn config_errors_exit_2_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(dir.path(), "dup.cfg", "[family]\nname = example12\nc1 = 0.1\nc2 = 1\nc1 = 0.2\n");
    let out = zerok(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));

    let p = write_config(dir.path(), "empty.cfg", "[family]\nname = example12\nc1 = 0.5\nc2 = 1\n");
    let out = zerok(&["verify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty validity interval"));

    let p = write_config(dir.path(), "na.cfg", "[family]\nname = cartan\n[checks]\nrun = ex12_system\n");
    assert_eq!(zerok(&["verify", p.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(zerok(&["verify", "/nonexistent/x.cfg"]).status.code(), Some(2));
    assert_eq!(zerok(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn boundary_grid_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "edge.cfg",
        "[family]\nname = example12\nc1 = 0.1\nc2 = 1\n[grid.v]\nmin = 0.00507\nmax = 2.2975\ncount = 5\n[checks]\nrun = H\n",
    );
    let out = zerok(&["verify", p.to_str().unwrap(), "-q"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sample_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("cloud.csv");
    let out = zerok(&["sample", shipped("cartan.cfg").to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_path).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row.len(), 14);
    let norm: f64 = row[3..8].iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() < 1e-12);
    assert!((row[8] - 3f64.sqrt()).abs() < 1e-8);
}

#[test]
fn library_entry_point() {
    assert_eq!(zerok_cli::run(["zerok", "--help"]), 0);
    assert_eq!(zerok_cli::run(["zerok", "ode", "--c1", "0.3", "--c2", "0.5"]), 2);
}
