//! Output schemas frozen against files in `tests/golden`. Set
//! `DELTAWAVE_BLESS=1` to rewrite them after an intended format change.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir(case: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(case)
}

fn run(args: &[&str], out: &Path, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deltawave"));
    cmd.args(args).arg("--out").arg(out).env_remove("DELTAWAVE_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn assert_golden(case: &str, out: &Path, files: &[&str]) {
    let dir = golden_dir(case);
    for name in files {
        let actual = std::fs::read_to_string(out.join(name)).unwrap();
        let path = dir.join(name);
        if std::env::var_os("DELTAWAVE_BLESS").is_some() {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert!(actual == expected, "{case}/{name} differs from the golden file");
    }
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn unit_coupling_row() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["coeffs", "--set", "g=5"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("coeffs_unit_coupling", tmp.path(), &["coeffs.csv", "summary.json"]);
    let t = rows(&tmp.path().join("coeffs.csv"));
    let v: Vec<f64> = t[1].iter().map(|s| s.parse().unwrap()).collect();
    // Ω = 1: T = (1 - i)/2, R = -(1 + i)/2
    assert_eq!(v[1], 1.0);
    assert!((v[2] - 0.5).abs() < 1e-15 && (v[3] + 0.5).abs() < 1e-15);
    assert!((v[4] + 0.5).abs() < 1e-15 && (v[5] + 0.5).abs() < 1e-15);
    assert!((v[8] - 1.0).abs() < 1e-15);
}

#[test]
fn coefficient_sweep_and_plot_script() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["coeffs", "--set", "sweep_count=5", "--emit-gnuplot"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("coeffs_sweep", tmp.path(), &["coeffs.csv", "plot.gp"]);
}

#[test]
fn spin_flux_field() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["spin-coeffs", "--set", "p0=2"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_golden("spin_coeffs_p2", tmp.path(), &["spin_coeffs.csv", "summary.json"]);
    let t = rows(&tmp.path().join("spin_coeffs.csv"));
    assert_eq!(t[0][10], "flux [1]");
    let flux: f64 = t[1][10].parse().unwrap();
    assert!((flux - 1.0).abs() < 1e-12);
}

#[test]
fn delay_scan_is_ordered_whatever_the_pool() {
    let tmp = tempfile::tempdir().unwrap();
    let (one, four) = (tmp.path().join("one"), tmp.path().join("four"));
    let args = ["delay-scan", "--set", "scan_count=3"];
    assert_eq!(run(&args, &one, &[("DELTAWAVE_THREADS", "1")]).status.code(), Some(0));
    assert_eq!(run(&args, &four, &[("DELTAWAVE_THREADS", "4")]).status.code(), Some(0));
    assert_golden("delay_scan", &one, &["delays.csv", "delays.json", "summary.json"]);
    for name in ["delays.csv", "delays.json", "summary.json"] {
        assert_eq!(std::fs::read(one.join(name)).unwrap(), std::fs::read(four.join(name)).unwrap(), "{name}");
    }
    // g = 0 has no reflected channel
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(one.join("delays.json")).unwrap()).unwrap();
    assert_eq!(json[1]["reports"].as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(one.join("delays.json")).unwrap();
    let at = |key: &str| text.find(&format!("\"{key}\":")).unwrap();
    let order = ["channel", "method", "v_mean", "delay", "fit_residual"].map(at);
    assert!(order.windows(2).all(|w| w[0] < w[1]), "report keys out of order");
}

#[test]
fn lattice_trace_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["evolve-grid", "--set", "t_final=0.5", "--set", "stride=1000"], tmp.path(), &[]);
    // the packet has not reached the origin yet, so the channel checks fail
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&tmp.path().join("trace.csv"));
    assert_eq!(
        t[0].join(","),
        "time [m*L^2/hbar],norm [1],prob_trans_up [1],prob_refl_up [1],prob_trans_down [1],\
         prob_refl_down [1],centroid_trans [L],centroid_refl [L]"
    );
    // header, the initial state, then every 1000th of 5000 steps
    assert_eq!(t.len(), 1 + 1 + 5);
    assert!(t[1..].iter().all(|r| r.len() == 8));
}

#[test]
fn negative_coupling_from_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("s.cfg");
    std::fs::write(&cfg, "# attractive\ng = -1\n").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["coeffs", "--config", cfg.to_str().unwrap()], &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    let t = rows(&out.join("coeffs.csv"));
    let (t_im, omega): (f64, f64) = (t[1][3].parse().unwrap(), t[1][1].parse().unwrap());
    assert!(omega < 0.0 && t_im > 0.0);
}

fn input_error(args: &[&str], envs: &[(&str, &str)]) -> String {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(args, tmp.path(), envs);
    assert_eq!(o.status.code(), Some(2), "{args:?}");
    String::from_utf8(o.stderr).unwrap()
}

#[test]
fn input_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "g = 1\n\np0 5\n").unwrap();
    let err = input_error(&["coeffs", "--config", cfg.to_str().unwrap()], &[]);
    assert!(err.contains("bad.cfg:3:"), "{err}");

    let err = input_error(&["spin-coeffs", "--set", "omega=-1"], &[]);
    assert!(err.contains("`omega`"), "{err}");
    let err = input_error(&["evolve-exact", "--set", "omega=1"], &[]);
    assert!(err.contains("`omega`"), "{err}");
    let err = input_error(&["coeffs", "--set", "colour=red"], &[]);
    assert!(err.contains("unknown key"), "{err}");
    input_error(&["scatter"], &[]);
    input_error(&["coeffs", "--config", "/nonexistent/deltawave.cfg"], &[]);
    let err = input_error(&["delay-scan"], &[("DELTAWAVE_THREADS", "many")]);
    assert!(err.contains("DELTAWAVE_THREADS"), "{err}");
}

#[test]
fn close_start_warns() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["coeffs", "--set", "x0=-5"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
