use std::path::PathBuf;
use std::process::{Command, Output};

fn materials() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../materials")
}

fn mat(name: &str) -> String {
    materials().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdwtorque")).args(args).output().unwrap()
}

fn problem_args() -> Vec<String> {
    [
        "--plate1".into(),
        mat("calcite.mat"),
        "--plate2".into(),
        mat("insb.mat"),
        "--gap".into(),
        mat("ethanol.mat"),
    ]
    .into()
}

fn with(extra: &[&str], cmd: &str) -> Output {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(problem_args());
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["torque", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(with(&["--L", "100"], "torque").status.code(), Some(1));
    assert_eq!(with(&["--bfield", "1T", "--omega-c", "0.2"], "torque").status.code(), Some(1));
    assert_eq!(with(&["--bfield", "-1T"], "torque").status.code(), Some(1));
    let o = run(&["torque", "--plate1", "/nonexistent.mat", "--plate2", "x", "--gap", "y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonexistent"));
}

#[test]
fn torque_prints_fields() {
    let o = with(&["--omega-c", "0.2", "--L", "100nm", "--theta", "45deg"], "torque");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("torque_per_area_N_per_m")).unwrap();
    let v: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(v < 0.0 && v.abs() > 1e-13 && v.abs() < 1e-10, "{v}");
    assert!(out.contains("converged = true"));
}

#[test]
fn bfield_is_converted() {
    let o = with(&["--bfield", "1T"], "torque");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("omega_c_ratio = 0.186"), "{out}");
    let b: f64 = out
        .lines()
        .find(|l| l.starts_with("bfield_T"))
        .and_then(|l| l.split('=').nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((b - 1.0).abs() < 1e-12);
}

#[test]
fn non_convergence_exits_two() {
    let o = with(&["--omega-c", "0.2", "--max-evals", "20"], "torque");
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("converged = false"));
}

#[test]
fn large_separation_warns() {
    let o = with(&["--omega-c", "0.2", "--L", "2um"], "torque");
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-retarded"));
    assert!(stdout(&o).contains("valid_nonretarded = false"));
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let o = with(
        &[
            "--omega-c",
            "0.2",
            "--variable",
            "theta",
            "--grid",
            "0:1pi:9",
            "--out",
            csv.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ],
        "sweep",
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[0].starts_with("theta_rad,"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn sweep_separation_and_field() {
    let o = with(&["--omega-c", "0.2", "--variable", "separation", "--grid", "50nm,100nm"], "sweep");
    assert_eq!(o.status.code(), Some(0));
    let o = with(&["--variable", "bfield", "--grid", "0.5T:2T:4"], "sweep");
    assert_eq!(o.status.code(), Some(0));
    let data: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(data.len(), 5);
    let o = with(&["--variable", "theta", "--grid", "1:0:3"], "sweep");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tensor_and_delta() {
    let o = run(&["tensor", "--plate1", &mat("calcite.mat"), "--plate2", &mat("insb.mat"), "--omega-c", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("plate1") && out.contains("eigenvalues"));

    let o = run(&["delta", "--plate", &mat("insb.mat"), "--omega-c", "0.2", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let data: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(data.len(), 6);
    assert_eq!(data[0], "zeta_over_scale,zeta_rad_per_s,eps_par,eps_perp,delta");
}

#[test]
fn reproduce_all_figures() {
    let dir = tempfile::tempdir().unwrap();
    let m = materials().display().to_string();
    let o = run(&["reproduce", "--materials", &m, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for id in ["fig2_tensor", "fig3_delta", "fig4_theta", "fig5_field"] {
        assert!(dir.path().join(format!("{id}.csv")).exists(), "{id}");
        assert!(dir.path().join(format!("{id}.svg")).exists(), "{id}");
    }
    let o = run(&["reproduce", "--figure", "7", "--materials", &m]);
    assert_eq!(o.status.code(), Some(1));
}
