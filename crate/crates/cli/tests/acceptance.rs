//! Acceptance checks for the case study. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use vdw_torque::figures::CaseStudy;
use vdw_torque::materials::{cyclotron_frequency, field_for_ratio};
use vdw_torque::sweep::linspace;
use vdw_torque::torque::Responses;
use vdw_torque::{
    angular_free_energy, eval_eps_parallel, eval_eps_voigt_perp, evaluate, omega_c_ratio, plasma_frequency,
    plate2_tensor, MagnetoDrudeParams, TorqueProblem,
};

type Check = Result<String, String>;

fn materials_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../materials")
}

fn case() -> CaseStudy {
    CaseStudy::load(materials_dir()).expect("shipped materials")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_field_mapping() -> Check {
    let case = case();
    let carriers = *case.insb.carriers().unwrap();
    let per_tesla = omega_c_ratio(&carriers.with_field(1.0).unwrap());
    let mut detail = format!("Omega_c per tesla = {per_tesla:.5} (target 0.1862, 0.5%)");
    let mut ok = rel(per_tesla, 0.1862) < 5e-3;
    for (b, target) in [(0.5, 0.1), (1.0, 0.2), (2.1, 0.4)] {
        let r = omega_c_ratio(&carriers.with_field(b).unwrap());
        let e = rel(r, target);
        ok &= e < 0.07;
        detail += &format!("; {b} T -> {r:.4} ({:.1}% from {target})", 100.0 * e);
    }
    let wc = cyclotron_frequency(&carriers.with_field(1.0).unwrap());
    ok &= rel(wc / plasma_frequency(&carriers), per_tesla) < 1e-14;
    ok &= rel(field_for_ratio(&carriers, per_tesla), 1.0) < 1e-14;
    ensure(ok, detail)
}

fn c2_zero_field() -> Check {
    let case = case();
    let base = case.problem(0.0, 100e-9, 0.0).unwrap();
    let mut worst = 0.0f64;
    for theta in linspace(0.0, PI, 129) {
        let t = evaluate(&base.with_angle(theta).unwrap()).unwrap().torque_per_area;
        worst = worst.max(t.abs());
    }
    ensure(worst < 1e-18, format!("max |tau/S| at B = 0 over 129 angles = {worst:e} N/m"))
}

fn c3_sin2theta() -> Check {
    let case = case();
    let mut detail = String::new();
    let mut ok = true;
    for ratio in [0.1, 0.2, 0.4] {
        let base = case.problem(ratio, 100e-9, 0.0).unwrap();
        let thetas = linspace(0.0, PI, 129);
        let taus: Vec<f64> = thetas
            .iter()
            .map(|&t| evaluate(&base.with_angle(t).unwrap()).unwrap().torque_per_area)
            .collect();
        let (num, den) = thetas.iter().zip(&taus).fold((0.0, 0.0), |(n, d), (&t, &tau)| {
            let s = (2.0 * t).sin();
            (n + s * tau, d + s * s)
        });
        let amp = num / den;
        let resid = thetas
            .iter()
            .zip(&taus)
            .map(|(&t, &tau)| (tau - amp * (2.0 * t).sin()).abs())
            .fold(0.0, f64::max)
            / amp.abs();
        ok &= resid < 1e-9 && amp != 0.0;
        detail += &format!("Omega_c {ratio}: A = {amp:.4e} N/m, residual {resid:.1e}; ");
    }
    ensure(ok, detail.trim_end_matches("; ").to_string())
}

fn c4_inverse_square() -> Check {
    let case = case();
    let mut detail = String::new();
    let mut ok = true;
    for ratio in [0.1, 0.2, 0.4] {
        let near = evaluate(&case.problem(ratio, 50e-9, PI / 4.0).unwrap()).unwrap().torque;
        let far = evaluate(&case.problem(ratio, 100e-9, PI / 4.0).unwrap()).unwrap().torque;
        let q = near / far;
        ok &= (q - 4.0).abs() < 1e-9;
        detail += &format!("Omega_c {ratio}: tau(50nm)/tau(100nm) = {q:.12}; ");
    }
    ensure(ok, detail.trim_end_matches("; ").to_string())
}

fn c5_monotone() -> Check {
    let case = case();
    let mags: Vec<f64> = linspace(0.05, 0.45, 20)
        .into_iter()
        .map(|r| evaluate(&case.problem(r, 100e-9, PI / 4.0).unwrap()).unwrap().torque_per_area.abs())
        .collect();
    let ok = mags.windows(2).all(|w| w[1] > w[0]);
    ensure(
        ok,
        format!(
            "|tau/S| over 20 ratios 0.05..0.45: {:.3e} -> {:.3e}, strictly increasing = {ok}",
            mags[0],
            mags[19]
        ),
    )
}

fn trapezoid_wbar(prob: &TorqueProblem) -> f64 {
    let s = prob.quadrature.scale_freq;
    let n = 1_000_000usize;
    let (a, b) = (-20.0f64, 20.0f64);
    let h = (b - a) / n as f64;
    let f = |u: f64| {
        let z = s * u.exp();
        z * Responses::at(prob, z).unwrap().integrand()
    };
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + i as f64 * h);
    }
    sum * h
}

fn c6_oracle() -> Check {
    let case = case();
    let mut detail = String::new();
    let mut ok = true;
    for ratio in [0.1, 0.2, 0.4] {
        let prob = case.problem(ratio, 100e-9, PI / 4.0).unwrap();
        let q = evaluate(&prob).unwrap().wbar;
        let oracle = trapezoid_wbar(&prob);
        let e = rel(q.value, oracle);
        ok &= e < 1e-6 && q.converged;
        detail += &format!("Omega_c {ratio}: wbar = {:.6e} rad/s, rel diff {e:.1e}; ", q.value);
    }
    ensure(ok, detail.trim_end_matches("; ").to_string())
}

fn c7_free_energy() -> Check {
    let case = case();
    let base = case.problem(0.2, 100e-9, 0.0).unwrap();
    let h = 1e-6;
    let amp = evaluate(&base.with_angle(PI / 4.0).unwrap()).unwrap().torque.abs();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let theta = rng.random_range(0.0..PI);
        let fp = angular_free_energy(&base.with_angle(theta + h).unwrap()).unwrap();
        let fm = angular_free_energy(&base.with_angle(theta - h).unwrap()).unwrap();
        let tau = evaluate(&base.with_angle(theta).unwrap()).unwrap().torque;
        worst = worst.max((-(fp - fm) / (2.0 * h) - tau).abs() / amp);
    }
    ensure(worst < 1e-6, format!("max |-dF/dtheta - tau| / |tau|max over 8 angles = {worst:.1e}"))
}

fn c8_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let par = rng.random_range(1.0..100.0);
        let perp = rng.random_range(1.0..100.0);
        let theta = rng.random_range(-2.0 * PI..2.0 * PI);
        let e0 = plate2_tensor(par, perp, 0.0).eigenvalues();
        let e = plate2_tensor(par, perp, theta).eigenvalues();
        for k in 0..3 {
            worst = worst.max(rel(e[k], e0[k]));
        }
    }
    let p = MagnetoDrudeParams::new(15.8, 6.743e13, 6.743e11, 0.0).unwrap();
    let identical = vdw_torque::sweep::logspace(6.743e11, 6.743e15, 64)
        .into_iter()
        .all(|z| eval_eps_voigt_perp(&p, z).unwrap() == eval_eps_parallel(&p, z).unwrap());
    ensure(
        worst < 1e-12 && identical,
        format!("eigenvalue drift over 100 draws = {worst:.1e}; eps_yy == eps_xx at zero field on 64 points = {identical}"),
    )
}

fn c9_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, jobs: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_vdwtorque"))
            .args(["reproduce", "--figure", "4", "--jobs", jobs, "--materials"])
            .arg(materials_dir())
            .arg("--out-dir")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("exit status {}", status.status));
        }
        std::fs::read(out.join("fig4_theta.csv")).map_err(|e| e.to_string())
    };
    let a = run("a", "1")?;
    let b = run("b", "1")?;
    let c = run("c", "8")?;
    ensure(
        a == b && a == c,
        format!(
            "fig4 CSV ({} bytes): repeat identical = {}, jobs 8 == jobs 1 = {}",
            a.len(),
            a == b,
            a == c
        ),
    )
}

fn main() {
    let checks: [(&str, fn() -> Check); 9] = [
        ("field-to-ratio mapping", c1_field_mapping),
        ("zero torque at zero field", c2_zero_field),
        ("sin 2theta angular law", c3_sin2theta),
        ("inverse-square separation law", c4_inverse_square),
        ("monotone in field", c5_monotone),
        ("quadrature against trapezoid oracle", c6_oracle),
        ("torque is -dF/dtheta", c7_free_energy),
        ("tensor invariants", c8_invariants),
        ("deterministic output", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(d) => println!("criterion {}: PASS  {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
