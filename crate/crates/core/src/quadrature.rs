//! Adaptive integration over the semi-infinite imaginary-frequency axis.
//!
//! The integral over `ζ ∈ (0, ∞)` is mapped onto a new variable and
//! integrated with an embedded 7/15-point Gauss–Kronrod pair on panels that
//! are bisected worst-first. Neither endpoint is ever evaluated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand returned {value} at ζ = {zeta:e}")]
    NonFinite { zeta: f64, value: f64 },

    #[error("invalid quadrature settings: {0}")]
    InvalidSettings(&'static str),
}

/// Change of variables applied before integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    /// ζ = s·eᵘ, u ∈ (−∞, ∞), truncated once the outermost panels are negligible.
    #[default]
    LogSubstitution,
    /// ζ = s·t/(1−t), t ∈ (0, 1).
    RationalSubstitution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
    pub transform: Transform,
    /// Reference frequency (rad/s) the transform is centered on.
    pub scale_freq: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_evals: 100_000,
            transform: Transform::LogSubstitution,
            scale_freq: 1.0,
        }
    }
}

impl QuadratureSettings {
    pub fn with_scale(scale_freq: f64) -> Self {
        Self {
            scale_freq,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0) {
            return Err(QuadratureError::InvalidSettings("rel_tol must be > 0"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(QuadratureError::InvalidSettings("abs_tol must be >= 0"));
        }
        if self.max_evals < 15 {
            return Err(QuadratureError::InvalidSettings("max_evals must be >= 15"));
        }
        if !(self.scale_freq > 0.0 && self.scale_freq.is_finite()) {
            return Err(QuadratureError::InvalidSettings("scale_freq must be positive and finite"));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

// Gauss–Kronrod 7/15 abscissae and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Integrand pulled back onto the transformed variable, with eval counting.
struct Mapped<'a, F> {
    f: &'a F,
    transform: Transform,
    scale: f64,
    evals: usize,
}

impl<F: Fn(f64) -> f64> Mapped<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64, QuadratureError> {
        let (zeta, jac) = match self.transform {
            Transform::LogSubstitution => {
                let z = self.scale * x.exp();
                (z, z)
            }
            Transform::RationalSubstitution => {
                let r = 1.0 - x;
                (self.scale * x / r, self.scale / (r * r))
            }
        };
        self.evals += 1;
        if !(zeta > 0.0) || zeta.is_infinite() {
            // Node mapped outside the representable range; the integrand is
            // taken to vanish there.
            return Ok(0.0);
        }
        let value = (self.f)(zeta);
        if !value.is_finite() {
            return Err(QuadratureError::NonFinite { zeta, value });
        }
        let out = value * jac;
        Ok(if out.is_finite() { out } else { 0.0 })
    }

    fn kronrod(&mut self, lo: f64, hi: f64) -> Result<Panel, QuadratureError> {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let fc = self.eval(center)?;
        let mut res_g = fc * WG[3];
        let mut res_k = fc * WGK[7];
        let mut res_abs = res_k.abs();
        let mut fv1 = [0.0; 7];
        let mut fv2 = [0.0; 7];
        for j in 0..7 {
            let dx = half * XGK[j];
            let f1 = self.eval(center - dx)?;
            let f2 = self.eval(center + dx)?;
            fv1[j] = f1;
            fv2[j] = f2;
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
        }
        let value = res_k * half;
        res_abs *= half.abs();
        res_asc *= half.abs();
        let mut error = ((res_k - res_g) * half).abs();
        if res_asc != 0.0 && error != 0.0 {
            error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            error = error.max(50.0 * f64::EPSILON * res_abs);
        }
        Ok(Panel { lo, hi, value, error })
    }
}

const LOG_INITIAL_HALF_WIDTH: f64 = 8.0;
const LOG_INITIAL_PANELS: usize = 8;
const LOG_TAIL_WIDTH: f64 = 4.0;
const LOG_MAX_EXTENT: f64 = 300.0;

/// ∫₀^∞ f(ζ) dζ.
///
/// Hitting `max_evals` yields `converged = false`, not an error. A
/// non-finite integrand value aborts with the offending ζ.
pub fn integrate_semi_infinite<F>(f: F, settings: &QuadratureSettings) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    settings.validate()?;
    let mut mapped = Mapped {
        f: &f,
        transform: settings.transform,
        scale: settings.scale_freq,
        evals: 0,
    };

    let mut panels: Vec<Panel> = Vec::new();
    let mut truncation = 0.0;
    match settings.transform {
        Transform::LogSubstitution => {
            let w = 2.0 * LOG_INITIAL_HALF_WIDTH / LOG_INITIAL_PANELS as f64;
            for i in 0..LOG_INITIAL_PANELS {
                let lo = -LOG_INITIAL_HALF_WIDTH + w * i as f64;
                panels.push(mapped.kronrod(lo, lo + w)?);
            }
            let mut total: f64 = panels.iter().map(|p| p.value).sum();
            for dir in [1.0, -1.0] {
                let mut edge = LOG_INITIAL_HALF_WIDTH * dir;
                loop {
                    if edge.abs() >= LOG_MAX_EXTENT {
                        break;
                    }
                    let next = edge + dir * LOG_TAIL_WIDTH;
                    let (lo, hi) = if dir > 0.0 { (edge, next) } else { (next, edge) };
                    let p = mapped.kronrod(lo, hi)?;
                    panels.push(p);
                    total += p.value;
                    edge = next;
                    let contribution = p.value.abs() + p.error;
                    if contribution <= 0.1 * settings.tolerance(total) {
                        truncation += contribution;
                        break;
                    }
                }
            }
        }
        Transform::RationalSubstitution => {
            let n = 8;
            for i in 0..n {
                let lo = i as f64 / n as f64;
                let hi = (i + 1) as f64 / n as f64;
                panels.push(mapped.kronrod(lo, hi)?);
            }
        }
    }

    let mut heap: BinaryHeap<Panel> = panels.into_iter().collect();
    let sums = |heap: &BinaryHeap<Panel>| {
        let mut v: Vec<&Panel> = heap.iter().collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        v.iter().fold((0.0, 0.0), |(s, e), p| (s + p.value, e + p.error))
    };
    let (mut value, mut error) = sums(&heap);
    error += truncation;

    let mut converged = error <= settings.tolerance(value);
    while !converged {
        if mapped.evals + 30 > settings.max_evals {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Panel can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let left = mapped.kronrod(worst.lo, mid)?;
        let right = mapped.kronrod(mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if error <= settings.tolerance(value) {
            let (v, e) = sums(&heap);
            value = v;
            error = e + truncation;
            converged = error <= settings.tolerance(value);
        }
    }

    let (value, panel_error) = sums(&heap);
    let error_estimate = panel_error + truncation;
    Ok(QuadratureResult {
        value,
        error_estimate,
        evals: mapped.evals,
        converged: converged && error_estimate <= settings.tolerance(value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn settings(scale: f64) -> QuadratureSettings {
        QuadratureSettings::with_scale(scale)
    }

    #[test]
    fn exponential() {
        for transform in [Transform::LogSubstitution, Transform::RationalSubstitution] {
            let s = QuadratureSettings { transform, ..settings(1.0) };
            let r = integrate_semi_infinite(|z| (-z).exp(), &s).unwrap();
            assert!(r.converged);
            assert_relative_eq!(r.value, 1.0, max_relative = 1e-8);
            assert!(r.error_estimate <= 1e-8 * r.value.abs());
        }
    }

    #[test]
    fn gaussian_moment() {
        let r = integrate_semi_infinite(|z| z * (-z * z).exp(), &settings(1.0)).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-8);
    }

    #[test]
    fn lorentzian_tail() {
        // ∫ 1/(1+ζ²) = π/2, slow algebraic decay on both transforms
        for transform in [Transform::LogSubstitution, Transform::RationalSubstitution] {
            let s = QuadratureSettings { transform, ..settings(1.0) };
            let r = integrate_semi_infinite(|z| 1.0 / (1.0 + z * z), &s).unwrap();
            assert!(r.converged, "{transform:?}");
            assert_relative_eq!(r.value, std::f64::consts::FRAC_PI_2, max_relative = 1e-8);
        }
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_semi_infinite(|_| 0.0, &settings(1e13)).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn non_finite_integrand_reports_zeta() {
        let err = integrate_semi_infinite(|z| if z > 2.0 { f64::NAN } else { 1.0 }, &settings(1.0)).unwrap_err();
        match err {
            QuadratureError::NonFinite { zeta, value } => {
                assert!(zeta > 2.0);
                assert!(value.is_nan());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_flags_not_errors() {
        let s = QuadratureSettings {
            max_evals: 15,
            rel_tol: 1e-14,
            ..settings(1.0)
        };
        let r = integrate_semi_infinite(|z| (-z).exp() * (30.0 * z).sin().abs(), &s).unwrap();
        assert!(!r.converged);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn invalid_settings() {
        let bad = [
            QuadratureSettings { rel_tol: 0.0, ..Default::default() },
            QuadratureSettings { max_evals: 14, ..Default::default() },
            QuadratureSettings { scale_freq: 0.0, ..Default::default() },
        ];
        for s in bad {
            assert!(matches!(
                integrate_semi_infinite(|z| (-z).exp(), &s),
                Err(QuadratureError::InvalidSettings(_))
            ));
        }
    }

    fn family() -> Vec<(Box<dyn Fn(f64) -> f64>, f64)> {
        vec![
            (Box::new(|z: f64| (-z).exp()), 1.0),
            (Box::new(|z: f64| z * (-z * z).exp()), 0.5),
            (Box::new(|z: f64| 1.0 / (1.0 + z * z)), std::f64::consts::FRAC_PI_2),
            (Box::new(|z: f64| z / (1.0 + z).powi(4)), 1.0 / 6.0),
        ]
    }

    #[test]
    fn halving_tolerance_is_self_consistent() {
        for (f, _) in family() {
            let coarse = integrate_semi_infinite(&f, &QuadratureSettings { rel_tol: 1e-6, ..settings(1.0) }).unwrap();
            let fine = integrate_semi_infinite(&f, &QuadratureSettings { rel_tol: 5e-7, ..settings(1.0) }).unwrap();
            assert!((fine.value - coarse.value).abs() <= coarse.error_estimate);
        }
    }

    #[test]
    fn scale_invariance() {
        for (f, exact) in family() {
            let base = integrate_semi_infinite(&f, &settings(1.0)).unwrap().value;
            for scale in [0.1, 10.0] {
                let r = integrate_semi_infinite(&f, &settings(scale)).unwrap();
                assert_relative_eq!(r.value, base, max_relative = 1e-9);
                assert_relative_eq!(r.value, exact, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn linearity() {
        let s = settings(1.0);
        let f = |z: f64| (-z).exp();
        let g = |z: f64| 1.0 / (1.0 + z * z);
        let (a, b) = (2.5, -0.75);
        let rf = integrate_semi_infinite(f, &s).unwrap();
        let rg = integrate_semi_infinite(g, &s).unwrap();
        let rh = integrate_semi_infinite(|z| a * f(z) + b * g(z), &s).unwrap();
        let combined = a * rf.value + b * rg.value;
        let tol = a.abs() * rf.error_estimate + b.abs() * rg.error_estimate + rh.error_estimate;
        assert!((rh.value - combined).abs() <= tol);
    }
}
