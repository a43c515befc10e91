//! Non-retarded van der Waals torque between two uniaxial plates across a
//! dielectric gap.
//!
//! ```text
//! τ(L, θ) = −ħ S w̄ sin(2θ) / (64 π² L²)
//! w̄ = ∫₀^∞ dζ (ε₂∥−ε₂⊥)(ε₁∥−ε₁⊥) ε₃² / ((ε₁⊥²−ε₃²)(ε₂⊥²−ε₃²))
//!          · ln(1 − (ε₁⊥−ε₃)(ε₂⊥−ε₃) / ((ε₁⊥+ε₃)(ε₂⊥+ε₃)))
//! ```
//!
//! All responses are evaluated at iζ. w̄ carries no dependence on L or θ.

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::materials::{MaterialError, MaterialModel};
use crate::quadrature::{integrate_semi_infinite, QuadratureError, QuadratureResult, QuadratureSettings};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorqueError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid torque problem: {0}")]
    InvalidProblem(String),
}

/// One slab's principal-axis responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialPlate {
    pub par: MaterialModel,
    pub perp: MaterialModel,
}

impl UniaxialPlate {
    pub fn new(par: MaterialModel, perp: MaterialModel) -> Self {
        Self { par, perp }
    }

    pub fn isotropic(model: MaterialModel) -> Self {
        Self { par: model, perp: model }
    }

    /// Exchanges the roles of the distinguished and perpendicular axes.
    pub fn swapped(&self) -> Self {
        Self {
            par: self.perp,
            perp: self.par,
        }
    }

    pub fn with_cyclotron_ratio(&self, ratio: f64) -> Result<Self, MaterialError> {
        Ok(Self {
            par: self.par.with_cyclotron_ratio(ratio)?,
            perp: self.perp.with_cyclotron_ratio(ratio)?,
        })
    }

    pub fn plasma_freq(&self) -> Option<f64> {
        self.par
            .magneto_drude()
            .or_else(|| self.perp.magneto_drude())
            .map(|p| p.plasma_freq)
    }

    pub fn cyclotron_ratio(&self) -> Option<f64> {
        self.par
            .magneto_drude()
            .or_else(|| self.perp.magneto_drude())
            .map(|p| p.cyclotron_ratio())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueProblem {
    pub plate1: UniaxialPlate,
    /// Rotated by `angle` relative to plate 1.
    pub plate2: UniaxialPlate,
    pub gap: MaterialModel,
    /// L, metres.
    pub separation: f64,
    /// θ, radians.
    pub angle: f64,
    /// S, m².
    pub area: f64,
    pub quadrature: QuadratureSettings,
    /// Kelvin; only used by [`check_validity`].
    pub temperature: f64,
}

/// Reference frequency for the quadrature transform when no plate carries
/// a plasma frequency, rad/s.
pub const DEFAULT_SCALE_FREQ: f64 = 1e15;
pub const DEFAULT_TEMPERATURE: f64 = 300.0;

impl TorqueProblem {
    /// Unit area, 300 K, default quadrature centered on the first plasma
    /// frequency found among the plates.
    pub fn new(
        plate1: UniaxialPlate,
        plate2: UniaxialPlate,
        gap: MaterialModel,
        separation: f64,
        angle: f64,
    ) -> Result<Self, TorqueError> {
        let scale = plate2
            .plasma_freq()
            .or_else(|| plate1.plasma_freq())
            .unwrap_or(DEFAULT_SCALE_FREQ);
        let prob = Self {
            plate1,
            plate2,
            gap,
            separation,
            angle,
            area: 1.0,
            quadrature: QuadratureSettings::with_scale(scale),
            temperature: DEFAULT_TEMPERATURE,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<(), TorqueError> {
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(TorqueError::InvalidProblem(format!("separation must be > 0, got {}", self.separation)));
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return Err(TorqueError::InvalidProblem(format!("area must be > 0, got {}", self.area)));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(TorqueError::InvalidProblem(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if !self.angle.is_finite() {
            return Err(TorqueError::InvalidProblem("angle must be finite".into()));
        }
        self.quadrature.validate()?;
        Ok(())
    }

    /// Applies Ω_c to every magneto-Drude response in both plates and the gap.
    pub fn with_cyclotron_ratio(&self, ratio: f64) -> Result<Self, TorqueError> {
        Ok(Self {
            plate1: self.plate1.with_cyclotron_ratio(ratio)?,
            plate2: self.plate2.with_cyclotron_ratio(ratio)?,
            gap: self.gap.with_cyclotron_ratio(ratio)?,
            ..*self
        })
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self, TorqueError> {
        let p = Self { separation, ..*self };
        p.validate()?;
        Ok(p)
    }

    pub fn with_angle(&self, angle: f64) -> Result<Self, TorqueError> {
        let p = Self { angle, ..*self };
        p.validate()?;
        Ok(p)
    }

    /// Ω_c of the first magneto-Drude plate, zero if there is none.
    pub fn cyclotron_ratio(&self) -> f64 {
        self.plate2
            .cyclotron_ratio()
            .or_else(|| self.plate1.cyclotron_ratio())
            .unwrap_or(0.0)
    }
}

/// The six responses entering the integrand at one ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Responses {
    pub eps1_par: f64,
    pub eps1_perp: f64,
    pub eps2_par: f64,
    pub eps2_perp: f64,
    pub eps_gap: f64,
}

impl Responses {
    pub fn at(prob: &TorqueProblem, zeta: f64) -> Result<Self, TorqueError> {
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(MaterialError::NonPositiveFrequency(zeta).into());
        }
        Ok(Self::unchecked(prob, zeta))
    }

    fn unchecked(prob: &TorqueProblem, zeta: f64) -> Self {
        Self {
            eps1_par: prob.plate1.par.value_at(zeta),
            eps1_perp: prob.plate1.perp.value_at(zeta),
            eps2_par: prob.plate2.par.value_at(zeta),
            eps2_perp: prob.plate2.perp.value_at(zeta),
            eps_gap: prob.gap.value_at(zeta),
        }
    }

    /// Integrand value.
    ///
    /// With `x_i = (ε_i⊥−ε₃)/(ε_i⊥+ε₃)` the expression is rewritten as
    /// `Δ₁Δ₂ε₃² / ((ε₁⊥+ε₃)²(ε₂⊥+ε₃)²) · ln(1−x₁x₂)/(x₁x₂)`, which is finite
    /// when either perpendicular response matches the gap.
    pub fn integrand(&self) -> f64 {
        let e3 = self.eps_gap;
        let d1 = self.eps1_par - self.eps1_perp;
        let d2 = self.eps2_par - self.eps2_perp;
        if d1 == 0.0 || d2 == 0.0 {
            return 0.0;
        }
        let s1 = self.eps1_perp + e3;
        let s2 = self.eps2_perp + e3;
        let y = ((self.eps1_perp - e3) / s1) * ((self.eps2_perp - e3) / s2);
        let prefactor = d1 * d2 * e3 * e3 / (s1 * s1 * s2 * s2);
        prefactor * log1m_over(y)
    }
}

/// Below this |x₁x₂| the series branch of ln(1−y)/y is used.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// ln(1−y)/y with its analytic value −1 at y = 0.
fn log1m_over(y: f64) -> f64 {
    if y.abs() < SERIES_THRESHOLD {
        -(1.0 + y * (0.5 + y / 3.0))
    } else {
        (-y).ln_1p() / y
    }
}

pub fn integrand(prob: &TorqueProblem, zeta: f64) -> Result<f64, TorqueError> {
    Ok(Responses::at(prob, zeta)?.integrand())
}

/// w̄ in rad/s, with the quadrature metadata.
pub fn wbar(prob: &TorqueProblem) -> Result<QuadratureResult, TorqueError> {
    prob.validate()?;
    let result = integrate_semi_infinite(|z| Responses::unchecked(prob, z).integrand(), &prob.quadrature)?;
    Ok(result)
}

/// sin(2θ), exactly zero when θ is a multiple of π/2 to within rounding.
fn sin_2theta(theta: f64) -> f64 {
    let r = 2.0 * theta / PI;
    let k = r.round();
    if k != 0.0 && (r - k).abs() <= 4.0 * f64::EPSILON * k.abs() {
        0.0
    } else {
        (2.0 * theta).sin()
    }
}

/// cos(2θ), exactly zero when θ is an odd multiple of π/4 to within rounding.
fn cos_2theta(theta: f64) -> f64 {
    let r = 2.0 * theta / PI - 0.5;
    let k = r.round();
    if (r - k).abs() <= 4.0 * f64::EPSILON * (k.abs() + 0.5) {
        0.0
    } else {
        (2.0 * theta).cos()
    }
}

/// ħS/(64π²L²).
fn torque_prefactor(prob: &TorqueProblem) -> f64 {
    HBAR * prob.area / (64.0 * PI * PI * prob.separation * prob.separation)
}

/// τ for a precomputed w̄, N·m.
pub fn torque_from_wbar(prob: &TorqueProblem, wbar: f64) -> f64 {
    -torque_prefactor(prob) * wbar * sin_2theta(prob.angle)
}

/// θ-dependent free energy for a precomputed w̄, J.
pub fn angular_free_energy_from_wbar(prob: &TorqueProblem, wbar: f64) -> f64 {
    -0.5 * torque_prefactor(prob) * wbar * cos_2theta(prob.angle)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueEvaluation {
    /// N·m.
    pub torque: f64,
    /// N·m per m², numerically N/m.
    pub torque_per_area: f64,
    pub wbar: QuadratureResult,
    pub validity: ValidityReport,
}

pub fn evaluate(prob: &TorqueProblem) -> Result<TorqueEvaluation, TorqueError> {
    let w = wbar(prob)?;
    let torque = torque_from_wbar(prob, w.value);
    Ok(TorqueEvaluation {
        torque,
        torque_per_area: torque / prob.area,
        wbar: w,
        validity: check_validity(prob),
    })
}

/// τ(L, θ), N·m.
pub fn torque(prob: &TorqueProblem) -> Result<f64, TorqueError> {
    Ok(evaluate(prob)?.torque)
}

pub fn torque_per_area(prob: &TorqueProblem) -> Result<f64, TorqueError> {
    Ok(evaluate(prob)?.torque_per_area)
}

/// −ħS w̄ cos(2θ) / (128π²L²), so that τ = −∂F/∂θ.
pub fn angular_free_energy(prob: &TorqueProblem) -> Result<f64, TorqueError> {
    let w = wbar(prob)?;
    Ok(angular_free_energy_from_wbar(prob, w.value))
}

/// Fraction of ħc/(k_B T) above which the non-retarded, zero-temperature
/// treatment is flagged.
pub const VALIDITY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub valid: bool,
    pub separation: f64,
    pub temperature: f64,
    /// 0.1·ħc/(k_B T) in metres; infinite at T = 0.
    pub bound: f64,
}

pub fn thermal_length(temperature: f64) -> f64 {
    if temperature == 0.0 {
        f64::INFINITY
    } else {
        HBAR * SPEED_OF_LIGHT / (BOLTZMANN * temperature)
    }
}

pub fn check_validity(prob: &TorqueProblem) -> ValidityReport {
    let bound = VALIDITY_FRACTION * thermal_length(prob.temperature);
    ValidityReport {
        valid: prob.separation <= bound,
        separation: prob.separation,
        temperature: prob.temperature,
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{MagnetoDrudeParams, TwoOscillatorParams};
    use approx::assert_relative_eq;

    fn drude_plate(ratio: f64) -> UniaxialPlate {
        let wp = 6.74e13;
        let p = MagnetoDrudeParams::new(15.8, wp, wp / 100.0, ratio * wp).unwrap();
        UniaxialPlate::new(MaterialModel::MagnetoDrudeParallel(p), MaterialModel::MagnetoDrudeVoigtPerp(p))
    }

    fn osc(c_ir: f64, w_ir: f64, c_uv: f64, w_uv: f64) -> MaterialModel {
        MaterialModel::TwoOscillator(TwoOscillatorParams::new(c_ir, w_ir, c_uv, w_uv).unwrap())
    }

    fn birefringent() -> UniaxialPlate {
        UniaxialPlate::new(osc(5.0, 2.7e14, 1.2, 2.1e16), osc(6.0, 2.7e14, 1.7, 1.9e16))
    }

    fn problem(ratio: f64) -> TorqueProblem {
        let gap = osc(23.84, 6.6e14, 0.852, 1.1e16);
        TorqueProblem::new(birefringent(), drude_plate(ratio), gap, 100e-9, PI / 4.0).unwrap()
    }

    fn literal(r: &Responses) -> f64 {
        let e3 = r.eps_gap;
        (r.eps2_par - r.eps2_perp) * (r.eps1_par - r.eps1_perp) * e3 * e3
            / ((r.eps1_perp.powi(2) - e3 * e3) * (r.eps2_perp.powi(2) - e3 * e3))
            * (1.0 - (r.eps1_perp - e3) * (r.eps2_perp - e3) / ((r.eps1_perp + e3) * (r.eps2_perp + e3))).ln()
    }

    #[test]
    fn isotropic_plates_give_zero_integrand() {
        let iso = UniaxialPlate::isotropic(osc(3.0, 1e14, 1.0, 1e16));
        let mut prob = problem(0.2);
        prob.plate1 = iso;
        for z in [1e11, 1e13, 1e15, 1e17] {
            assert_eq!(integrand(&prob, z).unwrap(), 0.0);
        }
        let prob = problem(0.0);
        for z in [1e11, 1e13, 1e15, 1e17] {
            assert_eq!(integrand(&prob, z).unwrap(), 0.0);
        }
    }

    #[test]
    fn integrand_matches_literal_formula() {
        let prob = problem(0.2);
        let wp = 6.74e13;
        let r = Responses::at(&prob, wp).unwrap();
        let direct = Responses {
            eps1_par: prob.plate1.par.eval(wp).unwrap(),
            eps1_perp: prob.plate1.perp.eval(wp).unwrap(),
            eps2_par: prob.plate2.par.eval(wp).unwrap(),
            eps2_perp: prob.plate2.perp.eval(wp).unwrap(),
            eps_gap: prob.gap.eval(wp).unwrap(),
        };
        assert_eq!(r, direct);
        assert_relative_eq!(integrand(&prob, wp).unwrap(), literal(&direct), max_relative = 1e-12);
    }

    #[test]
    fn index_matching_is_finite_and_continuous() {
        let base = Responses {
            eps1_par: 3.0,
            eps1_perp: 2.0,
            eps2_par: 5.0,
            eps2_perp: 4.0,
            eps_gap: 2.0,
        };
        let at_match = base.integrand();
        assert!(at_match.is_finite());
        // limit: Δ₁Δ₂ε₃²/((2ε₃)²(ε₂⊥+ε₃)²)·(−1)
        assert_relative_eq!(at_match, -(1.0 * 1.0 * 4.0) / (16.0 * 36.0), max_relative = 1e-15);
        for h in [1e-3, 1e-5, 1e-7, 1e-9, 1e-11] {
            let near = Responses { eps1_perp: 2.0 + h, ..base }.integrand();
            assert!((near - at_match).abs() <= 2.0 * h * at_match.abs().max(1.0));
            if h >= 1e-5 {
                let lit = literal(&Responses { eps1_perp: 2.0 + h, ..base });
                assert_relative_eq!(near, lit, max_relative = 1e-6);
            }
        }
        let both = Responses { eps2_perp: 2.0, ..base };
        assert!(both.integrand().is_finite());
    }

    #[test]
    fn zeta_domain() {
        assert!(integrand(&problem(0.2), 0.0).is_err());
        assert!(integrand(&problem(0.2), -1.0).is_err());
    }

    #[test]
    fn zero_field_wbar_vanishes() {
        let w = wbar(&problem(0.0)).unwrap();
        assert!(w.converged);
        assert_eq!(w.value, 0.0);
    }

    #[test]
    fn separability_and_special_angles() {
        let prob = problem(0.2);
        let w = wbar(&prob).unwrap().value;
        for theta in [0.0, PI / 2.0, PI] {
            assert_eq!(torque_from_wbar(&prob.with_angle(theta).unwrap(), w), 0.0);
        }
        let ratios: Vec<f64> = [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0]
            .iter()
            .map(|&t| torque_from_wbar(&prob.with_angle(t).unwrap(), w) / (2.0 * t).sin())
            .collect();
        for r in &ratios {
            assert_relative_eq!(*r, ratios[0], max_relative = 1e-9);
        }
        assert_eq!(angular_free_energy_from_wbar(&prob, w), 0.0);
    }

    #[test]
    fn odd_about_right_angle() {
        let prob = problem(0.2);
        let w = wbar(&prob).unwrap().value;
        for theta in [0.1, 0.4, 0.9, 1.3] {
            let a = torque_from_wbar(&prob.with_angle(theta).unwrap(), w);
            let b = torque_from_wbar(&prob.with_angle(PI - theta).unwrap(), w);
            assert_relative_eq!(a, -b, max_relative = 1e-9);
            assert_eq!(a.signum(), -(w * (2.0 * theta).sin()).signum());
        }
    }

    #[test]
    fn area_independence() {
        let prob = problem(0.2);
        let a = torque_per_area(&prob).unwrap();
        let b = torque_per_area(&TorqueProblem { area: 2.0, ..prob }).unwrap();
        assert!((a - b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn free_energy_finite_difference() {
        let prob = problem(0.2);
        let w = wbar(&prob).unwrap().value;
        let h = 1e-6;
        for theta in [0.3, 0.7, 1.1, 2.0] {
            let f = |t: f64| angular_free_energy_from_wbar(&prob.with_angle(t).unwrap(), w);
            let fd = -(f(theta + h) - f(theta - h)) / (2.0 * h);
            let tau = torque_from_wbar(&prob.with_angle(theta).unwrap(), w);
            assert_relative_eq!(fd, tau, max_relative = 1e-6);
            assert_relative_eq!(f(theta + PI), f(theta), max_relative = 1e-12);
        }
    }

    #[test]
    fn validity_threshold() {
        // ħc/k_B at 300 K = 7.63 µm.
        assert_relative_eq!(thermal_length(300.0), 7.6335e-6, max_relative = 1e-4);
        let prob = problem(0.2);
        let r = check_validity(&prob);
        assert!(r.valid);
        assert_relative_eq!(r.bound, 0.76335e-6, max_relative = 1e-4);
        assert!(!check_validity(&prob.with_separation(5e-6).unwrap()).valid);
        let cold = TorqueProblem { temperature: 0.0, ..prob.with_separation(1.0).unwrap() };
        assert!(check_validity(&cold).valid);
    }

    #[test]
    fn invalid_problems() {
        let prob = problem(0.2);
        assert!(prob.with_separation(0.0).is_err());
        assert!(TorqueProblem { area: -1.0, ..prob }.validate().is_err());
        assert!(TorqueProblem { temperature: -1.0, ..prob }.validate().is_err());
        assert!(prob.with_angle(f64::NAN).is_err());
    }

    #[test]
    fn plate_label_symmetry() {
        // w̄ is symmetric under exchanging the two plates.
        let prob = problem(0.2);
        let swapped = TorqueProblem {
            plate1: prob.plate2,
            plate2: prob.plate1,
            ..prob
        };
        assert_relative_eq!(wbar(&prob).unwrap().value, wbar(&swapped).unwrap().value, max_relative = 1e-7);
    }
}
