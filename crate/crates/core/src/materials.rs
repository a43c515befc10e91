//! Dielectric responses on the imaginary frequency axis.
//!
//! Every model here is evaluated at `ω = iζ` with `ζ > 0` in rad/s, where the
//! response of a passive medium is real, positive and monotone. The
//! magneto-Drude branches describe a doped semiconductor in the Voigt
//! geometry: a static field along `z`, parallel to the slab surface.
//!
//! Continued forms used below (ω → iζ):
//!
//! ```text
//! ε_xx(iζ) = ε_L [1 + ω_p² / (ζ(ζ+γ))]
//! ε_yy(iζ) = ε_L [1 + ω_p² (ζ+γ) / (ζ((ζ+γ)² + ω_c²))]
//! ε_yz(iζ) = −ε_L ω_c ω_p² / (ζ((ζ+γ)² + ω_c²))
//! ```

use crate::constants::{
    per_cm3_to_per_m3, ELECTRON_MASS, ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("imaginary frequency must be positive, got ζ = {0} rad/s")]
    NonPositiveFrequency(f64),

    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), MaterialError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(MaterialError::InvalidParameter { name, value, reason })
    }
}

fn check_zeta(zeta: f64) -> Result<(), MaterialError> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(MaterialError::NonPositiveFrequency(zeta))
    }
}

/// Free-carrier response of a doped semiconductor in a static field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetoDrudeParams {
    /// Background (lattice) permittivity ε_L.
    pub eps_background: f64,
    /// Plasma frequency ω_p, rad/s.
    pub plasma_freq: f64,
    /// Damping γ, rad/s.
    pub damping: f64,
    /// Cyclotron frequency ω_c, rad/s. Zero means no field.
    pub cyclotron_freq: f64,
}

impl MagnetoDrudeParams {
    pub fn new(
        eps_background: f64,
        plasma_freq: f64,
        damping: f64,
        cyclotron_freq: f64,
    ) -> Result<Self, MaterialError> {
        check("eps_background", eps_background, eps_background >= 1.0, "must be >= 1")?;
        check("plasma_freq", plasma_freq, plasma_freq > 0.0, "must be > 0")?;
        check("damping", damping, damping >= 0.0, "must be >= 0")?;
        check("cyclotron_freq", cyclotron_freq, cyclotron_freq >= 0.0, "must be >= 0")?;
        Ok(Self {
            eps_background,
            plasma_freq,
            damping,
            cyclotron_freq,
        })
    }

    /// Ω_c = ω_c / ω_p.
    pub fn cyclotron_ratio(&self) -> f64 {
        self.cyclotron_freq / self.plasma_freq
    }

    /// Copy with ω_c = `ratio`·ω_p.
    pub fn with_cyclotron_ratio(&self, ratio: f64) -> Result<Self, MaterialError> {
        Self::new(
            self.eps_background,
            self.plasma_freq,
            self.damping,
            ratio * self.plasma_freq,
        )
    }
}

/// Ninham–Parsegian style response `1 + c_ir/(1+(ζ/w_ir)²) + c_uv/(1+(ζ/w_uv)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoOscillatorParams {
    pub c_ir: f64,
    pub w_ir: f64,
    pub c_uv: f64,
    pub w_uv: f64,
}

impl TwoOscillatorParams {
    pub fn new(c_ir: f64, w_ir: f64, c_uv: f64, w_uv: f64) -> Result<Self, MaterialError> {
        check("c_ir", c_ir, c_ir >= 0.0, "must be >= 0")?;
        check("w_ir", w_ir, w_ir > 0.0, "must be > 0")?;
        check("c_uv", c_uv, c_uv >= 0.0, "must be >= 0")?;
        check("w_uv", w_uv, w_uv > 0.0, "must be > 0")?;
        Ok(Self { c_ir, w_ir, c_uv, w_uv })
    }

    pub fn static_value(&self) -> f64 {
        1.0 + self.c_ir + self.c_uv
    }
}

/// A scalar dielectric response evaluable at `ω = iζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    /// ε_xx branch: the axis orthogonal to the field, in the slab plane.
    MagnetoDrudeParallel(MagnetoDrudeParams),
    /// ε_yy = ε_zz branch.
    MagnetoDrudeVoigtPerp(MagnetoDrudeParams),
    /// ε_yy + ε_yz²/ε_yy, the Voigt-effective permittivity.
    MagnetoDrudeVoigtEffective(MagnetoDrudeParams),
    TwoOscillator(TwoOscillatorParams),
    Constant(f64),
}

impl MaterialModel {
    pub fn constant(value: f64) -> Result<Self, MaterialError> {
        check("value", value, value >= 1.0, "must be >= 1")?;
        Ok(Self::Constant(value))
    }

    pub fn eval(&self, zeta: f64) -> Result<f64, MaterialError> {
        match self {
            Self::TwoOscillator(p) => eval_two_oscillator(p, zeta),
            Self::Constant(v) => Ok(*v),
            _ => {
                check_zeta(zeta)?;
                Ok(self.value_at(zeta))
            }
        }
    }

    /// Evaluation without the domain check, for callers that already
    /// validated `zeta > 0`.
    pub(crate) fn value_at(&self, zeta: f64) -> f64 {
        match self {
            Self::MagnetoDrudeParallel(p) => parallel_unchecked(p, zeta),
            Self::MagnetoDrudeVoigtPerp(p) => voigt_perp_unchecked(p, zeta),
            Self::MagnetoDrudeVoigtEffective(p) => {
                let yy = voigt_perp_unchecked(p, zeta);
                let yz = offdiag_unchecked(p, zeta);
                yy + yz * yz / yy
            }
            Self::TwoOscillator(p) => two_oscillator_unchecked(p, zeta),
            Self::Constant(v) => *v,
        }
    }

    pub fn magneto_drude(&self) -> Option<&MagnetoDrudeParams> {
        match self {
            Self::MagnetoDrudeParallel(p)
            | Self::MagnetoDrudeVoigtPerp(p)
            | Self::MagnetoDrudeVoigtEffective(p) => Some(p),
            _ => None,
        }
    }

    /// Replaces ω_c in magneto-Drude variants; other variants are returned unchanged.
    pub fn with_cyclotron_ratio(&self, ratio: f64) -> Result<Self, MaterialError> {
        Ok(match self {
            Self::MagnetoDrudeParallel(p) => Self::MagnetoDrudeParallel(p.with_cyclotron_ratio(ratio)?),
            Self::MagnetoDrudeVoigtPerp(p) => Self::MagnetoDrudeVoigtPerp(p.with_cyclotron_ratio(ratio)?),
            Self::MagnetoDrudeVoigtEffective(p) => {
                Self::MagnetoDrudeVoigtEffective(p.with_cyclotron_ratio(ratio)?)
            }
            other => *other,
        })
    }
}

#[inline]
fn parallel_unchecked(p: &MagnetoDrudeParams, zeta: f64) -> f64 {
    let wp2 = p.plasma_freq * p.plasma_freq;
    p.eps_background * (1.0 + wp2 / (zeta * (zeta + p.damping)))
}

// Written as ω_p²/(ζ((ζ+γ) + ω_c²/(ζ+γ))) so that ω_c = 0 performs the same
// floating-point operations as the parallel branch.
#[inline]
fn voigt_perp_unchecked(p: &MagnetoDrudeParams, zeta: f64) -> f64 {
    let wp2 = p.plasma_freq * p.plasma_freq;
    let s = zeta + p.damping;
    let wc2 = p.cyclotron_freq * p.cyclotron_freq;
    p.eps_background * (1.0 + wp2 / (zeta * (s + wc2 / s)))
}

#[inline]
fn offdiag_unchecked(p: &MagnetoDrudeParams, zeta: f64) -> f64 {
    let wp2 = p.plasma_freq * p.plasma_freq;
    let s = zeta + p.damping;
    let wc = p.cyclotron_freq;
    -p.eps_background * wc * wp2 / (zeta * (s * s + wc * wc))
}

#[inline]
fn two_oscillator_unchecked(p: &TwoOscillatorParams, zeta: f64) -> f64 {
    let ir = zeta / p.w_ir;
    let uv = zeta / p.w_uv;
    1.0 + p.c_ir / (1.0 + ir * ir) + p.c_uv / (1.0 + uv * uv)
}

/// ε_xx(iζ) of the Voigt magneto-Drude tensor. Independent of ω_c.
pub fn eval_eps_parallel(p: &MagnetoDrudeParams, zeta: f64) -> Result<f64, MaterialError> {
    check_zeta(zeta)?;
    Ok(parallel_unchecked(p, zeta))
}

/// ε_yy(iζ) = ε_zz(iζ) of the Voigt magneto-Drude tensor.
pub fn eval_eps_voigt_perp(p: &MagnetoDrudeParams, zeta: f64) -> Result<f64, MaterialError> {
    check_zeta(zeta)?;
    Ok(voigt_perp_unchecked(p, zeta))
}

/// ε_yz(iζ) = −ε_zy(iζ). Real on the imaginary axis and odd in ω_c.
pub fn eval_eps_offdiag_voigt(p: &MagnetoDrudeParams, zeta: f64) -> Result<f64, MaterialError> {
    check_zeta(zeta)?;
    Ok(offdiag_unchecked(p, zeta))
}

/// Voigt-effective permittivity ε_yy + ε_yz²/ε_yy.
pub fn eval_eps_voigt_effective(p: &MagnetoDrudeParams, zeta: f64) -> Result<f64, MaterialError> {
    MaterialModel::MagnetoDrudeVoigtEffective(*p).eval(zeta)
}

pub fn eval_two_oscillator(p: &TwoOscillatorParams, zeta: f64) -> Result<f64, MaterialError> {
    if !(zeta >= 0.0) || zeta.is_infinite() {
        return Err(MaterialError::NonPositiveFrequency(zeta));
    }
    Ok(two_oscillator_unchecked(p, zeta))
}

/// Free-carrier population and applied field, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierSpec {
    /// Carrier density n, m⁻³.
    pub density: f64,
    /// Effective mass in units of the electron mass.
    pub effective_mass_ratio: f64,
    /// |B₀|, tesla.
    pub field: f64,
}

impl CarrierSpec {
    pub fn new(density: f64, effective_mass_ratio: f64, field: f64) -> Result<Self, MaterialError> {
        check("density", density, density > 0.0, "must be > 0")?;
        check(
            "effective_mass_ratio",
            effective_mass_ratio,
            effective_mass_ratio > 0.0,
            "must be > 0",
        )?;
        check("field", field, field >= 0.0, "must be >= 0")?;
        Ok(Self {
            density,
            effective_mass_ratio,
            field,
        })
    }

    /// Density in cm⁻³, field in tesla.
    pub fn from_cgs_density(density_cm3: f64, effective_mass_ratio: f64, field: f64) -> Result<Self, MaterialError> {
        Self::new(per_cm3_to_per_m3(density_cm3), effective_mass_ratio, field)
    }

    pub fn with_field(&self, field: f64) -> Result<Self, MaterialError> {
        Self::new(self.density, self.effective_mass_ratio, field)
    }

    pub fn effective_mass(&self) -> f64 {
        self.effective_mass_ratio * ELECTRON_MASS
    }
}

/// ω_p = √(n e² / (ε₀ m)), rad/s.
pub fn plasma_frequency(spec: &CarrierSpec) -> f64 {
    let m = spec.effective_mass();
    ELEMENTARY_CHARGE * (spec.density / (VACUUM_PERMITTIVITY * m)).sqrt()
}

/// ω_c = e|B| / m, rad/s.
pub fn cyclotron_frequency(spec: &CarrierSpec) -> f64 {
    ELEMENTARY_CHARGE * spec.field / spec.effective_mass()
}

/// Ω_c = ω_c / ω_p. In SI this reduces to `|B| √(ε₀ / (n m))`.
pub fn omega_c_ratio(spec: &CarrierSpec) -> f64 {
    cyclotron_frequency(spec) / plasma_frequency(spec)
}

/// Field in tesla that produces the ratio `ratio` for this carrier population.
pub fn field_for_ratio(spec: &CarrierSpec, ratio: f64) -> f64 {
    ratio * plasma_frequency(spec) * spec.effective_mass() / ELEMENTARY_CHARGE
}

/// δ = |ε_∥(iζ)/ε_⊥(iζ) − 1|.
pub fn anisotropy_delta(par: &MaterialModel, perp: &MaterialModel, zeta: f64) -> Result<f64, MaterialError> {
    check_zeta(zeta)?;
    let a = par.eval(zeta)?;
    let b = perp.eval(zeta)?;
    Ok((a / b - 1.0).abs())
}
