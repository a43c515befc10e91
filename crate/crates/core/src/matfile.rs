//! Material database files.
//!
//! One material per UTF-8 file, `key = value` lines, `#` starts a comment.
//! The `model` key selects the schema:
//!
//! | model                     | keys |
//! |---------------------------|------|
//! | `magneto_drude`           | `eps_background`, `carrier_density_cm3`, `effective_mass_ratio`, `gamma_over_omega_p` |
//! | `two_oscillator_uniaxial` | `{ord,ext}_c_ir`, `{ord,ext}_w_ir_rad_s`, `{ord,ext}_c_uv`, `{ord,ext}_w_uv_rad_s` |
//! | `two_oscillator`          | `c_ir`, `w_ir_rad_s`, `c_uv`, `w_uv_rad_s` |
//! | `constant`                | `value` |
//!
//! An optional `name` key is accepted by every model. Any other key is a
//! hard error.

use crate::materials::{plasma_frequency, CarrierSpec, MagnetoDrudeParams, MaterialError, MaterialModel, TwoOscillatorParams};
use crate::torque::UniaxialPlate;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatFileError {
    #[error("{path}: cannot read material file; expected `model = ...` with keys: {expected}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
        expected: String,
    },
    #[error("{path}:{line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error("{path}:{line}: unknown key `{key}` for model `{model}` (allowed: {allowed})")]
    UnknownKey {
        path: PathBuf,
        line: usize,
        key: String,
        model: String,
        allowed: String,
    },
    #[error("{path}: missing key `{key}` for model `{model}` (required: {required})")]
    MissingKey {
        path: PathBuf,
        key: &'static str,
        model: String,
        required: String,
    },
    #[error("{path}:{line}: {message}")]
    InvalidValue { path: PathBuf, line: usize, message: String },
    #[error("{path}: {message}")]
    WrongKind { path: PathBuf, message: String },
}

/// Which continuation of the Voigt tensor stands in for ε_⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerpMode {
    /// ε_⊥ = ε_yy.
    #[default]
    Bare,
    /// ε_⊥ = ε_yy + ε_yz²/ε_yy.
    VoigtEffective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    MagnetoDrude,
    TwoOscillatorUniaxial,
    TwoOscillator,
    Constant,
}

impl ModelTag {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "magneto_drude" => Some(Self::MagnetoDrude),
            "two_oscillator_uniaxial" => Some(Self::TwoOscillatorUniaxial),
            "two_oscillator" => Some(Self::TwoOscillator),
            "constant" => Some(Self::Constant),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::MagnetoDrude => "magneto_drude",
            Self::TwoOscillatorUniaxial => "two_oscillator_uniaxial",
            Self::TwoOscillator => "two_oscillator",
            Self::Constant => "constant",
        }
    }

    pub fn required_keys(&self) -> &'static [&'static str] {
        match self {
            Self::MagnetoDrude => &["eps_background", "carrier_density_cm3", "effective_mass_ratio", "gamma_over_omega_p"],
            Self::TwoOscillatorUniaxial => &[
                "ord_c_ir",
                "ord_w_ir_rad_s",
                "ord_c_uv",
                "ord_w_uv_rad_s",
                "ext_c_ir",
                "ext_w_ir_rad_s",
                "ext_c_uv",
                "ext_w_uv_rad_s",
            ],
            Self::TwoOscillator => &["c_ir", "w_ir_rad_s", "c_uv", "w_uv_rad_s"],
            Self::Constant => &["value"],
        }
    }

    const ALL: [ModelTag; 4] = [Self::MagnetoDrude, Self::TwoOscillatorUniaxial, Self::TwoOscillator, Self::Constant];
}

/// Human-readable summary of every schema, used in diagnostics.
pub fn schema_summary() -> String {
    ModelTag::ALL
        .iter()
        .map(|t| format!("{} [{}]", t.as_str(), t.required_keys().join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialKind {
    /// Field-free magneto-Drude plate; ω_c is applied later.
    MagnetoDrude {
        params: MagnetoDrudeParams,
        carriers: CarrierSpec,
    },
    Uniaxial {
        ordinary: TwoOscillatorParams,
        extraordinary: TwoOscillatorParams,
    },
    Isotropic(MaterialModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialFile {
    pub name: String,
    pub path: PathBuf,
    pub kind: MaterialKind,
}

impl MaterialFile {
    /// Plate for the given magnetic-field reduction. Axis convention:
    /// ε_∥ is the extraordinary axis for crystals and ε_xx for magneto-Drude.
    pub fn plate(&self, perp_mode: PerpMode) -> UniaxialPlate {
        match &self.kind {
            MaterialKind::MagnetoDrude { params, .. } => {
                let perp = match perp_mode {
                    PerpMode::Bare => MaterialModel::MagnetoDrudeVoigtPerp(*params),
                    PerpMode::VoigtEffective => MaterialModel::MagnetoDrudeVoigtEffective(*params),
                };
                UniaxialPlate::new(MaterialModel::MagnetoDrudeParallel(*params), perp)
            }
            MaterialKind::Uniaxial { ordinary, extraordinary } => UniaxialPlate::new(
                MaterialModel::TwoOscillator(*extraordinary),
                MaterialModel::TwoOscillator(*ordinary),
            ),
            MaterialKind::Isotropic(m) => UniaxialPlate::isotropic(*m),
        }
    }

    /// Scalar response, for gap media.
    pub fn scalar(&self) -> Result<MaterialModel, MatFileError> {
        match &self.kind {
            MaterialKind::Isotropic(m) => Ok(*m),
            _ => Err(MatFileError::WrongKind {
                path: self.path.clone(),
                message: "gap medium must be isotropic (model = constant or two_oscillator)".into(),
            }),
        }
    }

    pub fn carriers(&self) -> Option<&CarrierSpec> {
        match &self.kind {
            MaterialKind::MagnetoDrude { carriers, .. } => Some(carriers),
            _ => None,
        }
    }
}

impl fmt::Display for MaterialFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.path.display())
    }
}

pub fn parse_material_file(path: impl AsRef<Path>) -> Result<MaterialFile, MatFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MatFileError::Io {
        path: path.to_path_buf(),
        source,
        expected: schema_summary(),
    })?;
    parse_material_str(&text, path)
}

struct Entry {
    line: usize,
    value: String,
}

/// Parses file contents; `path` is only used for diagnostics and the default name.
pub fn parse_material_str(text: &str, path: impl AsRef<Path>) -> Result<MaterialFile, MatFileError> {
    let path = path.as_ref().to_path_buf();
    let syntax = |line: usize, message: String| MatFileError::Syntax {
        path: path.clone(),
        line,
        message,
    };

    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(syntax(line, format!("expected `key = value`, got `{content}`")));
        }
        if let Some(prev) = entries.get(key) {
            return Err(syntax(line, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
        entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }

    let model_entry = entries.remove("model").ok_or_else(|| MatFileError::MissingKey {
        path: path.clone(),
        key: "model",
        model: "?".into(),
        required: schema_summary(),
    })?;
    let tag = ModelTag::parse(&model_entry.value).ok_or_else(|| MatFileError::InvalidValue {
        path: path.clone(),
        line: model_entry.line,
        message: format!(
            "unknown model `{}` (expected one of: {})",
            model_entry.value,
            ModelTag::ALL.map(|t| t.as_str()).join(", ")
        ),
    })?;
    let name = entries.remove("name").map(|e| e.value).unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "material".into())
    });

    let required = tag.required_keys();
    if let Some((key, entry)) = entries.iter().find(|(k, _)| !required.contains(&k.as_str())) {
        return Err(MatFileError::UnknownKey {
            path: path.clone(),
            line: entry.line,
            key: key.clone(),
            model: tag.as_str().into(),
            allowed: format!("name, {}", required.join(", ")),
        });
    }

    let mut values: BTreeMap<&'static str, (f64, usize)> = BTreeMap::new();
    for &key in required {
        let entry = entries.get(key).ok_or_else(|| MatFileError::MissingKey {
            path: path.clone(),
            key,
            model: tag.as_str().into(),
            required: required.join(", "),
        })?;
        let v: f64 = entry.value.parse().map_err(|_| MatFileError::InvalidValue {
            path: path.clone(),
            line: entry.line,
            message: format!("`{key}`: cannot parse `{}` as a number", entry.value),
        })?;
        if !v.is_finite() {
            return Err(MatFileError::InvalidValue {
                path: path.clone(),
                line: entry.line,
                message: format!("`{key}` must be finite"),
            });
        }
        values.insert(key, (v, entry.line));
    }

    let invalid = |key: &str, err: MaterialError| MatFileError::InvalidValue {
        path: path.clone(),
        line: values.get(key).map(|v| v.1).unwrap_or(model_entry.line),
        message: format!("`{key}`: {err}"),
    };
    let get = |key: &str| values[key].0;

    let kind = match tag {
        ModelTag::MagnetoDrude => {
            let carriers = CarrierSpec::from_cgs_density(get("carrier_density_cm3"), get("effective_mass_ratio"), 0.0)
                .map_err(|e| match &e {
                    MaterialError::InvalidParameter { name: "density", .. } => invalid("carrier_density_cm3", e),
                    _ => invalid("effective_mass_ratio", e),
                })?;
            let gamma_ratio = get("gamma_over_omega_p");
            if gamma_ratio < 0.0 {
                return Err(invalid(
                    "gamma_over_omega_p",
                    MaterialError::InvalidParameter {
                        name: "gamma_over_omega_p",
                        value: gamma_ratio,
                        reason: "must be >= 0",
                    },
                ));
            }
            let wp = plasma_frequency(&carriers);
            let params = MagnetoDrudeParams::new(get("eps_background"), wp, gamma_ratio * wp, 0.0)
                .map_err(|e| invalid("eps_background", e))?;
            MaterialKind::MagnetoDrude { params, carriers }
        }
        ModelTag::TwoOscillatorUniaxial => {
            let axis = |prefix: &str| {
                let k = |s: &str| format!("{prefix}_{s}");
                TwoOscillatorParams::new(
                    get(&k("c_ir")),
                    get(&k("w_ir_rad_s")),
                    get(&k("c_uv")),
                    get(&k("w_uv_rad_s")),
                )
                .map_err(|e| invalid(&k(param_key(&e)), e))
            };
            MaterialKind::Uniaxial {
                ordinary: axis("ord")?,
                extraordinary: axis("ext")?,
            }
        }
        ModelTag::TwoOscillator => {
            let p = TwoOscillatorParams::new(get("c_ir"), get("w_ir_rad_s"), get("c_uv"), get("w_uv_rad_s"))
                .map_err(|e| invalid(param_key(&e), e))?;
            MaterialKind::Isotropic(MaterialModel::TwoOscillator(p))
        }
        ModelTag::Constant => {
            MaterialKind::Isotropic(MaterialModel::constant(get("value")).map_err(|e| invalid("value", e))?)
        }
    };

    Ok(MaterialFile { name, path, kind })
}

fn param_key(err: &MaterialError) -> &'static str {
    match err {
        MaterialError::InvalidParameter { name: "w_ir", .. } => "w_ir_rad_s",
        MaterialError::InvalidParameter { name: "w_uv", .. } => "w_uv_rad_s",
        MaterialError::InvalidParameter { name, .. } => name,
        MaterialError::NonPositiveFrequency(_) => "model",
    }
}
