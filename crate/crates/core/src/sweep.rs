//! Parameter sweeps over one variable of a [`TorqueProblem`].
//!
//! Points are evaluated on a worker pool and the rows come back in grid
//! order, so the rendered CSV does not depend on the number of workers.

use crate::materials::{field_for_ratio, omega_c_ratio, CarrierSpec};
use crate::table::{Cell, Table};
use crate::torque::{evaluate, Responses, TorqueError, TorqueEvaluation, TorqueProblem};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("grid point {index} ({variable} = {value}): {source}")]
    Point {
        index: usize,
        variable: SweepVariable,
        value: f64,
        source: TorqueError,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Radians.
    Theta,
    /// Metres.
    Separation,
    /// Dimensionless Ω_c.
    OmegaCRatio,
    /// Tesla, converted with the magneto-Drude plate's carriers.
    BField,
    /// rad/s; tabulates the integrand instead of the torque.
    Zeta,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Theta => "theta",
            Self::Separation => "separation",
            Self::OmegaCRatio => "omega_c_ratio",
            Self::BField => "bfield",
            Self::Zeta => "zeta",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theta" => Ok(Self::Theta),
            "separation" | "L" => Ok(Self::Separation),
            "omega_c_ratio" | "omega-c" | "omega_c" => Ok(Self::OmegaCRatio),
            "bfield" => Ok(Self::BField),
            "zeta" => Ok(Self::Zeta),
            _ => Err(format!(
                "unknown sweep variable `{s}` (expected theta, separation, omega-c, bfield or zeta)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Strictly increasing, in the variable's SI unit.
    pub grid: Vec<f64>,
    /// Supplies every field the sweep does not vary.
    pub base: TorqueProblem,
    /// Needed for [`SweepVariable::BField`].
    pub carriers: Option<CarrierSpec>,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        grid: Vec<f64>,
        base: TorqueProblem,
        carriers: Option<CarrierSpec>,
    ) -> Result<Self, SweepError> {
        let spec = Self {
            variable,
            grid,
            base,
            carriers,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.grid.is_empty() {
            return Err(SweepError::Invalid("grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(SweepError::Invalid("grid contains non-finite values".into()));
        }
        if let Some(w) = self.grid.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(SweepError::Invalid(format!(
                "grid must be strictly increasing ({} is followed by {})",
                w[0], w[1]
            )));
        }
        let first = self.grid[0];
        match self.variable {
            SweepVariable::Separation | SweepVariable::Zeta if first <= 0.0 => {
                return Err(SweepError::Invalid(format!("{} grid must be positive", self.variable)))
            }
            SweepVariable::OmegaCRatio | SweepVariable::BField if first < 0.0 => {
                return Err(SweepError::Invalid(format!("{} grid must be non-negative", self.variable)))
            }
            SweepVariable::BField if self.carriers.is_none() => {
                return Err(SweepError::Invalid(
                    "bfield sweep needs a magneto-Drude plate to convert fields".into(),
                ))
            }
            _ => {}
        }
        self.base.validate().map_err(|e| SweepError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub table: Table,
    pub all_converged: bool,
    pub all_valid: bool,
}

pub const TORQUE_COLUMNS: [&str; 11] = [
    "theta_rad",
    "L_m",
    "omega_c_ratio",
    "bfield_T",
    "torque_N_m",
    "torque_per_area_N_per_m",
    "wbar_rad_per_s",
    "wbar_error_rad_per_s",
    "evals",
    "converged",
    "valid_nonretarded",
];

pub const ZETA_COLUMNS: [&str; 8] = [
    "zeta_rad_per_s",
    "zeta_over_scale",
    "eps1_par",
    "eps1_perp",
    "eps2_par",
    "eps2_perp",
    "eps_gap",
    "integrand",
];

/// Runs `f` over `items` on `jobs` workers (0 = available parallelism),
/// preserving input order.
pub fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>, SweepError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs == 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Problem configuration as comment lines.
pub fn describe_problem(prob: &TorqueProblem) -> Vec<String> {
    vec![
        format!("plate1 = {:?}", prob.plate1),
        format!("plate2 = {:?}", prob.plate2),
        format!("gap = {:?}", prob.gap),
        format!(
            "separation_m = {:?}, angle_rad = {:?}, area_m2 = {:?}, temperature_K = {:?}",
            prob.separation, prob.angle, prob.area, prob.temperature
        ),
        format!("quadrature = {:?}", prob.quadrature),
    ]
}

fn point_problem(spec: &SweepSpec, value: f64) -> Result<(TorqueProblem, Option<f64>), TorqueError> {
    let base = &spec.base;
    let base_field = spec.carriers.as_ref().map(|c| field_for_ratio(c, base.cyclotron_ratio()));
    match spec.variable {
        SweepVariable::Theta => Ok((base.with_angle(value)?, base_field)),
        SweepVariable::Separation => Ok((base.with_separation(value)?, base_field)),
        SweepVariable::OmegaCRatio => {
            let field = spec.carriers.as_ref().map(|c| field_for_ratio(c, value));
            Ok((base.with_cyclotron_ratio(value)?, field))
        }
        SweepVariable::BField => {
            let carriers = spec.carriers.as_ref().expect("validated");
            let ratio = omega_c_ratio(&carriers.with_field(value)?);
            Ok((base.with_cyclotron_ratio(ratio)?, Some(value)))
        }
        SweepVariable::Zeta => Ok((*base, base_field)),
    }
}

fn torque_row(prob: &TorqueProblem, field: Option<f64>, eval: &TorqueEvaluation) -> Vec<Cell> {
    vec![
        Cell::Float(prob.angle),
        Cell::Float(prob.separation),
        Cell::Float(prob.cyclotron_ratio()),
        Cell::Float(field.unwrap_or(f64::NAN)),
        Cell::Float(eval.torque),
        Cell::Float(eval.torque_per_area),
        Cell::Float(eval.wbar.value),
        Cell::Float(eval.wbar.error_estimate),
        Cell::Int(eval.wbar.evals as u64),
        Cell::Bool(eval.wbar.converged),
        Cell::Bool(eval.validity.valid),
    ]
}

pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<SweepOutcome, SweepError> {
    spec.validate()?;
    let mut table;
    let mut all_converged = true;
    let mut all_valid = true;

    if spec.variable == SweepVariable::Zeta {
        table = Table::new(ZETA_COLUMNS.iter().map(|s| s.to_string()).collect());
        let rows = parallel_map(&spec.grid, jobs, |&z| Responses::at(&spec.base, z))?;
        for (index, (r, &z)) in rows.into_iter().zip(&spec.grid).enumerate() {
            let r = r.map_err(|source| SweepError::Point {
                index,
                variable: spec.variable,
                value: z,
                source,
            })?;
            table.push(vec![
                Cell::Float(z),
                Cell::Float(z / spec.base.quadrature.scale_freq),
                Cell::Float(r.eps1_par),
                Cell::Float(r.eps1_perp),
                Cell::Float(r.eps2_par),
                Cell::Float(r.eps2_perp),
                Cell::Float(r.eps_gap),
                Cell::Float(r.integrand()),
            ]);
        }
    } else {
        table = Table::new(TORQUE_COLUMNS.iter().map(|s| s.to_string()).collect());
        let results = parallel_map(&spec.grid, jobs, |&v| {
            let (prob, field) = point_problem(spec, v)?;
            let eval = evaluate(&prob)?;
            Ok::<_, TorqueError>((prob, field, eval))
        })?;
        for (index, (res, &v)) in results.into_iter().zip(&spec.grid).enumerate() {
            let (prob, field, eval) = res.map_err(|source| SweepError::Point {
                index,
                variable: spec.variable,
                value: v,
                source,
            })?;
            all_converged &= eval.wbar.converged;
            all_valid &= eval.validity.valid;
            table.push(torque_row(&prob, field, &eval));
        }
    }

    table.comments.push(format!("sweep variable = {}, points = {}", spec.variable, spec.grid.len()));
    table.comments.extend(describe_problem(&spec.base));
    Ok(SweepOutcome {
        table,
        all_converged,
        all_valid,
    })
}

/// `n` points evenly spaced on `[lo, hi]` with both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` points log-spaced on `[lo, hi]`, both positive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                u.exp()
            }
        })
        .collect()
}
