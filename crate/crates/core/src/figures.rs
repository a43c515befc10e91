//! Canned recipes for the calcite / ethanol / InSb case study.
//!
//! Plate 1 is calcite, plate 2 is InSb carrying the Voigt field, and the gap
//! is filled with ethanol. Each recipe yields a table and a line chart.

use crate::materials::{
    anisotropy_delta, eval_eps_offdiag_voigt, eval_eps_parallel, eval_eps_voigt_perp, field_for_ratio,
    MagnetoDrudeParams, MaterialError,
};
use crate::matfile::{parse_material_file, MatFileError, MaterialFile, MaterialKind, PerpMode};
use crate::svg::{LineChart, Scale};
use crate::sweep::{describe_problem, linspace, logspace, parallel_map, SweepError};
use crate::table::{Cell, Table};
use crate::torque::{evaluate, torque_from_wbar, TorqueError, TorqueProblem};
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FigureError {
    #[error(transparent)]
    MatFile(#[from] MatFileError),
    #[error(transparent)]
    Torque(#[from] TorqueError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("{0}")]
    WrongMaterial(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureRecipe {
    /// ε_xx, ε_yy and |ε_yz| of InSb vs ζ/ω_p at Ω_c = 0.2.
    Fig2Tensor,
    /// δ(ζ) for Ω_c ∈ {0.1, 0.2, 0.4}.
    Fig3Delta,
    /// τ/S vs θ at L = 100 nm for Ω_c ∈ {0.1, 0.2, 0.4}.
    Fig4Theta,
    /// τ/S vs Ω_c at θ = π/4 for L ∈ {50, 100} nm.
    Fig5Field,
}

impl FigureRecipe {
    pub const ALL: [FigureRecipe; 4] = [Self::Fig2Tensor, Self::Fig3Delta, Self::Fig4Theta, Self::Fig5Field];

    pub fn id(&self) -> &'static str {
        match self {
            Self::Fig2Tensor => "fig2_tensor",
            Self::Fig3Delta => "fig3_delta",
            Self::Fig4Theta => "fig4_theta",
            Self::Fig5Field => "fig5_field",
        }
    }
}

impl fmt::Display for FigureRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigureRecipe {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" | "fig2" | "fig2_tensor" => Ok(Self::Fig2Tensor),
            "3" | "fig3" | "fig3_delta" => Ok(Self::Fig3Delta),
            "4" | "fig4" | "fig4_theta" => Ok(Self::Fig4Theta),
            "5" | "fig5" | "fig5_field" => Ok(Self::Fig5Field),
            _ => Err(format!("unknown figure `{s}` (expected 2, 3, 4 or 5)")),
        }
    }
}

pub const CASE_RATIOS: [f64; 3] = [0.1, 0.2, 0.4];
pub const ZETA_RANGE: (f64, f64) = (1e-2, 1e2);
pub const ZETA_POINTS: usize = 201;
pub const THETA_POINTS: usize = 129;
pub const FIG4_SEPARATION: f64 = 100e-9;
pub const FIG5_SEPARATIONS_NM: [u32; 2] = [50, 100];
pub const FIG5_RATIO_RANGE: (f64, f64) = (0.02, 0.45);
pub const FIG5_POINTS: usize = 44;

/// The three database entries of the case study.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub calcite: MaterialFile,
    pub insb: MaterialFile,
    pub ethanol: MaterialFile,
    pub perp_mode: PerpMode,
}

impl CaseStudy {
    /// Loads `calcite.mat`, `insb.mat` and `ethanol.mat` from `dir`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, FigureError> {
        let dir = dir.as_ref();
        let case = Self {
            calcite: parse_material_file(dir.join("calcite.mat"))?,
            insb: parse_material_file(dir.join("insb.mat"))?,
            ethanol: parse_material_file(dir.join("ethanol.mat"))?,
            perp_mode: PerpMode::Bare,
        };
        if case.insb.carriers().is_none() {
            return Err(FigureError::WrongMaterial(format!(
                "{}: expected model = magneto_drude",
                case.insb.path.display()
            )));
        }
        case.ethanol.scalar()?;
        Ok(case)
    }

    pub fn insb_params(&self) -> MagnetoDrudeParams {
        match &self.insb.kind {
            MaterialKind::MagnetoDrude { params, .. } => *params,
            _ => unreachable!("checked in load"),
        }
    }

    pub fn problem(&self, ratio: f64, separation: f64, angle: f64) -> Result<TorqueProblem, FigureError> {
        let prob = TorqueProblem::new(
            self.calcite.plate(PerpMode::Bare),
            self.insb.plate(self.perp_mode),
            self.ethanol.scalar()?,
            separation,
            angle,
        )?;
        Ok(prob.with_cyclotron_ratio(ratio)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub recipe: FigureRecipe,
    pub table: Table,
    pub chart: LineChart,
    pub all_converged: bool,
}

fn ratio_label(r: f64) -> String {
    format!("omega_c_{r}")
}

pub fn reproduce_figure(recipe: FigureRecipe, case: &CaseStudy, jobs: usize) -> Result<FigureOutput, FigureError> {
    match recipe {
        FigureRecipe::Fig2Tensor => fig2(case),
        FigureRecipe::Fig3Delta => fig3(case),
        FigureRecipe::Fig4Theta => fig4(case, jobs),
        FigureRecipe::Fig5Field => fig5(case, jobs),
    }
}

fn zeta_grid() -> Vec<f64> {
    logspace(ZETA_RANGE.0, ZETA_RANGE.1, ZETA_POINTS)
}

fn fig2(case: &CaseStudy) -> Result<FigureOutput, FigureError> {
    let p = case.insb_params().with_cyclotron_ratio(0.2)?;
    let mut table = Table::new(
        ["zeta_over_omega_p", "zeta_rad_per_s", "eps_xx", "eps_yy", "abs_eps_yz"]
            .map(String::from)
            .to_vec(),
    );
    table.comments.push(format!("InSb Voigt tensor on the imaginary axis, params = {p:?}"));
    let mut series = [Vec::new(), Vec::new(), Vec::new()];
    for x in zeta_grid() {
        let z = x * p.plasma_freq;
        let xx = eval_eps_parallel(&p, z)?;
        let yy = eval_eps_voigt_perp(&p, z)?;
        let yz = eval_eps_offdiag_voigt(&p, z)?.abs();
        table.push(vec![Cell::Float(x), Cell::Float(z), Cell::Float(xx), Cell::Float(yy), Cell::Float(yz)]);
        series[0].push((x, xx));
        series[1].push((x, yy));
        series[2].push((x, yz));
    }
    let [a, b, c] = series;
    let mut chart = LineChart::new("InSb dielectric tensor, Omega_c = 0.2", "zeta / omega_p", "epsilon(i zeta)")
        .with_series("eps_xx", a)
        .with_series("eps_yy", b)
        .with_series("|eps_yz|", c);
    chart.x_scale = Scale::Log;
    chart.y_scale = Scale::Log;
    Ok(FigureOutput {
        recipe: FigureRecipe::Fig2Tensor,
        table,
        chart,
        all_converged: true,
    })
}

fn fig3(case: &CaseStudy) -> Result<FigureOutput, FigureError> {
    let base = case.insb_params();
    let mut columns = vec!["zeta_over_omega_p".to_string()];
    columns.extend(CASE_RATIOS.iter().map(|r| format!("delta_{}", ratio_label(*r))));
    let mut table = Table::new(columns);
    table.comments.push(format!("InSb degree of anisotropy, params = {base:?}"));
    let plates = CASE_RATIOS
        .iter()
        .map(|&r| case.insb.plate(case.perp_mode).with_cyclotron_ratio(r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut series = vec![Vec::new(); CASE_RATIOS.len()];
    for x in zeta_grid() {
        let z = x * base.plasma_freq;
        let mut row = vec![Cell::Float(x)];
        for (plate, s) in plates.iter().zip(series.iter_mut()) {
            let d = anisotropy_delta(&plate.par, &plate.perp, z)?;
            row.push(Cell::Float(d));
            s.push((x, d));
        }
        table.push(row);
    }
    let mut chart = LineChart::new("Degree of anisotropy of InSb", "zeta / omega_p", "delta");
    for (r, s) in CASE_RATIOS.iter().zip(series) {
        chart = chart.with_series(format!("Omega_c = {r}"), s);
    }
    chart.x_scale = Scale::Log;
    chart.y_scale = Scale::Log;
    Ok(FigureOutput {
        recipe: FigureRecipe::Fig3Delta,
        table,
        chart,
        all_converged: true,
    })
}

fn fig4(case: &CaseStudy, jobs: usize) -> Result<FigureOutput, FigureError> {
    let thetas = linspace(0.0, PI, THETA_POINTS);
    let mut columns = vec!["theta_rad".to_string()];
    columns.extend(CASE_RATIOS.iter().map(|r| format!("torque_per_area_N_per_m_{}", ratio_label(*r))));
    columns.push("converged".into());
    let mut table = Table::new(columns);

    let problems = CASE_RATIOS
        .iter()
        .map(|&r| case.problem(r, FIG4_SEPARATION, 0.0))
        .collect::<Result<Vec<_>, _>>()?;
    table.comments.push(format!(
        "torque per area vs angle, L = {FIG4_SEPARATION:?} m, ratios = {CASE_RATIOS:?}"
    ));
    table.comments.extend(describe_problem(&problems[0]));

    let mut points = Vec::new();
    for prob in &problems {
        for &t in &thetas {
            points.push(prob.with_angle(t)?);
        }
    }
    let evals = parallel_map(&points, jobs, evaluate)?;
    let evals = evals.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut all_converged = true;
    let mut series = vec![Vec::new(); CASE_RATIOS.len()];
    for (i, &t) in thetas.iter().enumerate() {
        let mut row = vec![Cell::Float(t)];
        let mut converged = true;
        for (k, s) in series.iter_mut().enumerate() {
            let e = &evals[k * thetas.len() + i];
            row.push(Cell::Float(e.torque_per_area));
            converged &= e.wbar.converged;
            s.push((t, e.torque_per_area));
        }
        all_converged &= converged;
        row.push(Cell::Bool(converged));
        table.push(row);
    }
    let mut chart = LineChart::new(
        "Torque per area vs angle, calcite / ethanol / InSb, L = 100 nm",
        "theta (rad)",
        "tau / S (N/m)",
    );
    for (r, s) in CASE_RATIOS.iter().zip(series) {
        chart = chart.with_series(format!("Omega_c = {r}"), s);
    }
    Ok(FigureOutput {
        recipe: FigureRecipe::Fig4Theta,
        table,
        chart,
        all_converged,
    })
}

fn fig5(case: &CaseStudy, jobs: usize) -> Result<FigureOutput, FigureError> {
    let ratios = linspace(FIG5_RATIO_RANGE.0, FIG5_RATIO_RANGE.1, FIG5_POINTS);
    let carriers = *case.insb.carriers().expect("checked in load");
    let mut columns = vec!["omega_c_ratio".to_string(), "bfield_T".to_string()];
    columns.extend(FIG5_SEPARATIONS_NM.iter().map(|l| format!("torque_per_area_N_per_m_L_{l}nm")));
    columns.push("converged".into());
    let mut table = Table::new(columns);

    let separations = FIG5_SEPARATIONS_NM.map(|nm| f64::from(nm) / 1e9);
    let base = case.problem(0.0, separations[0], PI / 4.0)?;
    table.comments.push(format!(
        "torque per area vs omega_c ratio, theta = pi/4, L = {FIG5_SEPARATIONS_NM:?} nm"
    ));
    table.comments.extend(describe_problem(&base));

    // w̄ does not depend on L, so one integral per Ω_c serves both curves.
    let problems = ratios
        .iter()
        .map(|&r| base.with_cyclotron_ratio(r))
        .collect::<Result<Vec<_>, _>>()?;
    let wbars = parallel_map(&problems, jobs, crate::torque::wbar)?;
    let wbars = wbars.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut all_converged = true;
    let mut series = vec![Vec::new(); separations.len()];
    for ((prob, w), &r) in problems.iter().zip(&wbars).zip(&ratios) {
        let mut row = vec![Cell::Float(r), Cell::Float(field_for_ratio(&carriers, r))];
        for (&l, s) in separations.iter().zip(series.iter_mut()) {
            let p = prob.with_separation(l)?;
            let tau = torque_from_wbar(&p, w.value) / p.area;
            row.push(Cell::Float(tau));
            s.push((r, tau));
        }
        all_converged &= w.converged;
        row.push(Cell::Bool(w.converged));
        table.push(row);
    }
    let mut chart = LineChart::new(
        "Torque per area vs Omega_c, theta = pi/4",
        "Omega_c = omega_c / omega_p",
        "tau / S (N/m)",
    );
    for (l, s) in FIG5_SEPARATIONS_NM.iter().zip(series) {
        chart = chart.with_series(format!("L = {l} nm"), s);
    }
    Ok(FigureOutput {
        recipe: FigureRecipe::Fig5Field,
        table,
        chart,
        all_converged,
    })
}
