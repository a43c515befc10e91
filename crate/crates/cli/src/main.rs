//! `vdwtorque`: van der Waals torque between a birefringent slab and a
//! magnetized semiconductor slab.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when at least one
//! quadrature did not converge.

mod units;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vdw_torque::figures::{reproduce_figure, CaseStudy, FigureRecipe};
use vdw_torque::materials::{omega_c_ratio, CarrierSpec};
use vdw_torque::matfile::{parse_material_file, MaterialFile, PerpMode};
use vdw_torque::sweep::{logspace, run_sweep, SweepOutcome, SweepSpec, SweepVariable};
use vdw_torque::table::{format_float, Cell, Table};
use vdw_torque::torque::{TorqueProblem, UniaxialPlate, DEFAULT_TEMPERATURE};
use vdw_torque::{anisotropy_delta, plate1_tensor, plate2_tensor, svg::LineChart, svg::Scale};

#[derive(Parser)]
#[command(name = "vdwtorque", version, about = "Magnetic-field-induced van der Waals torque between anisotropic slabs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print both plate tensors at one imaginary frequency.
    Tensor(TensorArgs),
    /// Tabulate the degree of anisotropy of one plate against ζ.
    Delta(DeltaArgs),
    /// Torque for a single configuration.
    Torque(TorqueArgs),
    /// Sweep one variable and write a CSV (and optional SVG).
    Sweep(SweepArgs),
    /// Regenerate the case-study figures as CSV + SVG.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PerpModeArg {
    Bare,
    VoigtEffective,
}

impl From<PerpModeArg> for PerpMode {
    fn from(m: PerpModeArg) -> Self {
        match m {
            PerpModeArg::Bare => PerpMode::Bare,
            PerpModeArg::VoigtEffective => PerpMode::VoigtEffective,
        }
    }
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Magnetic field with T or G suffix, converted with the plate's carriers.
    #[arg(long, value_parser = units::parse_field, allow_hyphen_values = true)]
    bfield: Option<f64>,
    /// Cyclotron-to-plasma frequency ratio Ω_c.
    #[arg(long = "omega-c", allow_hyphen_values = true)]
    omega_c: Option<f64>,
    /// Perpendicular response of magneto-Drude plates.
    #[arg(long, value_enum, default_value = "bare")]
    perp_mode: PerpModeArg,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    plate1: PathBuf,
    #[arg(long)]
    plate2: PathBuf,
    #[arg(long)]
    gap: PathBuf,
    /// Plate separation with nm, um or m suffix.
    #[arg(long = "L", value_parser = units::parse_length, default_value = "100nm")]
    separation: f64,
    /// Misalignment angle: radians, `45deg`, or `0.25pi`.
    #[arg(long, value_parser = units::parse_angle, default_value = "0.25pi", allow_hyphen_values = true)]
    theta: f64,
    #[command(flatten)]
    field: FieldArgs,
    /// Temperature in kelvin, used for the non-retarded validity check.
    #[arg(long, default_value_t = DEFAULT_TEMPERATURE)]
    temperature: f64,
    /// Plate area in m².
    #[arg(long, default_value_t = 1.0)]
    area: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long = "abs-tol", default_value_t = 0.0)]
    abs_tol: f64,
    #[arg(long = "max-evals", default_value_t = 100_000)]
    max_evals: usize,
}

#[derive(Args)]
struct TensorArgs {
    #[arg(long)]
    plate1: PathBuf,
    #[arg(long)]
    plate2: PathBuf,
    #[arg(long, value_parser = units::parse_angle, default_value = "0.25pi", allow_hyphen_values = true)]
    theta: f64,
    /// Imaginary frequency in rad/s (default: plasma frequency of the
    /// magneto-Drude plate, else 1e15).
    #[arg(long)]
    zeta: Option<f64>,
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long, alias = "plate2")]
    plate: PathBuf,
    /// Lower end of the grid as a fraction of the reference frequency.
    #[arg(long, default_value_t = 1e-2)]
    zeta_min: f64,
    #[arg(long, default_value_t = 1e2)]
    zeta_max: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct TorqueArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// theta, separation, omega-c, bfield or zeta.
    #[arg(long)]
    variable: SweepVariable,
    /// start:stop:count or a comma list, with the variable's unit suffixes.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads, 0 = all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct ReproduceArgs {
    /// 2, 3, 4, 5 or `all`.
    #[arg(long, default_value = "all")]
    figure: String,
    /// Directory holding insb.mat, calcite.mat and ethanol.mat.
    #[arg(long, default_value = "materials")]
    materials: PathBuf,
    #[arg(long = "out-dir", default_value = "figures")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "bare")]
    perp_mode: PerpModeArg,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

enum Outcome {
    Done,
    NotConverged,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Tensor(a) => cmd_tensor(a),
        Command::Delta(a) => cmd_delta(a),
        Command::Torque(a) => cmd_torque(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => {
            eprintln!("warning: at least one integral did not converge (see `converged` column)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<MaterialFile> {
    Ok(parse_material_file(path)?)
}

/// Resolves `--bfield` / `--omega-c` into Ω_c using the carriers of the
/// first magneto-Drude file that has them.
fn resolve_ratio(field: &FieldArgs, files: &[&MaterialFile]) -> Result<Option<f64>> {
    match (field.bfield, field.omega_c) {
        (Some(_), Some(_)) => bail!("--bfield and --omega-c are mutually exclusive"),
        (None, Some(r)) => {
            if !(r >= 0.0 && r.is_finite()) {
                bail!("--omega-c must be a non-negative number");
            }
            Ok(Some(r))
        }
        (Some(b), None) => {
            let carriers = carriers_of(files)
                .ok_or_else(|| anyhow!("--bfield needs a magneto_drude plate to convert the field"))?;
            Ok(Some(omega_c_ratio(&carriers.with_field(b)?)))
        }
        (None, None) => Ok(None),
    }
}

fn carriers_of(files: &[&MaterialFile]) -> Option<CarrierSpec> {
    files.iter().find_map(|f| f.carriers().copied())
}

fn plate_with_field(file: &MaterialFile, mode: PerpMode, ratio: Option<f64>) -> Result<UniaxialPlate> {
    let plate = file.plate(mode);
    Ok(match ratio {
        Some(r) => plate.with_cyclotron_ratio(r)?,
        None => plate,
    })
}

struct Built {
    problem: TorqueProblem,
    carriers: Option<CarrierSpec>,
}

fn build_problem(a: &ProblemArgs) -> Result<Built> {
    let p1 = load(&a.plate1)?;
    let p2 = load(&a.plate2)?;
    let gap = load(&a.gap)?;
    let gap_model = gap.scalar()?;
    let ratio = resolve_ratio(&a.field, &[&p2, &p1])?;
    let mode = a.field.perp_mode.into();
    let mut problem = TorqueProblem::new(
        plate_with_field(&p1, mode, ratio)?,
        plate_with_field(&p2, mode, ratio)?,
        gap_model,
        a.separation,
        a.theta,
    )?;
    problem.area = a.area;
    problem.temperature = a.temperature;
    problem.quadrature.rel_tol = a.rel_tol;
    problem.quadrature.abs_tol = a.abs_tol;
    problem.quadrature.max_evals = a.max_evals;
    problem.validate()?;
    Ok(Built {
        problem,
        carriers: carriers_of(&[&p2, &p1]),
    })
}

fn write_outputs(table: &Table, chart: Option<&LineChart>, out: Option<&Path>, svg: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table
            .write_csv(path)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", table.to_csv()),
    }
    if let (Some(path), Some(chart)) = (svg, chart) {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, chart.render()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_tensor(a: TensorArgs) -> Result<Outcome> {
    let p1 = load(&a.plate1)?;
    let p2 = load(&a.plate2)?;
    let ratio = resolve_ratio(&a.field, &[&p2, &p1])?;
    let mode = a.field.perp_mode.into();
    let plate1 = plate_with_field(&p1, mode, ratio)?;
    let plate2 = plate_with_field(&p2, mode, ratio)?;
    let zeta = a
        .zeta
        .or_else(|| plate2.plasma_freq())
        .or_else(|| plate1.plasma_freq())
        .unwrap_or(vdw_torque::torque::DEFAULT_SCALE_FREQ);
    let t1 = plate1_tensor(plate1.par.eval(zeta)?, plate1.perp.eval(zeta)?);
    let t2 = plate2_tensor(plate2.par.eval(zeta)?, plate2.perp.eval(zeta)?, a.theta);
    println!("zeta_rad_per_s = {}", format_float(zeta));
    println!("theta_rad = {}", format_float(a.theta));
    for (name, file, t) in [("plate1", &p1, &t1), ("plate2", &p2, &t2)] {
        let eig = t.eigenvalues();
        println!("{name} ({file})");
        print!("{t}");
        println!(
            "  trace = {}  det = {}  eigenvalues = [{}, {}, {}]",
            format_float(t.trace()),
            format_float(t.determinant()),
            format_float(eig[0]),
            format_float(eig[1]),
            format_float(eig[2])
        );
    }
    if let Some(p) = plate2.par.magneto_drude() {
        let yz = vdw_torque::eval_eps_offdiag_voigt(p, zeta)?;
        println!("plate2 eps_yz (excluded from the uniaxial tensor) = {}", format_float(yz));
    }
    Ok(Outcome::Done)
}

fn cmd_delta(a: DeltaArgs) -> Result<Outcome> {
    let file = load(&a.plate)?;
    let ratio = resolve_ratio(&a.field, &[&file])?;
    let plate = plate_with_field(&file, a.field.perp_mode.into(), ratio)?;
    if a.points < 2 || !(a.zeta_min > 0.0 && a.zeta_max > a.zeta_min) {
        bail!("need 0 < --zeta-min < --zeta-max and --points >= 2");
    }
    let scale = plate.plasma_freq().unwrap_or(vdw_torque::torque::DEFAULT_SCALE_FREQ);
    let mut table = Table::new(
        ["zeta_over_scale", "zeta_rad_per_s", "eps_par", "eps_perp", "delta"]
            .map(String::from)
            .to_vec(),
    );
    table.comments.push(format!("plate = {file}, scale_rad_per_s = {scale:?}"));
    table.comments.push(format!("par = {:?}", plate.par));
    table.comments.push(format!("perp = {:?}", plate.perp));
    let mut points = Vec::new();
    for x in logspace(a.zeta_min, a.zeta_max, a.points) {
        let z = x * scale;
        let d = anisotropy_delta(&plate.par, &plate.perp, z)?;
        table.push(vec![
            Cell::Float(x),
            Cell::Float(z),
            Cell::Float(plate.par.eval(z)?),
            Cell::Float(plate.perp.eval(z)?),
            Cell::Float(d),
        ]);
        points.push((x, d));
    }
    let mut chart = LineChart::new(format!("Degree of anisotropy, {}", file.name), "zeta / scale", "delta")
        .with_series(file.name.clone(), points);
    chart.x_scale = Scale::Log;
    chart.y_scale = Scale::Log;
    write_outputs(&table, Some(&chart), a.out.as_deref(), a.svg.as_deref())?;
    Ok(Outcome::Done)
}

fn report_validity(outcome: &SweepOutcome, prob: &TorqueProblem) {
    if !outcome.all_valid {
        let bound = vdw_torque::check_validity(prob).bound;
        eprintln!(
            "warning: separation exceeds the non-retarded bound 0.1*hbar*c/(k_B T) = {} m at T = {} K",
            format_float(bound),
            prob.temperature
        );
    }
}

fn cmd_torque(a: TorqueArgs) -> Result<Outcome> {
    let built = build_problem(&a.problem)?;
    let prob = built.problem;
    let spec = SweepSpec::new(SweepVariable::Theta, vec![prob.angle], prob, built.carriers)?;
    let outcome = run_sweep(&spec, 1)?;
    report_validity(&outcome, &prob);
    let row = &outcome.table.rows[0];
    for (name, cell) in outcome.table.columns.iter().zip(row) {
        println!("{name} = {cell}");
    }
    if let Some(path) = &a.out {
        outcome
            .table
            .write_csv(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if outcome.all_converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}

fn cmd_sweep(a: SweepArgs) -> Result<Outcome> {
    let built = build_problem(&a.problem)?;
    let parse: fn(&str) -> Result<f64, String> = match a.variable {
        SweepVariable::Theta => units::parse_angle,
        SweepVariable::Separation => units::parse_length,
        SweepVariable::BField => units::parse_field,
        SweepVariable::OmegaCRatio | SweepVariable::Zeta => units::parse_plain,
    };
    let grid = units::parse_grid(&a.grid, parse).map_err(|e| anyhow!("--grid: {e}"))?;
    let spec = SweepSpec::new(a.variable, grid, built.problem, built.carriers)?;
    let outcome = run_sweep(&spec, a.jobs)?;
    report_validity(&outcome, &built.problem);

    let (x_col, y_col, x_label, y_label) = match a.variable {
        SweepVariable::Theta => ("theta_rad", "torque_per_area_N_per_m", "theta (rad)", "tau / S (N/m)"),
        SweepVariable::Separation => ("L_m", "torque_per_area_N_per_m", "L (m)", "tau / S (N/m)"),
        SweepVariable::OmegaCRatio => ("omega_c_ratio", "torque_per_area_N_per_m", "Omega_c", "tau / S (N/m)"),
        SweepVariable::BField => ("bfield_T", "torque_per_area_N_per_m", "B (T)", "tau / S (N/m)"),
        SweepVariable::Zeta => ("zeta_rad_per_s", "integrand", "zeta (rad/s)", "integrand"),
    };
    let xs = outcome.table.column(x_col).unwrap_or_default();
    let ys = outcome.table.column(y_col).unwrap_or_default();
    let mut chart = LineChart::new(format!("{} sweep", a.variable), x_label, y_label)
        .with_series(y_col, xs.into_iter().zip(ys).collect());
    if a.variable == SweepVariable::Zeta {
        chart.x_scale = Scale::Log;
    }
    write_outputs(&outcome.table, Some(&chart), a.out.as_deref(), a.svg.as_deref())?;
    Ok(if outcome.all_converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<Outcome> {
    let recipes: Vec<FigureRecipe> = if a.figure == "all" {
        FigureRecipe::ALL.to_vec()
    } else {
        vec![a.figure.parse().map_err(|e: String| anyhow!(e))?]
    };
    let mut case = CaseStudy::load(&a.materials)?;
    case.perp_mode = a.perp_mode.into();
    let mut converged = true;
    for recipe in recipes {
        let out = reproduce_figure(recipe, &case, a.jobs)?;
        let csv = a.out_dir.join(format!("{}.csv", recipe.id()));
        let svg = a.out_dir.join(format!("{}.svg", recipe.id()));
        write_outputs(&out.table, Some(&out.chart), Some(&csv), Some(&svg))?;
        eprintln!("wrote {} and {}", csv.display(), svg.display());
        converged &= out.all_converged;
    }
    Ok(if converged { Outcome::Done } else { Outcome::NotConverged })
}
