//! Python bindings: material responses, plate tensors, torque problems and
//! figure tables.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::path::PathBuf;
use vdw_torque::figures::{self, FigureRecipe};
use vdw_torque::table::Cell;
use vdw_torque::torque::Responses;
use vdw_torque::{
    CarrierSpec, MagnetoDrudeParams, MatFileError, MaterialFile, PerpMode, TorqueError,
    TwoOscillatorParams,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_err(e: MatFileError) -> PyErr {
    match e {
        MatFileError::Io { .. } => PyOSError::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn torque_err(e: TorqueError) -> PyErr {
    value_err(e)
}

fn drude(eps_background: f64, omega_p: f64, gamma: f64, omega_c: f64) -> PyResult<MagnetoDrudeParams> {
    MagnetoDrudeParams::new(eps_background, omega_p, gamma, omega_c).map_err(value_err)
}

fn perp_mode(s: &str) -> PyResult<PerpMode> {
    match s {
        "bare" => Ok(PerpMode::Bare),
        "voigt-effective" | "voigt_effective" => Ok(PerpMode::VoigtEffective),
        _ => Err(PyValueError::new_err(format!(
            "perp_mode must be 'bare' or 'voigt-effective', got {s:?}"
        ))),
    }
}

/// ε_xx(iζ) of a magneto-Drude plasma (along the field).
#[pyfunction]
fn eps_parallel(eps_background: f64, omega_p: f64, gamma: f64, omega_c: f64, zeta: f64) -> PyResult<f64> {
    vdw_torque::eval_eps_parallel(&drude(eps_background, omega_p, gamma, omega_c)?, zeta).map_err(value_err)
}

/// ε_yy(iζ), transverse to the field.
#[pyfunction]
fn eps_voigt_perp(eps_background: f64, omega_p: f64, gamma: f64, omega_c: f64, zeta: f64) -> PyResult<f64> {
    vdw_torque::eval_eps_voigt_perp(&drude(eps_background, omega_p, gamma, omega_c)?, zeta).map_err(value_err)
}

/// ε_yz(iζ), the gyrotropic off-diagonal element.
#[pyfunction]
fn eps_offdiag_voigt(eps_background: f64, omega_p: f64, gamma: f64, omega_c: f64, zeta: f64) -> PyResult<f64> {
    vdw_torque::eval_eps_offdiag_voigt(&drude(eps_background, omega_p, gamma, omega_c)?, zeta).map_err(value_err)
}

#[pyfunction]
fn eps_voigt_effective(eps_background: f64, omega_p: f64, gamma: f64, omega_c: f64, zeta: f64) -> PyResult<f64> {
    vdw_torque::eval_eps_voigt_effective(&drude(eps_background, omega_p, gamma, omega_c)?, zeta).map_err(value_err)
}

#[pyfunction]
fn two_oscillator(c_ir: f64, w_ir: f64, c_uv: f64, w_uv: f64, zeta: f64) -> PyResult<f64> {
    let p = TwoOscillatorParams::new(c_ir, w_ir, c_uv, w_uv).map_err(value_err)?;
    vdw_torque::eval_two_oscillator(&p, zeta).map_err(value_err)
}

/// Plasma frequency in rad/s for a carrier density in cm⁻³.
#[pyfunction]
fn plasma_frequency(density_cm3: f64, effective_mass_ratio: f64) -> PyResult<f64> {
    let c = CarrierSpec::from_cgs_density(density_cm3, effective_mass_ratio, 0.0).map_err(value_err)?;
    Ok(vdw_torque::plasma_frequency(&c))
}

/// Ω_c = ω_c/ω_p for a field in tesla.
#[pyfunction]
fn omega_c_ratio(field_tesla: f64, density_cm3: f64, effective_mass_ratio: f64) -> PyResult<f64> {
    let c = CarrierSpec::from_cgs_density(density_cm3, effective_mass_ratio, field_tesla).map_err(value_err)?;
    Ok(vdw_torque::omega_c_ratio(&c))
}

#[pyfunction]
fn plate1_tensor(eps_par: f64, eps_perp: f64) -> [[f64; 3]; 3] {
    vdw_torque::plate1_tensor(eps_par, eps_perp).entries
}

#[pyfunction]
fn plate2_tensor(eps_par: f64, eps_perp: f64, theta: f64) -> [[f64; 3]; 3] {
    vdw_torque::plate2_tensor(eps_par, eps_perp, theta).entries
}

#[pyfunction]
fn tensor_eigenvalues(eps_par: f64, eps_perp: f64, theta: f64) -> [f64; 3] {
    vdw_torque::plate2_tensor(eps_par, eps_perp, theta).eigenvalues()
}

/// A parsed `.mat` file.
#[pyclass(name = "Material", frozen, from_py_object)]
#[derive(Clone)]
struct PyMaterial {
    inner: MaterialFile,
}

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let inner = vdw_torque::parse_material_file(path).map_err(mat_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn plasma_frequency(&self) -> Option<f64> {
        self.inner.plate(PerpMode::Bare).plasma_freq()
    }

    /// (ε_∥, ε_⊥) at iζ, with an optional cyclotron ratio for magneto-Drude files.
    #[pyo3(signature = (zeta, omega_c=None, perp_mode="bare"))]
    fn eps(&self, zeta: f64, omega_c: Option<f64>, perp_mode: &str) -> PyResult<(f64, f64)> {
        let mut plate = self.inner.plate(self::perp_mode(perp_mode)?);
        if let Some(r) = omega_c {
            plate = plate.with_cyclotron_ratio(r).map_err(value_err)?;
        }
        Ok((
            plate.par.eval(zeta).map_err(value_err)?,
            plate.perp.eval(zeta).map_err(value_err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!("Material({})", self.inner)
    }
}

/// Plate 1 / gap / plate 2 configuration.
#[pyclass(name = "TorqueProblem", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProblem {
    inner: vdw_torque::TorqueProblem,
    carriers: Option<CarrierSpec>,
}

fn resolve_ratio(carriers: Option<&CarrierSpec>, omega_c: Option<f64>, bfield: Option<f64>) -> PyResult<Option<f64>> {
    match (omega_c, bfield) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("give omega_c or bfield, not both")),
        (Some(r), None) => Ok(Some(r)),
        (None, Some(b)) => {
            let c = carriers.ok_or_else(|| PyValueError::new_err("bfield needs a magneto_drude plate"))?;
            Ok(Some(vdw_torque::omega_c_ratio(&c.with_field(b).map_err(value_err)?)))
        }
        (None, None) => Ok(None),
    }
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (
        plate1, plate2, gap, separation, theta,
        omega_c=None, bfield=None, perp_mode="bare", temperature=300.0, area=1.0, rel_tol=1e-8
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        plate1: &PyMaterial,
        plate2: &PyMaterial,
        gap: &PyMaterial,
        separation: f64,
        theta: f64,
        omega_c: Option<f64>,
        bfield: Option<f64>,
        perp_mode: &str,
        temperature: f64,
        area: f64,
        rel_tol: f64,
    ) -> PyResult<Self> {
        let mode = self::perp_mode(perp_mode)?;
        let carriers = plate2.inner.carriers().or(plate1.inner.carriers()).copied();
        let ratio = resolve_ratio(carriers.as_ref(), omega_c, bfield)?;
        let mut inner = vdw_torque::TorqueProblem::new(
            plate1.inner.plate(mode),
            plate2.inner.plate(mode),
            gap.inner.scalar().map_err(mat_err)?,
            separation,
            theta,
        )
        .map_err(torque_err)?;
        if let Some(r) = ratio {
            inner = inner.with_cyclotron_ratio(r).map_err(torque_err)?;
        }
        inner.temperature = temperature;
        inner.area = area;
        inner.quadrature.rel_tol = rel_tol;
        inner.validate().map_err(torque_err)?;
        Ok(Self { inner, carriers })
    }

    /// The calcite / ethanol / InSb configuration from a materials directory.
    #[staticmethod]
    #[pyo3(signature = (materials, omega_c, separation, theta, perp_mode="bare"))]
    fn case_study(materials: PathBuf, omega_c: f64, separation: f64, theta: f64, perp_mode: &str) -> PyResult<Self> {
        let mut case = figures::CaseStudy::load(materials).map_err(value_err)?;
        case.perp_mode = self::perp_mode(perp_mode)?;
        let inner = case.problem(omega_c, separation, theta).map_err(value_err)?;
        Ok(Self {
            inner,
            carriers: case.insb.carriers().copied(),
        })
    }

    #[getter]
    fn separation(&self) -> f64 {
        self.inner.separation
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.angle
    }

    #[getter]
    fn omega_c_ratio(&self) -> f64 {
        self.inner.cyclotron_ratio()
    }

    #[getter]
    fn bfield(&self) -> Option<f64> {
        self.carriers
            .as_ref()
            .map(|c| vdw_torque::materials::field_for_ratio(c, self.inner.cyclotron_ratio()))
    }

    fn with_angle(&self, theta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_angle(theta).map_err(torque_err)?,
            carriers: self.carriers,
        })
    }

    fn with_separation(&self, separation: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_separation(separation).map_err(torque_err)?,
            carriers: self.carriers,
        })
    }

    fn with_omega_c(&self, omega_c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_cyclotron_ratio(omega_c).map_err(torque_err)?,
            carriers: self.carriers,
        })
    }

    fn integrand(&self, zeta: f64) -> PyResult<f64> {
        Ok(Responses::at(&self.inner, zeta).map_err(torque_err)?.integrand())
    }

    /// Dict with value, error_estimate, evals and converged.
    fn wbar<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let w = vdw_torque::wbar(&self.inner).map_err(torque_err)?;
        let d = PyDict::new(py);
        d.set_item("value", w.value)?;
        d.set_item("error_estimate", w.error_estimate)?;
        d.set_item("evals", w.evals)?;
        d.set_item("converged", w.converged)?;
        Ok(d)
    }

    fn torque(&self) -> PyResult<f64> {
        vdw_torque::torque(&self.inner).map_err(torque_err)
    }

    fn torque_per_area(&self) -> PyResult<f64> {
        vdw_torque::torque_per_area(&self.inner).map_err(torque_err)
    }

    fn angular_free_energy(&self) -> PyResult<f64> {
        vdw_torque::angular_free_energy(&self.inner).map_err(torque_err)
    }

    fn check_validity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let v = vdw_torque::check_validity(&self.inner);
        let d = PyDict::new(py);
        d.set_item("valid", v.valid)?;
        d.set_item("separation", v.separation)?;
        d.set_item("temperature", v.temperature)?;
        d.set_item("bound", v.bound)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "TorqueProblem(L={:?} m, theta={:?} rad, omega_c={:?})",
            self.inner.separation,
            self.inner.angle,
            self.inner.cyclotron_ratio()
        )
    }
}

/// Figure table as `{"columns": [...], "rows": [[...], ...], "converged": bool}`.
#[pyfunction]
#[pyo3(signature = (figure, materials, jobs=0, perp_mode="bare"))]
fn reproduce_figure<'py>(
    py: Python<'py>,
    figure: &str,
    materials: PathBuf,
    jobs: usize,
    perp_mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let recipe: FigureRecipe = figure.parse().map_err(|e: String| PyValueError::new_err(e))?;
    let mut case = figures::CaseStudy::load(materials).map_err(value_err)?;
    case.perp_mode = self::perp_mode(perp_mode)?;
    let out = py
        .detach(|| vdw_torque::reproduce_figure(recipe, &case, jobs))
        .map_err(value_err)?;
    let rows: Vec<Vec<Py<PyAny>>> = out
        .table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| match *c {
                    Cell::Float(v) => v.into_pyobject(py).unwrap().into_any().unbind(),
                    Cell::Int(v) => v.into_pyobject(py).unwrap().into_any().unbind(),
                    Cell::Bool(v) => v.into_pyobject(py).unwrap().to_owned().into_any().unbind(),
                })
                .collect()
        })
        .collect();
    let d = PyDict::new(py);
    d.set_item("id", recipe.id())?;
    d.set_item("columns", out.table.columns.clone())?;
    d.set_item("rows", rows)?;
    d.set_item("converged", out.all_converged)?;
    d.set_item("csv", out.table.to_csv())?;
    d.set_item("svg", out.chart.render())?;
    Ok(d)
}

#[pymodule]
fn vdw_torque_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eps_parallel, m)?)?;
    m.add_function(wrap_pyfunction!(eps_voigt_perp, m)?)?;
    m.add_function(wrap_pyfunction!(eps_offdiag_voigt, m)?)?;
    m.add_function(wrap_pyfunction!(eps_voigt_effective, m)?)?;
    m.add_function(wrap_pyfunction!(two_oscillator, m)?)?;
    m.add_function(wrap_pyfunction!(plasma_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(omega_c_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(plate1_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(plate2_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_figure, m)?)?;
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyProblem>()?;
    Ok(())
}
