//! Van der Waals torque between parallel uniaxial slabs, with the anisotropy
//! of one slab induced by a static magnetic field in the Voigt geometry.
//!
//! The numerical core lives in [`materials`], [`geometry`], [`quadrature`]
//! and [`torque`]. [`matfile`], [`sweep`], [`figures`], [`table`] and
//! [`svg`] back the command-line front end.

pub mod constants;
pub mod figures;
pub mod geometry;
pub mod materials;
pub mod matfile;
pub mod quadrature;
pub mod svg;
pub mod sweep;
pub mod table;
pub mod torque;

pub use figures::{reproduce_figure, CaseStudy, FigureOutput, FigureRecipe};
pub use geometry::{plate1_tensor, plate2_tensor, PlateTensor};
pub use materials::{
    anisotropy_delta, eval_eps_offdiag_voigt, eval_eps_parallel, eval_eps_voigt_effective, eval_eps_voigt_perp,
    eval_two_oscillator, omega_c_ratio, plasma_frequency, CarrierSpec, MagnetoDrudeParams, MaterialError,
    MaterialModel, TwoOscillatorParams,
};
pub use matfile::{parse_material_file, MatFileError, MaterialFile, PerpMode};
pub use quadrature::{integrate_semi_infinite, QuadratureError, QuadratureResult, QuadratureSettings, Transform};
pub use sweep::{run_sweep, SweepOutcome, SweepSpec, SweepVariable};
pub use table::Table;
pub use torque::{
    angular_free_energy, check_validity, evaluate, integrand, torque, torque_per_area, wbar, TorqueError,
    TorqueEvaluation, TorqueProblem, UniaxialPlate, ValidityReport,
};
