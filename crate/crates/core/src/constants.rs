//! Physical constants (CODATA 2018, SI) and unit conversions.
//!
//! Every golden number in the test suite is derived from this table, so the
//! values are pinned here and nowhere else.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Tesla per gauss.
pub const TESLA_PER_GAUSS: f64 = 1e-4;
/// m⁻³ per cm⁻³.
pub const PER_M3_PER_CM3: f64 = 1e6;

pub fn gauss_to_tesla(gauss: f64) -> f64 {
    gauss * TESLA_PER_GAUSS
}

pub fn per_cm3_to_per_m3(density_cm3: f64) -> f64 {
    density_cm3 * PER_M3_PER_CM3
}
