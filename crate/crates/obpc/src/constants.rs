//! Physical constants (SI).

/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.99792458e8;

/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.8541878128e-12;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;

/// Denominators with magnitude below this are treated as singular.
pub const SINGULARITY_GUARD: f64 = 1e-30;
