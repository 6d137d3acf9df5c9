//! Built-in reference values for the six standard parameter rows
//! (Δ_p = 0.05; p ∈ {0, 0.99}; Ω_c⁰ ∈ {4, 6, 8}): the real parts of the
//! susceptibilities and the switch-up threshold intensity Uᵢ, together
//! with the comparison tolerances (one unit of the last quoted digit for
//! the susceptibilities, ±0.02 for the thresholds).

/// One reference row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub sgc_p: f64,
    pub omega_c0: f64,
    pub re_chi1: f64,
    pub chi1_tol: f64,
    pub re_chi3: f64,
    pub chi3_tol: f64,
    pub threshold_ui: f64,
    pub threshold_tol: f64,
}

/// Probe detuning shared by all reference rows.
pub const REFERENCE_DELTA_P: f64 = 0.05;

pub const REFERENCE_ROWS: [ReferenceRow; 6] = [
    ReferenceRow {
        sgc_p: 0.0,
        omega_c0: 4.0,
        re_chi1: -0.0031,
        chi1_tol: 1e-4,
        re_chi3: 0.00039,
        chi3_tol: 1e-5,
        threshold_ui: 0.31,
        threshold_tol: 0.02,
    },
    ReferenceRow {
        sgc_p: 0.0,
        omega_c0: 6.0,
        re_chi1: -0.0014,
        chi1_tol: 1e-4,
        re_chi3: 0.000077,
        chi3_tol: 1e-6,
        threshold_ui: 0.31,
        threshold_tol: 0.02,
    },
    ReferenceRow {
        sgc_p: 0.0,
        omega_c0: 8.0,
        re_chi1: -0.0008,
        chi1_tol: 1e-4,
        re_chi3: 0.000024,
        chi3_tol: 1e-6,
        threshold_ui: 0.31,
        threshold_tol: 0.02,
    },
    ReferenceRow {
        sgc_p: 0.99,
        omega_c0: 4.0,
        re_chi1: -0.1439,
        chi1_tol: 1e-4,
        re_chi3: 0.9756,
        chi3_tol: 1e-4,
        threshold_ui: 0.48,
        threshold_tol: 0.02,
    },
    ReferenceRow {
        sgc_p: 0.99,
        omega_c0: 6.0,
        re_chi1: -0.0687,
        chi1_tol: 1e-4,
        re_chi3: 0.1969,
        chi3_tol: 1e-4,
        threshold_ui: 0.38,
        threshold_tol: 0.02,
    },
    ReferenceRow {
        sgc_p: 0.99,
        omega_c0: 8.0,
        re_chi1: -0.0391,
        chi1_tol: 1e-4,
        re_chi3: 0.0621,
        chi3_tol: 1e-4,
        threshold_ui: 0.34,
        threshold_tol: 0.02,
    },
];
