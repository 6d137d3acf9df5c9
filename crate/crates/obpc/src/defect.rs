//! The doped defect layer: intensity-dependent propagation constants, the
//! nonlinear characteristic matrix, and the fixed-point solution of the
//! coupled forward/backward intensity equations for a given transmitted
//! intensity.

use num_complex::Complex64;

use crate::constants::{C, SINGULARITY_GUARD};
use crate::error::{Error, Result};
use crate::tmm::{left_submatrix, right_submatrix, transmittance, CMat2, StackSpec};

/// Material state of the defect layer at one atomic parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectMedium {
    /// Host permittivity ε_D = n_D² of the undoped layer.
    pub epsilon_host: f64,
    /// Linear dopant susceptibility (s⁽¹⁾ already applied).
    pub chi1: Complex64,
    /// Linear index n_l = √(ε_D + χ⁽¹⁾), principal branch.
    pub n_l: Complex64,
    /// Layer thickness, meters.
    pub thickness: f64,
    /// Vacuum wavenumber ω_p/c, 1/m.
    pub k0: f64,
}

impl DefectMedium {
    pub fn new(epsilon_host: f64, chi1: Complex64, thickness: f64, omega: f64) -> Result<Self> {
        if thickness < 0.0 {
            return Err(Error::Domain("defect thickness must be >= 0".into()));
        }
        if omega <= 0.0 {
            return Err(Error::Domain("probe frequency must be positive".into()));
        }
        let n_l = (epsilon_host + chi1).sqrt();
        if !(n_l.re > 0.0) {
            return Err(Error::Domain(format!(
                "linear defect index has non-positive real part: {n_l}"
            )));
        }
        Ok(Self {
            epsilon_host,
            chi1,
            n_l,
            thickness,
            k0: omega / C,
        })
    }
}

/// Scaled intensities U± = χ⁽³⁾|A±|² of the forward/backward waves in the
/// defect layer, in a.u.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldIntensities {
    pub u_plus: f64,
    pub u_minus: f64,
}

impl FieldIntensities {
    pub fn new(u_plus: f64, u_minus: f64) -> Result<Self> {
        if !(u_plus >= 0.0 && u_plus.is_finite() && u_minus >= 0.0 && u_minus.is_finite()) {
            return Err(Error::Domain(format!(
                "field intensities must be finite and non-negative, got ({u_plus}, {u_minus})"
            )));
        }
        Ok(Self { u_plus, u_minus })
    }
}

/// Fixed-point solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Residual tolerance, ∞-norm of one further map application.
    pub tolerance: f64,
    /// Relaxation α in x ← (1−α)x + α·map(x).
    pub relaxation: f64,
    pub max_iterations: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            relaxation: 0.5,
            max_iterations: 100_000,
        }
    }
}

/// Converged fixed-point solution plus diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub fields: FieldIntensities,
    pub iterations: u32,
    pub residual: f64,
}

/// One converged nonlinear operating point of the full stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// Transmitted intensity, a.u.
    pub u_f: f64,
    pub fields: FieldIntensities,
    /// Power transmittance of the stack at this operating point.
    pub t: f64,
    /// Incident intensity Uᵢ = U_f/T, a.u.
    pub u_i: f64,
    pub iterations: u32,
    pub residual: f64,
}

/// Propagation constants k± = k₀ n_l (1 + U± + 2U∓)^½.
pub fn wavevectors(medium: &DefectMedium, fields: &FieldIntensities) -> (Complex64, Complex64) {
    let k_plus = medium.k0 * medium.n_l * (1.0 + fields.u_plus + 2.0 * fields.u_minus).sqrt();
    let k_minus = medium.k0 * medium.n_l * (1.0 + fields.u_minus + 2.0 * fields.u_plus).sqrt();
    (k_plus, k_minus)
}

/// Characteristic matrix of the nonlinear defect layer:
///
/// ```text
/// m11 = (k₋ e^{−ik₊d} + k₊ e^{ik₋d}) / (k₊+k₋)
/// m12 = k₀ (e^{−ik₊d} − e^{ik₋d}) / (k₊+k₋)
/// m21 = k₊k₋ (e^{−ik₊d} − e^{ik₋d}) / (k₀(k₊+k₋))
/// m22 = (k₊ e^{−ik₊d} + k₋ e^{ik₋d}) / (k₊+k₋)
/// ```
pub fn defect_matrix(medium: &DefectMedium, fields: &FieldIntensities) -> Result<CMat2> {
    let (k_plus, k_minus) = wavevectors(medium, fields);
    let sum = k_plus + k_minus;
    if sum.norm() < SINGULARITY_GUARD {
        return Err(Error::Singular("defect matrix: k+ + k- vanished".into()));
    }
    let i = Complex64::I;
    let d = medium.thickness;
    let e_plus = (-i * k_plus * d).exp();
    let e_minus = (i * k_minus * d).exp();
    let k0 = medium.k0;
    Ok(CMat2::new(
        (k_minus * e_plus + k_plus * e_minus) / sum,
        k0 * (e_plus - e_minus) / sum,
        k_minus * k_plus * (e_plus - e_minus) / (k0 * sum),
        (k_plus * e_plus + k_minus * e_minus) / sum,
    ))
}

/// One application of the boundary fixed-point map for transmitted
/// intensity `u_f`:
///
/// U± = |(p₊(m₁₁⁽ʳ⁾+m₁₂⁽ʳ⁾) ± (m₂₁⁽ʳ⁾+m₂₂⁽ʳ⁾)) / (p₋+p₊)|² · U_f,
/// with p± = n_l √(1 + U∓ + 2U±) evaluated from the input `fields`.
pub fn boundary_map(
    u_f: f64,
    medium: &DefectMedium,
    m_r: &CMat2,
    fields: &FieldIntensities,
) -> Result<FieldIntensities> {
    if u_f < 0.0 {
        return Err(Error::Domain("u_f must be non-negative".into()));
    }
    let p_plus = medium.n_l * (1.0 + fields.u_minus + 2.0 * fields.u_plus).sqrt();
    let p_minus = medium.n_l * (1.0 + fields.u_plus + 2.0 * fields.u_minus).sqrt();
    let sum = p_plus + p_minus;
    if sum.norm() < SINGULARITY_GUARD {
        return Err(Error::Singular("boundary map: p+ + p- vanished".into()));
    }
    let a = m_r.m11 + m_r.m12;
    let b = m_r.m21 + m_r.m22;
    let u_plus = ((p_plus * a + b) / sum).norm_sqr() * u_f;
    let u_minus = ((p_plus * a - b) / sum).norm_sqr() * u_f;
    FieldIntensities::new(u_plus, u_minus)
}

/// Damped fixed-point solve of the coupled intensity equations.
///
/// Iterates x ← (1−α)x + α·map(x) from `warm_start` (or (0,0)) until the
/// ∞-norm residual ‖map(x) − x‖ drops below the tolerance.  The returned
/// point is the pre-map iterate, so its residual is exactly one further
/// map application.
pub fn solve_intensities(
    u_f: f64,
    medium: &DefectMedium,
    m_r: &CMat2,
    warm_start: Option<FieldIntensities>,
    settings: &SolverSettings,
) -> Result<Solution> {
    let mut x = warm_start.unwrap_or_default();
    let alpha = settings.relaxation;
    let mut residual = f64::INFINITY;
    for iteration in 1..=settings.max_iterations {
        let mapped = boundary_map(u_f, medium, m_r, &x)?;
        residual = (mapped.u_plus - x.u_plus)
            .abs()
            .max((mapped.u_minus - x.u_minus).abs());
        if residual <= settings.tolerance {
            return Ok(Solution {
                fields: x,
                iterations: iteration,
                residual,
            });
        }
        x = FieldIntensities {
            u_plus: (1.0 - alpha) * x.u_plus + alpha * mapped.u_plus,
            u_minus: (1.0 - alpha) * x.u_minus + alpha * mapped.u_minus,
        };
    }
    Err(Error::NonConvergence {
        u_f,
        iterations: settings.max_iterations,
        residual,
    })
}

/// Full nonlinear operating point with precomputed linear-block matrices.
///
/// `m_left`/`m_right` are the compositions of the layers left/right of the
/// defect at the probe frequency; the boundary map uses `m_right`.
pub fn operating_point_with(
    u_f: f64,
    medium: &DefectMedium,
    m_left: &CMat2,
    m_right: &CMat2,
    n0: f64,
    warm_start: Option<FieldIntensities>,
    settings: &SolverSettings,
) -> Result<OperatingPoint> {
    let solution = solve_intensities(u_f, medium, m_right, warm_start, settings)?;
    let m_d = defect_matrix(medium, &solution.fields)?;
    let full = *m_left * m_d * *m_right;
    let t = transmittance(&full, n0)?;
    if t < SINGULARITY_GUARD {
        return Err(Error::Singular(format!(
            "transmittance vanished at u_f = {u_f:e}"
        )));
    }
    Ok(OperatingPoint {
        u_f,
        fields: solution.fields,
        t,
        u_i: u_f / t,
        iterations: solution.iterations,
        residual: solution.residual,
    })
}

/// Convenience wrapper composing the stack blocks at `omega` on the fly.
pub fn operating_point(
    u_f: f64,
    medium: &DefectMedium,
    stack: &StackSpec,
    omega: f64,
    warm_start: Option<FieldIntensities>,
    settings: &SolverSettings,
) -> Result<OperatingPoint> {
    let m_left = left_submatrix(stack, omega)?;
    let m_right = right_submatrix(stack, omega)?;
    operating_point_with(
        u_f,
        medium,
        &m_left,
        &m_right,
        stack.n0,
        warm_start,
        settings,
    )
}
