//! Characteristic-matrix method for stratified linear media.
//!
//! Each layer is represented by a 2×2 complex matrix relating the
//! tangential field components across it; the stack response is the
//! ordered product, incident side first.

use std::ops::Mul;

use num_complex::Complex64;

use crate::constants::{C, SINGULARITY_GUARD};
use crate::error::{Error, Result};

/// 2×2 complex characteristic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl CMat2 {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        )
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

impl Mul for CMat2 {
    type Output = CMat2;

    fn mul(self, rhs: CMat2) -> CMat2 {
        CMat2::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

/// Geometry and material constants of one linear layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSpec {
    /// Complex relative permittivity.
    pub epsilon: Complex64,
    /// Complex relative permeability.
    pub mu: Complex64,
    /// Thickness in meters.
    pub thickness: f64,
}

impl LayerSpec {
    /// Non-magnetic dielectric layer with real refractive index `n`.
    pub fn dielectric(n: f64, thickness: f64) -> Self {
        Self {
            epsilon: Complex64::new(n * n, 0.0),
            mu: Complex64::ONE,
            thickness,
        }
    }
}

/// The multilayer: linear block left of the defect, the defect host layer,
/// and the linear block to its right, in ambient index `n0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackSpec {
    pub prefix: Vec<LayerSpec>,
    pub defect: LayerSpec,
    pub suffix: Vec<LayerSpec>,
    pub n0: f64,
}

/// Characteristic matrix of a single linear layer at angular frequency
/// `omega`, with k = √(εμ)·ω/c:
///
/// ```text
/// [ cos(kd)            −i√(μ/ε)·sin(kd) ]
/// [ −i√(ε/μ)·sin(kd)    cos(kd)         ]
/// ```
pub fn layer_matrix(layer: &LayerSpec, omega: f64) -> Result<CMat2> {
    if layer.epsilon.norm() < SINGULARITY_GUARD {
        return Err(Error::Domain("layer permittivity must be nonzero".into()));
    }
    let k = (layer.epsilon * layer.mu).sqrt() * omega / C;
    let kd = k * layer.thickness;
    let (cos, sin) = (kd.cos(), kd.sin());
    let i = Complex64::I;
    Ok(CMat2::new(
        cos,
        -i * (layer.mu / layer.epsilon).sqrt() * sin,
        -i * (layer.epsilon / layer.mu).sqrt() * sin,
        cos,
    ))
}

/// The standard symmetric geometry (AB)²A D (AB)²A with quarter-wave A/B
/// layers and a half-wave defect at the design wavelength `lambda_pc`:
/// d_A = λ/(4 n_A), d_B = λ/(4 n_B), d_D = λ/(2 n_D).
pub fn standard_stack(lambda_pc: f64, n_a: f64, n_b: f64, n_d: f64, n0: f64) -> StackSpec {
    let a = LayerSpec::dielectric(n_a, lambda_pc / (4.0 * n_a));
    let b = LayerSpec::dielectric(n_b, lambda_pc / (4.0 * n_b));
    let prefix = vec![a, b, a, b, a];
    StackSpec {
        suffix: prefix.clone(),
        prefix,
        defect: LayerSpec::dielectric(n_d, lambda_pc / (2.0 * n_d)),
        n0,
    }
}

/// Midgap angular frequency ω_pc = 2πc/λ_pc of the quarter-wave stack.
pub fn midgap_frequency(lambda_pc: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / lambda_pc
}

/// Left-to-right product in propagation order; empty input gives identity.
pub fn compose(matrices: &[CMat2]) -> CMat2 {
    matrices
        .iter()
        .copied()
        .fold(CMat2::identity(), |acc, m| acc * m)
}

/// Composition of all layer matrices in `layers` at `omega`.
pub fn layers_matrix(layers: &[LayerSpec], omega: f64) -> Result<CMat2> {
    let mut acc = CMat2::identity();
    for layer in layers {
        acc = acc * layer_matrix(layer, omega)?;
    }
    Ok(acc)
}

/// Matrix of the linear block to the right of the defect.
pub fn right_submatrix(stack: &StackSpec, omega: f64) -> Result<CMat2> {
    layers_matrix(&stack.suffix, omega)
}

/// Matrix of the linear block to the left of the defect.
pub fn left_submatrix(stack: &StackSpec, omega: f64) -> Result<CMat2> {
    layers_matrix(&stack.prefix, omega)
}

/// Transmission coefficient as printed:
/// T = |2n₀ / ((m₁₁ + m₁₂n₀) + (m₂₁ + m₂₂n₀))|.
///
/// This is the single modulus of the amplitude-style ratio; the intensity
/// (power) ratio is its square, see [`transmittance`].
pub fn transmission(m: &CMat2, n0: f64) -> Result<f64> {
    let denom = (m.m11 + m.m12 * n0) + (m.m21 + m.m22 * n0);
    if denom.norm() < SINGULARITY_GUARD {
        return Err(Error::Singular("transmission denominator vanished".into()));
    }
    Ok((2.0 * n0 / denom).norm())
}

/// Power transmittance |t|², the transmitted-to-incident intensity ratio.
/// This is the quantity the nonlinear solver and the response sweeps use
/// (Uᵢ = U_f / T with T an intensity ratio).
pub fn transmittance(m: &CMat2, n0: f64) -> Result<f64> {
    let t = transmission(m, n0)?;
    Ok(t * t)
}
