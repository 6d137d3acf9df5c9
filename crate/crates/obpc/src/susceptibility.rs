//! Susceptibilities of the Λ-type three-level dopant atoms with
//! spontaneously generated coherence.
//!
//! Everything here works in the scaled, dimensionless form: frequencies
//! (probe detuning Δ_p, Rabi frequency Ω_c) are measured in units of the
//! spontaneous decay rate γ, with equal decay rates γ₂ = γ₃ = γ hard-wired.
//! The unscaled two-rate expressions exist only as a test oracle.  Physical
//! unit conversions are collected in [`PhysicalScales`], [`scale_factors`]
//! and [`physical_intensity`].

use num_complex::Complex64;

use crate::constants::{C, EPS0, HBAR, SINGULARITY_GUARD};
use crate::error::{Error, Result};

/// Dimensionless atomic control knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicParams {
    /// Probe detuning Δ_p = ω₁₃ − ω_p in units of γ.
    pub delta_p: f64,
    /// Transverse-dipole coupling Rabi frequency Ω_c⁰ in units of γ.
    pub omega_c0: f64,
    /// SGC alignment parameter p = cos θ, real-valued in [0, 1].
    pub sgc_p: f64,
    /// Linear scale factor s⁽¹⁾ multiplying χ̃⁽¹⁾ (default 1).
    pub s1: f64,
}

impl AtomicParams {
    pub fn new(delta_p: f64, omega_c0: f64, sgc_p: f64, s1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sgc_p) {
            return Err(Error::Domain(format!(
                "sgc_p must lie in [0, 1], got {sgc_p}"
            )));
        }
        if omega_c0 < 0.0 {
            return Err(Error::Domain(format!(
                "omega_c0 must be non-negative, got {omega_c0}"
            )));
        }
        if s1 < 0.0 {
            return Err(Error::Domain(format!("s1 must be non-negative, got {s1}")));
        }
        Ok(Self {
            delta_p,
            omega_c0,
            sgc_p,
            s1,
        })
    }

    /// Effective Rabi frequency Ω_c = Ω_c⁰·√(1 − p²), the derived quantity.
    pub fn omega_c(&self) -> f64 {
        self.omega_c0 * (1.0 - self.sgc_p * self.sgc_p).sqrt()
    }

    /// Evaluate both susceptibilities at these parameters.
    pub fn susceptibilities(&self) -> Result<Susceptibilities> {
        let omega_c = self.omega_c();
        Ok(Susceptibilities {
            chi1: self.s1 * chi1_dimensionless(self.delta_p, omega_c)?,
            chi3: chi3_dimensionless(self.delta_p, omega_c, self.sgc_p)?,
        })
    }
}

/// Physical constants of the dopant ensemble, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    /// Atomic transition angular frequency ω₁₃, rad/s.
    pub omega_13: f64,
    /// Half spontaneous decay rate γ, rad/s.
    pub gamma: f64,
    /// Dopant number density N, m⁻³.
    pub dopant_density: f64,
    /// Transition dipole moment |μ₁₃|, C·m.
    pub dipole_moment: f64,
}

impl PhysicalScales {
    pub fn new(
        omega_13: f64,
        gamma: f64,
        dopant_density: f64,
        dipole_moment: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_13", omega_13),
            ("gamma", gamma),
            ("dopant_density", dopant_density),
            ("dipole_moment", dipole_moment),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            omega_13,
            gamma,
            dopant_density,
            dipole_moment,
        })
    }
}

/// Scaled susceptibilities at one parameter point.
///
/// `chi1` carries the s⁽¹⁾ factor and enters the defect permittivity
/// directly; `chi3` stays dimensionless (intensities are in a.u., so the
/// s⁽³⁾ factor only appears in the physical-unit output path).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibilities {
    pub chi1: Complex64,
    pub chi3: Complex64,
}

/// Ω_c = Ω_c⁰·√(1 − p²) for dipole alignment p = cos θ.
pub fn effective_rabi(omega_c0: f64, sgc_p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sgc_p) {
        return Err(Error::Domain(format!(
            "sgc_p must lie in [0, 1], got {sgc_p}"
        )));
    }
    if omega_c0 < 0.0 {
        return Err(Error::Domain(format!(
            "omega_c0 must be non-negative, got {omega_c0}"
        )));
    }
    Ok(omega_c0 * (1.0 - sgc_p * sgc_p).sqrt())
}

/// Dimensionless linear susceptibility
/// χ̃⁽¹⁾ = −Δ_p / (Ω_c² + i(2 + iΔ_p)Δ_p), with γ₂ = γ₃ = γ = 1.
pub fn chi1_dimensionless(delta_p: f64, omega_c: f64) -> Result<Complex64> {
    let i = Complex64::I;
    let denom = omega_c * omega_c + i * (2.0 + i * delta_p) * delta_p;
    if denom.norm() < SINGULARITY_GUARD {
        return Err(Error::Singular(format!(
            "chi1 denominator vanished at delta_p = {delta_p}, omega_c = {omega_c}"
        )));
    }
    Ok(-delta_p / denom)
}

/// Dimensionless third-order susceptibility χ̃⁽³⁾ with γ₂ = γ₃ = γ = 1.
///
/// Numerator: 8i Ω_c⁴ p² Δ_p² (Ω_c² − Δ_p²)
///   + Δ_p [Ω_c² + i(2+iΔ_p)Δ_p][Ω_c² − i(2−iΔ_p)Δ_p]
///     {2Ω_c⁴ − 2iΩ_c²Δ_p + Δ_p²(5Ω_c² + 4)}.
/// Denominator: β̃ = [Ω_c³ − iΩ_c(2−iΔ_p)Δ_p]² [Ω_c² + i(2+iΔ_p)Δ_p]³,
/// evaluated as a product of the pre-computed factors to limit cancellation.
pub fn chi3_dimensionless(delta_p: f64, omega_c: f64, sgc_p: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&sgc_p) {
        return Err(Error::Domain(format!(
            "sgc_p must lie in [0, 1], got {sgc_p}"
        )));
    }
    let i = Complex64::I;
    let d = delta_p;
    let w = omega_c;
    let w2 = w * w;

    let f_plus = w2 + i * (2.0 + i * d) * d;
    let f_minus = w2 - i * (2.0 - i * d) * d;
    let g = w2 * w - i * w * (2.0 - i * d) * d;
    let beta = g * g * f_plus * f_plus * f_plus;
    if beta.norm() < SINGULARITY_GUARD {
        return Err(Error::Singular(format!(
            "chi3 denominator vanished at delta_p = {delta_p}, omega_c = {omega_c}"
        )));
    }

    let sgc_term = 8.0 * i * w2 * w2 * sgc_p * sgc_p * d * d * (w2 - d * d);
    let brace = 2.0 * w2 * w2 - 2.0 * i * w2 * d + d * d * (5.0 * w2 + 4.0);
    Ok((sgc_term + d * f_plus * f_minus * brace) / beta)
}

/// Decay-rate relation γ = |μ₁₃|² ω₁₃³ / (3π ε₀ ħ c³).
pub fn gamma_from_dipole(dipole_moment: f64, omega_13: f64) -> f64 {
    dipole_moment * dipole_moment * omega_13.powi(3)
        / (3.0 * std::f64::consts::PI * EPS0 * HBAR * C.powi(3))
}

/// Scale factors (s⁽¹⁾, s⁽³⁾) connecting the dimensionless susceptibilities
/// to SI values: s⁽¹⁾ = 2N|μ₁₃|²/(ε₀ħγ), s⁽³⁾ = 2N|μ₁₃|⁴/(3ε₀ħ³γ³).
/// s⁽¹⁾ is dimensionless, s⁽³⁾ is in m²/V².
pub fn scale_factors(scales: &PhysicalScales) -> (f64, f64) {
    let mu2 = scales.dipole_moment * scales.dipole_moment;
    let s1 = 2.0 * scales.dopant_density * mu2 / (EPS0 * HBAR * scales.gamma);
    let s3 = 2.0 * scales.dopant_density * mu2 * mu2
        / (3.0 * EPS0 * HBAR.powi(3) * scales.gamma.powi(3));
    (s1, s3)
}

/// Incident intensity Iᵢ = c ε₀ Uᵢ / (2 Re χ⁽³⁾).
///
/// With `to_mw_per_cm2 = false` the result is in the same arbitrary units
/// used throughout the hysteresis traces; the flag applies the documented
/// a.u.→mW/cm² multiplication factor of 50.
pub fn physical_intensity(u_i: f64, chi3_re: f64, to_mw_per_cm2: bool) -> Result<f64> {
    if chi3_re.abs() < SINGULARITY_GUARD {
        return Err(Error::Singular(
            "physical_intensity: Re(chi3) is zero".into(),
        ));
    }
    let intensity = C * EPS0 * u_i / (2.0 * chi3_re);
    Ok(if to_mw_per_cm2 {
        50.0 * intensity
    } else {
        intensity
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    /// Unscaled third-order susceptibility with independent decay rates
    /// γ₂, γ₃ (numerator/denominator structure before the γ-scaling), with
    /// the ensemble prefactor dropped.  Test oracle only.
    fn chi3_unscaled(d: f64, w: f64, p: f64, g2: f64, g3: f64) -> Complex64 {
        let i = Complex64::I;
        let gs = g2 + g3;
        let f_plus = w * w + i * (gs + i * d) * d;
        let f_minus = w * w - i * (gs - i * d) * d;
        let brace = 2.0 * w.powi(4) * g3 - i * w * w * g2 * gs * d
            + d * d * (3.0 * w * w * g2 + g2 * g3 * g3 + g2.powi(3) + 2.0 * g3 * (w * w + g2 * g2));
        let first = 4.0 * i * w.powi(4) * p * p * g2 * gs * d * d * (w * w - d * d);
        let g = w.powi(3) - i * w * (gs - i * d) * d;
        let beta = g3 * g * g * f_plus * f_plus * f_plus;
        (first + d * f_plus * f_minus * brace) / beta
    }

    #[test]
    fn effective_rabi_limits() {
        assert_eq!(effective_rabi(4.0, 0.0).unwrap(), 4.0);
        assert_eq!(effective_rabi(4.0, 1.0).unwrap(), 0.0);
        // direct evaluation of 4·sqrt(1 − 0.9801)
        assert_relative_eq!(
            effective_rabi(4.0, 0.99).unwrap(),
            0.5642694391866357,
            max_relative = 1e-12
        );
    }

    #[test]
    fn effective_rabi_domain() {
        assert!(effective_rabi(4.0, -0.1).is_err());
        assert!(effective_rabi(4.0, 1.1).is_err());
        assert!(effective_rabi(-1.0, 0.5).is_err());
    }

    #[test]
    fn chi1_zero_detuning_is_zero() {
        let v = chi1_dimensionless(0.0, 4.0).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn chi1_singular_at_origin() {
        assert!(matches!(
            chi1_dimensionless(0.0, 0.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn chi1_reference_rows() {
        // no SGC, omega_c = omega_c0 = 4
        let v = chi1_dimensionless(0.05, 4.0).unwrap();
        assert_abs_diff_eq!(v.re, -0.0031, epsilon = 1e-4);
        // p = 0.99 reduces omega_c to 0.5642694...
        let oc = effective_rabi(4.0, 0.99).unwrap();
        let v = chi1_dimensionless(0.05, oc).unwrap();
        assert_abs_diff_eq!(v.re, -0.1439, epsilon = 1e-4);
    }

    #[test]
    fn chi3_zero_detuning_is_zero() {
        for (oc, p) in [(4.0, 0.0), (0.5, 0.7), (8.0, 0.99)] {
            let v = chi3_dimensionless(0.0, oc, p).unwrap();
            assert_eq!(v, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn chi3_reference_row_no_sgc() {
        let v = chi3_dimensionless(0.05, 4.0, 0.0).unwrap();
        assert_abs_diff_eq!(v.re, 0.00039, epsilon = 1e-5);
    }

    #[test]
    fn chi3_singular_when_beta_vanishes() {
        assert!(matches!(
            chi3_dimensionless(0.0, 0.0, 0.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn chi3_sgc_term_absent_at_p_zero() {
        // At p = 0 the full formula must agree with the route that drops the
        // SGC numerator term entirely.
        for (d, w) in [(0.05, 4.0), (0.3, 1.2), (-0.7, 6.0), (0.9, 0.4)] {
            let full = chi3_dimensionless(d, w, 0.0).unwrap();
            let i = Complex64::I;
            let w2 = w * w;
            let f_plus = w2 + i * (2.0 + i * d) * d;
            let f_minus = w2 - i * (2.0 - i * d) * d;
            let g = w2 * w - i * w * (2.0 - i * d) * d;
            let beta = g * g * f_plus * f_plus * f_plus;
            let brace = 2.0 * w2 * w2 - 2.0 * i * w2 * d + d * d * (5.0 * w2 + 4.0);
            let no_sgc = d * f_plus * f_minus * brace / beta;
            assert_abs_diff_eq!(full.re, no_sgc.re, epsilon = 1e-12);
            assert_abs_diff_eq!(full.im, no_sgc.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn chi3_matches_unscaled_oracle_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5bc1);
        for _ in 0..100 {
            let d: f64 = rng.random_range(-1.0..1.0);
            let w: f64 = rng.random_range(0.05..10.0);
            let p: f64 = rng.random_range(0.0..1.0);
            if d.abs() < 1e-3 {
                continue; // keep away from the common zero of both routes
            }
            let scaled = chi3_dimensionless(d, w, p).unwrap();
            let oracle = chi3_unscaled(d, w, p, 1.0, 1.0);
            assert_relative_eq!(scaled.re, oracle.re, max_relative = 1e-10);
            assert_relative_eq!(scaled.im, oracle.im, max_relative = 1e-10);
        }
    }

    #[test]
    fn susceptibilities_finite_on_parameter_box() {
        for di in 0..=40 {
            let d = -1.0 + 0.05 * di as f64;
            for wi in 0..=9 {
                let w0 = 1.0 + wi as f64;
                for pi in 0..=9 {
                    let p = 0.111 * pi as f64;
                    let a = AtomicParams::new(d, w0, p.min(0.999), 1.0).unwrap();
                    let s = a.susceptibilities().unwrap();
                    assert!(s.chi1.re.is_finite() && s.chi1.im.is_finite());
                    assert!(s.chi3.re.is_finite() && s.chi3.im.is_finite());
                }
            }
        }
    }

    #[test]
    fn chi3_maximum_sits_at_large_p() {
        // Re chi3 over p in [0, 1), delta_p in [0.01, 0.2] at omega_c0 = 4
        // peaks close to parallel dipole alignment.
        let mut best = (f64::MIN, 0.0);
        for pi in 0..200 {
            let p = pi as f64 / 200.0;
            let oc = effective_rabi(4.0, p).unwrap();
            for di in 0..100 {
                let d = 0.01 + 0.19 * di as f64 / 99.0;
                let v = chi3_dimensionless(d, oc, p).unwrap().re;
                if v > best.0 {
                    best = (v, p);
                }
            }
        }
        assert!(best.1 > 0.9, "argmax p = {}", best.1);
    }

    proptest! {
        #[test]
        fn chi1_odd_real_even_imag_in_detuning(
            d in 0.01f64..2.0,
            w in 0.1f64..10.0,
        ) {
            let plus = chi1_dimensionless(d, w).unwrap();
            let minus = chi1_dimensionless(-d, w).unwrap();
            prop_assert!((plus.re + minus.re).abs() < 1e-12);
            prop_assert!((plus.im - minus.im).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_quadratic_in_dipole() {
        assert_eq!(gamma_from_dipole(0.0, 2.5e15), 0.0);
        let g1 = gamma_from_dipole(1e-29, 2.5e15);
        let g2 = gamma_from_dipole(2e-29, 2.5e15);
        assert_relative_eq!(g2, 4.0 * g1, max_relative = 1e-12);
    }

    #[test]
    fn s1_consistency_round_trip() {
        // Substituting the decay-rate relation into s1 gives
        // s1 = 6 pi N c^3 / omega_13^3.
        let omega_13: f64 = 2.5e15;
        let mu = 3.5e-29;
        let n = 5.0e18;
        let gamma = gamma_from_dipole(mu, omega_13);
        let scales = PhysicalScales::new(omega_13, gamma, n, mu).unwrap();
        let (s1, _) = scale_factors(&scales);
        let closed_form = 6.0 * std::f64::consts::PI * n * C.powi(3) / omega_13.powi(3);
        assert_relative_eq!(s1, closed_form, max_relative = 1e-12);
    }

    #[test]
    fn density_for_unit_s1() {
        // N = omega_13^3/(6 pi c^3) makes s1 = 1; the value stays within the
        // N <~ 1e20 m^-3 bound.
        let omega_13: f64 = 2.5e15;
        let n = omega_13.powi(3) / (6.0 * std::f64::consts::PI * C.powi(3));
        assert_relative_eq!(n, 3.0764991126031733e19, max_relative = 1e-12);
        assert!(n < 1e20);
        let mu = 3.5e-29;
        let gamma = gamma_from_dipole(mu, omega_13);
        let (s1, _) = scale_factors(&PhysicalScales::new(omega_13, gamma, n, mu).unwrap());
        assert_relative_eq!(s1, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn s3_over_s1_ratio_identity() {
        let omega_13: f64 = 2.5e15;
        let mu = 3.5e-29;
        let n = 1e19;
        let gamma = gamma_from_dipole(mu, omega_13);
        let (s1, s3) = scale_factors(&PhysicalScales::new(omega_13, gamma, n, mu).unwrap());
        let ratio = std::f64::consts::PI * EPS0 * C.powi(3) / (omega_13.powi(3) * HBAR * gamma);
        assert_relative_eq!(s3 / s1, ratio, max_relative = 1e-12);
    }

    #[test]
    fn s3_magnitude_for_documented_gamma() {
        // The quoted s3 ~ 5.4e-8 m^2/V^2 corresponds to gamma ~ 8.42e9 rad/s
        // at s1 = 1, omega_13 = 2.5e15 rad/s (pass-through arithmetic).
        let omega_13: f64 = 2.5e15;
        let gamma = 8.423076881e9;
        let mu2 = 3.0 * std::f64::consts::PI * EPS0 * HBAR * C.powi(3) * gamma / omega_13.powi(3);
        let n = omega_13.powi(3) / (6.0 * std::f64::consts::PI * C.powi(3));
        let scales = PhysicalScales::new(omega_13, gamma, n, mu2.sqrt()).unwrap();
        let (s1, s3) = scale_factors(&scales);
        assert_relative_eq!(s1, 1.0, max_relative = 1e-9);
        assert_abs_diff_eq!(s3, 5.4e-8, epsilon = 1e-9);
    }

    #[test]
    fn physical_intensity_behaviour() {
        assert_eq!(physical_intensity(0.0, 0.5, false).unwrap(), 0.0);
        let a = physical_intensity(0.3, 0.4, false).unwrap();
        let b = physical_intensity(0.3, 0.2, false).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-12);
        assert!(physical_intensity(0.3, 0.0, false).is_err());
        let c = physical_intensity(0.3, 0.4, true).unwrap();
        assert_relative_eq!(c, 50.0 * a, max_relative = 1e-12);
    }

    #[test]
    fn threshold_intensity_ratio_from_reference_rows() {
        // (0.31/0.00039) / (0.48/0.9756) — arithmetic on the reference
        // thresholds; the SGC rows sit three orders of magnitude lower.
        let no_sgc = physical_intensity(0.31, 0.00039, false).unwrap();
        let sgc = physical_intensity(0.48, 0.9756, false).unwrap();
        let ratio = no_sgc / sgc;
        assert_relative_eq!(ratio, 1615.576923076923, max_relative = 1e-9);
        assert!(ratio > 1e3 && ratio < 1e4);
    }

    #[test]
    fn atomic_params_validation() {
        assert!(AtomicParams::new(0.05, 4.0, 1.5, 1.0).is_err());
        assert!(AtomicParams::new(0.05, -4.0, 0.5, 1.0).is_err());
        assert!(AtomicParams::new(0.05, 4.0, 0.5, -1.0).is_err());
        assert!(PhysicalScales::new(0.0, 1.0, 1.0, 1.0).is_err());
    }
}
