//! Parameter sweeps built on the nonlinear solver: transmission spectra,
//! susceptibility scans, hysteresis traces and threshold extraction.

use num_complex::Complex64;

use crate::defect::{
    operating_point_with, DefectMedium, FieldIntensities, OperatingPoint, SolverSettings,
};
use crate::error::{Error, Result};
use crate::susceptibility::{chi1_dimensionless, effective_rabi, AtomicParams};
use crate::tmm::{layers_matrix, left_submatrix, right_submatrix, transmittance, StackSpec};

/// Maximum number of u_f step bisections when the warm-started solve fails.
const MAX_STEP_BISECTIONS: u32 = 20;

/// T below this level counts as band-gap floor during peak detection.
const GAP_FLOOR: f64 = 0.05;

/// T above this level counts as a band edge (or a defect resonance).
const EDGE_LEVEL: f64 = 0.5;

/// How the defect-layer χ⁽¹⁾ responds to the scanned frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumMode {
    /// χ⁽¹⁾ held fixed at the configured (Δ_p, Ω_c, p) across the scan.
    FrozenChi1,
    /// Δ_p tied to the scanned frequency: Δ_p(ω) = (ω₁₃ − ω)/γ.  This is
    /// what makes the defect resonance narrow as Ω_c⁰ decreases.
    Dispersive { omega_13: f64, gamma: f64 },
}

impl SpectrumMode {
    /// Dispersive mode with γ fixed by the configured detuning:
    /// Δ_p = (ω₁₃ − ω_p)/γ must hold at the probe frequency.
    pub fn dispersive_from_detuning(omega_p: f64, delta_p: f64, omega_13: f64) -> Result<Self> {
        if delta_p == 0.0 {
            return Err(Error::Domain(
                "dispersive spectrum needs a nonzero configured detuning".into(),
            ));
        }
        let gamma = (omega_13 - omega_p) / delta_p;
        if gamma <= 0.0 {
            return Err(Error::Domain(format!(
                "dispersive spectrum: (omega_13 - omega_p)/delta_p = {gamma:e} must be positive"
            )));
        }
        Ok(Self::Dispersive { omega_13, gamma })
    }
}

/// One hysteresis trace: operating points on a strictly increasing u_f grid.
#[derive(Debug, Clone)]
pub struct HysteresisCurve {
    pub points: Vec<OperatingPoint>,
    pub atomic: AtomicParams,
    pub stack: StackSpec,
    pub omega_p: f64,
}

/// Switch-up/switch-down thresholds and loop metrics of a traced curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HysteresisSummary {
    /// Uᵢ at the first fold (ramp-up jump), if any.
    pub switch_up_ui: Option<f64>,
    /// Uᵢ at the subsequent fold (ramp-down jump), if any.
    pub switch_down_ui: Option<f64>,
    pub loop_width: Option<f64>,
    /// max T − min T over the bistable Uᵢ interval (0 when not bistable).
    pub contrast: f64,
    pub bistable: bool,
}

/// Detected defect resonance in a transmission spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectPeak {
    pub center: f64,
    pub height: f64,
    pub fwhm: f64,
}

/// Spectrum structure: the defect peak and the band gap around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumAnalysis {
    pub peak: DefectPeak,
    /// Low edge of the gap (last ω below the peak where T reaches EDGE_LEVEL).
    pub gap_low: f64,
    /// High edge of the gap.
    pub gap_high: f64,
    /// Whether the peak sits strictly inside a detected low-T band.
    pub peak_in_gap: bool,
    /// Number of local maxima above EDGE_LEVEL inside the gap.
    pub peaks_in_gap: usize,
}

/// Linear transmission T(ω) of the doped stack with χ⁽³⁾ = 0.
pub fn linear_spectrum(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_grid: &[f64],
    mode: SpectrumMode,
) -> Result<Vec<(f64, f64)>> {
    if omega_grid.is_empty() {
        return Err(Error::Domain("spectrum grid must be non-empty".into()));
    }
    let omega_c = effective_rabi(atomic.omega_c0, atomic.sgc_p)?;
    let epsilon_host = stack.defect.epsilon.re;
    let frozen_chi1 = atomic.s1 * chi1_dimensionless(atomic.delta_p, omega_c)?;
    let mut out = Vec::with_capacity(omega_grid.len());
    for &omega in omega_grid {
        if omega <= 0.0 {
            return Err(Error::Domain("spectrum grid must be positive".into()));
        }
        let chi1 = match mode {
            SpectrumMode::FrozenChi1 => frozen_chi1,
            SpectrumMode::Dispersive { omega_13, gamma } => {
                let delta = (omega_13 - omega) / gamma;
                atomic.s1 * chi1_dimensionless(delta, omega_c)?
            }
        };
        let medium = DefectMedium::new(epsilon_host, chi1, stack.defect.thickness, omega)?;
        let m_d = crate::defect::defect_matrix(&medium, &FieldIntensities::default())?;
        let full = left_submatrix(stack, omega)? * m_d * right_submatrix(stack, omega)?;
        out.push((omega, transmittance(&full, stack.n0)?));
    }
    Ok(out)
}

/// Uniform ω grid of `n` points spanning `(1 ± span)·omega_center`.
pub fn frequency_grid(omega_center: f64, span: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| omega_center * (1.0 - span + 2.0 * span * j as f64 / (n - 1).max(1) as f64))
        .collect()
}

/// Locate the defect peak and the band gap in a spectrum.
///
/// The peak is the global maximum; its FWHM comes from linearly
/// interpolated half-height crossings.  Gap edges are the nearest
/// frequencies on either side where T climbs back above `EDGE_LEVEL`
/// after having dropped below `GAP_FLOOR`.
pub fn analyze_spectrum(spectrum: &[(f64, f64)]) -> Option<SpectrumAnalysis> {
    if spectrum.len() < 5 {
        return None;
    }
    let i_peak = spectrum
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)?;
    let peak_t = spectrum[i_peak].1;
    let half = peak_t / 2.0;

    let cross = |i0: usize, i1: usize| -> f64 {
        let (x0, y0) = spectrum[i0];
        let (x1, y1) = spectrum[i1];
        if y1 == y0 {
            x0
        } else {
            x0 + (half - y0) * (x1 - x0) / (y1 - y0)
        }
    };
    let mut li = i_peak;
    while li > 0 && spectrum[li].1 > half {
        li -= 1;
    }
    let mut ri = i_peak;
    while ri < spectrum.len() - 1 && spectrum[ri].1 > half {
        ri += 1;
    }
    if spectrum[li].1 > half || spectrum[ri].1 > half {
        return None; // peak truncated by the scan window
    }
    let left = cross(li, li + 1);
    let right = cross(ri - 1, ri);
    let peak = DefectPeak {
        center: spectrum[i_peak].0,
        height: peak_t,
        fwhm: right - left,
    };

    // walk outward: first below the gap floor, then up to the band edge
    let mut saw_floor_left = false;
    let mut gap_low = spectrum[0].0;
    let mut found_low = false;
    for j in (0..i_peak).rev() {
        let t = spectrum[j].1;
        if !saw_floor_left {
            saw_floor_left = t < GAP_FLOOR;
        } else if t > EDGE_LEVEL {
            gap_low = spectrum[j].0;
            found_low = true;
            break;
        }
    }
    let mut saw_floor_right = false;
    let mut gap_high = spectrum[spectrum.len() - 1].0;
    let mut found_high = false;
    for j in i_peak + 1..spectrum.len() {
        let t = spectrum[j].1;
        if !saw_floor_right {
            saw_floor_right = t < GAP_FLOOR;
        } else if t > EDGE_LEVEL {
            gap_high = spectrum[j].0;
            found_high = true;
            break;
        }
    }
    let peaks_in_gap = spectrum
        .windows(3)
        .filter(|w| {
            w[1].0 > gap_low
                && w[1].0 < gap_high
                && w[1].1 > EDGE_LEVEL
                && w[1].1 >= w[0].1
                && w[1].1 > w[2].1
        })
        .count();
    Some(SpectrumAnalysis {
        peak,
        gap_low,
        gap_high,
        peak_in_gap: saw_floor_left
            && saw_floor_right
            && (found_low || gap_low < peak.center)
            && (found_high || gap_high > peak.center),
        peaks_in_gap,
    })
}

/// Which second parameter a χ scan varies alongside Δ_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    SgcP,
    OmegaC0,
}

/// One χ-scan grid sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSample {
    pub delta_p: f64,
    pub axis_value: f64,
    pub chi1: Complex64,
    pub chi3: Complex64,
}

/// Tabulate χ̃⁽¹⁾ (s⁽¹⁾ applied) and χ̃⁽³⁾ over a (Δ_p × axis) grid.
pub fn chi_scan(
    atomic: &AtomicParams,
    delta_p_grid: &[f64],
    axis: ScanAxis,
    axis_grid: &[f64],
) -> Result<Vec<ChiSample>> {
    if delta_p_grid.is_empty() || axis_grid.is_empty() {
        return Err(Error::Domain("chi scan grids must be non-empty".into()));
    }
    let mut out = Vec::with_capacity(delta_p_grid.len() * axis_grid.len());
    for &delta_p in delta_p_grid {
        for &axis_value in axis_grid {
            let (omega_c0, sgc_p) = match axis {
                ScanAxis::SgcP => (atomic.omega_c0, axis_value),
                ScanAxis::OmegaC0 => (axis_value, atomic.sgc_p),
            };
            let point = AtomicParams::new(delta_p, omega_c0, sgc_p, atomic.s1)?;
            let s = point.susceptibilities()?;
            out.push(ChiSample {
                delta_p,
                axis_value,
                chi1: s.chi1,
                chi3: s.chi3,
            });
        }
    }
    Ok(out)
}

fn defect_medium_for(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_p: f64,
) -> Result<DefectMedium> {
    let omega_c = effective_rabi(atomic.omega_c0, atomic.sgc_p)?;
    let chi1 = atomic.s1 * chi1_dimensionless(atomic.delta_p, omega_c)?;
    DefectMedium::new(
        stack.defect.epsilon.re,
        chi1,
        stack.defect.thickness,
        omega_p,
    )
}

/// Advance the warm-start chain from a converged point to `u_f`, bisecting
/// the step when the solver fails to converge.
fn advance(
    u_from: f64,
    fields_from: FieldIntensities,
    u_to: f64,
    medium: &DefectMedium,
    m_r: &crate::tmm::CMat2,
    settings: &SolverSettings,
    depth: u32,
) -> Result<crate::defect::Solution> {
    match crate::defect::solve_intensities(u_to, medium, m_r, Some(fields_from), settings) {
        Ok(s) => Ok(s),
        Err(Error::NonConvergence { .. }) if depth < MAX_STEP_BISECTIONS => {
            let mid = 0.5 * (u_from + u_to);
            let half = advance(u_from, fields_from, mid, medium, m_r, settings, depth + 1)?;
            advance(mid, half.fields, u_to, medium, m_r, settings, depth + 1)
        }
        Err(e) => Err(e),
    }
}

/// Warm-started sweep of the operating point over a uniform u_f grid from
/// 0 to `u_f_max`.
pub fn trace_hysteresis(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_p: f64,
    u_f_max: f64,
    n_points: usize,
    settings: &SolverSettings,
) -> Result<HysteresisCurve> {
    if !(u_f_max > 0.0) {
        return Err(Error::Domain("u_f_max must be positive".into()));
    }
    if n_points < 2 {
        return Err(Error::Domain("hysteresis trace needs at least 2 points".into()));
    }
    let medium = defect_medium_for(stack, atomic, omega_p)?;
    let m_left = left_submatrix(stack, omega_p)?;
    let m_right = right_submatrix(stack, omega_p)?;
    let mut points = Vec::with_capacity(n_points);
    let mut warm = FieldIntensities::default();
    let mut u_prev = 0.0;
    for j in 0..n_points {
        let u_f = u_f_max * j as f64 / (n_points - 1) as f64;
        let solution = advance(u_prev, warm, u_f, &medium, &m_right, settings, 0)?;
        let m_d = crate::defect::defect_matrix(&medium, &solution.fields)?;
        let full = m_left * m_d * m_right;
        let t = transmittance(&full, stack.n0)?;
        points.push(OperatingPoint {
            u_f,
            fields: solution.fields,
            t,
            u_i: u_f / t,
            iterations: solution.iterations,
            residual: solution.residual,
        });
        warm = solution.fields;
        u_prev = u_f;
    }
    Ok(HysteresisCurve {
        points,
        atomic: *atomic,
        stack: stack.clone(),
        omega_p,
    })
}

/// Cold-start sweep: every grid point solved independently from (0, 0).
/// Points are mutually independent, so evaluation order is irrelevant;
/// on instances where both converge this agrees with the warm-started
/// trace within solver tolerance away from fold regions.
pub fn trace_hysteresis_cold(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_p: f64,
    u_f_max: f64,
    n_points: usize,
    settings: &SolverSettings,
) -> Result<Vec<Result<OperatingPoint>>> {
    if !(u_f_max > 0.0) {
        return Err(Error::Domain("u_f_max must be positive".into()));
    }
    if n_points < 2 {
        return Err(Error::Domain("hysteresis trace needs at least 2 points".into()));
    }
    let medium = defect_medium_for(stack, atomic, omega_p)?;
    let m_left = left_submatrix(stack, omega_p)?;
    let m_right = right_submatrix(stack, omega_p)?;
    Ok((0..n_points)
        .map(|j| {
            let u_f = u_f_max * j as f64 / (n_points - 1) as f64;
            operating_point_with(u_f, &medium, &m_left, &m_right, stack.n0, None, settings)
        })
        .collect())
}

/// Three-point parabolic refinement of an extremum value.
fn refine_extremum(y0: f64, y1: f64, y2: f64) -> f64 {
    let curvature = y0 - 2.0 * y1 + y2;
    if curvature == 0.0 {
        y1
    } else {
        y1 - (y2 - y0) * (y2 - y0) / (8.0 * curvature)
    }
}

/// Extract thresholds from a traced curve.
///
/// The switch-up threshold is the first local maximum of Uᵢ along
/// increasing u_f, the switch-down threshold the subsequent local minimum;
/// both are refined parabolically on the discrete trace.  Contrast is the
/// T range over points with Uᵢ between the two thresholds.
pub fn summarize(curve: &HysteresisCurve) -> HysteresisSummary {
    let ui: Vec<f64> = curve.points.iter().map(|p| p.u_i).collect();
    let mut switch_up = None;
    let mut switch_down = None;
    for j in 1..ui.len().saturating_sub(1) {
        if switch_up.is_none() {
            if ui[j] >= ui[j - 1] && ui[j] > ui[j + 1] {
                switch_up = Some(refine_extremum(ui[j - 1], ui[j], ui[j + 1]));
            }
        } else if ui[j] <= ui[j - 1] && ui[j] < ui[j + 1] {
            switch_down = Some(refine_extremum(ui[j - 1], ui[j], ui[j + 1]));
            break;
        }
    }
    let bistable = match (switch_up, switch_down) {
        (Some(up), Some(down)) => up > down && down > 0.0,
        _ => false,
    };
    if !bistable {
        return HysteresisSummary {
            switch_up_ui: None,
            switch_down_ui: None,
            loop_width: None,
            contrast: 0.0,
            bistable: false,
        };
    }
    let (up, down) = (switch_up.unwrap(), switch_down.unwrap());
    let mut t_min = f64::INFINITY;
    let mut t_max = f64::NEG_INFINITY;
    for p in &curve.points {
        if p.u_i >= down && p.u_i <= up {
            t_min = t_min.min(p.t);
            t_max = t_max.max(p.t);
        }
    }
    let contrast = if t_max >= t_min { t_max - t_min } else { 0.0 };
    HysteresisSummary {
        switch_up_ui: Some(up),
        switch_down_ui: Some(down),
        loop_width: Some(up - down),
        contrast,
        bistable: true,
    }
}

/// Sweep with u_f_max chosen adaptively: starting from `u_f_max_initial`,
/// double until the trace contains both turning points, at most
/// `max_doublings` times.  Returns the first bistable trace, or the last
/// attempted one (summary not bistable) if none is found.
pub fn trace_until_bistable(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_p: f64,
    u_f_max_initial: f64,
    n_points: usize,
    max_doublings: u32,
    settings: &SolverSettings,
) -> Result<(HysteresisCurve, HysteresisSummary)> {
    if !(u_f_max_initial > 0.0) {
        return Err(Error::Domain("u_f_max_initial must be positive".into()));
    }
    let mut u_f_max = u_f_max_initial;
    let mut attempt = 0;
    loop {
        let curve = trace_hysteresis(stack, atomic, omega_p, u_f_max, n_points, settings)?;
        let summary = summarize(&curve);
        if summary.bistable || attempt >= max_doublings {
            return Ok((curve, summary));
        }
        u_f_max *= 2.0;
        attempt += 1;
    }
}

/// Linear transmittance of the doped stack at the probe frequency itself.
pub fn linear_transmittance_at_probe(
    stack: &StackSpec,
    atomic: &AtomicParams,
    omega_p: f64,
) -> Result<f64> {
    let medium = defect_medium_for(stack, atomic, omega_p)?;
    let m_d = crate::defect::defect_matrix(&medium, &FieldIntensities::default())?;
    let full = layers_matrix(&stack.prefix, omega_p)? * m_d * layers_matrix(&stack.suffix, omega_p)?;
    transmittance(&full, stack.n0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmm::{midgap_frequency, standard_stack};
    use approx::assert_abs_diff_eq;

    const OMEGA_P: f64 = 2.5e15;

    fn paper_stack() -> StackSpec {
        standard_stack(692e-9, 2.22, 1.41, 1.41, 1.0)
    }

    fn atomic(delta_p: f64, omega_c0: f64, sgc_p: f64) -> AtomicParams {
        AtomicParams::new(delta_p, omega_c0, sgc_p, 1.0).unwrap()
    }

    #[test]
    fn undoped_spectrum_symmetric_with_peak_at_midgap() {
        let stack = paper_stack();
        let om_pc = midgap_frequency(692e-9);
        // probe symmetry with an explicit symmetric grid around om_pc
        let undoped = atomic(0.0, 4.0, 0.0); // delta_p = 0 gives chi1 = 0
        let offsets: Vec<f64> = (1..200).map(|j| 0.15 * j as f64 / 200.0).collect();
        for &off in &offsets {
            let grid = [om_pc * (1.0 - off), om_pc * (1.0 + off)];
            let spec =
                linear_spectrum(&stack, &undoped, &grid, SpectrumMode::FrozenChi1).unwrap();
            assert_abs_diff_eq!(spec[0].1, spec[1].1, epsilon = 1e-9);
        }
        let grid = frequency_grid(om_pc, 0.2, 2001); // odd count puts om_pc on the grid
        let spec = linear_spectrum(&stack, &undoped, &grid, SpectrumMode::FrozenChi1).unwrap();
        let analysis = analyze_spectrum(&spec).unwrap();
        assert_abs_diff_eq!(analysis.peak.center, om_pc, epsilon = om_pc * 2.1e-4);
        assert!(analysis.peak_in_gap);
        assert_eq!(analysis.peaks_in_gap, 1);
    }

    #[test]
    fn dispersive_spectrum_narrows_and_shifts_with_decreasing_coupling() {
        let stack = paper_stack();
        let om_pc = midgap_frequency(692e-9);
        let grid = frequency_grid(om_pc, 0.2, 2000);
        let mut prev: Option<DefectPeak> = None;
        for omega_c0 in [8.0, 6.0, 4.0] {
            let a = atomic(0.05, omega_c0, 0.99);
            let mode =
                SpectrumMode::dispersive_from_detuning(OMEGA_P, a.delta_p, 1.01 * om_pc).unwrap();
            let spec = linear_spectrum(&stack, &a, &grid, mode).unwrap();
            let peak = analyze_spectrum(&spec).unwrap().peak;
            if let Some(p) = prev {
                assert!(peak.fwhm < p.fwhm, "fwhm {} !< {}", peak.fwhm, p.fwhm);
                // the resonance moves up, away from the probe below the gap
                assert!(peak.center > p.center);
            }
            prev = Some(peak);
        }
    }

    #[test]
    fn frozen_spectrum_center_also_moves_away_from_probe() {
        let stack = paper_stack();
        let om_pc = midgap_frequency(692e-9);
        let grid = frequency_grid(om_pc, 0.2, 2000);
        let mut prev: Option<f64> = None;
        for omega_c0 in [8.0, 6.0, 4.0] {
            let a = atomic(0.05, omega_c0, 0.99);
            let spec = linear_spectrum(&stack, &a, &grid, SpectrumMode::FrozenChi1).unwrap();
            let peak = analyze_spectrum(&spec).unwrap().peak;
            if let Some(c) = prev {
                assert!(peak.center > c);
            }
            prev = Some(peak.center);
        }
    }

    #[test]
    fn chi_scan_shapes_and_zero_row() {
        let base = atomic(0.05, 4.0, 0.0);
        let dgrid: Vec<f64> = (0..5).map(|j| 0.05 * j as f64).collect(); // includes 0
        let pgrid: Vec<f64> = (0..4).map(|j| 0.3 * j as f64).collect();
        let table = chi_scan(&base, &dgrid, ScanAxis::SgcP, &pgrid).unwrap();
        assert_eq!(table.len(), 20);
        for s in table.iter().filter(|s| s.delta_p == 0.0) {
            assert_eq!(s.chi1, Complex64::ZERO);
            assert_eq!(s.chi3, Complex64::ZERO);
        }
        // p = 0 slice equals the direct evaluation
        for s in table.iter().filter(|s| s.axis_value == 0.0) {
            let direct =
                crate::susceptibility::chi3_dimensionless(s.delta_p, base.omega_c0, 0.0).unwrap();
            assert_eq!(s.chi3, direct);
        }
    }

    #[test]
    fn trace_contract_and_reference_threshold() {
        let stack = paper_stack();
        let a = atomic(0.05, 4.0, 0.0);
        let curve = trace_hysteresis(
            &stack,
            &a,
            OMEGA_P,
            0.1,
            2000,
            &SolverSettings::default(),
        )
        .unwrap();
        assert_eq!(curve.points.len(), 2000);
        assert!(curve
            .points
            .windows(2)
            .all(|w| w[1].u_f > w[0].u_f));
        assert!(curve
            .points
            .iter()
            .all(|p| p.residual <= SolverSettings::default().tolerance));
        let summary = summarize(&curve);
        assert!(summary.bistable);
        assert_abs_diff_eq!(summary.switch_up_ui.unwrap(), 0.31, epsilon = 0.02);
        assert!(summary.switch_down_ui.unwrap() < summary.switch_up_ui.unwrap());
        assert!(summary.contrast > 0.0 && summary.contrast <= 1.0);
    }

    #[test]
    fn trace_rescaling_grid_leaves_values_unchanged() {
        let stack = paper_stack();
        let a = atomic(0.05, 6.0, 0.99);
        let s = SolverSettings::default();
        let half = trace_hysteresis(&stack, &a, OMEGA_P, 0.04, 501, &s).unwrap();
        let full = trace_hysteresis(&stack, &a, OMEGA_P, 0.08, 1001, &s).unwrap();
        for (j, p) in half.points.iter().enumerate() {
            let q = &full.points[j]; // same u_f values on the doubled grid
            assert_abs_diff_eq!(p.u_f, q.u_f, epsilon = 1e-15);
            assert_abs_diff_eq!(p.t, q.t, epsilon = 1e-9);
        }
    }

    #[test]
    fn warm_and_cold_traces_agree_where_both_converge() {
        let stack = paper_stack();
        let a = atomic(0.05, 8.0, 0.99);
        let s = SolverSettings::default();
        let warm = trace_hysteresis(&stack, &a, OMEGA_P, 0.02, 101, &s).unwrap();
        let cold = trace_hysteresis_cold(&stack, &a, OMEGA_P, 0.02, 101, &s).unwrap();
        let mut compared = 0;
        for (w, c) in warm.points.iter().zip(cold.iter()) {
            if let Ok(c) = c {
                // same stable branch below the first fold
                if (w.fields.u_plus - c.fields.u_plus).abs() < 1e-6 {
                    assert_abs_diff_eq!(w.t, c.t, epsilon = 1e-8);
                    compared += 1;
                }
            }
        }
        assert!(compared > 50);
    }

    #[test]
    fn trace_continuity_no_nan() {
        let stack = paper_stack();
        let a = atomic(0.05, 4.0, 0.99);
        let curve = trace_hysteresis(
            &stack,
            &a,
            OMEGA_P,
            0.2,
            2000,
            &SolverSettings::default(),
        )
        .unwrap();
        let du = 0.2 / 1999.0;
        for w in curve.points.windows(2) {
            assert!(w[1].fields.u_plus.is_finite() && w[1].u_i.is_finite());
            let step = (w[1].fields.u_plus - w[0].fields.u_plus).abs();
            assert!(step < 2000.0 * du, "jump {step} at u_f {}", w[1].u_f);
        }
    }

    #[test]
    fn monotone_curve_is_not_bistable() {
        let stack = paper_stack();
        // far detuned: essentially linear response, no fold
        let a = atomic(0.9, 8.0, 0.0);
        let curve = trace_hysteresis(
            &stack,
            &a,
            OMEGA_P,
            0.01,
            400,
            &SolverSettings::default(),
        )
        .unwrap();
        let summary = summarize(&curve);
        assert!(!summary.bistable);
        assert_eq!(summary.switch_up_ui, None);
        assert_eq!(summary.loop_width, None);
        assert_eq!(summary.contrast, 0.0);
    }

    #[test]
    fn adaptive_sweep_finds_reference_thresholds() {
        let stack = paper_stack();
        let s = SolverSettings::default();
        for (omega_c0, expect) in [(4.0, 0.48), (6.0, 0.38), (8.0, 0.34)] {
            let a = atomic(0.05, omega_c0, 0.99);
            let (_, summary) =
                trace_until_bistable(&stack, &a, OMEGA_P, 0.0125, 2000, 8, &s).unwrap();
            assert!(summary.bistable);
            assert_abs_diff_eq!(summary.switch_up_ui.unwrap(), expect, epsilon = 0.02);
        }
    }

    #[test]
    fn detuning_ordering_of_thresholds() {
        // switch-up U_i grows with detuning at omega_c0 = 6, p = 0.99
        let stack = paper_stack();
        let s = SolverSettings::default();
        let mut prev = 0.0;
        for delta_p in [0.05, 0.10, 0.15] {
            let a = atomic(delta_p, 6.0, 0.99);
            let (_, summary) =
                trace_until_bistable(&stack, &a, OMEGA_P, 0.0125, 2000, 8, &s).unwrap();
            let up = summary.switch_up_ui.unwrap();
            assert!(up > prev, "threshold {up} not above {prev} at {delta_p}");
            prev = up;
        }
    }

    #[test]
    fn threshold_stable_under_grid_halving() {
        let stack = paper_stack();
        let a = atomic(0.05, 4.0, 0.99);
        let s = SolverSettings::default();
        let coarse = summarize(
            &trace_hysteresis(&stack, &a, OMEGA_P, 0.2, 2000, &s).unwrap(),
        );
        let fine = summarize(
            &trace_hysteresis(&stack, &a, OMEGA_P, 0.2, 4000, &s).unwrap(),
        );
        let d_up = (coarse.switch_up_ui.unwrap() - fine.switch_up_ui.unwrap()).abs();
        let d_down = (coarse.switch_down_ui.unwrap() - fine.switch_down_ui.unwrap()).abs();
        assert!(d_up < 1e-3, "switch-up moved by {d_up}");
        assert!(d_down < 1e-3, "switch-down moved by {d_down}");
    }
}
