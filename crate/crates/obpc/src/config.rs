//! Run configuration: a single TOML file with nested sections, defaults
//! matching the standard geometry and atomic parameters, per-field
//! validation, and conversions into the domain types.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::defect::SolverSettings;
use crate::error::{Error, Result};
use crate::response::SpectrumMode;
use crate::susceptibility::AtomicParams;
use crate::tmm::{midgap_frequency, standard_stack, StackSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StackConfig {
    /// Midgap design wavelength λ_pc, meters.
    pub lambda_pc: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub n_d: f64,
    pub n0: f64,
}

impl Default for StackConfig {
    fn default() -> Self {
        Self {
            lambda_pc: 692e-9,
            n_a: 2.22,
            n_b: 1.41,
            n_d: 1.41,
            n0: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomicConfig {
    pub delta_p: f64,
    pub omega_c0: f64,
    pub sgc_p: f64,
    pub s1: f64,
}

impl Default for AtomicConfig {
    fn default() -> Self {
        Self {
            delta_p: 0.05,
            omega_c0: 4.0,
            sgc_p: 0.99,
            s1: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    /// Probe carrier angular frequency ω_p, rad/s.
    pub omega_p: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { omega_p: 2.5e15 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub relaxation: f64,
    pub max_iterations: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let s = SolverSettings::default();
        Self {
            tolerance: s.tolerance,
            relaxation: s.relaxation,
            max_iterations: s.max_iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UfPolicy {
    /// Start at `u_f_max_initial` and double until both turning points
    /// appear in the trace.
    Adaptive,
    /// Sweep exactly to `u_f_max`.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub spectrum_points: usize,
    /// Spectrum half-span as a fraction of ω_pc.
    pub spectrum_span: f64,
    pub hysteresis_points: usize,
    pub u_f_policy: UfPolicy,
    /// Sweep end for the fixed policy.
    pub u_f_max: f64,
    /// Starting sweep end for the adaptive policy.
    pub u_f_max_initial: f64,
    pub max_doublings: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            spectrum_points: 2000,
            spectrum_span: 0.2,
            hysteresis_points: 2000,
            u_f_policy: UfPolicy::Adaptive,
            u_f_max: 0.2,
            u_f_max_initial: 0.0125,
            max_doublings: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumModeConfig {
    /// χ⁽¹⁾ fixed at the configured detuning across the scan.
    Frozen,
    /// Δ_p tied to the scanned frequency through (ω₁₃, γ), with γ fixed by
    /// the configured Δ_p at the probe frequency.
    Dispersive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub mode: SpectrumModeConfig,
    /// Atomic resonance position for the dispersive mode, in units of ω_pc.
    pub omega_13_over_omega_pc: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            mode: SpectrumModeConfig::Dispersive,
            omega_13_over_omega_pc: 1.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Record,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Output path; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub stack: StackConfig,
    pub atomic: AtomicConfig,
    pub probe: ProbeConfig,
    pub solver: SolverConfig,
    pub sweep: SweepConfig,
    pub spectrum: SpectrumConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let err = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if !(self.stack.lambda_pc > 0.0) {
            return err("stack.lambda_pc", format!("must be positive, got {}", self.stack.lambda_pc));
        }
        for (name, v) in [
            ("stack.n_a", self.stack.n_a),
            ("stack.n_b", self.stack.n_b),
            ("stack.n_d", self.stack.n_d),
            ("stack.n0", self.stack.n0),
        ] {
            if !(v > 0.0) {
                return err(name, format!("must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.atomic.sgc_p) {
            return err("atomic.sgc_p", format!("must lie in [0, 1], got {}", self.atomic.sgc_p));
        }
        if self.atomic.omega_c0 < 0.0 {
            return err("atomic.omega_c0", format!("must be non-negative, got {}", self.atomic.omega_c0));
        }
        if self.atomic.s1 < 0.0 {
            return err("atomic.s1", format!("must be non-negative, got {}", self.atomic.s1));
        }
        if !(self.probe.omega_p > 0.0) {
            return err("probe.omega_p", format!("must be positive, got {}", self.probe.omega_p));
        }
        if !(self.solver.tolerance > 0.0) {
            return err("solver.tolerance", format!("must be positive, got {}", self.solver.tolerance));
        }
        if !(self.solver.relaxation > 0.0 && self.solver.relaxation <= 1.0) {
            return err("solver.relaxation", format!("must lie in (0, 1], got {}", self.solver.relaxation));
        }
        if self.solver.max_iterations == 0 {
            return err("solver.max_iterations", "must be at least 1".into());
        }
        if self.sweep.spectrum_points < 2 {
            return err("sweep.spectrum_points", format!("grid needs at least 2 points, got {}", self.sweep.spectrum_points));
        }
        if !(self.sweep.spectrum_span > 0.0 && self.sweep.spectrum_span < 1.0) {
            return err("sweep.spectrum_span", format!("must lie in (0, 1), got {}", self.sweep.spectrum_span));
        }
        if self.sweep.hysteresis_points < 2 {
            return err("sweep.hysteresis_points", format!("grid needs at least 2 points, got {}", self.sweep.hysteresis_points));
        }
        if self.sweep.u_f_policy == UfPolicy::Fixed && !(self.sweep.u_f_max > 0.0) {
            return err("sweep.u_f_max", format!("must be positive for the fixed policy, got {}", self.sweep.u_f_max));
        }
        if !(self.sweep.u_f_max_initial > 0.0) {
            return err("sweep.u_f_max_initial", format!("must be positive, got {}", self.sweep.u_f_max_initial));
        }
        if !(self.spectrum.omega_13_over_omega_pc > 0.0) {
            return err("spectrum.omega_13_over_omega_pc", format!("must be positive, got {}", self.spectrum.omega_13_over_omega_pc));
        }
        Ok(())
    }

    pub fn stack_spec(&self) -> StackSpec {
        standard_stack(
            self.stack.lambda_pc,
            self.stack.n_a,
            self.stack.n_b,
            self.stack.n_d,
            self.stack.n0,
        )
    }

    pub fn atomic_params(&self) -> Result<AtomicParams> {
        AtomicParams::new(
            self.atomic.delta_p,
            self.atomic.omega_c0,
            self.atomic.sgc_p,
            self.atomic.s1,
        )
    }

    pub fn solver_settings(&self) -> SolverSettings {
        SolverSettings {
            tolerance: self.solver.tolerance,
            relaxation: self.solver.relaxation,
            max_iterations: self.solver.max_iterations,
        }
    }

    pub fn spectrum_mode(&self) -> Result<SpectrumMode> {
        match self.spectrum.mode {
            SpectrumModeConfig::Frozen => Ok(SpectrumMode::FrozenChi1),
            SpectrumModeConfig::Dispersive => {
                let omega_13 =
                    self.spectrum.omega_13_over_omega_pc * midgap_frequency(self.stack.lambda_pc);
                SpectrumMode::dispersive_from_detuning(
                    self.probe.omega_p,
                    self.atomic.delta_p,
                    omega_13,
                )
            }
        }
    }
}
