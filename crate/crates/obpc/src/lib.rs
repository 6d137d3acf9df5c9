//! Optical bistability in a doped one-dimensional photonic crystal.
//!
//! The crate simulates probe-light transmission through a symmetric
//! (AB)²A D (AB)²A multilayer whose central defect layer D is doped with
//! Λ-type three-level atoms exhibiting spontaneously generated coherence
//! (SGC).  The dopants contribute a linear susceptibility χ⁽¹⁾ to the
//! defect permittivity and a Kerr-type χ⁽³⁾ that makes the forward and
//! backward propagation constants intensity dependent.  Transmission is
//! evaluated with the nonlinear characteristic-matrix method: for a given
//! transmitted intensity U_f the coupled forward/backward intensities
//! (U₊, U₋) inside the defect are found by damped fixed-point iteration,
//! the defect matrix is assembled, and the incident intensity follows
//! from Uᵢ = U_f/T.  Sweeping U_f traces the S-shaped Uᵢ–T curve whose
//! fold points are the switch-up/switch-down thresholds of the
//! hysteresis loop.
//!
//! Modules:
//! - [`susceptibility`]: χ̃⁽¹⁾, χ̃⁽³⁾ of the Λ+SGC medium and physical scale
//!   factors,
//! - [`tmm`]: 2×2 characteristic matrices, stack composition, transmission,
//! - [`defect`]: the nonlinear defect layer and the fixed-point solver,
//! - [`response`]: spectra, susceptibility scans, hysteresis traces and
//!   threshold extraction,
//! - [`config`] / [`commands`]: reproducible runs driven by a single
//!   config file.

pub mod commands;
pub mod config;
pub mod constants;
pub mod defect;
pub mod error;
pub mod output;
pub mod reference;
pub mod response;
pub mod susceptibility;
pub mod tmm;

pub use error::{Error, Result};
