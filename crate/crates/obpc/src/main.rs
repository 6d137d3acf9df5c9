use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use obpc::commands::{cmd_chi_scan, cmd_hysteresis, cmd_spectrum, cmd_table1, ChiScanSpec};
use obpc::config::{OutputFormat, RunConfig, SpectrumModeConfig, UfPolicy};
use obpc::output::write_atomic;
use obpc::response::ScanAxis;
use obpc::{Error, Result};

/// Probe transmission through a doped one-dimensional photonic crystal:
/// spectra, optical-bistability hysteresis traces, threshold tables and
/// susceptibility scans.
#[derive(Parser)]
#[command(name = "obpc", version, about)]
struct Cli {
    /// Config file (TOML); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for the hysteresis command: `csv` emits the curve plus
    /// a summary sidecar, `record` emits only the summary.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// All computation is deterministic; there is no RNG to seed.  Accepted
    /// as documentation of that fact.
    #[arg(long = "seed-free", global = true)]
    _seed_free: bool,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

/// Flags mirroring the config keys one-to-one.
#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    delta_p: Option<f64>,
    #[arg(long, global = true)]
    omega_c0: Option<f64>,
    #[arg(long, global = true)]
    sgc_p: Option<f64>,
    #[arg(long, global = true)]
    s1: Option<f64>,
    #[arg(long, global = true)]
    lambda_pc: Option<f64>,
    #[arg(long, global = true)]
    n_a: Option<f64>,
    #[arg(long, global = true)]
    n_b: Option<f64>,
    #[arg(long, global = true)]
    n_d: Option<f64>,
    #[arg(long, global = true)]
    n0: Option<f64>,
    #[arg(long, global = true)]
    omega_p: Option<f64>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    relaxation: Option<f64>,
    #[arg(long, global = true)]
    max_iterations: Option<u32>,
    #[arg(long, global = true)]
    spectrum_points: Option<usize>,
    #[arg(long, global = true)]
    spectrum_span: Option<f64>,
    #[arg(long, global = true)]
    hysteresis_points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    u_f_policy: Option<PolicyArg>,
    #[arg(long, global = true)]
    u_f_max: Option<f64>,
    #[arg(long, global = true)]
    u_f_max_initial: Option<f64>,
    #[arg(long, global = true)]
    max_doublings: Option<u32>,
    #[arg(long, global = true, value_enum)]
    spectrum_mode: Option<ModeArg>,
    #[arg(long, global = true)]
    omega_13_over_omega_pc: Option<f64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($field:expr, $value:expr) => {
                if let Some(v) = $value {
                    $field = v;
                }
            };
        }
        set!(cfg.atomic.delta_p, self.delta_p);
        set!(cfg.atomic.omega_c0, self.omega_c0);
        set!(cfg.atomic.sgc_p, self.sgc_p);
        set!(cfg.atomic.s1, self.s1);
        set!(cfg.stack.lambda_pc, self.lambda_pc);
        set!(cfg.stack.n_a, self.n_a);
        set!(cfg.stack.n_b, self.n_b);
        set!(cfg.stack.n_d, self.n_d);
        set!(cfg.stack.n0, self.n0);
        set!(cfg.probe.omega_p, self.omega_p);
        set!(cfg.solver.tolerance, self.tolerance);
        set!(cfg.solver.relaxation, self.relaxation);
        set!(cfg.solver.max_iterations, self.max_iterations);
        set!(cfg.sweep.spectrum_points, self.spectrum_points);
        set!(cfg.sweep.spectrum_span, self.spectrum_span);
        set!(cfg.sweep.hysteresis_points, self.hysteresis_points);
        set!(cfg.sweep.u_f_policy, self.u_f_policy.map(PolicyArg::into));
        set!(cfg.sweep.u_f_max, self.u_f_max);
        set!(cfg.sweep.u_f_max_initial, self.u_f_max_initial);
        set!(cfg.sweep.max_doublings, self.max_doublings);
        set!(cfg.spectrum.mode, self.spectrum_mode.map(ModeArg::into));
        set!(
            cfg.spectrum.omega_13_over_omega_pc,
            self.omega_13_over_omega_pc
        );
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Record,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Record => OutputFormat::Record,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Adaptive,
    Fixed,
}

impl From<PolicyArg> for UfPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Adaptive => UfPolicy::Adaptive,
            PolicyArg::Fixed => UfPolicy::Fixed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Frozen,
    Dispersive,
}

impl From<ModeArg> for SpectrumModeConfig {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Frozen => SpectrumModeConfig::Frozen,
            ModeArg::Dispersive => SpectrumModeConfig::Dispersive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    /// SGC parameter p.
    P,
    /// Coupling Rabi frequency Ω_c⁰.
    OmegaC0,
}

#[derive(Subcommand)]
enum Command {
    /// Linear transmission spectrum T(ω) with χ⁽³⁾ = 0.
    Spectrum,
    /// Warm-started u_f sweep: per-point curve plus threshold summary.
    Hysteresis,
    /// The six reference rows (p, Ω_c⁰) at Δ_p = 0.05 with pass/fail flags.
    Table1,
    /// Grid dump of χ̃⁽¹⁾ and χ̃⁽³⁾ over (Δ_p × p) or (Δ_p × Ω_c⁰).
    ChiScan {
        #[arg(long, value_enum, default_value = "p")]
        axis: AxisArg,
        #[arg(long, default_value_t = 0.0)]
        delta_p_min: f64,
        #[arg(long, default_value_t = 0.2)]
        delta_p_max: f64,
        #[arg(long, default_value_t = 101)]
        delta_p_count: usize,
        #[arg(long, default_value_t = 0.0)]
        axis_min: f64,
        #[arg(long, default_value_t = 0.999)]
        axis_max: f64,
        #[arg(long, default_value_t = 101)]
        axis_count: usize,
    },
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("summary")
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.to_string_lossy().into_owned());
    }
    if let Some(format) = cli.format {
        cfg.output.format = format.into();
    }
    cfg.validate()?;
    let out = cfg.output.path.clone().map(PathBuf::from);

    match cli.command {
        Command::Spectrum => {
            if cfg.output.format == OutputFormat::Record {
                return Err(Error::Config(
                    "output.format: spectrum output is tabular; use csv".into(),
                ));
            }
            emit(out.as_deref(), &cmd_spectrum(&cfg)?)
        }
        Command::Hysteresis => {
            let (csv, summary) = cmd_hysteresis(&cfg)?;
            match cfg.output.format {
                OutputFormat::Record => emit(out.as_deref(), &summary),
                OutputFormat::Csv => match out.as_deref() {
                    Some(path) => {
                        write_atomic(path, &csv)?;
                        write_atomic(&sidecar_path(path), &summary)
                    }
                    None => {
                        print!("{csv}\n{summary}");
                        Ok(())
                    }
                },
            }
        }
        Command::Table1 => {
            let (table, rows) = cmd_table1(&cfg)?;
            emit(out.as_deref(), &table)?;
            if let Some(row) = rows.iter().find(|r| r.outcome.is_err()) {
                return Err(Error::Domain(format!(
                    "row (p = {}, omega_c0 = {}) failed: {}",
                    row.sgc_p,
                    row.omega_c0,
                    row.outcome.as_ref().err().unwrap()
                )));
            }
            Ok(())
        }
        Command::ChiScan {
            axis,
            delta_p_min,
            delta_p_max,
            delta_p_count,
            axis_min,
            axis_max,
            axis_count,
        } => {
            if cfg.output.format == OutputFormat::Record {
                return Err(Error::Config(
                    "output.format: chi-scan output is tabular; use csv".into(),
                ));
            }
            let spec = ChiScanSpec {
                axis: match axis {
                    AxisArg::P => ScanAxis::SgcP,
                    AxisArg::OmegaC0 => ScanAxis::OmegaC0,
                },
                delta_p_min,
                delta_p_max,
                delta_p_count,
                axis_min,
                axis_max,
                axis_count,
            };
            emit(out.as_deref(), &cmd_chi_scan(&cfg, &spec)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
