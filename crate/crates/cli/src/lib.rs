//! Command-line front end: state solving, table reproduction, wavefunction
//! export and analysis data.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 computation
//! failure (partial output is still written).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudospin::Symmetry;

pub mod commands;
pub mod config;
pub mod output;

pub use config::{Format, RunConfig, StateSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    /// Output that was produced before the failure is still emitted.
    Compute { message: String, partial: Option<String> },
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Compute { .. } | CliError::Io(_) => EXIT_COMPUTE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Compute { message, .. } => write!(f, "computation failed: {message}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymArg {
    Pseudospin,
    Spin,
}

impl From<SymArg> for Symmetry {
    fn from(s: SymArg) -> Self {
        match s {
            SymArg::Pseudospin => Symmetry::Pseudospin,
            SymArg::Spin => Symmetry::Spin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Pseudospin-limit energies.
    #[value(name = "pseudospin2")]
    Pseudospin2,
    /// Spin-limit energies.
    #[value(name = "spin3")]
    Spin3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalysisKind {
    Approx,
    Potential,
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "pseudospin", version, about = "Dirac bound states with pseudospin/spin symmetry and tensor coupling")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies of the listed states.
    Solve,
    /// Reproduce a reference table with deviations from the printed values.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Radial spinor components of one state as r,G,F.
    Wavefunction,
    /// Approximation error, potential profile or tensor sweep data.
    Analyze {
        #[arg(value_enum)]
        which: AnalysisKind,
    },
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true, env = "PSEUDOSPIN_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long = "c-sym", global = true)]
    pub c_sym: Option<f64>,
    #[arg(long = "tensor-h", global = true)]
    pub tensor_h: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long = "a-shape", global = true)]
    pub a_shape: Option<f64>,
    #[arg(long, global = true)]
    pub c0: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub symmetry: Option<SymArg>,
    /// Radial quantum number; repeat together with --kappa for several states.
    #[arg(long = "n", global = true)]
    pub n: Vec<u32>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa: Vec<i32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Energy grid points for root isolation.
    #[arg(long = "grid-points", global = true)]
    pub grid_points: Option<usize>,
    /// Radial grid points.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long = "r-min", global = true)]
    pub r_min: Option<f64>,
    #[arg(long = "r-max", global = true)]
    pub r_max: Option<f64>,
    /// Comma-separated tensor strengths for the sweep.
    #[arg(long = "h-values", global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub h_values: Option<Vec<f64>>,
}

impl CommonArgs {
    fn overrides(&self) -> Result<RunConfig, CliError> {
        if self.n.len() != self.kappa.len() {
            return Err(CliError::Config(format!(
                "--n given {} times but --kappa {} times",
                self.n.len(),
                self.kappa.len()
            )));
        }
        let states = (!self.n.is_empty()).then(|| {
            self.n
                .iter()
                .zip(&self.kappa)
                .map(|(&n, &kappa)| StateSpec { n, kappa })
                .collect()
        });
        Ok(RunConfig {
            mass: self.mass,
            c_sym: self.c_sym,
            tensor_h: self.tensor_h,
            alpha: self.alpha,
            a_shape: self.a_shape,
            c0: self.c0,
            symmetry: self.symmetry.map(Into::into),
            strict_domain: None,
            states,
            format: self.format,
            out: self.out.clone(),
            grid_points: self.grid_points,
            bisect_tol: None,
            points: self.points,
            r_min: self.r_min,
            r_max: self.r_max,
            h_values: self.h_values.clone(),
        })
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.merge(self.overrides()?))
    }
}

fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => out.write_all(text.as_bytes()).map_err(CliError::Io),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let cfg = match cli.common.resolve() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Solve => commands::solve(&cfg, err),
        Command::Table { which } => commands::table(&cfg, which, err),
        Command::Wavefunction => commands::wavefunction(&cfg, err),
        Command::Analyze { which } => commands::analyze(&cfg, which, err),
    };
    match result {
        Ok(text) => match emit(&cfg, &text, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "{e}");
                e.exit_code()
            }
        },
        Err(e) => {
            if let CliError::Compute {
                partial: Some(text), ..
            } = &e
            {
                if let Err(io) = emit(&cfg, text, out) {
                    let _ = writeln!(err, "{io}");
                }
            }
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
