//! Command-line front end for `cnlse-verify`.
//!
//! [`run`] parses arguments, resolves the configuration and dispatches to
//! one of the subcommands in [`commands`]. Exit codes: 0 success, 1 error or
//! failed property, 2 when `paper-check` finds the inconsistency but no
//! branch reproduces the target value.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

use config::{BranchSel, ConfigFile, FlagValues, Format, GridSpec, RunConfig, TolOverride};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_TARGET_MISS: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError(pub String);

impl CliError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<cnlse_verify::Error> for CliError {
    fn from(e: cnlse_verify::Error) -> Self {
        Self(e.to_string())
    }
}

fn nonzero(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v == 0.0 {
        Err("q must be nonzero".into())
    } else {
        Ok(v)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cnlse",
    version,
    about = "Checks Weierstrass-function ansatz solutions of the cubic NLS equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Nonlinearity coefficient (nonzero).
    #[arg(long, global = true, value_parser = nonzero, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub branch: Option<BranchSel>,
    /// X0:X1:NX,T0:T1:NT
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// NAME=VALUE, or a bare VALUE for every tolerance. Repeatable.
    #[arg(long, global = true)]
    pub tol: Vec<TolOverride>,
    /// JSON file with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    pub fn flag_values(&self) -> FlagValues {
        FlagValues {
            file: ConfigFile {
                q: self.q,
                c1: self.c1,
                c2: self.c2,
                c3: self.c3,
                z0: self.z0,
                q0: self.q0,
                phi0: self.phi0,
                x: self.x,
                t: self.t,
                branch: self.branch,
                grid: self.grid,
                format: self.format,
                out: self.out.clone(),
                tol: None,
            },
            tol: self.tol.clone(),
            config: self.config.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate P(x, t) and both algebraic residuals on every branch.
    PaperCheck,
    /// ResidualReport records over an (x, t) grid.
    Scan,
    /// Algebraic residuals and invariant cross-checks at one point.
    Residuals,
    /// Full PDE residual of the ansatz field at one point.
    Pde,
    /// Split-step evolution of the ansatz initial data against the ansatz.
    Evolve(EvolveArgs),
    /// Run the seeded property suites.
    Selftest(SelftestArgs),
    /// Evaluate the Weierstrass function and the cubic roots.
    Elliptic(EllipticArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// Time step of the integrator.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Evolve the exact soliton (a = 1, p = 1, q = 2) instead of the ansatz.
    #[arg(long)]
    pub control: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Suite to leave out. Repeatable.
    #[arg(long, value_enum)]
    pub skip: Vec<commands::Suite>,
    #[arg(long, default_value_t = cnlse_verify::checks::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EllipticArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g3: Option<f64>,
    /// Argument RE or RE,IM. Repeatable.
    #[arg(long = "u", allow_hyphen_values = true)]
    pub u: Vec<String>,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_FAILURE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = RunConfig::resolve(&cli.common.flag_values())
        .and_then(|cfg| commands::dispatch(&cli.command, &cfg, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}
