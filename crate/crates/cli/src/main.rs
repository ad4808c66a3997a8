//! `qcrit`: finite-size-scaling runs for Schrödinger criticality.

mod config;
mod runner;

use clap::{Parser, Subcommand};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

/// Errors with their process exit codes: 2 config, 3 runtime, 4 missing
/// input.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
    MissingInput(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::MissingInput(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) | CliError::MissingInput(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qcrit",
    version,
    about = "Critical couplings and exponents of parameter-dependent Schrödinger Hamiltonians by finite-size scaling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Default)]
struct CommonArgs {
    /// Discretization: basis, fem-linear or fem-hermite
    #[arg(long)]
    method: Option<String>,
    /// Size ladder MIN:MAX:STEP (basis dimension or element count)
    #[arg(long)]
    sizes: Option<String>,
    /// Coupling grid MIN:MAX:COUNT
    #[arg(long)]
    lambda: Option<String>,
    /// Element length for FEM methods
    #[arg(long)]
    h: Option<f64>,
    /// Output directory for CSV files and the report
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Plain-text key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Ladder sweep with pseudocritical analysis and extrapolation
    Fss {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rescaled data clouds and the collapse quality score
    Collapse {
        #[command(flatten)]
        common: CommonArgs,
        /// Critical coupling override
        #[arg(long = "lambda-c")]
        lambda_c: Option<f64>,
        /// Energy exponent override
        #[arg(long)]
        alpha: Option<f64>,
        /// Length exponent override
        #[arg(long)]
        nu: Option<f64>,
        /// Fail instead of rebuilding a missing expectation table
        #[arg(long)]
        no_recompute: bool,
    },
    /// Large-dimension two-electron model: Z_c, exponents, eta(Z) curve
    Larged {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed-form reference data for the screened-Coulomb problem
    Analytic {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        for (k, v) in config::read_config_file(path)? {
            cfg.apply(&k, &v)?;
        }
    }
    if let Some(m) = &common.method {
        cfg.apply("method", m)?;
    }
    if let Some(s) = &common.sizes {
        cfg.apply("sizes", s)?;
    }
    if let Some(l) = &common.lambda {
        cfg.apply("lambda", l)?;
    }
    if let Some(h) = common.h {
        cfg.h = h;
    }
    if let Some(o) = &common.output {
        cfg.output = o.clone();
    }
    if let Some(t) = common.threads {
        cfg.threads = Some(t);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (cfg, run): (
        RunConfig,
        fn(&RunConfig) -> Result<runner::RunReport, CliError>,
    ) = match &cli.command {
        Command::Fss { common } => (resolve(common)?, runner::run_fss),
        Command::Collapse {
            common,
            lambda_c,
            alpha,
            nu,
            no_recompute,
        } => {
            let mut cfg = resolve(common)?;
            if lambda_c.is_some() {
                cfg.lambda_c = *lambda_c;
            }
            if alpha.is_some() {
                cfg.alpha = *alpha;
            }
            if nu.is_some() {
                cfg.nu = *nu;
            }
            cfg.no_recompute = *no_recompute;
            (cfg, runner::run_collapse)
        }
        Command::Larged { common } => (resolve(common)?, runner::run_larged),
        Command::Analytic { common } => (resolve(common)?, runner::run_analytic),
    };

    // A private pool keeps thread-count experiments (and determinism checks)
    // isolated from the global runtime.
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    pool.install(|| run(&cfg)).map(|_| ())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
