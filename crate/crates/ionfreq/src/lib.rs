//! Command line, configuration files and data emission for `ionfreq-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod reproduce;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, Emitter, Format, DEFAULT_PRECISION};
use crate::reproduce::Figure;

#[derive(Debug, Parser)]
#[command(name = "ionfreq", version, about = "Trapped-ion models at high motional frequency")]
pub struct Cli {
    /// TOML run configuration (JSON when the name ends in .json).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; data goes to stdout when neither this nor `output.path` is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Significant digits in emitted numbers.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Trap design point or inverse design, plus the fixed-q confinement grid.
    Design,
    /// Cooling curve on the Fock ladder against the closed-form mean.
    Cool,
    /// Rate coefficients and steady-state occupation.
    SteadyState,
    /// Anomalous, recoil and dephasing rates at one operating point.
    Noise,
    /// Cat-state preparation and idle fidelities versus frequency.
    Cat,
    /// Wigner function on a square grid.
    Wigner,
    /// Shot budget in two frequency regimes.
    Plan,
    /// Syndrome-measurement cooling load versus frequency.
    Qec,
    /// Sweep of the `[sweep]` block.
    Sweep,
    /// Regenerate a reference data set.
    Reproduce {
        /// fig1d, fig3, fig4b, fig4c, fig4d, fig5, fig6, table1 or table2
        figure: String,
    },
}

impl Command {
    fn label(&self) -> String {
        match self {
            Self::Design => "design".into(),
            Self::Cool => "cool".into(),
            Self::SteadyState => "steady-state".into(),
            Self::Noise => "noise".into(),
            Self::Cat => "cat".into(),
            Self::Wigner => "wigner".into(),
            Self::Plan => "plan".into(),
            Self::Qec => "qec".into(),
            Self::Sweep => "sweep".into(),
            Self::Reproduce { figure } => format!("reproduce {figure}"),
        }
    }
}

pub fn execute(command: &Command, cfg: &RunConfig, ctx: &Context) -> CliResult<Vec<Artifact>> {
    match command {
        Command::Design => commands::design(cfg),
        Command::Cool => commands::cool(cfg, ctx),
        Command::SteadyState => commands::steady_state(cfg),
        Command::Noise => commands::noise(cfg),
        Command::Cat => commands::cat(cfg),
        Command::Wigner => commands::wigner_cmd(cfg),
        Command::Plan => commands::plan(cfg),
        Command::Qec => commands::qec(cfg),
        Command::Sweep => sweep::sweep(cfg),
        Command::Reproduce { figure } => reproduce::reproduce(figure.parse::<Figure>()?, cfg, ctx),
    }
}

pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let precision = cli.precision.or(cfg.output.precision).unwrap_or(DEFAULT_PRECISION);
    if precision == 0 || precision > 17 {
        return Err(CliError::config("precision must be between 1 and 17"));
    }
    let emitter = Emitter {
        dir: cli.output.clone().or_else(|| cfg.output.path.clone()),
        format: cli.format.or(cfg.output.format).unwrap_or_default(),
        precision,
        command: cli.command.label(),
        seed: cli.seed,
        config: serde_json::to_value(&cfg)?,
    };
    let artifacts = execute(&cli.command, &cfg, &Context { seed: cli.seed })?;
    emitter.emit(&artifacts)
}
