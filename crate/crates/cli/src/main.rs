mod checkpoint;
mod commands;
mod config;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::output::Format;

/// A run that ended with a nonzero exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    /// Bad flags, config or input (exit 2).
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    /// A result failed its own verification (exit 4).
    pub fn invariant(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

pub const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "polyfact", version, about = "Search, construct and audit solutions of polynomial-factorial equations")]
struct Cli {
    /// key = value file mirroring the long flags (default: $POLYFACT_CONFIG_DIR/polyfact.conf)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive search of an equation over bounded ranges
    Solve(commands::solve::SolveArgs),
    /// Quadratic-residue sieve for n! + 1 = x^2
    ScanBrocard(commands::scan::ScanArgs),
    /// Explicit solutions of the power and proportional families
    Construct(commands::construct::ConstructArgs),
    /// abc metrics, elementary bounds and depressed-solution reports
    Audit(commands::audit::AuditArgs),
    /// Generalized factorials n!_S
    Bhargava(commands::misc::BhargavaArgs),
    /// Check the no-root-mod-q prune certificate for a binary form
    PruneTest(commands::misc::PruneTestArgs),
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Flags of the long-running commands.
#[derive(Args, Debug, Clone, Default)]
pub struct Budget {
    /// Checkpoint file, rewritten after every chunk
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint if it exists
    #[arg(long)]
    pub resume: bool,
    /// Stop after this many seconds (exit 3)
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    /// Stop after this many tuples, or scanned n values (exit 3)
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    /// Work units between checkpoints
    #[arg(long)]
    pub checkpoint_every: Option<u64>,
}

/// Common flags after applying the config file.
pub struct Resolved {
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Common {
    pub fn resolve(&self, cfg: &Config) -> Result<Resolved, Failure> {
        Ok(Resolved {
            workers: cfg.or(self.workers, "workers")?.unwrap_or(0),
            out: cfg.or(self.out.clone(), "out")?,
            format: cfg.or(self.format, "format")?.unwrap_or(Format::Jsonl),
        })
    }
}

pub struct ResolvedBudget {
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub seconds: Option<std::time::Duration>,
    pub nodes: Option<u64>,
    pub every: Option<u64>,
}

impl Budget {
    pub fn resolve(&self, cfg: &Config) -> Result<ResolvedBudget, Failure> {
        let seconds = cfg.or(self.budget_seconds, "budget-seconds")?;
        let nodes = cfg.or(self.budget_nodes, "budget-nodes")?;
        let every = cfg.or(self.checkpoint_every, "checkpoint-every")?;
        if seconds.is_some_and(|s| !(s > 0.0 && s.is_finite())) {
            return Err(Failure::usage("--budget-seconds must be positive"));
        }
        if nodes == Some(0) || every == Some(0) {
            return Err(Failure::usage("budgets and --checkpoint-every must be positive"));
        }
        let checkpoint = cfg.or(self.checkpoint.clone(), "checkpoint")?;
        let resume = self.resume || cfg.flag("resume")?;
        if resume && checkpoint.is_none() {
            return Err(Failure::usage("--resume needs --checkpoint"));
        }
        Ok(ResolvedBudget {
            checkpoint,
            resume,
            seconds: seconds.map(std::time::Duration::from_secs_f64),
            nodes,
            every,
        })
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Solve(a) => commands::solve::run(&a, &cfg),
        Command::ScanBrocard(a) => commands::scan::run(&a, &cfg),
        Command::Construct(a) => commands::construct::run(&a, &cfg),
        Command::Audit(a) => commands::audit::run(&a, &cfg),
        Command::Bhargava(a) => commands::misc::run_bhargava(&a, &cfg),
        Command::PruneTest(a) => commands::misc::run_prune_test(&a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("polyfact: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
