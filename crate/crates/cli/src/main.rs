#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use udwf_core::verify::Suite;
use udwf_core::Regime;

mod commands;
mod config;
mod error;
mod figures;
mod output;

use config::{Format, RunConfig};
use error::CliError;
use figures::FigureId;

/// Forces on a smeared two-level detector moving in free space or near a plate.
#[derive(Parser)]
#[command(name = "udwf", version)]
struct Cli {
    /// Worker threads; falls back to the config, then UDWF_THREADS, then the core count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides the regime given in the config.
    #[arg(long, global = true, value_enum)]
    regime: Option<RegimeArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Finite,
    Long,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the force at one configuration.
    Force {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the force over the config's sweep range.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the data behind one figure panel.
    Figure { id: String },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
    },
}

fn thread_count(flag: Option<usize>, config: Option<usize>) -> Result<usize, CliError> {
    let env = match std::env::var("UDWF_THREADS") {
        Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| CliError::Input(format!("UDWF_THREADS must be a positive integer, got `{s}`")))?),
        Err(_) => None,
    };
    let n = flag.or(config).or(env).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if n == 0 {
        return Err(CliError::Input("thread count must be at least 1".into()));
    }
    Ok(n)
}

/// Merges the command-line overrides into the config so the embedded copy is
/// the one that actually ran.
fn load_config(cli: &Cli, path: &Path) -> Result<(RunConfig, usize), CliError> {
    let mut c = RunConfig::load(path)?;
    if let Some(r) = cli.regime {
        c.regime = match r {
            RegimeArg::Finite => Regime::FiniteTime,
            RegimeArg::Long => Regime::LongTime,
        };
    }
    if let Some(f) = cli.format {
        c.output.format = f;
    }
    if let Some(o) = &cli.out {
        c.output.path = Some(o.clone());
    }
    let threads = thread_count(cli.threads, c.threads)?;
    c.threads = Some(threads);
    Ok((c, threads))
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Force { config } => {
            let (c, threads) = load_config(cli, config)?;
            let text = pool(threads)?.install(|| commands::cmd_force(&c, c.output.format))?;
            output::emit(&text, c.output.path.as_deref())
        }
        Command::Sweep { config } => {
            let (c, threads) = load_config(cli, config)?;
            let text = pool(threads)?.install(|| commands::cmd_sweep(&c, c.output.format))?;
            output::emit(&text, c.output.path.as_deref())
        }
        Command::Figure { id } => {
            let id: FigureId = id.parse()?;
            let threads = thread_count(cli.threads, None)?;
            let table = pool(threads)?.install(|| figures::generate(id))?;
            output::emit(&table.render(cli.format.unwrap_or(Format::Csv)), cli.out.as_deref())
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let threads = thread_count(cli.threads, None)?;
            let reports = pool(threads)?.install(|| commands::cmd_verify(suite));
            output::emit(&commands::render_reports(&reports, cli.format.unwrap_or(Format::Csv)), cli.out.as_deref())?;
            let failed: Vec<u8> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("udwf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
