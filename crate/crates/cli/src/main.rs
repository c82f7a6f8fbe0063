mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use commands::Command;
use snlcm_core::Error;

/// Splitting statistics and lcm growth of random polynomials over number fields.
#[derive(Parser, Debug)]
#[command(name = "snlcm", version)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory for CSV files and manifests.
    #[arg(long, global = true, env = "SNLCM_OUT", default_value = "runs")]
    out: PathBuf,
    /// Suffix for output file names.
    #[arg(long, global = true)]
    tag: Option<String>,
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand, Debug)]
enum Action {
    #[command(flatten)]
    Run(Command),
    /// Rerun a command stored in a TOML config file.
    Config { path: PathBuf },
    /// Rerun the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

fn run(cli: Cli) -> Result<()> {
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        bail!(Error::InvalidParameter("--workers must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;

    let command = match cli.action {
        Action::Run(c) => c,
        Action::Config { path } => output::read_config(&path)?,
        Action::Replay { manifest } => {
            let m = output::read_manifest(&manifest)?;
            if m.schema_version != output::SCHEMA_VERSION {
                bail!(
                    "manifest schema version {} differs from this build's {}",
                    m.schema_version,
                    output::SCHEMA_VERSION
                );
            }
            m.config
        }
    };
    let start = std::time::Instant::now();
    let mut report = command.execute()?;
    report.elapsed = start.elapsed();
    let stem = match &cli.tag {
        Some(tag) => format!("{}-{tag}", command.name()),
        None => command.name().to_string(),
    };
    let (csv, manifest) = output::write_run(&cli.out, &stem, &command, &report, workers)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", serde_json::to_string_pretty(&report.summary)?);
    println!("csv: {}", csv.display());
    println!("manifest: {}", manifest.display());
    Ok(())
}

/// Exit 2 for bad input, 3 for exhausted budgets, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::FactorBudgetExceeded { .. } | Error::BudgetExceeded { .. }) => 3,
        Some(Error::AtElement { source, .. }) if matches!(**source, Error::FactorBudgetExceeded { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
