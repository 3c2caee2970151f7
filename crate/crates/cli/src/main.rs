use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use blockade::config::ConfigFile;
use blockade::output::emit_csv;
use blockade::preset::Preset;
use blockade::sweep::{run_sweep_with, worker_count, SweepSpec, THREADS_ENV};
use blockade::validate::{Session, CRITERIA};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blockade", version, about = "Photon statistics of driven one- and two-atom cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a TOML config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the built-in figure sweeps.
    Preset {
        /// fig2a, fig2b, fig4a, fig4b, fig6a, fig6b, fig7a, fig7b, fig8a or fig8b
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance checks; exits nonzero if any fails.
    Check {
        /// Print the measured quantities under each check.
        #[arg(long)]
        verbose: bool,
        /// Run only these criteria (1-10); repeatable.
        #[arg(long = "only", value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let workers = worker_count().with_context(|| format!("reading {THREADS_ENV}"))?;
    match cli.command {
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let spec = ConfigFile::parse(&text)
                .and_then(|c| c.into_spec())
                .with_context(|| format!("in {}", config.display()))?;
            sweep(&spec, workers, &out)?;
        }
        Command::Preset { name, out } => {
            let preset: Preset = name.parse().map_err(|e| {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                anyhow::anyhow!("{e}; available presets: {}", names.join(", "))
            })?;
            eprintln!("{preset}: {}", preset.description());
            sweep(&preset.spec(), workers, &out)?;
        }
        Command::Check { verbose, only } => {
            let ids = if only.is_empty() { CRITERIA.to_vec() } else { only };
            let session = Session::new(workers);
            let mut failed = 0;
            for id in ids {
                let start = Instant::now();
                let check = session.check(id);
                println!("{check} ({:.1} s)", start.elapsed().as_secs_f64());
                if verbose {
                    for line in &check.details {
                        println!("    {line}");
                    }
                }
                failed += usize::from(!check.passed);
            }
            if failed > 0 {
                println!("{failed} check(s) failed");
                return Ok(ExitCode::FAILURE);
            }
            println!("all checks passed");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(spec: &SweepSpec, workers: usize, out: &Path) -> Result<()> {
    let start = Instant::now();
    eprintln!("{} points on {workers} worker(s)", spec.grid().len());
    let result = run_sweep_with(spec, workers)?;
    emit_csv(&result, out).with_context(|| format!("writing {}", out.display()))?;
    let gaps = result.rows.iter().flat_map(|r| &r.cells).filter(|c| c.value().is_none()).count();
    eprintln!(
        "wrote {} rows to {} in {:.1} s ({gaps} gap cells)",
        result.rows.len(),
        out.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
