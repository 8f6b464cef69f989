use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use latinvis::config::ExperimentConfig;
use latinvis::presets::{find, PRESETS};
use latinvis::sweep::Sweep;
use latinvis::{run_many, run_to_dir};

/// Invisibility experiments on non-Hermitian tight-binding lattices.
#[derive(Parser)]
#[command(name = "latinvis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the integrator's relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sweep one key: `path=start:stop:count` or `path=a,b,c`.
    #[arg(long, global = true)]
    sweep: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Run a built-in preset.
    Preset { name: String },
    /// List the built-in presets.
    Presets,
    /// Print a preset as a TOML config.
    Show { name: String },
}

fn preset(name: &str) -> Result<ExperimentConfig> {
    match find(name) {
        Some(p) => Ok(p.config()),
        None => {
            let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
            bail!("unknown preset `{name}` (available: {})", names.join(", "))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = match &cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
            ExperimentConfig::from_toml(&text).with_context(|| format!("{}", config.display()))?
        }
        Command::Preset { name } => preset(name)?,
        Command::Presets => {
            for p in &PRESETS {
                println!("{:<18} {}", p.name, p.description);
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Show { name } => {
            print!("{}", preset(name)?.to_toml()?);
            return Ok(ExitCode::SUCCESS);
        }
    };
    if let Some(tol) = cli.tol {
        match cfg.integrator_mut() {
            Some(section) => section.rel_tol = tol,
            None => bail!("--tol: `{}` experiments do not integrate in time", cfg.kind()),
        }
        cfg.validate()?;
    }

    let Some(spec) = &cli.sweep else {
        let summary = run_to_dir(&cfg, &cli.out)?;
        println!("{}", summary.manifest.display());
        if summary.aborted {
            eprintln!("edge monitor tripped; outputs written, aborting");
            return Ok(ExitCode::from(2));
        }
        return Ok(ExitCode::SUCCESS);
    };
    let sweep = Sweep::parse(spec)?;
    let configs = sweep.configs(&cfg)?;
    let mut code = ExitCode::SUCCESS;
    for (value, result) in sweep.values.iter().zip(run_many(&configs, &cli.out)) {
        match result {
            Ok(s) => {
                println!("{}={value}\t{}", sweep.raw_path, s.manifest.display());
                if s.aborted {
                    eprintln!("{}={value}: edge monitor tripped", sweep.raw_path);
                    code = ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("{}={value}: {e:#}", sweep.raw_path);
                code = ExitCode::FAILURE;
            }
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
