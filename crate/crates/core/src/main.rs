use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ionjc::cli_io::{configure_threads, error_json, exit_code, parse_config, preset, run, RunConfig};
use ionjc::{Error, Result};

#[derive(Parser)]
#[command(name = "ionjc", version, about = "Nonlinear Jaynes-Cummings dynamics of a trapped ion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write CSV plus a JSON sidecar.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to `output` from the config, then `.`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a figure preset.
    Preset {
        #[arg(long)]
        name: String,
        /// Print the preset as a config file (the only supported format).
        #[arg(long)]
        emit_config: bool,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation { field: "config".into(), message: format!("{}: {e}", path.display()) })?;
    parse_config(&text)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => {
            configure_threads()?;
            let cfg = load(&config)?;
            let dir = out
                .or_else(|| cfg.output.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let output = run(&cfg, &dir)?;
            for f in &output.files {
                println!("{}", f.display());
            }
        }
        Command::Preset { name, emit_config: _ } => {
            print!("{}", preset(&name)?.to_config_string());
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("ok: {} ({})", config.display(), cfg.mode.name());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
