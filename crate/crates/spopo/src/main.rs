use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spopo::{commands, CliError, RunConfig};

/// Supermodes, threshold and squeezing spectra of a synchronously pumped OPO.
#[derive(Parser)]
#[command(name = "spopo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table, supermode vectors and threshold summary.
    Analyze(Common),
    /// Squeezing spectra per supermode (and homodyne.csv when an LO is set).
    Squeeze(Common),
    /// Homodyne variance spectrum for the configured LO.
    Homodyne(Common),
    /// Run every verification oracle and write a PASS/FAIL report.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides verify.seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(c) => commands::analyze(&RunConfig::load(&c.config)?, &c.out),
        Command::Squeeze(c) => commands::squeeze(&RunConfig::load(&c.config)?, &c.out),
        Command::Homodyne(c) => commands::homodyne(&RunConfig::load(&c.config)?, &c.out),
        Command::Verify(c) => {
            let config = RunConfig::load(&c.config)?;
            let seed = c.seed.unwrap_or(config.verify.seed);
            match commands::verify(&config, &c.out, seed) {
                Ok(report) => {
                    print!("{}", report.render());
                    Ok(())
                }
                Err(e) => {
                    if let Ok(text) = std::fs::read_to_string(c.out.join("verify_report.txt")) {
                        print!("{text}");
                    }
                    Err(e)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spopo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
