use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nvsig::harness::run::{run, Command};

#[derive(Parser)]
#[command(name = "nvsig", version, about = "Spectral experiments on bounded non-vanishing signals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed of randomized signals.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a signal window and its certificates.
    Gen(Common),
    /// Apply a kernel over a window.
    Filter(Common),
    /// One-step prediction sweep over gamma and r.
    Predict(Common),
    /// Recover missing samples from a known gap.
    Recover(Common),
    /// Recover against every candidate gap of a given measure.
    RecoverVariants(Common),
    /// Partial Fourier sums on a frequency grid.
    Spectrum(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Gen(a) => (Command::Gen, a),
        Cmd::Filter(a) => (Command::Filter, a),
        Cmd::Predict(a) => (Command::Predict, a),
        Cmd::Recover(a) => (Command::Recover, a),
        Cmd::RecoverVariants(a) => (Command::RecoverVariants, a),
        Cmd::Spectrum(a) => (Command::Spectrum, a),
    };
    match run(command, &args.config, &args.out, args.seed) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            // guards tripped -> 1, everything else is a usage problem -> 2
            ExitCode::from(if e.is_numerical() { 1 } else { 2 })
        }
    }
}
