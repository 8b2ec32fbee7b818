use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use beamsparse::config::load_config;
use beamsparse::run_experiment;

#[derive(Parser)]
#[command(name = "beamsparse", version, about = "Sparse-array beampattern synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Overrides `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            output_dir,
            seed,
            quiet,
        } => {
            let mut cfg = match load_config(&config) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            match run_experiment(&cfg) {
                Ok(report) => {
                    if !quiet {
                        println!(
                            "{} after {} iterations: cardinality {}/{}, matching error {:.3} dB, peak sidelobe {:.3} dB, alpha {:.6}, solve time {:.3} s",
                            if report.converged { "converged" } else { "stopped at max_iters" },
                            report.iterations,
                            report.cardinality,
                            cfg.n_elements,
                            report.matching_error_db,
                            report.peak_sidelobe_db,
                            report.final_alpha,
                            report.runtime_seconds,
                        );
                        println!("outputs written to {}", cfg.output_dir.display());
                    }
                    if report.converged {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
