//! Command-line runner for the scrambling-verification experiments.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod shots;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::commands::{run_command, Output, Primary};
use crate::config::{Command, ExperimentConfig, FileConfig, NoisePreset, Overrides};
pub use crate::error::CliError;
use crate::format::{aggregate_path, write_file};

pub const KRAUS_CAVEAT: &str = "note: Kraus channels were active in this run; the OTOC bound assumes \
extrinsic decoherence is negligible (coherent errors dominate) and may not hold here";

#[derive(Debug, Parser)]
#[command(name = "scramble-verify", version, about = "Teleportation-based scrambling verification")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Flat JSON configuration document.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub theta_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub alpha_grid: Option<Vec<f64>>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub pair: Option<u8>,
    #[arg(long, value_enum)]
    pub noise_preset: Option<NoisePreset>,
}

impl Cli {
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let file = FileConfig::load(&self.config)?;
        let overrides = Overrides {
            seed: self.seed,
            out: self.out.clone(),
            theta_grid: self.theta_grid.clone(),
            alpha_grid: self.alpha_grid.clone(),
            pair: self.pair.map(usize::from),
            noise_preset: self.noise_preset,
        };
        ExperimentConfig::resolve(self.command, file, overrides)
    }
}

/// Files written by a run.
#[derive(Debug)]
pub struct Written {
    pub output: Output,
    pub files: Vec<PathBuf>,
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Written, CliError> {
    let output = run_command(cfg)?;
    let mut files = vec![cfg.out.clone()];
    match &output.primary {
        Primary::Csv(t) => write_file(&cfg.out, &t.to_csv())?,
        Primary::Json(s) => write_file(&cfg.out, s)?,
    }
    if let Some(agg) = &output.aggregate {
        let path = aggregate_path(&cfg.out);
        write_file(&path, &agg.to_csv())?;
        files.push(path);
    }
    Ok(Written { output, files })
}

/// Parses `args`, runs, reports, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.resolve().and_then(|cfg| execute(&cfg));
    match result {
        Ok(written) => {
            if written.output.channels_active {
                eprintln!("{KRAUS_CAVEAT}");
            }
            for f in &written.files {
                println!("wrote {}", f.display());
            }
            match written.output.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
