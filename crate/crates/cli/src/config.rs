//! Flat JSON configuration merged with command-line overrides.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use scramble_core::noisemodel::{Axis, NoiseConfig};
use scramble_core::protocol::{InputState, Pair};

use crate::error::CliError;

pub const DEFAULT_ALPHA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_GROVER_STATES: [InputState; 3] =
    [InputState::ZeroZ, InputState::ZeroX, InputState::ZeroY];
pub const MIN_CLIFFORD_SAMPLES: usize = 20;

pub fn default_theta_grid() -> Vec<f64> {
    (0..=4).map(|k| k as f64 * PI / 8.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    MismatchSweep,
    AlphaSweep,
    Pairs,
    Classical,
    Grover,
    OtocCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::MismatchSweep => "mismatch-sweep",
            Command::AlphaSweep => "alpha-sweep",
            Command::Pairs => "pairs",
            Command::Classical => "classical",
            Command::Grover => "grover",
            Command::OtocCheck => "otoc-check",
        }
    }

    fn default_extension(self) -> &'static str {
        match self {
            Command::OtocCheck => "json",
            _ => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NoisePreset {
    Ideal,
    Calibrated,
    /// Complete depolarization after every gate.
    Depolarized,
}

impl NoisePreset {
    pub fn config(self) -> NoiseConfig {
        match self {
            NoisePreset::Ideal => NoiseConfig::ideal(),
            NoisePreset::Calibrated => NoiseConfig::calibrated(),
            NoisePreset::Depolarized => NoiseConfig::fully_depolarized(),
        }
    }
}

/// O_H measure used by `otoc-check`. `corrupted` drops the identity term and
/// exists to show the check can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Uniform,
    Corrupted,
}

/// The on-disk document. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub theta_grid: Option<Vec<f64>>,
    pub alpha_grid: Option<Vec<f64>>,
    pub pair: Option<usize>,
    pub noise_preset: Option<NoisePreset>,
    pub mismatch_axis: Option<Axis>,
    pub depol_1q: Option<f64>,
    pub depol_2q: Option<f64>,
    pub readout_flip: Option<f64>,
    pub grover_states: Option<Vec<String>>,
    pub shots: Option<u64>,
    pub clifford_samples: Option<usize>,
    pub clifford_depth: Option<usize>,
    pub otoc_weighting: Option<Weighting>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line; they win over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub theta_grid: Option<Vec<f64>>,
    pub alpha_grid: Option<Vec<f64>>,
    pub pair: Option<usize>,
    pub noise_preset: Option<NoisePreset>,
}

/// Fully resolved and validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub theta_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub pair: Pair,
    pub noise: NoiseConfig,
    pub grover_states: Vec<InputState>,
    pub shots: Option<u64>,
    pub clifford_samples: usize,
    pub clifford_depth: usize,
    pub weighting: Weighting,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn nonempty(name: &str, grid: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if grid.is_empty() {
        return Err(config_err(format!("{name} is empty")));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(config_err(format!("{name} contains {x}")));
    }
    Ok(grid)
}

impl ExperimentConfig {
    pub fn resolve(command: Command, file: FileConfig, cli: Overrides) -> Result<Self, CliError> {
        if let Some(exp) = &file.experiment {
            if exp != command.name() {
                return Err(config_err(format!(
                    "config is for `{exp}` but the command is `{}`",
                    command.name()
                )));
            }
        }

        let theta_grid = nonempty(
            "theta_grid",
            cli.theta_grid.or(file.theta_grid).unwrap_or_else(default_theta_grid),
        )?;
        let alpha_grid = nonempty(
            "alpha_grid",
            cli.alpha_grid.or(file.alpha_grid).unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_vec()),
        )?;
        if let Some(a) = alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(config_err(format!("alpha {a} is outside [0, 1]")));
        }

        let pair_index = cli.pair.or(file.pair).unwrap_or(1);
        let pair = Pair::from_index(pair_index)
            .ok_or_else(|| config_err(format!("pair {pair_index} is not one of 0, 1, 2")))?;

        let preset = cli.noise_preset.or(file.noise_preset).unwrap_or(NoisePreset::Ideal);
        let mut noise = preset.config();
        if let Some(axis) = file.mismatch_axis {
            noise.mismatch_axis = axis;
        }
        if let Some(p) = file.depol_1q {
            noise.depol_1q = p;
            noise.layers.gate_depolarizing = true;
        }
        if let Some(p) = file.depol_2q {
            noise.depol_2q = p;
            noise.layers.gate_depolarizing = true;
        }
        if let Some(p) = file.readout_flip {
            noise.readout_flip = p;
            noise.layers.readout = true;
        }
        noise.validate().map_err(|e| config_err(e.to_string()))?;
        for &theta in &theta_grid {
            noise
                .with_mismatch(theta, noise.mismatch_axis)
                .validate()
                .map_err(|e| config_err(format!("theta_grid: {e}")))?;
        }

        let grover_states = match file.grover_states {
            None => DEFAULT_GROVER_STATES.to_vec(),
            Some(labels) if labels.is_empty() => return Err(config_err("grover_states is empty")),
            Some(labels) => labels
                .iter()
                .map(|l| {
                    InputState::from_label(l)
                        .ok_or_else(|| config_err(format!("unknown input state `{l}`")))
                })
                .collect::<Result<_, _>>()?,
        };

        let seed = cli.seed.or(file.seed);
        if let Some(shots) = file.shots {
            if shots == 0 {
                return Err(config_err("shots must be positive"));
            }
            if seed.is_none() {
                return Err(config_err("shot emulation needs a seed"));
            }
        }

        let clifford_samples = file.clifford_samples.unwrap_or(24);
        if clifford_samples < MIN_CLIFFORD_SAMPLES {
            return Err(config_err(format!(
                "clifford_samples must be at least {MIN_CLIFFORD_SAMPLES}"
            )));
        }

        let out = cli
            .out
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from(format!("{}.{}", command.name(), command.default_extension())));

        Ok(Self {
            command,
            seed,
            out,
            theta_grid,
            alpha_grid,
            pair,
            noise,
            grover_states,
            shots: file.shots,
            clifford_samples,
            clifford_depth: file.clifford_depth.unwrap_or(20),
            weighting: file.otoc_weighting.unwrap_or_default(),
        })
    }
}
