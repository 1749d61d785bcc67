//! The six experiments. Each returns tables in deterministic order; writing
//! is left to the caller.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use scramble_core::circuits::{
    build_classical_scrambler, build_grover_scrambler, build_identity_control, build_scrambler,
    random_clifford, Circuit, ScramblerSpec,
};
use scramble_core::metrics::{aggregate, noise_factor, otoc_bound, StateAverages};
use scramble_core::otoc::{average_otoc_weighted, OtocWeighting};
use scramble_core::protocol::{ideal_run, sweep, Decoder, InputState, Pair, ProtocolConfig, RunResult};

use crate::config::{Command, ExperimentConfig, Weighting};
use crate::error::CliError;
use crate::format::{fmt_g, fmt_opt, Table};
use crate::shots::ShotSampler;

/// Tolerance of the OTOC equality check.
pub const OTOC_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Primary {
    Csv(Table),
    Json(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub primary: Primary,
    pub aggregate: Option<Table>,
    /// Set when an oracle inside the command failed.
    pub failure: Option<String>,
    pub channels_active: bool,
}

pub fn run_command(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::MismatchSweep => mismatch_sweep(cfg),
        Command::AlphaSweep => alpha_sweep(cfg),
        Command::Pairs => pairs(cfg, &SCRAMBLERS),
        Command::Classical => pairs(cfg, &SCRAMBLERS[2..]),
        Command::Grover => grover(cfg),
        Command::OtocCheck => otoc_check(cfg),
    }
}

/// One labelled run: leading label columns, then the configuration.
struct Job {
    labels: Vec<String>,
    cfg: ProtocolConfig,
}

fn execute(jobs: &[Job]) -> Result<Vec<RunResult>, CliError> {
    let configs: Vec<ProtocolConfig> = jobs.iter().map(|j| j.cfg).collect();
    sweep(&configs)
        .into_iter()
        .map(|(_, r)| r.map_err(CliError::from))
        .collect()
}

fn row_table(
    cfg: &ExperimentConfig,
    label_columns: &[&'static str],
    jobs: &[Job],
    results: &[RunResult],
) -> Table {
    let mut header = label_columns.to_vec();
    header.extend(["P", "F"]);
    let mut sampler = cfg.shots.map(|n| {
        header.extend(["shots", "successes", "correct"]);
        ShotSampler::new(cfg.seed.expect("validated with shots"), n)
    });
    let mut table = Table::new(header);
    for (job, r) in jobs.iter().zip(results) {
        let mut row = job.labels.clone();
        row.push(fmt_g(r.p_success));
        row.push(fmt_opt(r.fidelity));
        if let Some(s) = sampler.as_mut() {
            let c = s.sample(r.p_success, r.fidelity);
            row.extend([c.shots, c.successes, c.correct].map(|v| v.to_string()));
        }
        table.push(row);
    }
    table
}

/// Averages each consecutive block of six results, which the job builders
/// lay out in [`InputState::ALL`] order.
fn cell_averages(results: &[RunResult]) -> Result<Vec<StateAverages>, CliError> {
    results
        .chunks(InputState::ALL.len())
        .map(|chunk| Ok(aggregate(InputState::ALL.into_iter().zip(chunk))?))
        .collect()
}

fn mismatch_sweep(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let mut jobs = Vec::new();
    for &theta in &cfg.theta_grid {
        let noise = cfg.noise.with_mismatch(theta, cfg.noise.mismatch_axis);
        for psi in InputState::ALL {
            jobs.push(Job {
                labels: vec![fmt_g(theta), psi.label().into(), cfg.pair.index().to_string()],
                cfg: ProtocolConfig::ideal(ScramblerSpec::identity_control(), psi, cfg.pair)
                    .with_noise(noise),
            });
        }
    }
    let results = execute(&jobs)?;
    let mut agg = Table::new(vec!["theta", "mean_P", "mean_FP", "N"]);
    for (&theta, avgs) in cfg.theta_grid.iter().zip(cell_averages(&results)?) {
        agg.push(vec![
            fmt_g(theta),
            fmt_g(avgs.mean_p),
            fmt_g(avgs.mean_fp),
            fmt_g(noise_factor(&avgs)),
        ]);
    }
    Ok(Output {
        primary: Primary::Csv(row_table(cfg, &["theta", "psi", "pair"], &jobs, &results)),
        aggregate: Some(agg),
        failure: None,
        channels_active: cfg.noise.has_channels(),
    })
}

fn alpha_sweep(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let mut jobs = Vec::new();
    for &alpha in &cfg.alpha_grid {
        for psi in InputState::ALL {
            jobs.push(Job {
                labels: vec![fmt_g(alpha), psi.label().into()],
                cfg: ProtocolConfig::ideal(ScramblerSpec::interpolating(alpha), psi, cfg.pair)
                    .with_noise(cfg.noise),
            });
        }
    }
    let results = execute(&jobs)?;
    let mut agg = Table::new(vec!["alpha", "mean_P", "N", "otoc_bound"]);
    for (&alpha, avgs) in cfg.alpha_grid.iter().zip(cell_averages(&results)?) {
        let n = noise_factor(&avgs);
        // a non-positive N leaves the bound undefined
        let bound = otoc_bound(avgs.mean_p, n).ok();
        agg.push(vec![fmt_g(alpha), fmt_g(avgs.mean_p), fmt_g(n), fmt_opt(bound)]);
    }
    Ok(Output {
        primary: Primary::Csv(row_table(cfg, &["alpha", "psi"], &jobs, &results)),
        aggregate: Some(agg),
        failure: None,
        channels_active: cfg.noise.has_channels(),
    })
}

type NamedScrambler = (&'static str, fn() -> ScramblerSpec);

const SCRAMBLERS: [NamedScrambler; 3] = [
    ("maximal", ScramblerSpec::maximal),
    ("identity_control", ScramblerSpec::identity_control),
    ("classical", ScramblerSpec::classical),
];

fn pairs(cfg: &ExperimentConfig, scramblers: &[NamedScrambler]) -> Result<Output, CliError> {
    let mut jobs = Vec::new();
    for &(name, spec) in scramblers {
        for pair in Pair::ALL {
            for psi in InputState::ALL {
                jobs.push(Job {
                    labels: vec![name.into(), pair.index().to_string(), psi.label().into()],
                    cfg: ProtocolConfig::ideal(spec(), psi, pair).with_noise(cfg.noise),
                });
            }
        }
    }
    let results = execute(&jobs)?;
    Ok(Output {
        primary: Primary::Csv(row_table(cfg, &["scrambler", "pair", "psi"], &jobs, &results)),
        aggregate: None,
        failure: None,
        channels_active: cfg.noise.has_channels(),
    })
}

fn grover(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let variants = [("grover", Decoder::Grover), ("grover_purified", Decoder::GroverPurified)];
    let mut jobs = Vec::new();
    for (name, decoder) in variants {
        for &psi in &cfg.grover_states {
            jobs.push(Job {
                labels: vec![name.into(), psi.label().into()],
                cfg: ProtocolConfig::ideal(ScramblerSpec::grover_family(), psi, cfg.pair)
                    .with_decoder(decoder)
                    .with_noise(cfg.noise),
            });
        }
    }
    let results = execute(&jobs)?;
    let mut agg = Table::new(vec!["variant", "mean_P", "mean_F"]);
    for ((name, _), chunk) in variants.iter().zip(results.chunks(cfg.grover_states.len())) {
        let n = chunk.len() as f64;
        let mean_p = chunk.iter().map(|r| r.p_success).sum::<f64>() / n;
        let mean_f = chunk.iter().map(|r| r.fidelity).sum::<Option<f64>>().map(|s| s / n);
        agg.push(vec![name.to_string(), fmt_g(mean_p), fmt_opt(mean_f)]);
    }
    Ok(Output {
        primary: Primary::Csv(row_table(cfg, &["variant", "psi"], &jobs, &results)),
        aggregate: Some(agg),
        failure: None,
        channels_active: cfg.noise.has_channels(),
    })
}

fn otoc_check(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let weighting = match cfg.weighting {
        Weighting::Uniform => OtocWeighting::default(),
        Weighting::Corrupted => OtocWeighting::without_identity(),
    };
    let mut circuits: Vec<(String, Circuit)> = vec![
        ("identity_control".into(), build_identity_control()),
        ("maximal".into(), build_scrambler(1.0).expect("alpha = 1 is in range")),
        ("classical".into(), build_classical_scrambler()),
        ("grover_family".into(), build_grover_scrambler()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    for i in 0..cfg.clifford_samples {
        let seed: u64 = rng.gen();
        circuits.push((format!("clifford_{i}_{seed:016x}"), random_clifford(seed, cfg.clifford_depth)));
    }

    let mut entries = Vec::new();
    let (mut checks, mut failures) = (0usize, 0usize);
    for (name, c) in &circuits {
        let mut worst = 0.0f64;
        for pair in Pair::ALL {
            for psi in InputState::ALL {
                let (otoc, im) = average_otoc_weighted(c, pair.hawking_qubit(), psi, &weighting)
                    .map_err(|e| CliError::Config(format!("{name}: {e}")))?;
                let p = ideal_run(c, psi, pair)?.p_success;
                let diff = (otoc - p).abs().max(im.abs());
                checks += 1;
                if diff >= OTOC_TOL {
                    failures += 1;
                }
                worst = worst.max(diff);
            }
        }
        entries.push(json!({
            "circuit": name,
            "gates": c.len(),
            "max_abs_diff": worst,
            "passed": worst < OTOC_TOL,
        }));
    }
    let report = json!({
        "weighting": match cfg.weighting { Weighting::Uniform => "uniform", Weighting::Corrupted => "corrupted" },
        "tolerance": OTOC_TOL,
        "checks": checks,
        "failures": failures,
        "passed": failures == 0,
        "circuits": entries,
    });
    let text = serde_json::to_string_pretty(&report).expect("plain JSON values") + "\n";
    Ok(Output {
        primary: Primary::Json(text),
        aggregate: None,
        failure: (failures > 0).then(|| format!("{failures} of {checks} OTOC equality checks failed")),
        channels_active: false,
    })
}
