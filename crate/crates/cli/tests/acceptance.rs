//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. Tolerances and runtime limits are fixed here.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use scramble_core::circuits::{
    build_classical_scrambler, build_grover_scrambler, build_identity_control, build_scrambler,
    random_clifford, Circuit, ScramblerSpec,
};
use scramble_core::metrics::{aggregate, noise_factor, otoc_bound, StateAverages};
use scramble_core::noisemodel::{Axis, NoiseConfig};
use scramble_core::otoc::average_otoc;
use scramble_core::protocol::{
    ideal_run, run, sweep, Decoder, InputState, Pair, ProtocolConfig, RunResult,
};

const EXACT: f64 = 1e-9;

type Verdict = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Verdict,
}

fn cell(spec: ScramblerSpec, pair: Pair, noise: NoiseConfig) -> Vec<RunResult> {
    let configs: Vec<ProtocolConfig> = InputState::ALL
        .iter()
        .map(|&s| ProtocolConfig::ideal(spec, s, pair).with_noise(noise))
        .collect();
    sweep(&configs).into_iter().map(|(_, r)| r.unwrap()).collect()
}

fn averages(rows: &[RunResult]) -> StateAverages {
    aggregate(InputState::ALL.into_iter().zip(rows)).unwrap()
}

fn near(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn ideal_maximal_endpoint() -> Verdict {
    let mut worst_p = 0.0f64;
    let mut worst_f = 0.0f64;
    let mut rows = Vec::new();
    for pair in Pair::ALL {
        let r = cell(ScramblerSpec::maximal(), pair, NoiseConfig::ideal());
        for x in &r {
            worst_p = worst_p.max((x.p_success - 0.25).abs());
            worst_f = worst_f.max((x.fidelity.unwrap_or(0.0) - 1.0).abs());
        }
        rows.push(r);
    }
    let avgs = averages(&rows[1]);
    let n = noise_factor(&avgs);
    let bound = otoc_bound(avgs.mean_p, n).map_err(|e| e.to_string())?;
    let detail = format!("max|P-1/4| = {worst_p:.1e}, max|F-1| = {worst_f:.1e}, N = {n}, bound = {bound}");
    if worst_p <= EXACT && worst_f <= EXACT && near(n, 1.0, EXACT) && near(bound, 0.25, EXACT) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn noise_factor_endpoints() -> Verdict {
    let ideal = noise_factor(&averages(&cell(ScramblerSpec::maximal(), Pair::Pair1, NoiseConfig::ideal())));
    let mixed = noise_factor(&averages(&cell(
        ScramblerSpec::maximal(),
        Pair::Pair1,
        NoiseConfig::fully_depolarized(),
    )));
    let detail = format!("ideal N = {ideal}, fully depolarized N = {mixed}");
    if near(ideal, 1.0, EXACT) && near(mixed, 0.25, 1e-6) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mismatch_control() -> Verdict {
    let mut problems = Vec::new();
    let mut last_n = f64::INFINITY;
    let mut ns = Vec::new();
    for k in 0..=4 {
        let theta = k as f64 * PI / 8.0;
        let rows = cell(
            ScramblerSpec::identity_control(),
            Pair::Pair1,
            NoiseConfig::ideal().with_mismatch(theta, Axis::X),
        );
        let want = (theta / 2.0).cos().powi(2);
        for (psi, r) in InputState::ALL.iter().zip(&rows) {
            if !near(r.p_success, want, EXACT) {
                problems.push(format!("P({theta:.4}, {}) = {}", psi.label(), r.p_success));
            }
            if !r.fidelity.is_some_and(|f| near(f, 0.5, EXACT)) {
                problems.push(format!("F({theta:.4}, {}) = {:?}", psi.label(), r.fidelity));
            }
        }
        let n = noise_factor(&averages(&rows));
        if n > last_n + 1e-12 {
            problems.push(format!("N rises at theta = {theta:.4}"));
        }
        last_n = n;
        ns.push(format!("{n:.6}"));
    }
    let detail = format!("P = cos^2(theta/2), F = 1/2, N = [{}]", ns.join(", "));
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", problems.join("; ")))
    }
}

fn otoc_equality() -> Verdict {
    let mut circuits: Vec<(String, Circuit)> = (0..24)
        .map(|seed| (format!("clifford {seed}"), random_clifford(seed, 20)))
        .collect();
    circuits.push(("identity control".into(), build_identity_control()));
    circuits.push(("maximal".into(), build_scrambler(1.0).unwrap()));
    circuits.push(("classical".into(), build_classical_scrambler()));
    circuits.push(("grover family".into(), build_grover_scrambler()));
    let mut worst = 0.0f64;
    let mut checks = 0;
    for (name, c) in &circuits {
        for pair in Pair::ALL {
            for psi in InputState::ALL {
                let (otoc, im) = average_otoc(c, pair.hawking_qubit(), psi).map_err(|e| format!("{name}: {e}"))?;
                let p = ideal_run(c, psi, pair).map_err(|e| format!("{name}: {e}"))?.p_success;
                worst = worst.max((otoc - p).abs()).max(im.abs());
                checks += 1;
            }
        }
    }
    let detail = format!("{} circuits, {checks} checks, max deviation {worst:.1e}", circuits.len());
    if worst < EXACT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pair_table() -> Verdict {
    let mut problems = Vec::new();
    let specs = [
        ("maximal", ScramblerSpec::maximal()),
        ("identity", ScramblerSpec::identity_control()),
        ("classical", ScramblerSpec::classical()),
    ];
    for (name, spec) in specs {
        for pair in Pair::ALL {
            let rows = cell(spec, pair, NoiseConfig::ideal());
            for (psi, r) in InputState::ALL.iter().zip(&rows) {
                let f = r.fidelity.unwrap_or(f64::NAN);
                let z = matches!(psi, InputState::ZeroZ | InputState::OneZ);
                let (want_f, want_p) = match (name, pair, z) {
                    ("maximal", _, _) => (1.0, None),
                    ("identity", Pair::Pair0, _) => (1.0, Some(0.25)),
                    ("identity", _, _) => (0.5, None),
                    (_, _, true) => (1.0, None),
                    (_, _, false) => (0.5, None),
                };
                if !near(f, want_f, EXACT) || want_p.is_some_and(|p| !near(r.p_success, p, EXACT)) {
                    problems.push(format!(
                        "{name} pair{} {}: F = {f:.6} (want {want_f})",
                        pair.index(),
                        psi.label()
                    ));
                }
            }
        }
    }
    if problems.is_empty() {
        Ok("54 cells match".into())
    } else {
        Err(format!("{} cells differ: {}", problems.len(), problems.join("; ")))
    }
}

fn grover_decoder() -> Verdict {
    let mut problems = Vec::new();
    let states = [InputState::ZeroZ, InputState::ZeroX, InputState::ZeroY];

    for psi in InputState::ALL {
        for pair in Pair::ALL {
            let cfg = ProtocolConfig::ideal(ScramblerSpec::grover_family(), psi, pair);
            let plain = run(&cfg.with_decoder(Decoder::Grover)).map_err(|e| e.to_string())?;
            let pure = run(&cfg.with_decoder(Decoder::GroverPurified)).map_err(|e| e.to_string())?;
            let ok = plain.p_success == 1.0
                && plain.fidelity.is_some_and(|f| near(f, 1.0, EXACT))
                && near(pure.p_success, 1.0, EXACT)
                && pure.fidelity.is_some_and(|f| near(f, 1.0, EXACT));
            if !ok {
                problems.push(format!("ideal grover pair{} {}", pair.index(), psi.label()));
            }
        }
    }

    let noise = NoiseConfig::calibrated();
    let mut prob_f = Vec::new();
    for pair in Pair::ALL {
        let rows = cell(ScramblerSpec::maximal(), pair, noise);
        let f = rows.iter().map(|r| r.fidelity.unwrap()).sum::<f64>() / 6.0;
        if !(0.65..=0.90).contains(&f) {
            problems.push(format!("probabilistic F on pair{} = {f:.4} outside [0.65, 0.90]", pair.index()));
        }
        prob_f.push(format!("{f:.4}"));
    }

    let mean_f = |decoder| -> Result<(f64, f64), String> {
        let configs: Vec<ProtocolConfig> = states
            .iter()
            .map(|&s| {
                ProtocolConfig::ideal(ScramblerSpec::grover_family(), s, Pair::Pair1)
                    .with_decoder(decoder)
                    .with_noise(noise)
            })
            .collect();
        let rows: Vec<RunResult> = sweep(&configs)
            .into_iter()
            .map(|(_, r)| r.map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let n = rows.len() as f64;
        Ok((
            rows.iter().map(|r| r.fidelity.unwrap()).sum::<f64>() / n,
            rows.iter().map(|r| r.p_success).sum::<f64>() / n,
        ))
    };
    let (f_plain, p_plain) = mean_f(Decoder::Grover)?;
    let (f_pure, p_pure) = mean_f(Decoder::GroverPurified)?;
    let gap = (f_plain - f_pure).abs();
    if gap >= 0.05 {
        problems.push(format!("grover variants differ by {gap:.4} (limit 0.05)"));
    }
    if p_plain != 1.0 || p_pure >= 1.0 {
        problems.push(format!("noisy P: plain {p_plain}, purified {p_pure}"));
    }

    let detail = format!(
        "probabilistic F per pair = [{}], grover F = {f_plain:.4}, purified F = {f_pure:.4} (P = {p_pure:.4})",
        prob_f.join(", ")
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", problems.join("; ")))
    }
}

fn bound_regression() -> Verdict {
    let ideal = otoc_bound(0.25, 1.0).map_err(|e| e.to_string())?;
    let regime = otoc_bound(0.25, 0.73).map_err(|e| e.to_string())?;
    let detail = format!("bound(0.25, 1) = {ideal}, bound(0.25, 0.73) = {regime:.6}");
    if ideal == 0.25 && near(regime, 0.469, 5e-4) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cli_determinism() -> Verdict {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let commands = [
        ("mismatch-sweep", r#"{"shots": 1000, "seed": 3}"#),
        ("alpha-sweep", r#"{"shots": 1000, "seed": 3}"#),
        ("pairs", r#"{"shots": 1000, "seed": 3}"#),
        ("classical", r#"{"shots": 1000, "seed": 3}"#),
        ("grover", r#"{"noise_preset": "calibrated", "shots": 1000, "seed": 3}"#),
        ("otoc-check", r#"{"seed": 3}"#),
    ];
    let mut compared = 0;
    for (cmd, doc) in commands {
        let cfg = dir.path().join(format!("{cmd}.json"));
        fs::write(&cfg, doc).map_err(|e| e.to_string())?;
        let mut snapshots = Vec::new();
        for attempt in 0..2 {
            let out = dir.path().join(format!("{cmd}_{attempt}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_scramble-verify"))
                .args([cmd, "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!("{cmd} exited with {:?}", status.status.code()));
            }
            let agg = dir.path().join(format!("{cmd}_{attempt}_aggregate.csv"));
            snapshots.push((fs::read(&out).unwrap(), fs::read(&agg).ok()));
        }
        if snapshots[0] != snapshots[1] {
            return Err(format!("{cmd} output differs between identical runs"));
        }
        compared += 1;
    }
    Ok(format!("{compared} commands byte-identical across reruns"))
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, name: "ideal maximal scrambler endpoint", limit: Some(Duration::from_secs(1)), check: ideal_maximal_endpoint },
        Criterion { id: 2, name: "noise factor endpoints", limit: None, check: noise_factor_endpoints },
        Criterion { id: 3, name: "mismatch control dissociation", limit: Some(Duration::from_secs(5)), check: mismatch_control },
        Criterion { id: 4, name: "OTOC equals EPR probability", limit: Some(Duration::from_secs(60)), check: otoc_equality },
        Criterion { id: 5, name: "pair-resolved teleportation table", limit: None, check: pair_table },
        Criterion { id: 6, name: "Grover decoder", limit: None, check: grover_decoder },
        Criterion { id: 7, name: "OTOC bound regression", limit: None, check: bound_regression },
        Criterion { id: 8, name: "CLI determinism", limit: None, check: cli_determinism },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let mut verdict = (c.check)();
        let elapsed = start.elapsed();
        if let (Some(limit), Ok(detail)) = (c.limit, &verdict) {
            if elapsed > limit {
                verdict = Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}"));
            }
        }
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {} {tag} {} ({elapsed:.2?}): {detail}", c.id, c.name);
        if verdict.is_err() {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
