//! Scalar diagnostics over the six input states: the noise factor and the
//! decoherence-corrected OTOC bound.

use crate::protocol::{InputState, RunResult};

/// Dimension of Alice's subsystem.
pub const D_A: u32 = 2;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MetricsError {
    #[error("noise factor {0} is not positive; the OTOC bound is undefined")]
    Domain(f64),
    #[error("incomplete cell, missing input states: {}", .0.join(", "))]
    IncompleteCell(Vec<&'static str>),
    #[error("input state {0} appears more than once in the cell")]
    DuplicateState(&'static str),
}

/// `<P>` and `<F·P>` over the six input states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateAverages {
    pub mean_p: f64,
    pub mean_fp: f64,
    pub d_a: u32,
}

impl StateAverages {
    pub fn new(mean_p: f64, mean_fp: f64) -> Self {
        Self {
            mean_p,
            mean_fp,
            d_a: D_A,
        }
    }
}

/// `d_A [(d_A + 1) <F P> - <P>]`: 1 for a perfect scrambler, `1/d_A²` when
/// fully decohered.
pub fn noise_factor(avgs: &StateAverages) -> f64 {
    let d = f64::from(avgs.d_a);
    d * ((d + 1.0) * avgs.mean_fp - avgs.mean_p)
}

/// Upper bound `4 <P>² / N²` on the ideal averaged OTOC. Valid only when
/// incoherent errors are negligible.
pub fn otoc_bound(mean_p: f64, noise_factor: f64) -> Result<f64, MetricsError> {
    if noise_factor <= 0.0 || noise_factor.is_nan() {
        return Err(MetricsError::Domain(noise_factor));
    }
    Ok(4.0 * mean_p * mean_p / (noise_factor * noise_factor))
}

/// Uniform average over one cell. Every input state must appear exactly
/// once; an undefined fidelity counts as `F·P = 0`.
pub fn aggregate<'a, I>(rows: I) -> Result<StateAverages, MetricsError>
where
    I: IntoIterator<Item = (InputState, &'a RunResult)>,
{
    let mut seen: [Option<&RunResult>; 6] = [None; 6];
    for (state, r) in rows {
        let slot = InputState::ALL
            .iter()
            .position(|&s| s == state)
            .expect("every state is in ALL");
        if seen[slot].replace(r).is_some() {
            return Err(MetricsError::DuplicateState(state.label()));
        }
    }
    let missing: Vec<&'static str> = InputState::ALL
        .iter()
        .zip(&seen)
        .filter(|(_, r)| r.is_none())
        .map(|(s, _)| s.label())
        .collect();
    if !missing.is_empty() {
        return Err(MetricsError::IncompleteCell(missing));
    }
    let rows: Vec<&RunResult> = seen.iter().flatten().copied().collect();
    let n = rows.len() as f64;
    Ok(StateAverages::new(
        rows.iter().map(|r| r.p_success).sum::<f64>() / n,
        rows.iter().map(|r| r.fidelity_times_p()).sum::<f64>() / n,
    ))
}
