//! Finite-shot emulation layered on exact probabilities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Sampled counts for one row: post-selected successes out of `shots`, and
/// how many of those read out the input state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub shots: u64,
    pub successes: u64,
    pub correct: u64,
}

pub struct ShotSampler {
    rng: ChaCha8Rng,
    shots: u64,
}

impl ShotSampler {
    pub fn new(seed: u64, shots: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            shots,
        }
    }

    fn binomial(&mut self, n: u64, p: f64) -> u64 {
        let p = p.clamp(0.0, 1.0);
        Binomial::new(n, p)
            .expect("clamped probability")
            .sample(&mut self.rng)
    }

    /// Draws counts for exact `p` and `f`. An undefined fidelity implies no
    /// successes worth scoring.
    pub fn sample(&mut self, p: f64, f: Option<f64>) -> Counts {
        let successes = self.binomial(self.shots, p);
        let correct = match f {
            Some(f) => self.binomial(successes, f),
            None => 0,
        };
        Counts {
            shots: self.shots,
            successes,
            correct,
        }
    }
}
