//! The scrambler families used by the experiments.
//!
//! Every family acts on a 3-qubit register whose qubit 0 carries the input
//! state. The interpolating family is
//! `U(α) = exp(-iαπ/4 Σ_{i<j} Z_i Z_j) · exp(-iαπ/4 Σ_{i<j} X_i X_j)`,
//! each two-body term compiled as `CNOT · Rz(απ/2) · CNOT` (with Hadamard
//! frames for the XX block), so only the z-rotation angles depend on α.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError};
use crate::protocol::{self, InputState, Pair};
use crate::simkernel::GateOp;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Which unitary family drives the scrambling register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScramblerFamily {
    Interpolating,
    Classical,
    IdentityControl,
    GroverFamily,
}

impl ScramblerFamily {
    pub fn name(self) -> &'static str {
        match self {
            ScramblerFamily::Interpolating => "interpolating",
            ScramblerFamily::Classical => "classical",
            ScramblerFamily::IdentityControl => "identity_control",
            ScramblerFamily::GroverFamily => "grover_family",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScramblerSpec {
    pub family: ScramblerFamily,
    /// Only read by [`ScramblerFamily::Interpolating`].
    #[serde(default)]
    pub alpha: f64,
}

impl ScramblerSpec {
    pub fn interpolating(alpha: f64) -> Self {
        Self {
            family: ScramblerFamily::Interpolating,
            alpha,
        }
    }

    /// `U(α = 1)`.
    pub fn maximal() -> Self {
        Self::interpolating(1.0)
    }

    pub fn classical() -> Self {
        Self {
            family: ScramblerFamily::Classical,
            alpha: 0.0,
        }
    }

    pub fn identity_control() -> Self {
        Self {
            family: ScramblerFamily::IdentityControl,
            alpha: 0.0,
        }
    }

    pub fn grover_family() -> Self {
        Self {
            family: ScramblerFamily::GroverFamily,
            alpha: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(CircuitError::AlphaOutOfRange(self.alpha));
        }
        Ok(())
    }

    pub fn circuit(&self) -> Result<Circuit, CircuitError> {
        self.validate()?;
        match self.family {
            ScramblerFamily::Interpolating => build_scrambler(self.alpha),
            ScramblerFamily::Classical => Ok(build_classical_scrambler()),
            ScramblerFamily::IdentityControl => Ok(build_identity_control()),
            ScramblerFamily::GroverFamily => Ok(build_grover_scrambler()),
        }
    }
}

fn zz_block(c: &mut Circuit, angle: f64) -> Result<(), CircuitError> {
    for &(a, b) in &PAIRS {
        c.push(GateOp::cnot(a, b))?;
        c.push(GateOp::rz(angle, b))?;
        c.push(GateOp::cnot(a, b))?;
    }
    Ok(())
}

fn hadamard_layer(c: &mut Circuit) -> Result<(), CircuitError> {
    for q in 0..3 {
        c.push(GateOp::h(q))?;
    }
    Ok(())
}

/// Interpolating scrambler: identity at `alpha = 0`, maximally scrambling
/// Clifford at `alpha = 1`.
pub fn build_scrambler(alpha: f64) -> Result<Circuit, CircuitError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CircuitError::AlphaOutOfRange(alpha));
    }
    let angle = alpha * FRAC_PI_2;
    let mut c = Circuit::new(3)?;
    hadamard_layer(&mut c)?;
    zz_block(&mut c, angle)?;
    hadamard_layer(&mut c)?;
    zz_block(&mut c, angle)?;
    Ok(c)
}

/// Diagonal scrambler: controlled-Z on every pair, so it commutes with each
/// `Z_i` and scrambles phase but not population.
pub fn build_classical_scrambler() -> Circuit {
    let gates = PAIRS.iter().map(|&(a, b)| GateOp::cz(a, b)).collect();
    Circuit::from_gates(3, gates).expect("3-qubit classical scrambler")
}

/// The interpolating skeleton with every z-rotation at zero: same gate count
/// and mix as the maximal scrambler, identity unitary.
pub fn build_identity_control() -> Circuit {
    build_scrambler(0.0).expect("alpha = 0 is in range")
}

/// A second maximally scrambling Clifford class, `CZ³ · H⊗³ · CZ³`, used by
/// the Grover decoder experiments.
pub fn build_grover_scrambler() -> Circuit {
    let cz_layer = || PAIRS.iter().map(|&(a, b)| GateOp::cz(a, b));
    let gates = cz_layer()
        .chain((0..3).map(GateOp::h))
        .chain(cz_layer())
        .collect();
    Circuit::from_gates(3, gates).expect("3-qubit Grover-family scrambler")
}

/// Random 3-qubit circuit over `{H, S, CNOT}` with `depth` gates.
pub fn random_clifford(seed: u64, depth: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(3).expect("3-qubit register");
    for _ in 0..depth {
        let g = match rng.gen_range(0..3) {
            0 => GateOp::h(rng.gen_range(0..3)),
            1 => GateOp::s(rng.gen_range(0..3)),
            _ => {
                let a = rng.gen_range(0..3);
                let b = (a + rng.gen_range(1..3)) % 3;
                GateOp::cnot(a, b)
            }
        };
        c.push(g).expect("in range");
    }
    c
}

/// True iff the noiseless protocol teleports all six input states through all
/// three measured pairs with fidelity above `1 - 1e-6`. Registers other than
/// three qubits are never maximal.
pub fn is_maximal_scrambler(c: &Circuit) -> bool {
    if c.n_qubits() != 3 {
        return false;
    }
    Pair::ALL.iter().all(|&pair| {
        InputState::ALL.iter().all(|&input| {
            matches!(
                protocol::ideal_run(c, input, pair),
                Ok(run) if run.fidelity.is_some_and(|f| f > 1.0 - 1e-6)
            )
        })
    })
}
