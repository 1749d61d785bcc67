//! Out-of-time-ordered correlators on the 3-qubit scrambling register.
//!
//! The expectation is the normalized trace (infinite temperature). With the
//! default weighting, the OTOC averaged over the six probe states `φ` and the
//! four Paulis on the Hawking qubit equals the noiseless EPR success
//! probability of the matching mirror pair.

use crate::circuits::{Circuit, CircuitError, Pauli, PauliString};
use crate::protocol::InputState;
use crate::simkernel::{Matrix, C64};

#[derive(Debug, thiserror::Error)]
pub enum OtocError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("scrambler must act on 3 qubits, got {0}")]
    ScramblerSize(usize),
    #[error("hawking qubit {0} is not one of 0, 1, 2")]
    HawkingQubit(usize),
    #[error("O_H must be a Pauli of weight <= 1 on the hawking qubit, got {0}")]
    BadOperator(String),
}

/// One correlator `<O_A† O_H(t)† O_A O_H(t)>` with `O_A = |ψ><φ|` on q0.
#[derive(Clone, Debug)]
pub struct OtocQuery {
    pub scrambler: Circuit,
    pub hawking_qubit: usize,
    pub psi: [C64; 2],
    pub phi: [C64; 2],
    pub o_h: PauliString,
}

impl OtocQuery {
    pub fn new(
        scrambler: Circuit,
        hawking_qubit: usize,
        psi: InputState,
        phi: InputState,
        o_h: Pauli,
    ) -> Result<Self, OtocError> {
        if hawking_qubit > 2 {
            return Err(OtocError::HawkingQubit(hawking_qubit));
        }
        Ok(Self {
            scrambler,
            hawking_qubit,
            psi: psi.amplitudes(),
            phi: phi.amplitudes(),
            o_h: PauliString::single(3, hawking_qubit, o_h),
        })
    }

    fn check(&self) -> Result<(), OtocError> {
        if self.scrambler.n_qubits() != 3 {
            return Err(OtocError::ScramblerSize(self.scrambler.n_qubits()));
        }
        if self.hawking_qubit > 2 {
            return Err(OtocError::HawkingQubit(self.hawking_qubit));
        }
        let off_site = self
            .o_h
            .letters()
            .iter()
            .enumerate()
            .any(|(q, &p)| q != self.hawking_qubit && p != Pauli::I);
        if self.o_h.n_qubits() != 3 || off_site {
            return Err(OtocError::BadOperator(self.o_h.to_string()));
        }
        Ok(())
    }
}

/// `|ψ><φ|` on q0 of the 3-qubit register.
fn alice_operator(psi: &[C64; 2], phi: &[C64; 2]) -> Matrix {
    Matrix::identity(4).kron(&Matrix::outer(psi, phi))
}

/// `Tr[A† B† A B] / 8` for the Heisenberg-evolved `B = U† O_H U`.
fn correlator(o_a: &Matrix, u: &Matrix, o_h: &Matrix) -> C64 {
    let b = &(&u.adjoint() * o_h) * u;
    let prod = &(&(&o_a.adjoint() * &b.adjoint()) * o_a) * &b;
    prod.trace() / 8.0
}

pub fn otoc_value(q: &OtocQuery) -> Result<C64, OtocError> {
    q.check()?;
    let u = q.scrambler.total_unitary()?;
    Ok(correlator(
        &alice_operator(&q.psi, &q.phi),
        &u,
        &q.o_h.to_matrix(),
    ))
}

/// Discrete measure for the φ and O_H averages.
#[derive(Clone, Debug, PartialEq)]
pub struct OtocWeighting {
    /// Multiplies the uniform mean; `d_A = 2` for a single-qubit `O_A`.
    pub prefactor: f64,
    /// Operators averaged over on the Hawking qubit.
    pub paulis: Vec<Pauli>,
    /// Probe states averaged over for `φ`.
    pub phis: Vec<InputState>,
}

impl Default for OtocWeighting {
    fn default() -> Self {
        Self {
            prefactor: 2.0,
            paulis: Pauli::ALL.to_vec(),
            phis: InputState::ALL.to_vec(),
        }
    }
}

impl OtocWeighting {
    /// Drops the identity from the O_H average. Breaks the equality with the
    /// EPR probability; kept as a negative control for the oracle.
    pub fn without_identity() -> Self {
        Self {
            paulis: vec![Pauli::X, Pauli::Y, Pauli::Z],
            ..Self::default()
        }
    }
}

/// Averaged OTOC with the default weighting. The result is real up to
/// rounding; the imaginary residue is returned alongside.
pub fn average_otoc(scrambler: &Circuit, hawking_qubit: usize, psi: InputState) -> Result<(f64, f64), OtocError> {
    average_otoc_weighted(scrambler, hawking_qubit, psi, &OtocWeighting::default())
}

pub fn average_otoc_weighted(
    scrambler: &Circuit,
    hawking_qubit: usize,
    psi: InputState,
    w: &OtocWeighting,
) -> Result<(f64, f64), OtocError> {
    if scrambler.n_qubits() != 3 {
        return Err(OtocError::ScramblerSize(scrambler.n_qubits()));
    }
    if hawking_qubit > 2 {
        return Err(OtocError::HawkingQubit(hawking_qubit));
    }
    let u = scrambler.total_unitary()?;
    let psi = psi.amplitudes();
    let mut sum = C64::new(0.0, 0.0);
    for &phi in &w.phis {
        let o_a = alice_operator(&psi, &phi.amplitudes());
        for &p in &w.paulis {
            let o_h = PauliString::single(3, hawking_qubit, p).to_matrix();
            sum += correlator(&o_a, &u, &o_h);
        }
    }
    let mean = sum * (w.prefactor / (w.phis.len() * w.paulis.len()) as f64);
    Ok((mean.re, mean.im))
}
