//! Circuit container, the scrambler families, Pauli propagation and the
//! JSON circuit document.

mod families;
mod json;
mod pauli;

pub use families::{
    build_classical_scrambler, build_grover_scrambler, build_identity_control, build_scrambler,
    is_maximal_scrambler, random_clifford, ScramblerFamily, ScramblerSpec,
};
pub use json::{CircuitDoc, GateDoc};
pub use pauli::{pauli_propagate, Pauli, PauliString};

use crate::simkernel::{GateOp, Matrix, SimError, StateVector, MAX_STATE_QUBITS};

/// Largest register for which [`Circuit::total_unitary`] builds a dense matrix.
pub const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum CircuitError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("dense unitary of {n_qubits} qubits exceeds the limit of {max}")]
    TooLarge { n_qubits: usize, max: usize },
    #[error("gate {index} (`{label}`) is not Clifford; use dense conjugation instead")]
    NotClifford { index: usize, label: String },
    #[error("alpha = {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("Pauli string acts on {got} qubits, circuit has {expected}")]
    PauliSize { expected: usize, got: usize },
    #[error("invalid Pauli string `{0}`")]
    BadPauli(String),
    #[error("circuit document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Ordered gate list on a fixed register. The first gate is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self, CircuitError> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits,
                max: MAX_STATE_QUBITS,
            }
            .into());
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<GateOp>) -> Result<Self, CircuitError> {
        let mut c = Self::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: GateOp) -> Result<&mut Self, CircuitError> {
        gate.check_register(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other`, relabelling its qubit `i` as `map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<(), CircuitError> {
        assert_eq!(map.len(), other.n_qubits, "qubit map must cover the sub-circuit");
        for g in &other.gates {
            self.push(g.remapped(|q| map[q])?)?;
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn entangling_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_entangling()).count()
    }

    /// Circuit whose unitary is the elementwise complex conjugate of this one.
    pub fn conjugate(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().map(GateOp::conj).collect(),
        }
    }

    /// Circuit implementing `U†`.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(GateOp::dagger).collect(),
        }
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<(), CircuitError> {
        for g in &self.gates {
            state.apply_gate(g)?;
        }
        Ok(())
    }

    /// Dense `2^n x 2^n` product of all gates.
    pub fn total_unitary(&self) -> Result<Matrix, CircuitError> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(CircuitError::TooLarge {
                n_qubits: self.n_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut u = Matrix::zeros(dim);
        for col in 0..dim {
            let mut s = StateVector::init_basis(self.n_qubits, col)?;
            self.apply_to(&mut s)?;
            for (row, &a) in s.amps().iter().enumerate() {
                u[(row, col)] = a;
            }
        }
        Ok(u)
    }
}

/// See [`Circuit::conjugate`].
pub fn conjugate_circuit(c: &Circuit) -> Circuit {
    c.conjugate()
}

/// See [`Circuit::total_unitary`].
pub fn total_unitary(c: &Circuit) -> Result<Matrix, CircuitError> {
    c.total_unitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkernel::GateKind;

    #[test]
    fn total_unitary_basics() {
        let empty = Circuit::new(2).unwrap();
        assert_eq!(empty.total_unitary().unwrap(), Matrix::identity(4));

        let h = Circuit::from_gates(1, vec![GateOp::h(0)]).unwrap();
        assert!(h.total_unitary().unwrap().max_abs_diff(&GateKind::H.matrix()) < 1e-15);

        let cc = Circuit::from_gates(2, vec![GateOp::cnot(0, 1), GateOp::cnot(0, 1)]).unwrap();
        assert!(cc.total_unitary().unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-15);

        let big = Circuit::new(11).unwrap();
        assert!(matches!(
            big.total_unitary(),
            Err(CircuitError::TooLarge { .. })
        ));
    }

    #[test]
    fn gate_order_is_application_order() {
        // X then H on |0>: H|1> = |->; total unitary = H·X
        let c = Circuit::from_gates(1, vec![GateOp::x(0), GateOp::h(0)]).unwrap();
        let expect = &GateKind::H.matrix() * &GateKind::X.matrix();
        assert!(c.total_unitary().unwrap().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn conjugate_examples() {
        let c = Circuit::from_gates(1, vec![GateOp::rz(0.7, 0)]).unwrap();
        let conj = conjugate_circuit(&c);
        assert!(
            conj.total_unitary()
                .unwrap()
                .max_abs_diff(&GateKind::Rz(-0.7).matrix())
                < 1e-15
        );
        let x = Circuit::from_gates(1, vec![GateOp::x(0)]).unwrap();
        assert_eq!(x.conjugate(), x);
    }

    #[test]
    fn push_rejects_out_of_range() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(GateOp::cnot(0, 2)).is_err());
        assert!(Circuit::new(0).is_err());
    }

    #[test]
    fn inverse_undoes() {
        let c = Circuit::from_gates(
            2,
            vec![GateOp::h(0), GateOp::s(1), GateOp::cnot(0, 1), GateOp::y(1)],
        )
        .unwrap();
        let mut both = c.clone();
        for g in c.inverse().gates() {
            both.push(g.clone()).unwrap();
        }
        let (d, _) = both
            .total_unitary()
            .unwrap()
            .distance_up_to_phase(&Matrix::identity(4));
        assert!(d < 1e-14);
    }
}
