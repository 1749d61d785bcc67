use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{apply_local, Matrix, C64, ONE, ZERO};
use super::{check_qubits, DensityMatrix, GateOp, SimError, IMPOSSIBLE_PROB, MAX_STATE_QUBITS};

/// `(|00> + |11>)/√2` in local index order.
pub fn epr_vector() -> [C64; 4] {
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    [a, ZERO, ZERO, a]
}

pub(crate) fn epr_projector() -> Matrix {
    let v = epr_vector();
    Matrix::outer(&v, &v)
}

/// Pure state of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Computational basis state `|bitstring>`.
    pub fn init_basis(n_qubits: usize, bitstring: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits,
                max: MAX_STATE_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if bitstring >= dim {
            return Err(SimError::BasisOutOfRange {
                bitstring,
                n_qubits,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[bitstring] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an amplitude vector; it must have power-of-two length and unit norm
    /// within 1e-10.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, SimError> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(SimError::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                got: dim,
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits,
                max: MAX_STATE_QUBITS,
            });
        }
        let state = Self { n_qubits, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<(), SimError> {
        gate.check_register(self.n_qubits)?;
        apply_local(&mut self.amps, self.n_qubits, gate.matrix(), gate.targets());
        Ok(())
    }

    /// Probability of projecting qubits `(qa, qb)` onto `|EPR>`.
    pub fn epr_probability(&self, qa: usize, qb: usize) -> Result<f64, SimError> {
        check_qubits(&[qa, qb], self.n_qubits)?;
        let mut projected = self.amps.clone();
        apply_local(&mut projected, self.n_qubits, &epr_projector(), &[qa, qb]);
        Ok(projected.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Projects `(qa, qb)` onto `|EPR>` and renormalizes.
    ///
    /// Returns [`SimError::ImpossibleOutcome`] when the probability is at or
    /// below [`IMPOSSIBLE_PROB`].
    pub fn project_epr(&self, qa: usize, qb: usize) -> Result<(f64, StateVector), SimError> {
        check_qubits(&[qa, qb], self.n_qubits)?;
        let mut projected = self.amps.clone();
        apply_local(&mut projected, self.n_qubits, &epr_projector(), &[qa, qb]);
        let prob: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if prob <= IMPOSSIBLE_PROB {
            return Err(SimError::ImpossibleOutcome { prob });
        }
        let scale = 1.0 / prob.sqrt();
        projected.iter_mut().for_each(|a| *a *= scale);
        Ok((
            prob,
            StateVector {
                n_qubits: self.n_qubits,
                amps: projected,
            },
        ))
    }

    /// Partial trace onto `keep`. Bit `m` of the reduced index is `keep[m]`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, SimError> {
        if keep.is_empty() {
            return Err(SimError::EmptyKeep);
        }
        check_qubits(keep, self.n_qubits)?;
        let k = keep.len();
        let local = 1usize << k;
        let keep_mask = keep.iter().fold(0usize, |m, &q| m | 1 << q);
        let deposit = |j: usize| -> usize {
            keep.iter()
                .enumerate()
                .filter(|(bit, _)| j >> bit & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        };
        let deposits: Vec<usize> = (0..local).map(deposit).collect();
        let gather = |g: usize| -> usize {
            keep.iter()
                .enumerate()
                .fold(0, |acc, (bit, &q)| acc | ((g >> q) & 1) << bit)
        };

        let mut rho = Matrix::zeros(local);
        for (g1, &a1) in self.amps.iter().enumerate() {
            if a1 == ZERO {
                continue;
            }
            let i = gather(g1);
            let env = g1 & !keep_mask;
            for (j, &d) in deposits.iter().enumerate() {
                rho[(i, j)] += a1 * self.amps[env | d].conj();
            }
        }
        DensityMatrix::from_matrix_unchecked(k, rho)
    }
}
