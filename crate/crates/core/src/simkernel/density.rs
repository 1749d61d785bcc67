use super::matrix::{apply_local, Matrix, C64, ZERO};
use super::state::epr_projector;
use super::{
    check_qubits, GateOp, KrausChannel, SimError, StateVector, IMPOSSIBLE_PROB,
    MAX_DENSITY_QUBITS,
};

/// Mixed state of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    rho: Matrix,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self, SimError> {
        let n = state.n_qubits();
        if n > MAX_DENSITY_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits: n,
                max: MAX_DENSITY_QUBITS,
            });
        }
        Ok(Self {
            n_qubits: n,
            rho: Matrix::outer(state.amps(), state.amps()),
        })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits,
                max: MAX_DENSITY_QUBITS,
            });
        }
        let dim = 1 << n_qubits;
        Ok(Self {
            n_qubits,
            rho: Matrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        })
    }

    /// Wraps a matrix after checking Hermiticity and unit trace within 1e-10.
    pub fn from_matrix(rho: Matrix) -> Result<Self, SimError> {
        let n = rho.n_qubits().ok_or(SimError::DimensionMismatch {
            expected: rho.dim().next_power_of_two(),
            got: rho.dim(),
        })?;
        if n == 0 || n > MAX_DENSITY_QUBITS {
            return Err(SimError::RegisterSize {
                n_qubits: n,
                max: MAX_DENSITY_QUBITS,
            });
        }
        let dm = Self { n_qubits: n, rho };
        if !dm.rho.is_hermitian(1e-10) || (dm.trace().re - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized {
                norm_sqr: dm.trace().re,
            });
        }
        Ok(dm)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, rho: Matrix) -> Result<Self, SimError> {
        debug_assert_eq!(rho.dim(), 1 << n_qubits);
        Ok(Self { n_qubits, rho })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        // Tr[ρ²] = Σ |ρ_ij|² for Hermitian ρ
        self.rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ → M ρ M†` for an arbitrary local operator `m`.
    fn sandwich(&mut self, m: &Matrix, targets: &[usize]) {
        // row-major ρ viewed as a 2n-qubit vector: column qubit q is bit q,
        // row qubit q is bit q + n
        let n = self.n_qubits;
        let rows: Vec<usize> = targets.iter().map(|&q| q + n).collect();
        let buf = self.rho.as_mut_slice();
        apply_local(buf, 2 * n, m, &rows);
        apply_local(buf, 2 * n, &m.conj(), targets);
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<(), SimError> {
        gate.check_register(self.n_qubits)?;
        self.sandwich(gate.matrix(), gate.targets());
        Ok(())
    }

    /// `ρ → Σ K_i ρ K_i†`.
    pub fn apply_channel(&mut self, channel: &KrausChannel) -> Result<(), SimError> {
        check_qubits(channel.targets(), self.n_qubits)?;
        let mut acc = Matrix::zeros(self.rho.dim());
        for k in channel.operators() {
            let mut term = self.clone();
            term.sandwich(k, channel.targets());
            acc = acc.add(&term.rho);
        }
        self.rho = acc;
        Ok(())
    }

    /// `Tr[P_EPR ρ]` for the pair `(qa, qb)`.
    pub fn epr_probability(&self, qa: usize, qb: usize) -> Result<f64, SimError> {
        check_qubits(&[qa, qb], self.n_qubits)?;
        let mut projected = self.clone();
        projected.sandwich(&epr_projector(), &[qa, qb]);
        Ok(projected.trace().re)
    }

    /// Projects `(qa, qb)` onto `|EPR>`: returns `Tr[Pρ]` and `PρP / Tr[Pρ]`.
    pub fn epr_project(&self, qa: usize, qb: usize) -> Result<(f64, DensityMatrix), SimError> {
        check_qubits(&[qa, qb], self.n_qubits)?;
        let mut projected = self.clone();
        projected.sandwich(&epr_projector(), &[qa, qb]);
        let prob = projected.trace().re;
        if prob <= IMPOSSIBLE_PROB {
            return Err(SimError::ImpossibleOutcome { prob });
        }
        projected.rho = projected.rho.scale(C64::new(1.0 / prob, 0.0));
        Ok((prob, projected))
    }

    /// Partial trace onto `keep`. Bit `m` of the reduced index is `keep[m]`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, SimError> {
        if keep.is_empty() {
            return Err(SimError::EmptyKeep);
        }
        check_qubits(keep, self.n_qubits)?;
        let local = 1usize << keep.len();
        let keep_mask = keep.iter().fold(0usize, |m, &q| m | 1 << q);
        let deposit = |j: usize| -> usize {
            keep.iter()
                .enumerate()
                .filter(|(bit, _)| j >> bit & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        };
        let deposits: Vec<usize> = (0..local).map(deposit).collect();
        let mut out = Matrix::zeros(local);
        let dim = self.rho.dim();
        for env in (0..dim).filter(|e| e & keep_mask == 0) {
            for (i, &di) in deposits.iter().enumerate() {
                for (j, &dj) in deposits.iter().enumerate() {
                    out[(i, j)] += self.rho[(env | di, env | dj)];
                }
            }
        }
        Self::from_matrix_unchecked(keep.len(), out)
    }

    /// `<target|ρ|target>`.
    pub fn fidelity_pure(&self, target: &StateVector) -> Result<f64, SimError> {
        if target.n_qubits() != self.n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.n_qubits,
                got: target.n_qubits(),
            });
        }
        let rv = self.rho.mul_vec(target.amps());
        let f: C64 = target
            .amps()
            .iter()
            .zip(&rv)
            .map(|(t, r)| t.conj() * r)
            .fold(ZERO, |a, b| a + b);
        Ok(f.re)
    }
}
