use super::matrix::{Matrix, C64};
use super::{GateKind, SimError};

/// Completely positive trace-preserving map given by Kraus operators acting
/// on `targets`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Matrix>,
    targets: Vec<usize>,
}

impl KrausChannel {
    pub fn new(operators: Vec<Matrix>, targets: Vec<usize>) -> Result<Self, SimError> {
        let Some(first) = operators.first() else {
            return Err(SimError::BadChannel("no Kraus operators".into()));
        };
        let dim = first.dim();
        if first.n_qubits() != Some(targets.len()) || targets.is_empty() {
            return Err(SimError::DimensionMismatch {
                expected: 1 << targets.len(),
                got: dim,
            });
        }
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(SimError::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        for (i, a) in targets.iter().enumerate() {
            if targets[i + 1..].contains(a) {
                return Err(SimError::DuplicateTarget(*a));
            }
        }
        let completeness = operators
            .iter()
            .fold(Matrix::zeros(dim), |acc, k| acc.add(&(&k.adjoint() * k)));
        let defect = completeness.max_abs_diff(&Matrix::identity(dim));
        if defect > 1e-10 {
            return Err(SimError::NotTracePreserving { defect });
        }
        Ok(Self { operators, targets })
    }

    pub fn identity(targets: Vec<usize>) -> Result<Self, SimError> {
        let dim = 1 << targets.len();
        Self::new(vec![Matrix::identity(dim)], targets)
    }

    /// `ρ → (1 - p) ρ + p I/2` on one qubit.
    pub fn depolarizing(p: f64, qubit: usize) -> Result<Self, SimError> {
        check_probability(p)?;
        let w = |x: f64| C64::new(x.sqrt(), 0.0);
        let ops = vec![
            Matrix::identity(2).scale(w(1.0 - 0.75 * p)),
            GateKind::X.matrix().scale(w(p / 4.0)),
            GateKind::Y.matrix().scale(w(p / 4.0)),
            GateKind::Z.matrix().scale(w(p / 4.0)),
        ];
        Self::new(ops, vec![qubit])
    }

    /// Classical bit flip with probability `p`.
    pub fn bit_flip(p: f64, qubit: usize) -> Result<Self, SimError> {
        check_probability(p)?;
        let ops = vec![
            Matrix::identity(2).scale(C64::new((1.0 - p).sqrt(), 0.0)),
            GateKind::X.matrix().scale(C64::new(p.sqrt(), 0.0)),
        ];
        Self::new(ops, vec![qubit])
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Same channel moved to other qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Result<Self, SimError> {
        Self::new(
            self.operators.clone(),
            self.targets.iter().map(|&q| map(q)).collect(),
        )
    }
}

fn check_probability(p: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SimError::BadChannel(format!("probability {p} outside [0, 1]")))
    }
}
