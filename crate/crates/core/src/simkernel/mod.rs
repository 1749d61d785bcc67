//! Dense pure-state and density-matrix simulation.
//!
//! Qubit `q` is bit `q` of an amplitude index (qubit 0 is least significant).
//! States are mutated in place by one owner at a time; parallelism lives at
//! the sweep level.

mod channel;
mod density;
mod gate;
mod matrix;
mod state;

pub use channel::KrausChannel;
pub use density::DensityMatrix;
pub use gate::{GateKind, GateOp, UNITARY_TOL};
pub use matrix::{Matrix, C64};
pub use state::{epr_vector, StateVector};


/// Largest register a [`StateVector`] may hold.
pub const MAX_STATE_QUBITS: usize = 20;
/// Largest register a [`DensityMatrix`] may hold.
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Probabilities at or below this are treated as impossible outcomes.
pub const IMPOSSIBLE_PROB: f64 = 1e-12;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SimError {
    #[error("basis index {bitstring} out of range for {n_qubits} qubits")]
    BasisOutOfRange { bitstring: usize, n_qubits: usize },
    #[error("register of {n_qubits} qubits is outside the supported range 1..={max}")]
    RegisterSize { n_qubits: usize, max: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateTarget(usize),
    #[error("gate `{label}` acts on {expected} qubit(s), got {got} target(s)")]
    Arity {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("gate `{label}` is not unitary (max |U†U - I| = {defect:e})")]
    NotUnitary { label: String, defect: f64 },
    #[error("Kraus operators are not trace preserving (max |ΣK†K - I| = {defect:e})")]
    NotTracePreserving { defect: f64 },
    #[error("Kraus channel is malformed: {0}")]
    BadChannel(String),
    #[error("outcome has probability {prob:e}, treated as impossible")]
    ImpossibleOutcome { prob: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("list of kept qubits is empty")]
    EmptyKeep,
    #[error("gate `{label}` takes {expected} parameter(s), got {got}")]
    BadParams {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown gate label `{0}`")]
    UnknownGate(String),
}

pub(crate) fn check_qubits(qubits: &[usize], n_qubits: usize) -> Result<(), SimError> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(SimError::QubitOutOfRange { qubit: q, n_qubits });
        }
        if qubits[i + 1..].contains(&q) {
            return Err(SimError::DuplicateTarget(q));
        }
    }
    Ok(())
}
