use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{Matrix, C64, ONE, ZERO};
use super::SimError;

/// Tolerance used when validating that a gate matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// The gate vocabulary understood by the simulator and the circuit file
/// format. Angles are in radians.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    I,
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `U3(θ, φ, λ) = [[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
    U3 { theta: f64, phi: f64, lambda: f64 },
    /// Controlled-NOT; the first target is the control.
    Cnot,
    Cz,
    /// `I - 2|EPR><EPR|` on two qubits.
    EprReflect,
    Custom { label: String, matrix: Matrix },
}

impl GateKind {
    pub fn label(&self) -> &str {
        match self {
            GateKind::I => "i",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::U3 { .. } => "u3",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::EprReflect => "epr_reflect",
            GateKind::Custom { label, .. } => label,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) => vec![t],
            GateKind::U3 { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    /// Rebuilds a named gate from its label and parameters.
    pub fn from_label(label: &str, params: &[f64]) -> Result<Self, SimError> {
        let want = |n: usize| -> Result<(), SimError> {
            if params.len() == n {
                Ok(())
            } else {
                Err(SimError::BadParams {
                    label: label.to_string(),
                    expected: n,
                    got: params.len(),
                })
            }
        };
        let kind = match label {
            "i" => GateKind::I,
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "cnot" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "epr_reflect" => GateKind::EprReflect,
            "rx" => {
                want(1)?;
                return Ok(GateKind::Rx(params[0]));
            }
            "ry" => {
                want(1)?;
                return Ok(GateKind::Ry(params[0]));
            }
            "rz" => {
                want(1)?;
                return Ok(GateKind::Rz(params[0]));
            }
            "u3" => {
                want(3)?;
                return Ok(GateKind::U3 {
                    theta: params[0],
                    phi: params[1],
                    lambda: params[2],
                });
            }
            other => return Err(SimError::UnknownGate(other.to_string())),
        };
        want(0)?;
        Ok(kind)
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::EprReflect => 2,
            GateKind::Custom { matrix, .. } => matrix.n_qubits().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn matrix(&self) -> Matrix {
        let r = |x: f64| C64::new(x, 0.0);
        let i = C64::i();
        match self {
            GateKind::I => Matrix::identity(2),
            GateKind::H => Matrix::from_rows(&[[r(1.0), r(1.0)], [r(1.0), r(-1.0)]])
                .scale(r(FRAC_1_SQRT_2)),
            GateKind::X => Matrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
            GateKind::Y => Matrix::from_rows(&[[ZERO, -i], [i, ZERO]]),
            GateKind::Z => Matrix::diagonal(&[ONE, -ONE]),
            GateKind::S => Matrix::diagonal(&[ONE, i]),
            GateKind::Sdg => Matrix::diagonal(&[ONE, -i]),
            GateKind::Rx(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                Matrix::from_rows(&[[r(c), -i * s], [-i * s, r(c)]])
            }
            GateKind::Ry(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                Matrix::from_rows(&[[r(c), r(-s)], [r(s), r(c)]])
            }
            GateKind::Rz(t) => Matrix::diagonal(&[
                C64::from_polar(1.0, -t / 2.0),
                C64::from_polar(1.0, t / 2.0),
            ]),
            GateKind::U3 { theta, phi, lambda } => {
                let (s, c) = (theta / 2.0).sin_cos();
                Matrix::from_rows(&[
                    [r(c), -C64::from_polar(s, *lambda)],
                    [C64::from_polar(s, *phi), C64::from_polar(c, phi + lambda)],
                ])
            }
            GateKind::Cnot => {
                // local bit 0 = control, bit 1 = target
                let mut m = Matrix::zeros(4);
                m[(0, 0)] = ONE;
                m[(3, 1)] = ONE;
                m[(2, 2)] = ONE;
                m[(1, 3)] = ONE;
                m
            }
            GateKind::Cz => Matrix::diagonal(&[ONE, ONE, ONE, -ONE]),
            GateKind::EprReflect => {
                let mut m = Matrix::identity(4);
                for &a in &[0usize, 3] {
                    for &b in &[0usize, 3] {
                        m[(a, b)] -= ONE;
                    }
                }
                m
            }
            GateKind::Custom { matrix, .. } => matrix.clone(),
        }
    }

    /// Elementwise complex conjugate of the gate, expressed in the same
    /// vocabulary where possible.
    pub fn conj(&self) -> Self {
        match self {
            GateKind::Y => GateKind::U3 {
                theta: std::f64::consts::PI,
                phi: -std::f64::consts::FRAC_PI_2,
                lambda: -std::f64::consts::FRAC_PI_2,
            },
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::U3 { theta, phi, lambda } => GateKind::U3 {
                theta: *theta,
                phi: -phi,
                lambda: -lambda,
            },
            GateKind::Custom { label, matrix } => GateKind::Custom {
                label: label.clone(),
                matrix: matrix.conj(),
            },
            real => real.clone(),
        }
    }

    /// Inverse of the gate.
    pub fn dagger(&self) -> Self {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::U3 { theta, phi, lambda } => GateKind::U3 {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            GateKind::Custom { label, matrix } => GateKind::Custom {
                label: label.clone(),
                matrix: matrix.adjoint(),
            },
            hermitian => hermitian.clone(),
        }
    }
}

/// A unitary applied to an ordered list of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    targets: Vec<usize>,
    matrix: Matrix,
}

impl GateOp {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self, SimError> {
        let k = targets.len();
        if !(1..=3).contains(&k) || kind.arity() != k {
            return Err(SimError::Arity {
                label: kind.label().to_string(),
                expected: kind.arity(),
                got: k,
            });
        }
        for (i, a) in targets.iter().enumerate() {
            if targets[i + 1..].contains(a) {
                return Err(SimError::DuplicateTarget(*a));
            }
        }
        let matrix = kind.matrix();
        let defect = matrix.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(SimError::NotUnitary {
                label: kind.label().to_string(),
                defect,
            });
        }
        Ok(Self {
            kind,
            targets,
            matrix,
        })
    }

    /// Wraps an arbitrary unitary under a free-form label.
    pub fn custom(label: &str, matrix: Matrix, targets: Vec<usize>) -> Result<Self, SimError> {
        Self::new(
            GateKind::Custom {
                label: label.to_string(),
                matrix,
            },
            targets,
        )
    }

    fn fixed(kind: GateKind, targets: Vec<usize>) -> Self {
        Self::new(kind, targets).expect("built-in gate with distinct targets")
    }

    pub fn i(q: usize) -> Self {
        Self::fixed(GateKind::I, vec![q])
    }
    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::H, vec![q])
    }
    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, vec![q])
    }
    pub fn y(q: usize) -> Self {
        Self::fixed(GateKind::Y, vec![q])
    }
    pub fn z(q: usize) -> Self {
        Self::fixed(GateKind::Z, vec![q])
    }
    pub fn s(q: usize) -> Self {
        Self::fixed(GateKind::S, vec![q])
    }
    pub fn sdg(q: usize) -> Self {
        Self::fixed(GateKind::Sdg, vec![q])
    }
    pub fn rx(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Rx(theta), vec![q])
    }
    pub fn ry(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Ry(theta), vec![q])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Rz(theta), vec![q])
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::fixed(GateKind::U3 { theta, phi, lambda }, vec![q])
    }

    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::fixed(GateKind::Cnot, vec![control, target])
    }

    /// Panics if `a == b`.
    pub fn cz(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::Cz, vec![a, b])
    }

    /// Panics if `a == b`.
    pub fn epr_reflect(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::EprReflect, vec![a, b])
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        self.kind.label()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_entangling(&self) -> bool {
        self.targets.len() > 1
    }

    pub fn conj(&self) -> Self {
        Self::fixed(self.kind.conj(), self.targets.clone())
    }

    pub fn dagger(&self) -> Self {
        Self::fixed(self.kind.dagger(), self.targets.clone())
    }

    /// Same gate moved to other qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Result<Self, SimError> {
        Self::new(self.kind.clone(), self.targets.iter().map(|&q| map(q)).collect())
    }

    pub(crate) fn check_register(&self, n_qubits: usize) -> Result<(), SimError> {
        match self.targets.iter().find(|&&q| q >= n_qubits) {
            Some(&q) => Err(SimError::QubitOutOfRange { qubit: q, n_qubits }),
            None => Ok(()),
        }
    }
}
