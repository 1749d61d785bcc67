use std::fmt;
use std::str::FromStr;

use super::{Circuit, CircuitError};
use crate::simkernel::{GateKind, GateOp, Matrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => Matrix::identity(2),
            Pauli::X => GateKind::X.matrix(),
            Pauli::Y => GateKind::Y.matrix(),
            Pauli::Z => GateKind::Z.matrix(),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis times a phase `i^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    /// Power of `i`, taken mod 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n_qubits],
            phase: 0,
        }
    }

    pub fn from_letters(letters: Vec<Pauli>) -> Self {
        Self { letters, phase: 0 }
    }

    /// `p` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.letters[qubit] = p;
        s
    }

    pub fn with_phase(mut self, power_of_i: u8) -> Self {
        self.phase = power_of_i % 4;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Power of `i` in `{0, 1, 2, 3}`.
    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn phase(&self) -> C64 {
        match self.phase {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Every string over `n` qubits with phase +1, identity included.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..4usize.pow(n_qubits as u32)).map(move |mut code| {
            let letters = (0..n_qubits)
                .map(|_| {
                    let p = Pauli::ALL[code % 4];
                    code /= 4;
                    p
                })
                .collect();
            PauliString::from_letters(letters)
        })
    }

    /// Dense matrix; letter `q` acts on bit `q` of the index.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::identity(1);
        for p in &self.letters {
            m = p.matrix().kron(&m);
        }
        m.scale(self.phase())
    }

    /// Recovers `m` as a single phased Pauli string, if it is one.
    pub fn from_matrix(m: &Matrix, tol: f64) -> Option<Self> {
        let n = m.n_qubits()?;
        let dim = m.dim() as f64;
        let mut found: Option<PauliString> = None;
        for candidate in PauliString::all(n) {
            // coefficient Tr[P† M] / d
            let c = (&candidate.to_matrix().adjoint() * m).trace() / dim;
            if c.norm() <= tol {
                continue;
            }
            if found.is_some() {
                return None;
            }
            let power = [
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, -1.0),
            ]
            .iter()
            .position(|ph| (c - ph).norm() <= tol)?;
            found = Some(candidate.with_phase(power as u8));
        }
        found
    }

    fn restricted(&self, targets: &[usize]) -> PauliString {
        PauliString::from_letters(targets.iter().map(|&q| self.letters[q]).collect())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}")?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = CircuitError;

    /// Parses letters with character `q` describing qubit `q`, e.g. `"XIZ"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(CircuitError::BadPauli(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err(CircuitError::BadPauli(s.to_string()));
        }
        Ok(PauliString::from_letters(letters))
    }
}

const CLIFFORD_TOL: f64 = 1e-9;

/// `G† P G` for a Pauli `P` local to the gate, if it is again a Pauli.
fn conjugate_local(gate: &GateOp, local: &PauliString) -> Option<PauliString> {
    let m = gate.matrix();
    let conj = &(&m.adjoint() * &local.to_matrix()) * m;
    PauliString::from_matrix(&conj, CLIFFORD_TOL)
}

fn is_clifford(gate: &GateOp) -> bool {
    let k = gate.targets().len();
    (0..k).all(|j| {
        [Pauli::X, Pauli::Z]
            .iter()
            .all(|&p| conjugate_local(gate, &PauliString::single(k, j, p)).is_some())
    })
}

/// Heisenberg-picture propagation `U† p U` of a Pauli string through a
/// Clifford circuit, phase included.
pub fn pauli_propagate(c: &Circuit, p: &PauliString) -> Result<PauliString, CircuitError> {
    if p.n_qubits() != c.n_qubits() {
        return Err(CircuitError::PauliSize {
            expected: c.n_qubits(),
            got: p.n_qubits(),
        });
    }
    if let Some((index, g)) = c.gates().iter().enumerate().find(|(_, g)| !is_clifford(g)) {
        return Err(CircuitError::NotClifford {
            index,
            label: g.label().to_string(),
        });
    }
    // U = G_m ... G_1, so U† P U peels the last gate first
    let mut out = p.clone();
    for (index, g) in c.gates().iter().enumerate().rev() {
        let local = out.restricted(g.targets());
        let image = conjugate_local(g, &local).ok_or_else(|| CircuitError::NotClifford {
            index,
            label: g.label().to_string(),
        })?;
        for (&q, &letter) in g.targets().iter().zip(image.letters()) {
            out.letters[q] = letter;
        }
        out.phase = (out.phase + image.phase) % 4;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_gate(n: usize, g: GateOp) -> Circuit {
        Circuit::from_gates(n, vec![g]).unwrap()
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let c = one_gate(1, GateOp::h(0));
        let out = pauli_propagate(&c, &"X".parse().unwrap()).unwrap();
        assert_eq!(out, "Z".parse().unwrap());
    }

    #[test]
    fn cnot_spreads_x() {
        let c = one_gate(2, GateOp::cnot(0, 1));
        let out = pauli_propagate(&c, &"XI".parse().unwrap()).unwrap();
        assert_eq!(out, "XX".parse().unwrap());
        let out = pauli_propagate(&c, &"IZ".parse().unwrap()).unwrap();
        assert_eq!(out, "ZZ".parse().unwrap());
    }

    #[test]
    fn phase_is_tracked() {
        // S† X S = -Y ... check against dense
        let c = one_gate(1, GateOp::s(0));
        let out = pauli_propagate(&c, &"X".parse().unwrap()).unwrap();
        let u = c.total_unitary().unwrap();
        let dense = &(&u.adjoint() * &Pauli::X.matrix()) * &u;
        assert!(out.to_matrix().max_abs_diff(&dense) < 1e-14);
        assert_eq!(out.weight(), 1);
    }

    #[test]
    fn rejects_non_clifford() {
        let c = one_gate(1, GateOp::rz(0.3, 0));
        assert!(matches!(
            pauli_propagate(&c, &"Z".parse().unwrap()),
            Err(CircuitError::NotClifford { index: 0, .. })
        ));
        let size = one_gate(2, GateOp::h(0));
        assert!(matches!(
            pauli_propagate(&size, &"Z".parse().unwrap()),
            Err(CircuitError::PauliSize { .. })
        ));
    }

    #[test]
    fn decomposition_round_trip() {
        for p in PauliString::all(2) {
            let p = p.with_phase(3);
            assert_eq!(PauliString::from_matrix(&p.to_matrix(), 1e-12), Some(p));
        }
        let h = GateKind::H.matrix();
        assert_eq!(PauliString::from_matrix(&h, 1e-12), None);
    }

    #[test]
    fn parse_and_display() {
        let p: PauliString = "xiz".parse().unwrap();
        assert_eq!(p.to_string(), "+XIZ");
        assert_eq!(p.weight(), 2);
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
