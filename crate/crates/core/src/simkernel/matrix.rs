//! Small dense complex matrices used for gates, Kraus operators and
//! whole-register unitaries.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows do not form a square.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), dim, "matrix rows must have length {dim}");
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    /// Builds a matrix from a flat row-major buffer.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "buffer does not hold a {dim}x{dim} matrix");
        Self { dim, data }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits this matrix acts on, if the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`; `other` occupies the low index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut m = Self::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m[(i * other.dim + k, j * other.dim + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|` elementwise.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Distance to `other` after removing the best global phase, measured
    /// elementwise. Returns the distance and the phase `e^{iγ}` with
    /// `self ≈ e^{iγ} other`.
    pub fn distance_up_to_phase(&self, other: &Self) -> (f64, C64) {
        assert_eq!(self.dim, other.dim);
        let overlap: C64 = other
            .data
            .iter()
            .zip(&self.data)
            .map(|(o, s)| o.conj() * s)
            .sum();
        let phase = if overlap.norm() > 1e-300 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.max_abs_diff(&other.scale(phase)), phase)
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Applies a `2^k x 2^k` matrix to the qubits `targets` of a `2^n` amplitude
/// buffer in place. Bit `j` of the matrix's local index addresses
/// `targets[j]`; qubit `q` is bit `q` of the global index.
pub(crate) fn apply_local(amps: &mut [C64], n: usize, m: &Matrix, targets: &[usize]) {
    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(m.dim(), local);
    debug_assert_eq!(amps.len(), 1usize << n);

    let offsets: Vec<usize> = (0..local)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(bit, _)| j >> bit & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect();
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();

    let mut gathered = vec![ZERO; local];
    let mut result = vec![ZERO; local];
    for free in 0..(1usize << (n - k)) {
        // deposit the free bits around the target positions
        let mut base = free;
        for &q in &sorted {
            let low = base & ((1 << q) - 1);
            base = ((base >> q) << (q + 1)) | low;
        }
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (r, out) in result.iter_mut().enumerate() {
            let row = &m.as_slice()[r * local..(r + 1) * local];
            *out = row.iter().zip(&gathered).map(|(a, b)| a * b).sum();
        }
        for (&v, &off) in result.iter().zip(&offsets) {
            amps[base | off] = v;
        }
    }
}
