//! Numerical realization of Pauli sums: dense matrices, state vectors,
//! expectation values and the inverse Pauli decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::sum::PauliSum;
use super::word::PauliWord;
use crate::error::{Error, Result};

/// Default ceiling on the register size for dense operations.
pub const DEFAULT_DENSE_LIMIT: usize = 12;

pub type CMatrix = DMatrix<Complex64>;

#[inline]
fn parity_sign(mask: u64) -> f64 {
    if mask.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn check_dense(what: &'static str, n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::Capacity {
            what,
            requested: n_qubits,
            limit,
        });
    }
    Ok(())
}

/// Amplitudes over the computational basis; qubit 0 is the least
/// significant bit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_qubits {
            return Err(Error::Contract(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::default(); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Haar-like random normalized state (Gaussian amplitudes).
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amplitudes = (0..1usize << n_qubits)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        let mut s = StateVector {
            n_qubits,
            amplitudes,
        };
        s.normalize();
        s
    }

    pub fn from_column(n_qubits: usize, column: &[Complex64]) -> Result<Self> {
        StateVector::new(n_qubits, column.to_vec())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        for a in &mut self.amplitudes {
            *a /= n;
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &StateVector, beta: Complex64) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

impl PauliWord {
    /// Dense matrix of the bare word `X^x Z^z`.
    pub fn to_matrix(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits();
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            let row = j ^ self.x_mask() as usize;
            m[(row, j)] = Complex64::new(parity_sign(self.z_mask() & j as u64), 0.0);
        }
        m
    }
}

impl PauliSum {
    /// Dense `2^n x 2^n` matrix, refusing registers above `limit` qubits.
    pub fn to_matrix_with_limit(&self, limit: usize) -> Result<CMatrix> {
        check_dense("to_matrix", self.n_qubits(), limit)?;
        let dim = 1usize << self.n_qubits();
        let mut m = CMatrix::zeros(dim, dim);
        for (w, c) in self.iter() {
            let x = w.x_mask() as usize;
            let z = w.z_mask();
            for j in 0..dim {
                m[(j ^ x, j)] += c * parity_sign(z & j as u64);
            }
        }
        Ok(m)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        self.to_matrix_with_limit(DEFAULT_DENSE_LIMIT)
    }

    /// `A |psi>` evaluated word by word.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits != self.n_qubits() {
            return Err(Error::Dimension {
                left: self.n_qubits(),
                right: psi.n_qubits,
            });
        }
        let mut out = vec![Complex64::default(); psi.amplitudes.len()];
        for (w, c) in self.iter() {
            let x = w.x_mask() as usize;
            let z = w.z_mask();
            for (j, a) in psi.amplitudes.iter().enumerate() {
                out[j ^ x] += c * parity_sign(z & j as u64) * a;
            }
        }
        StateVector::new(psi.n_qubits, out)
    }

    /// `<psi|A|psi> = sum_I C_I <psi|P_I|psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        if psi.n_qubits != self.n_qubits() {
            return Err(Error::Dimension {
                left: self.n_qubits(),
                right: psi.n_qubits,
            });
        }
        let amps = &psi.amplitudes;
        let mut total = Complex64::default();
        for (w, c) in self.iter() {
            let x = w.x_mask() as usize;
            let z = w.z_mask();
            let word_value: Complex64 = amps
                .iter()
                .enumerate()
                .map(|(j, a)| amps[j ^ x].conj() * a * parity_sign(z & j as u64))
                .sum();
            total += c * word_value;
        }
        Ok(total)
    }

    /// `<A^2> - <A>^2` for Hermitian `A`.
    pub fn variance(&self, psi: &StateVector) -> Result<f64> {
        if !self.is_hermitian(1e-10) {
            return Err(Error::Contract(format!(
                "variance of a non-Hermitian operator (imaginary defect {:.3e})",
                self.hermiticity_defect()
            )));
        }
        let mean = self.expectation(psi)?.re;
        let a_psi = self.apply(psi)?;
        Ok(a_psi.norm_sqr() - mean * mean)
    }

    /// Decomposes a dense matrix into Pauli words via
    /// `C_I = Tr(P_I^dagger M) / 2^n`, pruning at `threshold`.
    ///
    /// For fixed `x` the traces over all `z` form a Walsh-Hadamard transform
    /// of the diagonal `j -> M[j ^ x, j]`, which keeps this at `O(n 4^n)`.
    pub fn from_matrix(matrix: &CMatrix, threshold: f64, limit: usize) -> Result<PauliSum> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Contract(format!(
                "matrix {}x{} is not a square power-of-two register operator",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_dense("from_matrix", n, limit)?;
        let scale = 1.0 / dim as f64;
        let mut terms = Vec::new();
        let mut buf = vec![Complex64::default(); dim];
        for x in 0..dim {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = matrix[(j ^ x, j)];
            }
            walsh_hadamard(&mut buf);
            for (z, v) in buf.iter().enumerate() {
                let c = v * scale;
                if c.norm() >= threshold && c.norm() > 0.0 {
                    terms.push((PauliWord::new_unchecked(n, x as u64, z as u64), c));
                }
            }
        }
        Ok(PauliSum::from_terms(n, terms).simplify(threshold))
    }
}

/// In-place unnormalized transform `out[z] = sum_j (-1)^{popcount(z & j)} in[j]`.
fn walsh_hadamard(v: &mut [Complex64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}
