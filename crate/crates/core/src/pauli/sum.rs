use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;

use super::word::{PauliWord, MAX_QUBITS};
use crate::error::{Error, Result};

/// Default coefficient pruning threshold (hartree).
pub const DEFAULT_THRESHOLD: f64 = 1e-10;

/// Weighted sum of Pauli words with complex coefficients.
///
/// Coefficients are stored against the `X^x Z^z` form of each word (see
/// [`PauliWord`]). Terms are kept in canonical `(z_mask, x_mask)` order and
/// every constructor leaves the sum simplified against its `threshold`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    threshold: f64,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self::zero_with_threshold(n_qubits, DEFAULT_THRESHOLD)
    }

    pub fn zero_with_threshold(n_qubits: usize, threshold: f64) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        );
        assert!(threshold >= 0.0, "negative pruning threshold");
        PauliSum {
            n_qubits,
            threshold,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::scalar(n_qubits, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(n_qubits: usize, value: Complex64) -> Self {
        Self::from_terms(n_qubits, [(PauliWord::identity(n_qubits), value)])
    }

    /// Builds a sum from `X^x Z^z`-convention coefficients, merging duplicates.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        let mut out = Self::zero(n_qubits);
        for (word, c) in terms {
            assert_eq!(word.n_qubits(), n_qubits, "word size differs from sum size");
            *out.terms.entry(word).or_default() += c;
        }
        out.prune();
        out
    }

    /// Builds a sum from coefficients of X/Y/Z words (the usual basis).
    pub fn from_xyz_terms<I>(n_qubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        Self::from_terms(
            n_qubits,
            terms
                .into_iter()
                .map(|(w, c)| (w, c * w.from_xyz_factor())),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        assert!(threshold >= 0.0, "negative pruning threshold");
        self.threshold = threshold;
        self.prune();
        self
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order, coefficients in the stored convention.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    /// Terms in canonical order with X/Y/Z-basis coefficients.
    pub fn iter_xyz(&self) -> impl Iterator<Item = (PauliWord, Complex64)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, c * w.to_xyz_factor()))
    }

    pub fn coefficient(&self, word: &PauliWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn xyz_coefficient(&self, word: &PauliWord) -> Complex64 {
        self.coefficient(word) * word.to_xyz_factor()
    }

    fn check_same_size(&self, other: &PauliSum) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    fn prune(&mut self) {
        let threshold = self.threshold;
        self.terms.retain(|_, c| c.norm() >= threshold && c.norm() > 0.0);
    }

    /// Merges duplicates (already merged by construction) and drops
    /// coefficients with magnitude below `threshold`.
    pub fn simplify(&self, threshold: f64) -> PauliSum {
        assert!(threshold >= 0.0, "negative pruning threshold");
        let mut out = self.clone();
        out.threshold = threshold;
        out.prune();
        out
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_size(other)?;
        let mut out = self.clone();
        out.threshold = self.threshold.max(other.threshold);
        for (w, c) in &other.terms {
            *out.terms.entry(*w).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    pub fn scale_real(&self, factor: f64) -> PauliSum {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self + value * I`.
    pub fn add_scalar(&self, value: f64) -> PauliSum {
        let mut out = self.clone();
        *out.terms
            .entry(PauliWord::identity(self.n_qubits))
            .or_default() += Complex64::new(value, 0.0);
        out.prune();
        out
    }

    /// Operator product `self * other`, distributed over all term pairs.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_size(other)?;
        let mut acc: HashMap<PauliWord, Complex64> =
            HashMap::with_capacity(self.terms.len().max(other.terms.len()) * 4);
        // Iterating both operands in canonical order fixes the per-word
        // accumulation order, so the result is bitwise reproducible.
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (w, phase) = wa.multiply_unchecked(wb);
                *acc.entry(w).or_default() += phase.to_complex() * ca * cb;
            }
        }
        let mut out = PauliSum {
            n_qubits: self.n_qubits,
            threshold: self.threshold.max(other.threshold),
            terms: acc.into_iter().collect(),
        };
        out.prune();
        Ok(out)
    }

    /// `self^power` by repeated multiplication (`self^0 = I`).
    pub fn pow(&self, power: u32) -> PauliSum {
        let mut out = PauliSum::identity(self.n_qubits).simplify(self.threshold);
        for _ in 0..power {
            out = out.multiply(self).expect("same size");
        }
        out
    }

    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for (w, c) in out.terms.iter_mut() {
            *c = c.conj() * w.adjoint_sign();
        }
        out
    }

    /// Normalized Hilbert-Schmidt norm `sqrt(sum |c|^2)`, i.e.
    /// `||M||_F / sqrt(2^n)` of the matrix image.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest imaginary part among the X/Y/Z-basis coefficients.
    pub fn hermiticity_defect(&self) -> f64 {
        self.iter_xyz()
            .map(|(_, c)| c.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Distance between two sums, `(self - other).norm()` without pruning.
    pub fn distance(&self, other: &PauliSum) -> Result<f64> {
        self.check_same_size(other)?;
        let mut total = 0.0;
        for (w, c) in &self.terms {
            total += (c - other.coefficient(w)).norm_sqr();
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                total += c.norm_sqr();
            }
        }
        Ok(total.sqrt())
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.iter_xyz().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "({:+.10} {:+.10}i) {}", c.re, c.im, w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_is_neutral() {
        let b = PauliSum::from_terms(
            2,
            [(PauliWord::x(2, 0), c(0.5)), (PauliWord::z(2, 1), c(-2.0))],
        );
        let id = PauliSum::identity(2);
        assert_eq!(id.multiply(&b).unwrap(), b);
        assert_eq!(b.multiply(&id).unwrap(), b);
    }

    #[test]
    fn occupation_projector_is_idempotent() {
        let p = PauliSum::from_terms(
            1,
            [(PauliWord::identity(1), c(0.5)), (PauliWord::z(1, 0), c(-0.5))],
        );
        assert_eq!(p.multiply(&p).unwrap(), p);
    }

    #[test]
    fn a_minus_a_is_empty() {
        let a = PauliSum::from_terms(1, [(PauliWord::x(1, 0), c(0.3))]);
        let zero = a.add(&a.scale(c(-1.0))).unwrap();
        assert_eq!(zero.term_count(), 0);
        assert_eq!(a.scale(c(1.0)), a);
    }

    #[test]
    fn simplify_prunes_and_merges() {
        let tiny = PauliSum::from_terms(1, [(PauliWord::x(1, 0), c(1e-14))]);
        assert!(tiny.simplify(1e-10).is_empty());
        let merged = PauliSum::from_terms(
            1,
            [(PauliWord::x(1, 0), c(1.0)), (PauliWord::x(1, 0), c(2.0))],
        );
        assert_eq!(merged.term_count(), 1);
        assert_eq!(merged.coefficient(&PauliWord::x(1, 0)), c(3.0));
    }

    #[test]
    fn empty_sum_has_no_terms() {
        assert_eq!(PauliSum::zero(3).term_count(), 0);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = PauliSum::identity(2);
        let b = PauliSum::identity(3);
        assert!(matches!(a.multiply(&b), Err(Error::Dimension { .. })));
        assert!(matches!(a.add(&b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn y_is_hermitian_xz_is_not() {
        let y = PauliSum::from_xyz_terms(1, [(PauliWord::parse("Y0", 1).unwrap(), c(1.0))]);
        assert!(y.is_hermitian(1e-12));
        assert_eq!(y.adjoint(), y);
        let xz = PauliSum::from_terms(1, [(PauliWord::parse("Y0", 1).unwrap(), c(1.0))]);
        assert!(!xz.is_hermitian(1e-12));
    }

    #[test]
    fn pauli_y_squares_to_identity() {
        let y = PauliSum::from_xyz_terms(1, [(PauliWord::parse("Y0", 1).unwrap(), c(1.0))]);
        assert_eq!(y.multiply(&y).unwrap(), PauliSum::identity(1));
    }
}
