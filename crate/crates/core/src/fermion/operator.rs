use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are treated as cancelled.
pub const FERMION_EPS: f64 = 1e-14;

/// A single creation (`dagger = true`) or annihilation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder {
            mode,
            dagger: false,
        }
    }

    /// Whether `self` belongs strictly left of `other` in normal order.
    fn precedes(&self, other: &Ladder) -> bool {
        match (self.dagger, other.dagger) {
            (true, false) => true,
            (false, true) => false,
            _ => self.mode > other.mode,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "{}^", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

/// Weighted sum of ladder-operator strings on `n_modes` spin-orbitals.
///
/// Strings are kept in normal order: creators left of annihilators, modes
/// descending inside each block. The empty string is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Vec<Ladder>, Complex64>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::scalar(n_modes, 1.0)
    }

    pub fn scalar(n_modes: usize, value: f64) -> Self {
        let mut op = Self::zero(n_modes);
        op.add_raw(Vec::new(), Complex64::new(value, 0.0));
        op
    }

    /// A single string with coefficient, normal ordered.
    pub fn term(n_modes: usize, ops: &[Ladder], coeff: Complex64) -> Result<Self> {
        let mut op = Self::zero(n_modes);
        op.push_term(ops, coeff)?;
        Ok(op)
    }

    /// `a^dagger_p a_q`.
    pub fn hopping(n_modes: usize, p: usize, q: usize, coeff: f64) -> Result<Self> {
        Self::term(
            n_modes,
            &[Ladder::create(p), Ladder::annihilate(q)],
            Complex64::new(coeff, 0.0),
        )
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Ladder], &Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, ops: &[Ladder]) -> Complex64 {
        self.terms.get(ops).copied().unwrap_or_default()
    }

    /// Adds `coeff * ops` (any order) after normal ordering it.
    pub fn push_term(&mut self, ops: &[Ladder], coeff: Complex64) -> Result<()> {
        if let Some(bad) = ops.iter().find(|o| o.mode >= self.n_modes) {
            return Err(Error::Contract(format!(
                "mode {} out of range for {} spin-orbitals",
                bad.mode, self.n_modes
            )));
        }
        for (s, c) in normal_order_string(ops.to_vec(), coeff) {
            self.add_raw(s, c);
        }
        self.prune();
        Ok(())
    }

    fn add_raw(&mut self, ops: Vec<Ladder>, coeff: Complex64) {
        *self.terms.entry(ops).or_default() += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > FERMION_EPS);
    }

    fn check_same_size(&self, other: &FermionOperator) -> Result<()> {
        if self.n_modes != other.n_modes {
            return Err(Error::Dimension {
                left: self.n_modes,
                right: other.n_modes,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_same_size(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_raw(s.clone(), *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> FermionOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    pub fn scale_real(&self, factor: f64) -> FermionOperator {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn multiply(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check_same_size(other)?;
        let mut out = FermionOperator::zero(self.n_modes);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let mut joined = sa.clone();
                joined.extend_from_slice(sb);
                for (s, c) in normal_order_string(joined, ca * cb) {
                    out.add_raw(s, c);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for (s, c) in &self.terms {
            let reversed: Vec<Ladder> = s
                .iter()
                .rev()
                .map(|o| Ladder {
                    mode: o.mode,
                    dagger: !o.dagger,
                })
                .collect();
            for (t, d) in normal_order_string(reversed, c.conj()) {
                out.add_raw(t, d);
            }
        }
        out.prune();
        out
    }

    /// Largest coefficient difference to `other`.
    pub fn max_difference(&self, other: &FermionOperator) -> f64 {
        let mut worst: f64 = 0.0;
        for (s, c) in &self.terms {
            worst = worst.max((c - other.coefficient(s)).norm());
        }
        for (s, c) in &other.terms {
            if !self.terms.contains_key(s) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_difference(&self.adjoint()) <= tol
    }

    /// Re-canonicalizes every string (a no-op on values built through this
    /// type, kept as an explicit entry point).
    pub fn normal_order(&self) -> FermionOperator {
        let mut out = FermionOperator::zero(self.n_modes);
        for (s, c) in &self.terms {
            for (t, d) in normal_order_string(s.clone(), *c) {
                out.add_raw(t, d);
            }
        }
        out.prune();
        out
    }

    /// Builds an operator from raw, possibly unordered strings.
    pub fn from_strings<I>(n_modes: usize, strings: I) -> Result<FermionOperator>
    where
        I: IntoIterator<Item = (Vec<Ladder>, Complex64)>,
    {
        let mut out = FermionOperator::zero(n_modes);
        for (s, c) in strings {
            out.push_term(&s, c)?;
        }
        Ok(out)
    }
}

/// Normal orders one string using `{a_p, a^dagger_q} = delta_pq` and
/// `{a_p, a_q} = 0`, returning the resulting canonical strings.
pub fn normal_order_string(ops: Vec<Ladder>, coeff: Complex64) -> Vec<(Vec<Ladder>, Complex64)> {
    let mut done = Vec::new();
    let mut work = vec![(ops, coeff)];
    while let Some((mut s, mut c)) = work.pop() {
        let mut canonical = true;
        'scan: loop {
            // One bubble pass; restart after each swap that spawns a branch.
            let mut swapped = false;
            for i in 0..s.len().saturating_sub(1) {
                let (left, right) = (s[i], s[i + 1]);
                if left == right {
                    canonical = false;
                    break 'scan;
                }
                if right.precedes(&left) {
                    if left.mode == right.mode && !left.dagger && right.dagger {
                        // a_p a^dagger_p = 1 - a^dagger_p a_p
                        let mut contracted = s.clone();
                        contracted.drain(i..i + 2);
                        work.push((contracted, c));
                    }
                    s.swap(i, i + 1);
                    c = -c;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        if canonical {
            done.push((s, c));
        }
    }
    done
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "({:+.10} {:+.10}i) [", c.re, c.im)?;
            for (k, o) in s.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{o}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}
