//! Exact diagonalization, symmetry labels and spectrum comparison.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{check_dense, CMatrix, PauliSum, StateVector};
use crate::symmetry::{AdaptedOperator, Method, SymmetryKind, SymmetrySpec};

/// Levels closer than this (hartree) form one degeneracy group.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Allowed distance of a symmetry label from its quantized value.
pub const LABEL_TOL: f64 = 1e-6;
/// Window for matching levels across spectra.
pub const MATCH_TOL: f64 = 1e-6;
/// Tolerance on `||A V - V diag(E)||_F`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Commutator residual accepted as "commuting".
pub const COMMUTATOR_TOL: f64 = 1e-8;

const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigensystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> StateVector {
        let n = self.vectors.nrows().trailing_zeros() as usize;
        StateVector::from_column(n, self.vectors.column(k).as_slice()).expect("power of two rows")
    }

    /// Consecutive index ranges whose neighbouring eigenvalues differ by
    /// less than `tol`.
    pub fn groups(&self, tol: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] >= tol {
                out.push(start..k);
                start = k;
            }
        }
        out
    }
}

fn sorted_eigen(matrix: CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

fn check_hermitian(a: &PauliSum) -> Result<()> {
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "operator is not Hermitian (imaginary X/Y/Z coefficient {defect:.3e})"
        )));
    }
    Ok(())
}

/// Full spectrum of a Hermitian Pauli sum.
pub fn diagonalize(a: &PauliSum, dense_limit: usize) -> Result<Eigensystem> {
    check_hermitian(a)?;
    check_dense("diagonalize", a.n_qubits(), dense_limit)?;
    let m = a.to_matrix_with_limit(dense_limit)?;
    let (values, vectors) = sorted_eigen(m.clone());
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|v| Complex64::new(*v, 0.0)),
    ));
    let residual = (&m * &vectors - &vectors * lambda).norm();
    if residual > RESIDUAL_TOL {
        return Err(Error::Contract(format!(
            "eigen-decomposition residual {residual:.3e} above {RESIDUAL_TOL:e}"
        )));
    }
    Ok(Eigensystem { values, vectors })
}

/// Eigenvalues only (ascending).
pub fn eigenvalues(a: &PauliSum, dense_limit: usize) -> Result<Vec<f64>> {
    Ok(diagonalize(a, dense_limit)?.values)
}

/// Rotates eigenvectors inside every degenerate group so that they also
/// diagonalize each operator in `ops`, in the given order. Groups are split by
/// the eigenvalues of one operator before the next is applied.
pub fn resolve_degeneracies(
    eig: &mut Eigensystem,
    ops: &[&PauliSum],
    dense_limit: usize,
) -> Result<()> {
    let mut groups: Vec<Vec<usize>> = eig
        .groups(DEGENERACY_TOL)
        .into_iter()
        .map(|r| r.collect())
        .collect();
    for op in ops {
        let m = op.to_matrix_with_limit(dense_limit)?;
        let mut refined = Vec::new();
        for g in groups {
            if g.len() == 1 {
                refined.push(g);
                continue;
            }
            let basis = DMatrix::from_fn(eig.vectors.nrows(), g.len(), |r, c| {
                eig.vectors[(r, g[c])]
            });
            let sub = basis.adjoint() * &m * &basis;
            let sub = (&sub + sub.adjoint()) * Complex64::new(0.5, 0.0);
            let (sub_values, rotation) = sorted_eigen(sub);
            let rotated = &basis * rotation;
            for (c, &col) in g.iter().enumerate() {
                eig.vectors.set_column(col, &rotated.column(c));
            }
            let mut start = 0;
            for k in 1..=g.len() {
                if k == g.len() || sub_values[k] - sub_values[k - 1] >= LABEL_TOL {
                    refined.push(g[start..k].to_vec());
                    start = k;
                }
            }
        }
        groups = refined;
    }
    Ok(())
}

/// One level with raw symmetry expectations.
#[derive(Clone, Debug, Serialize)]
pub struct Level {
    pub energy: f64,
    /// `<N>`.
    pub n: f64,
    /// `<S^2>`.
    pub s2: f64,
    /// `S` solved from `S(S+1) = <S^2>`.
    pub s: f64,
    pub group: usize,
}

impl Level {
    pub fn n_label(&self) -> i64 {
        self.n.round() as i64
    }

    /// Nearest half-integer spin.
    pub fn s_label(&self) -> f64 {
        (2.0 * self.s).round() / 2.0
    }

    /// Quantized value of the given symmetry: `N` or `S(S+1)`.
    pub fn symmetry_value(&self, kind: SymmetryKind) -> f64 {
        match kind {
            SymmetryKind::Number => self.n_label() as f64,
            SymmetryKind::Spin => {
                let s = self.s_label();
                s * (s + 1.0)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct LabeledSpectrum {
    pub levels: Vec<Level>,
    pub eigensystem: Eigensystem,
}

impl LabeledSpectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Number of levels per electron count `0..=max`.
    pub fn counts_by_n(&self) -> Vec<usize> {
        let max = self.levels.iter().map(|l| l.n_label()).max().unwrap_or(0).max(0) as usize;
        let mut out = vec![0; max + 1];
        for l in &self.levels {
            out[l.n_label() as usize] += 1;
        }
        out
    }

    /// Number of levels per spin `S = 0, 1/2, 1, ...`.
    pub fn counts_by_s(&self) -> Vec<usize> {
        let idx = |l: &Level| (2.0 * l.s_label()).round() as usize;
        let max = self.levels.iter().map(idx).max().unwrap_or(0);
        let mut out = vec![0; max + 1];
        for l in &self.levels {
            out[idx(l)] += 1;
        }
        out
    }
}

fn spin_from_s2(s2: f64) -> f64 {
    (-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt()) / 2.0
}

/// Diagonalizes `h` and attaches `(N, S)` labels to every level.
pub fn label_spectrum(
    h: &PauliSum,
    n_op: &PauliSum,
    s2_op: &PauliSum,
    dense_limit: usize,
) -> Result<LabeledSpectrum> {
    for (name, a, b) in [("[H, N]", h, n_op), ("[H, S^2]", h, s2_op), ("[N, S^2]", n_op, s2_op)] {
        let r = a.commutator(b)?.norm();
        if r > COMMUTATOR_TOL {
            return Err(Error::Contract(format!("{name} residual {r:.3e} exceeds {COMMUTATOR_TOL:e}")));
        }
    }
    let mut eig = diagonalize(h, dense_limit)?;
    resolve_degeneracies(&mut eig, &[n_op, s2_op], dense_limit)?;
    let groups = eig.groups(DEGENERACY_TOL);
    let mut levels = Vec::with_capacity(eig.len());
    for (gid, range) in groups.iter().enumerate() {
        for k in range.clone() {
            let v = eig.vector(k);
            let n = n_op.expectation(&v)?.re;
            let s2 = s2_op.expectation(&v)?.re;
            let s = spin_from_s2(s2);
            let level = Level {
                energy: eig.values[k],
                n,
                s2,
                s,
                group: gid,
            };
            if (n - n.round()).abs() > LABEL_TOL || (s - level.s_label()).abs() > LABEL_TOL {
                return Err(Error::Labeling(format!(
                    "level {k} (E = {:.10}) has <N> = {n:.9}, S = {s:.9}",
                    level.energy
                )));
            }
            levels.push(level);
        }
    }
    Ok(LabeledSpectrum {
        levels,
        eigensystem: eig,
    })
}

/// Where a transformation sends the non-target levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    /// Nothing changes; every level is expected back.
    Identity,
    /// Non-target levels go to 0.
    Projection,
    /// `E + (mu/2) (a_k - a_i)^2`.
    Shift { mu: f64 },
    /// `E [1 - 2 (a_k - a_i)^2]`.
    Reflection,
}

impl Transform {
    pub fn of(op: &AdaptedOperator) -> Transform {
        match op.method {
            Method::LowdinPhp | Method::LowdinHp | Method::SumOverStates => Transform::Projection,
            Method::Shift => Transform::Shift {
                mu: op.provenance.mu.expect("shift operators record mu"),
            },
            Method::Reflection | Method::ReflectionSinglet => Transform::Reflection,
        }
    }

    pub fn predict(&self, energy: f64, delta: f64) -> f64 {
        match self {
            Transform::Identity => energy,
            Transform::Projection => 0.0,
            Transform::Shift { mu } => energy + 0.5 * mu * delta * delta,
            Transform::Reflection => energy * (1.0 - 2.0 * delta * delta),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelMatch {
    pub original: usize,
    pub transformed: Option<usize>,
    /// Target-sector level found unchanged in the transformed spectrum.
    pub matched: bool,
    /// Value the level was expected at.
    pub predicted: f64,
    /// `|transformed - predicted|`, if paired.
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumMatchReport {
    pub entries: Vec<LevelMatch>,
    pub matched: usize,
    pub unmatched: usize,
    /// Largest deviation over target-sector matches.
    pub max_match_deviation: f64,
    /// Largest deviation between non-target predictions and observed levels.
    pub max_prediction_deviation: f64,
}

impl SpectrumMatchReport {
    /// Transformed level indices that were matched to target-sector levels.
    pub fn matched_transformed(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.matched)
            .filter_map(|e| e.transformed)
            .collect()
    }
}

fn nearest_unused(values: &[f64], used: &[bool], x: f64) -> Option<(usize, f64)> {
    // values are ascending; scan outward from the insertion point
    let pos = values.partition_point(|v| *v < x);
    let mut best: Option<(usize, f64)> = None;
    let mut consider = |i: usize| {
        if !used[i] {
            let d = (values[i] - x).abs();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
    };
    let mut lo = pos;
    while lo > 0 {
        lo -= 1;
        if !used[lo] {
            consider(lo);
            break;
        }
    }
    for i in pos..values.len() {
        if !used[i] {
            consider(i);
            break;
        }
    }
    best
}

/// Matches target-sector levels of `original` against `transformed` and
/// checks that the remaining levels sit where `transform` predicts.
pub fn compare_spectra(
    original: &LabeledSpectrum,
    transformed: &[f64],
    spec: &SymmetrySpec,
    transform: Transform,
) -> Result<SpectrumMatchReport> {
    if transformed.len() != original.len() {
        return Err(Error::Dimension {
            left: original.len(),
            right: transformed.len(),
        });
    }
    let mut values = transformed.to_vec();
    values.sort_by(f64::total_cmp);
    let mut used = vec![false; values.len()];
    let is_target = |l: &Level| {
        transform == Transform::Identity
            || (l.symmetry_value(spec.kind) - spec.target).abs() < LABEL_TOL
    };
    let mut entries: Vec<LevelMatch> = Vec::with_capacity(original.len());
    let mut offenders = Vec::new();
    let mut max_match: f64 = 0.0;
    for (k, l) in original.levels.iter().enumerate() {
        if !is_target(l) {
            continue;
        }
        match nearest_unused(&values, &used, l.energy).filter(|(_, d)| *d <= MATCH_TOL) {
            Some((i, d)) => {
                used[i] = true;
                max_match = max_match.max(d);
                entries.push(LevelMatch {
                    original: k,
                    transformed: Some(i),
                    matched: true,
                    predicted: l.energy,
                    deviation: Some(d),
                });
            }
            None => offenders.push(k),
        }
    }
    if !offenders.is_empty() {
        return Err(Error::Mismatch(format!(
            "target-sector levels without a counterpart within {MATCH_TOL:e}: {offenders:?}"
        )));
    }
    let mut max_pred: f64 = 0.0;
    for (k, l) in original.levels.iter().enumerate() {
        if is_target(l) {
            continue;
        }
        let delta = l.symmetry_value(spec.kind) - spec.target;
        let predicted = transform.predict(l.energy, delta);
        let hit = nearest_unused(&values, &used, predicted);
        if let Some((i, d)) = hit {
            used[i] = true;
            max_pred = max_pred.max(d);
        } else {
            max_pred = f64::INFINITY;
        }
        entries.push(LevelMatch {
            original: k,
            transformed: hit.map(|h| h.0),
            matched: false,
            predicted,
            deviation: hit.map(|h| h.1),
        });
    }
    entries.sort_by_key(|e| e.original);
    let matched = entries.iter().filter(|e| e.matched).count();
    Ok(SpectrumMatchReport {
        unmatched: entries.len() - matched,
        matched,
        entries,
        max_match_deviation: max_match,
        max_prediction_deviation: max_pred,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;

    #[test]
    fn z_spectrum() {
        let z = PauliSum::from_terms(1, [(PauliWord::z(1, 0), Complex64::new(1.0, 0.0))]);
        let eig = diagonalize(&z, 12).unwrap();
        assert_eq!(eig.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let xz = PauliSum::from_terms(1, [(PauliWord::new(1, 1, 1).unwrap(), Complex64::new(1.0, 0.0))]);
        assert!(matches!(diagonalize(&xz, 12), Err(Error::Contract(_))));
    }

    #[test]
    fn capacity_enforced() {
        assert!(matches!(diagonalize(&PauliSum::identity(3), 2), Err(Error::Capacity { .. })));
    }

    #[test]
    fn groups_split_on_gaps() {
        let eig = Eigensystem {
            values: vec![0.0, 1e-12, 1.0, 2.0, 2.0],
            vectors: CMatrix::zeros(1, 1),
        };
        assert_eq!(eig.groups(DEGENERACY_TOL), vec![0..2, 2..3, 3..5]);
    }

    #[test]
    fn spin_inversion() {
        assert!((spin_from_s2(0.75) - 0.5).abs() < 1e-15);
        assert!((spin_from_s2(2.0) - 1.0).abs() < 1e-15);
        assert!((spin_from_s2(3.75) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn nearest_unused_skips_used() {
        let v = [0.0, 1.0, 2.0];
        assert_eq!(nearest_unused(&v, &[false, true, false], 1.1).map(|x| x.0), Some(2));
        assert_eq!(nearest_unused(&v, &[false, true, true], 1.9).map(|x| x.0), Some(0));
        assert_eq!(nearest_unused(&v, &[true, true, true], 1.0), None);
    }

    #[test]
    fn predictions() {
        assert_eq!(Transform::Projection.predict(-3.0, 1.0), 0.0);
        assert_eq!(Transform::Shift { mu: 16.0 }.predict(-6.0, 4.0), 122.0);
        assert_eq!(Transform::Reflection.predict(-2.0, 2.0), 14.0);
        assert_eq!(Transform::Identity.predict(-2.0, 2.0), -2.0);
    }
}
