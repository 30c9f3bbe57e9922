//! Fermion-to-qubit transformations.
//!
//! All three mappings are linear binary encodings `b = B n (mod 2)` of the
//! occupation vector `n` into qubit values `b`, with `B` lower triangular.
//! From `B` and its inverse we read, for every mode `p`:
//!
//! * the update set `U(p)`: qubits other than `p` whose value flips with `n_p`;
//! * the parity set `P(p)`: qubits whose joint parity is `n_0 + ... + n_{p-1}`;
//! * the flip set `F(p)`: qubits other than `p` that, with qubit `p`, give `n_p`;
//! * the remainder set `R(p) = P(p) xor F(p)`.
//!
//! The Majorana images are then `c_p = X_U X_p Z_P` and `d_p = X_U Y_p Z_R`,
//! and `a+_p = (c_p - i d_p) / 2`, `a_p = (c_p + i d_p) / 2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::FermionOperator;
use crate::pauli::{PauliSum, PauliWord, DEFAULT_THRESHOLD, MAX_QUBITS};
use crate::spectral;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MappingKind {
    #[serde(rename = "jw")]
    JordanWigner,
    #[serde(rename = "parity")]
    Parity,
    #[serde(rename = "bk")]
    BravyiKitaev,
}

impl MappingKind {
    pub const ALL: [MappingKind; 3] = [
        MappingKind::JordanWigner,
        MappingKind::Parity,
        MappingKind::BravyiKitaev,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MappingKind::JordanWigner => "jw",
            MappingKind::Parity => "parity",
            MappingKind::BravyiKitaev => "bk",
        }
    }

    /// Row `q` of the encoding matrix as a bit mask over modes.
    fn encoding_rows(&self, n: usize) -> Vec<u64> {
        (0..n)
            .map(|q| match self {
                MappingKind::JordanWigner => 1u64 << q,
                MappingKind::Parity => {
                    if q == 63 {
                        u64::MAX
                    } else {
                        (1u64 << (q + 1)) - 1
                    }
                }
                // Fenwick tree: qubit q holds the parity of modes (q & (q+1))..=q.
                MappingKind::BravyiKitaev => {
                    let lo = q & (q + 1);
                    (lo..=q).fold(0u64, |m, i| m | (1 << i))
                }
            })
            .collect()
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MappingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan_wigner" | "jordan-wigner" => Ok(MappingKind::JordanWigner),
            "parity" => Ok(MappingKind::Parity),
            "bk" | "bravyi_kitaev" | "bravyi-kitaev" => Ok(MappingKind::BravyiKitaev),
            other => Err(Error::Usage(format!("unsupported mapping {other:?}"))),
        }
    }
}

/// Inverse of a lower-triangular GF(2) matrix given as row masks.
fn invert_lower(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    let mut inv = vec![0u64; n];
    for i in 0..n {
        debug_assert!(rows[i] >> i & 1 == 1, "encoding needs a unit diagonal");
        debug_assert!(rows[i] >> (i + 1) == 0, "encoding must be lower triangular");
        // row_i = e_i + sum_{j<i} B[i][j] e_j  =>  inv_i = e_i + sum_j B[i][j] inv_j
        let mut r = 1u64 << i;
        for j in 0..i {
            if rows[i] >> j & 1 == 1 {
                r ^= inv[j];
            }
        }
        inv[i] = r;
    }
    inv
}

/// Qubit images of all creation and annihilation operators for one mapping.
#[derive(Clone, Debug)]
pub struct LadderImages {
    kind: MappingKind,
    n_modes: usize,
    creation: Vec<[(PauliWord, Complex64); 2]>,
    annihilation: Vec<[(PauliWord, Complex64); 2]>,
}

impl LadderImages {
    pub fn new(kind: MappingKind, n_modes: usize) -> Result<Self> {
        if n_modes == 0 || n_modes > MAX_QUBITS {
            return Err(Error::Contract(format!(
                "cannot map {n_modes} modes (supported 1..={MAX_QUBITS})"
            )));
        }
        let beta = kind.encoding_rows(n_modes);
        let beta_inv = invert_lower(&beta);
        let half = Complex64::new(0.5, 0.0);
        let mut creation = Vec::with_capacity(n_modes);
        let mut annihilation = Vec::with_capacity(n_modes);
        for p in 0..n_modes {
            let bit = 1u64 << p;
            let update = (0..n_modes)
                .filter(|&q| q != p && beta[q] & bit != 0)
                .fold(0u64, |m, q| m | (1 << q));
            let parity = (0..p).fold(0u64, |m, j| m ^ beta_inv[j]);
            let flip = beta_inv[p] & !bit;
            let remainder = parity ^ flip;
            // c_p = X^{U+p} Z^P ; d_p = X_U Y_p Z_R = i * X^{U+p} Z^{R+p}
            let c = PauliWord::new_unchecked(n_modes, update | bit, parity);
            let d = PauliWord::new_unchecked(n_modes, update | bit, remainder | bit);
            // a+ = c/2 - (i/2)(i d') = c/2 + d'/2 ; a = c/2 - d'/2
            creation.push([(c, half), (d, half)]);
            annihilation.push([(c, half), (d, -half)]);
        }
        Ok(LadderImages {
            kind,
            n_modes,
            creation,
            annihilation,
        })
    }

    pub fn kind(&self) -> MappingKind {
        self.kind
    }

    pub fn creation(&self, mode: usize) -> PauliSum {
        PauliSum::from_terms(self.n_modes, self.creation[mode])
    }

    pub fn annihilation(&self, mode: usize) -> PauliSum {
        PauliSum::from_terms(self.n_modes, self.annihilation[mode])
    }

    /// Maps a normal-ordered operator term by term.
    pub fn map(&self, op: &FermionOperator, threshold: f64) -> Result<PauliSum> {
        if op.n_modes() != self.n_modes {
            return Err(Error::Dimension {
                left: op.n_modes(),
                right: self.n_modes,
            });
        }
        let n = self.n_modes;
        let mut acc: HashMap<PauliWord, Complex64> = HashMap::new();
        let mut product: Vec<(PauliWord, Complex64)> = Vec::new();
        let mut next: Vec<(PauliWord, Complex64)> = Vec::new();
        for (string, coeff) in op.iter() {
            product.clear();
            product.push((PauliWord::identity(n), *coeff));
            for ladder in string {
                let image = if ladder.dagger {
                    &self.creation[ladder.mode]
                } else {
                    &self.annihilation[ladder.mode]
                };
                next.clear();
                for (w, c) in &product {
                    for (iw, ic) in image {
                        let (prod, phase) = w.multiply_unchecked(iw);
                        next.push((prod, c * ic * phase.to_complex()));
                    }
                }
                std::mem::swap(&mut product, &mut next);
            }
            for (w, c) in product.drain(..) {
                *acc.entry(w).or_default() += c;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PauliSum::from_terms(n, terms).simplify(threshold))
    }
}

/// Qubit image of `op` under `kind`, pruned at `threshold`.
pub fn map_operator(op: &FermionOperator, kind: MappingKind, threshold: f64) -> Result<PauliSum> {
    LadderImages::new(kind, op.n_modes())?.map(op, threshold)
}

pub fn map_operator_default(op: &FermionOperator, kind: MappingKind) -> Result<PauliSum> {
    map_operator(op, kind, DEFAULT_THRESHOLD)
}

#[derive(Clone, Debug)]
pub struct IsospectralReport {
    pub kinds: Vec<MappingKind>,
    pub spectra: Vec<Vec<f64>>,
    pub max_deviation: f64,
}

impl IsospectralReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation < tol
    }
}

/// Diagonalizes the image of `op` under every mapping and compares sorted
/// spectra pairwise.
pub fn verify_isospectral(
    op: &FermionOperator,
    kinds: &[MappingKind],
    dense_limit: usize,
) -> Result<IsospectralReport> {
    crate::pauli::check_dense("verify_isospectral", op.n_modes(), dense_limit)?;
    let mut spectra = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let image = map_operator(op, *kind, 0.0)?;
        spectra.push(spectral::eigenvalues(&image, dense_limit)?);
    }
    let mut max_deviation: f64 = 0.0;
    for i in 0..spectra.len() {
        for j in i + 1..spectra.len() {
            for (a, b) in spectra[i].iter().zip(&spectra[j]) {
                max_deviation = max_deviation.max((a - b).abs());
            }
        }
    }
    Ok(IsospectralReport {
        kinds: kinds.to_vec(),
        spectra,
        max_deviation,
    })
}
