use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrals::IntegralSet;
use super::operator::{FermionOperator, Ladder};
use crate::error::{Error, Result};

/// Placement of spin-orbitals `(p, alpha)` / `(p, beta)` on mode indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinOrbitalConvention {
    /// alpha on `2p`, beta on `2p + 1`.
    #[default]
    Interleaved,
    /// alpha on `p`, beta on `p + n_orbitals`.
    Blocked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Alpha,
    Beta,
}

impl SpinOrbitalConvention {
    pub fn mode(&self, n_orbitals: usize, orbital: usize, spin: Spin) -> usize {
        match (self, spin) {
            (SpinOrbitalConvention::Interleaved, Spin::Alpha) => 2 * orbital,
            (SpinOrbitalConvention::Interleaved, Spin::Beta) => 2 * orbital + 1,
            (SpinOrbitalConvention::Blocked, Spin::Alpha) => orbital,
            (SpinOrbitalConvention::Blocked, Spin::Beta) => orbital + n_orbitals,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SpinOrbitalConvention::Interleaved => "interleaved",
            SpinOrbitalConvention::Blocked => "blocked",
        }
    }
}

impl fmt::Display for SpinOrbitalConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpinOrbitalConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "interleaved" => Ok(SpinOrbitalConvention::Interleaved),
            "blocked" => Ok(SpinOrbitalConvention::Blocked),
            other => Err(Error::Usage(format!("unknown spin-orbital ordering {other:?}"))),
        }
    }
}

const SPINS: [Spin; 2] = [Spin::Alpha, Spin::Beta];

/// Electronic Hamiltonian
/// `sum h_pq a+_p a_q + 1/2 sum g_pqrs a+_p a+_q a_s a_r` over spin-orbitals,
/// with physicist `g_pqrs = (pr|qs)` taken from the chemist-notation
/// integrals and spin conserved at each vertex. The frozen-core energy is
/// always included; `v_nn` only on request.
pub fn build_hamiltonian(
    ints: &IntegralSet,
    conv: SpinOrbitalConvention,
    include_vnn: bool,
) -> FermionOperator {
    let n = ints.n_orbitals;
    let n_so = 2 * n;
    let mode = |p: usize, s: Spin| conv.mode(n, p, s);
    let mut strings: Vec<(Vec<Ladder>, Complex64)> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let h = ints.h(p, q);
            if h == 0.0 {
                continue;
            }
            for s in SPINS {
                strings.push((
                    vec![Ladder::create(mode(p, s)), Ladder::annihilate(mode(q, s))],
                    Complex64::new(h, 0.0),
                ));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let g = ints.g(p, r, q, s);
                    if g == 0.0 {
                        continue;
                    }
                    for sp in SPINS {
                        for sq in SPINS {
                            let (mp, mq) = (mode(p, sp), mode(q, sq));
                            if mp == mq {
                                continue;
                            }
                            strings.push((
                                vec![
                                    Ladder::create(mp),
                                    Ladder::create(mq),
                                    Ladder::annihilate(mode(s, sq)),
                                    Ladder::annihilate(mode(r, sp)),
                                ],
                                Complex64::new(0.5 * g, 0.0),
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut constant = ints.e_frozen_core;
    if include_vnn {
        constant += ints.v_nn;
    }
    if constant != 0.0 {
        strings.push((Vec::new(), Complex64::new(constant, 0.0)));
    }
    FermionOperator::from_strings(n_so, strings).expect("modes derived from n_orbitals")
}

/// `N = sum_i a+_i a_i`.
pub fn build_number_operator(n_so: usize) -> Result<FermionOperator> {
    if n_so == 0 {
        return Err(Error::Contract("number operator needs at least one mode".into()));
    }
    let mut out = FermionOperator::zero(n_so);
    for i in 0..n_so {
        out = out.add(&FermionOperator::hopping(n_so, i, i, 1.0)?)?;
    }
    Ok(out)
}

/// `S^2 = S_z^2 + (S+ S- + S- S+)/2` over spatial-orbital spin pairs.
pub fn build_s2_operator(n_so: usize, conv: SpinOrbitalConvention) -> Result<FermionOperator> {
    if n_so == 0 || n_so % 2 != 0 {
        return Err(Error::Contract(format!(
            "S^2 needs an even, nonzero number of spin-orbitals (got {n_so})"
        )));
    }
    let n = n_so / 2;
    let mut sz = FermionOperator::zero(n_so);
    let mut s_plus = FermionOperator::zero(n_so);
    for p in 0..n {
        let a = conv.mode(n, p, Spin::Alpha);
        let b = conv.mode(n, p, Spin::Beta);
        sz = sz
            .add(&FermionOperator::hopping(n_so, a, a, 0.5)?)?
            .add(&FermionOperator::hopping(n_so, b, b, -0.5)?)?;
        s_plus = s_plus.add(&FermionOperator::hopping(n_so, a, b, 1.0)?)?;
    }
    let s_minus = s_plus.adjoint();
    let flips = s_plus
        .multiply(&s_minus)?
        .add(&s_minus.multiply(&s_plus)?)?
        .scale_real(0.5);
    sz.multiply(&sz)?.add(&flips)
}
