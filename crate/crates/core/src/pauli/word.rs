use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register a [`PauliWord`] can address.
pub const MAX_QUBITS: usize = 64;

/// Scalar picked up when two words are multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    MinusOne,
    PlusI,
    MinusI,
}

impl Phase {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// Power of `i` (mod 4) represented by this phase.
    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn from_exponent(k: u8) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + rhs.exponent())
    }
}

/// A tensor product of single-qubit factors stored as `X^x Z^z`.
///
/// Bit `i` of `x_mask` (`z_mask`) puts an `X` (`Z`) factor on qubit `i`; the
/// word denotes `prod_i X_i^{x_i} * prod_i Z_i^{z_i}`. A qubit with both bits
/// set therefore carries `XZ = -iY`; the `i` is accounted for by whoever owns
/// the coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_qubits: u32,
    x_mask: u64,
    z_mask: u64,
}

fn mask_for(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliWord {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Contract(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let allowed = mask_for(n_qubits);
        if (x_mask | z_mask) & !allowed != 0 {
            return Err(Error::Contract(format!(
                "masks x={x_mask:#x} z={z_mask:#x} exceed {n_qubits} qubits"
            )));
        }
        Ok(PauliWord {
            n_qubits: n_qubits as u32,
            x_mask,
            z_mask,
        })
    }

    pub(crate) fn new_unchecked(n_qubits: usize, x_mask: u64, z_mask: u64) -> Self {
        debug_assert!((x_mask | z_mask) & !mask_for(n_qubits) == 0);
        PauliWord {
            n_qubits: n_qubits as u32,
            x_mask,
            z_mask,
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliWord::new_unchecked(n_qubits, 0, 0)
    }

    pub fn x(n_qubits: usize, qubit: usize) -> Self {
        PauliWord::new_unchecked(n_qubits, 1 << qubit, 0)
    }

    pub fn z(n_qubits: usize, qubit: usize) -> Self {
        PauliWord::new_unchecked(n_qubits, 0, 1 << qubit)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Number of qubits carrying a `Y` (both bits set).
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// `self * other = phase * product`.
    pub fn multiply(&self, other: &PauliWord) -> Result<(PauliWord, Phase)> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        Ok(self.multiply_unchecked(other))
    }

    #[inline]
    pub(crate) fn multiply_unchecked(&self, other: &PauliWord) -> (PauliWord, Phase) {
        // Moving Z^{z_a} past X^{x_b} costs one sign per shared qubit.
        let phase = if (self.z_mask & other.x_mask).count_ones() % 2 == 0 {
            Phase::PlusOne
        } else {
            Phase::MinusOne
        };
        (
            PauliWord {
                n_qubits: self.n_qubits,
                x_mask: self.x_mask ^ other.x_mask,
                z_mask: self.z_mask ^ other.z_mask,
            },
            phase,
        )
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones())
            % 2
            == 0
    }

    /// Sign `s` with `word^dagger = s * word` (`Z^z X^x = (-1)^{|x&z|} X^x Z^z`).
    pub fn adjoint_sign(&self) -> f64 {
        if self.y_count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Factor converting a coefficient in the stored `X^x Z^z` convention
    /// into the coefficient of the corresponding X/Y/Z word: `(-i)^{#Y}`.
    pub fn to_xyz_factor(&self) -> Complex64 {
        Phase::from_exponent((3 * (self.y_count() % 4)) as u8).to_complex()
    }

    /// Inverse of [`to_xyz_factor`](Self::to_xyz_factor): `i^{#Y}`.
    pub fn from_xyz_factor(&self) -> Complex64 {
        Phase::from_exponent((self.y_count() % 4) as u8).to_complex()
    }

    /// Single-qubit label (`I`, `X`, `Y`, `Z`) on `qubit`.
    pub fn label(&self, qubit: usize) -> char {
        let bit = 1u64 << qubit;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// Parse `"X0 Y3 Z5"` (or `"I"`) into a word on `n_qubits` qubits.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        let trimmed = text.trim();
        if trimmed != "I" && !trimmed.is_empty() {
            for token in trimmed.split_whitespace() {
                let mut chars = token.chars();
                let op = chars
                    .next()
                    .ok_or_else(|| Error::Contract(format!("empty Pauli factor in {text:?}")))?;
                let qubit: usize = chars.as_str().parse().map_err(|_| {
                    Error::Contract(format!("bad qubit index in Pauli factor {token:?}"))
                })?;
                if qubit >= n_qubits {
                    return Err(Error::Contract(format!(
                        "qubit {qubit} out of range for {n_qubits} qubits"
                    )));
                }
                let bit = 1u64 << qubit;
                if (x | z) & bit != 0 {
                    return Err(Error::Contract(format!("qubit {qubit} repeated in {text:?}")));
                }
                match op {
                    'X' => x |= bit,
                    'Y' => {
                        x |= bit;
                        z |= bit;
                    }
                    'Z' => z |= bit,
                    _ => {
                        return Err(Error::Contract(format!("unknown Pauli factor {token:?}")));
                    }
                }
            }
        }
        PauliWord::new(n_qubits, x, z)
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n_qubits, self.z_mask, self.x_mask).cmp(&(other.n_qubits, other.z_mask, other.x_mask))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for q in 0..self.n_qubits() {
            let c = self.label(q);
            if c == 'I' {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{c}{q}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Parses with the register size set to one past the highest qubit used.
    fn from_str(s: &str) -> Result<Self> {
        let highest = s
            .split_whitespace()
            .filter(|t| *t != "I")
            .filter_map(|t| t.get(1..).and_then(|d| d.parse::<usize>().ok()))
            .max()
            .unwrap_or(0);
        PauliWord::parse(s, highest + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_squared_is_identity() {
        let x = PauliWord::x(1, 0);
        let (w, phase) = x.multiply(&x).unwrap();
        assert!(w.is_identity());
        assert_eq!(phase, Phase::PlusOne);
    }

    #[test]
    fn z_times_x_is_minus_xz() {
        let (w, phase) = PauliWord::z(1, 0).multiply(&PauliWord::x(1, 0)).unwrap();
        assert_eq!((w.x_mask(), w.z_mask()), (1, 1));
        assert_eq!(phase, Phase::MinusOne);
        // -XZ = -(-iY) = iY
        let as_y = phase.to_complex() * w.to_xyz_factor();
        assert_eq!(as_y, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let err = PauliWord::x(2, 0).multiply(&PauliWord::x(3, 0)).unwrap_err();
        assert!(matches!(err, Error::Dimension { left: 2, right: 3 }));
    }

    #[test]
    fn masks_must_fit() {
        assert!(PauliWord::new(2, 0b100, 0).is_err());
        assert!(PauliWord::new(0, 0, 0).is_err());
    }

    #[test]
    fn display_and_parse() {
        let w = PauliWord::parse("X0 Y3 Z5", 6).unwrap();
        assert_eq!(w.x_mask(), 0b1001);
        assert_eq!(w.z_mask(), 0b101000);
        assert_eq!(w.to_string(), "X0 Y3 Z5");
        assert_eq!(PauliWord::parse("I", 4).unwrap(), PauliWord::identity(4));
        assert!(PauliWord::parse("X0 X0", 2).is_err());
        assert!(PauliWord::parse("Q1", 2).is_err());
        assert!(PauliWord::parse("X7", 2).is_err());
        assert_eq!("Z2".parse::<PauliWord>().unwrap().n_qubits(), 3);
    }

    #[test]
    fn ordering_is_z_then_x() {
        let a = PauliWord::new(2, 0b11, 0).unwrap();
        let b = PauliWord::new(2, 0, 0b01).unwrap();
        assert!(a < b);
    }

    #[test]
    fn two_qubit_group_is_associative() {
        let words: Vec<_> = (0..4u64)
            .flat_map(|x| (0..4u64).map(move |z| PauliWord::new(2, x, z).unwrap()))
            .collect();
        for a in &words {
            for b in &words {
                for c in &words {
                    let (ab, p1) = a.multiply(b).unwrap();
                    let (ab_c, p2) = ab.multiply(c).unwrap();
                    let (bc, q1) = b.multiply(c).unwrap();
                    let (a_bc, q2) = a.multiply(&bc).unwrap();
                    assert_eq!(ab_c, a_bc);
                    assert_eq!(p1 * p2, q1 * q2);
                }
            }
        }
    }
}
