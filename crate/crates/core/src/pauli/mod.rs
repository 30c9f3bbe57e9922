//! Pauli words, weighted Pauli sums and their dense realization.

mod dense;
mod serial;
mod sum;
mod word;

pub use dense::{CMatrix, StateVector, DEFAULT_DENSE_LIMIT};
pub(crate) use dense::check_dense;
pub use serial::{fmt_f64, json_string};
pub use sum::{PauliSum, DEFAULT_THRESHOLD};
pub use word::{PauliWord, Phase, MAX_QUBITS};
