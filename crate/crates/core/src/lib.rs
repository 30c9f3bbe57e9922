//! Symmetry-adapted qubit Hamiltonians.
//!
//! Molecular integrals are turned into second-quantized operators, mapped
//! onto qubits (Jordan–Wigner, parity, Bravyi–Kitaev) and then adapted to a
//! symmetry (electron number or total spin) by Löwdin projection, a
//! quadratic penalty shift or a spectral reflection. Small registers can be
//! diagonalized exactly to inspect how each construction rearranges the
//! spectrum.

pub mod config;
pub mod error;
pub mod fermion;
pub mod fixtures;
pub mod mapping;
pub mod pauli;
pub mod pipeline;
pub mod spectral;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
