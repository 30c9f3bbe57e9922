//! Second-quantized operators and the molecular operators built from
//! integrals.

mod hamiltonian;
mod integrals;
mod operator;

pub use hamiltonian::{
    build_hamiltonian, build_number_operator, build_s2_operator, Spin, SpinOrbitalConvention,
};
pub use integrals::{load_fcidump, IntegralSet};
pub use operator::{normal_order_string, FermionOperator, Ladder, FERMION_EPS};
