//! Bundled active-space integrals.

use crate::error::Result;
use crate::fermion::{load_fcidump, IntegralSet};

/// LiH, STO-3G, R = 3.20 Å, active 2a1 3a1 4a1 with 2 electrons.
pub const LIH_STO3G: &str = include_str!("../fixtures/lih_sto3g.fcidump");
/// H2O, 6-31G, R = 2.05 Å, 107.6°, active 1b1 3a1 4a1 2b1 with 4 electrons.
pub const H2O_631G: &str = include_str!("../fixtures/h2o_631g.fcidump");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: &'static str,
    pub text: &'static str,
}

pub const LIH: Fixture = Fixture {
    id: "lih_sto3g",
    text: LIH_STO3G,
};

pub const H2O: Fixture = Fixture {
    id: "h2o_631g",
    text: H2O_631G,
};

pub const ALL: [Fixture; 2] = [LIH, H2O];

impl Fixture {
    pub fn by_id(id: &str) -> Option<Fixture> {
        ALL.into_iter().find(|f| f.id == id)
    }

    pub fn integrals(&self) -> Result<IntegralSet> {
        load_fcidump(self.text)
    }
}
