//! Exact computation of character-degree counts, representation zeta series and
//! coadjoint-orbit data for uniform pro-p groups presented by a `Z_p`-Lie
//! lattice with integer structure constants.
//!
//! Characters of the group are read off from coadjoint orbits of functionals on
//! the Lie lattice. Everything is exact: big integers, rationals and cyclotomic
//! integers, with no floating point.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod coadjoint;
pub mod error;
pub mod integrate;
pub mod liealg;
pub mod matnf;
pub mod oracle;
pub mod zeta;

pub use error::{Error, Result};

/// Work limits shared by the enumerating routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest orbit materialized by breadth-first search.
    pub orbit_cap: u64,
    /// Largest number of residue-tree nodes visited per level.
    pub node_cap: u64,
    /// Largest set enumerated element by element (groups, lattice cells).
    pub enumeration_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            orbit_cap: 1_000_000,
            node_cap: 50_000_000,
            enumeration_cap: 10_000_000,
        }
    }
}
