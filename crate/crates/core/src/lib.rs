//! Finite partite hypergraphs, stability witnesses, decent sets and
//! stable-regularity partitions.
//!
//! Every quantity that is compared against a threshold (densities, measures,
//! exceptional-set masses) is computed exactly: part weights are stored as
//! integers over a common denominator and compared through exact 256-bit
//! products, and every reported value is a [`Rational`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON and the
//! command line live in the `stablereg` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod bitset;
pub mod boxes;
pub mod decency;
pub mod error;
pub mod families;
pub mod fibers;
pub mod hypergraph;
pub mod measure;
pub mod rational;
pub mod regularity;
pub mod relation;
pub mod view;
pub mod witness;

pub use bitset::BitSet;
pub use boxes::{density, BoxDensity, VertexBox};
pub use error::{Error, Result};
pub use fibers::FiberCombination;
pub use hypergraph::{Family, PartiteHypergraph};
pub use measure::{PartWeights, SideWeights, WeightedMeasure};
pub use rational::Rational;
pub use relation::Relation;
pub use view::BinaryView;
