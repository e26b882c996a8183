//! Exact combinatorics, quiver representations and quantum cluster data for
//! partial flag varieties of type A.
//!
//! Everything is computed over exact rationals or integer Laurent polynomials;
//! there is no floating point anywhere in the crate.

pub mod collections;
pub mod dmod;
pub mod error;
pub mod lattices;
pub mod laurent;
pub mod linalg;
pub mod par;
pub mod qcluster;
pub mod qmatrix;
pub mod seeds;
pub mod subsets;
pub mod weyl;

pub use error::{Error, Result};
pub use subsets::KSet;
