//! Burnt pancake graphs `BP_n`, their position quotient, and exact and
//! numerical checks of their spectra.

pub mod covering;
pub mod error;
pub mod exact;
pub mod graphs;
pub mod group;
pub mod quotient;
pub mod report;
pub mod spectra;

pub use error::{Error, Result, ReversalMode};
pub use graphs::{CayleyGraph, Family, SparseAdjacency};
pub use group::{ReversalIndex, SignedPermutation};
