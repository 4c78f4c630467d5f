//! Matroid polytopes, lattices of flats, nested set complexes and Bergman
//! complexes.

pub mod bergman;
pub mod boolean;
pub mod lattice;
pub mod linalg;
pub mod matroid;
pub mod subset;
pub mod weights;

pub use matroid::{ComponentPartition, Matroid, MatroidError, Minor};
pub use subset::SubsetMask;
pub use weights::WeightVector;
