//! Combinatorial complexes and machine-checkable formal deformations.
//!
//! This crate builds the classical combinatorially defined complexes —
//! neighborhood complexes, Lovász complexes, `Hom(K₂,G)`, crosscut complexes
//! of lattices, complexes of bounded-below sets, partition lattices — and
//! produces explicit sequences of elementary collapses and expansions
//! relating them. Every deformation is emitted as a replayable certificate
//! and checked step by step; integral homology via Smith normal form serves
//! as an independent cross-check on every certificate's endpoints.

pub mod complex;
pub mod cw;
pub mod graphs;
pub mod homology;
pub mod label;
pub mod lattice;
pub mod lattice_complexes;
pub mod monotone;
pub mod morse;
pub mod poset;
pub mod sampling;

pub use complex::{ComplexError, Simplex, SimplicialComplex};
pub use cw::RegularCwPoset;
pub use label::Label;
pub use lattice::{BoundedLattice, LatticeError};
pub use monotone::{MapKind, MonotoneMap};
pub use poset::{Poset, PosetError};
