//! Discrete Morse machinery: partial acyclic matchings, their conversion to
//! explicit elementary collapse sequences, the pivot matchings induced by
//! closure and interior operators, the bounded-below matching on J(L), formal
//! deformations through stellar and barycentric subdivisions, and the full
//! pipeline relating `Bd Hom(K₂,G)` to `N(G)`.

pub mod deformation;
pub mod matching;
pub mod operators;
pub mod pipeline;
pub mod subdivide;

pub use deformation::{DeformationCertificate, DeformationStep, StepKind, VerifyError};
pub use matching::{AcyclicityReport, MatchingError, PartialMatching};
