//! Combinatorial topology of finite binary relations.
//!
//! Given a relation `R ⊆ X × Y`, this crate builds the left and right Dowker
//! complexes `C_X` and `C_Y`, the biclique complex `B` on `X ∪ Y`, and the
//! rectangle complex `E` on the pairs of `R`. For bipartite relations it
//! constructs an explicit acyclic matching on `B \ C_X` (and `B \ C_Y`) and
//! extracts a machine-checkable sequence of elementary simplicial collapses
//! witnessing that `B` collapses to each Dowker complex. An independent
//! integral-homology oracle (Smith normal form over arbitrary-precision
//! integers) cross-validates every construction.
//!
//! The crate is `no_std` (it requires `alloc`); all values are immutable
//! after construction and freely shareable across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complex;
pub mod dowker;
pub mod error;
pub mod homology;
pub mod morse;
pub mod relation;

pub use complex::{is_cover, Face, SimplicialComplex, SimplicialMap, Universe};
pub use dowker::{biclique_complex, dowker_left, dowker_right, rectangle_complex, Side};
pub use error::Error;
pub use homology::{homology, profiles_equal, HomologyProfile};
pub use morse::{
    collapse_sequence, dowker_matching, find_cycle, verify_certificate, CollapseCertificate,
    Matching, Zigzag,
};
pub use relation::{containment_relation, Relation, RelationMorphism};
