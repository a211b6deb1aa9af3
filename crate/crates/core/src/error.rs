//! Error type shared across the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by constructors and preconditions.
///
/// Faces inside errors are rendered as `{a,b,c}` with the labels of the
/// universe they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A universe (or the pair set of a rectangle complex) exceeds the
    /// 64-vertex bit-set cap.
    UniverseTooLarge { size: usize },
    /// Two vertices of one universe carry the same label.
    DuplicateLabel { label: String },
    /// A label does not belong to the universe it was used with.
    UnknownLabel { label: String },
    /// A user label collides with the reserved `F:` prefix used for the
    /// fresh face labels of a containment relation.
    ReservedLabelPrefix { label: String },
    /// A face refers to vertex indices outside its universe.
    FaceOutsideUniverse { face: String },
    /// A face set is missing a subset of one of its members.
    NotDownwardClosed { face: String },
    /// A nonempty face set does not contain the empty face.
    MissingEmptyFace,
    /// A vertex map sends some face of the source outside the target.
    ImageCondition { face: String },
    /// A vertex map is not total on the minimal ground set of its source.
    NotTotalOnGroundSet { label: String },
    /// Composition was attempted between maps whose middle objects differ.
    CompositionMismatch,
    /// A relation morphism fails to preserve some pair.
    PairNotPreserved { x: String, y: String },
    /// The relation is not bipartite; `label` occurs on both sides.
    NotBipartite { label: String },
    /// A claimed isomorphism is not one; `face` is an offending face.
    NotIsomorphism { face: String },
    /// The void complex was passed where a nonempty complex is required.
    VoidComplex,
    /// Condition C1 of the pairing construction fails at `face`.
    PairingC1 { face: String },
    /// A matching table violates the matching axioms.
    InvalidMatching { reason: String },
    /// A cyclic matching was passed where an acyclic one is required; the
    /// faces of one cycle are carried along.
    CyclicMatching { cycle: Vec<String> },
    /// A matching does not cover exactly the face difference Δ \ Γ;
    /// `face` is one discrepancy.
    MatchingScopeMismatch { face: String, missing_from: &'static str },
    /// The claimed subcomplex contains `face`, which the ambient complex
    /// does not.
    NotSubcomplex { face: String },
    /// An order override is not a permutation of the expected labels.
    NotPermutation { label: String },
    /// A boundary matrix exceeds the dense-matrix cap of the homology
    /// oracle.
    MatrixTooLarge { columns: usize, cap: usize },
    /// Face enumeration exceeded an explicit budget.
    TooManyFaces { cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UniverseTooLarge { size } => {
                write!(f, "universe has {size} vertices, exceeding the cap of 64")
            }
            Error::DuplicateLabel { label } => write!(f, "duplicate label {label:?} in universe"),
            Error::UnknownLabel { label } => write!(f, "unknown vertex label {label:?}"),
            Error::ReservedLabelPrefix { label } => {
                write!(f, "label {label:?} collides with the reserved face-label prefix \"F:\"")
            }
            Error::FaceOutsideUniverse { face } => {
                write!(f, "face {face} lies outside the universe")
            }
            Error::NotDownwardClosed { face } => {
                write!(f, "face set is not downward closed: a subset of {face} is missing")
            }
            Error::MissingEmptyFace => {
                write!(f, "nonempty face set does not contain the empty face")
            }
            Error::ImageCondition { face } => {
                write!(f, "vertex map sends face {face} outside the target complex")
            }
            Error::NotTotalOnGroundSet { label } => {
                write!(f, "vertex map is undefined on ground-set vertex {label:?}")
            }
            Error::CompositionMismatch => {
                write!(f, "composition mismatch: target of the first map differs from the source of the second")
            }
            Error::PairNotPreserved { x, y } => {
                write!(f, "morphism does not preserve the pair ({x:?}, {y:?})")
            }
            Error::NotBipartite { label } => {
                write!(
                    f,
                    "relation is not bipartite: label {label:?} occurs in both ground sets; disjointify it first"
                )
            }
            Error::NotIsomorphism { face } => {
                write!(f, "vertex map is not an isomorphism: offending face {face}")
            }
            Error::VoidComplex => write!(f, "the void complex is not accepted here"),
            Error::PairingC1 { face } => {
                write!(f, "pairing condition C1 fails at face {face}")
            }
            Error::InvalidMatching { reason } => write!(f, "invalid matching: {reason}"),
            Error::CyclicMatching { cycle } => {
                write!(f, "matching is cyclic: (")?;
                for (i, face) in cycle.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{face}")?;
                }
                write!(f, ")")
            }
            Error::MatchingScopeMismatch { face, missing_from } => {
                write!(f, "matching does not equal the face difference: {face} missing from {missing_from}")
            }
            Error::NotSubcomplex { face } => {
                write!(f, "not a subcomplex: face {face} is absent from the ambient complex")
            }
            Error::NotPermutation { label } => {
                write!(f, "order override is not a permutation: problem at {label:?}")
            }
            Error::MatrixTooLarge { columns, cap } => {
                write!(f, "boundary matrix has {columns} columns, exceeding the cap of {cap}")
            }
            Error::TooManyFaces { cap } => {
                write!(f, "face enumeration exceeded the budget of {cap} faces")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
