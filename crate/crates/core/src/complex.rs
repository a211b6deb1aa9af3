//! Faces, simplicial complexes, and simplicial maps.
//!
//! Vertices live in a [`Universe`]: an ordered list of at most 64 distinct
//! labels. A [`Face`] is a bit set over the positions of those labels, so
//! all face operations are single machine-word operations. Complexes store
//! their faces in a `BTreeSet`, which makes iteration order deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Hard cap on universe size imposed by the 64-bit face encoding.
pub const MAX_VERTICES: usize = 64;

/// An ordered list of distinct vertex labels.
///
/// The position of a label is its vertex index; every [`Face`] is
/// interpreted relative to one universe. Universes are shared behind an
/// [`Arc`] and never mutated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    labels: Vec<String>,
}

impl Universe {
    /// Builds a universe, rejecting duplicates and more than 64 labels.
    pub fn new(labels: Vec<String>) -> Result<Arc<Self>> {
        if labels.len() > MAX_VERTICES {
            return Err(Error::UniverseTooLarge { size: labels.len() });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel { label: label.clone() });
            }
        }
        Ok(Arc::new(Universe { labels }))
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(labels.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: u8) -> &str {
        &self.labels[index as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<u8> {
        self.labels.iter().position(|l| l == label).map(|i| i as u8)
    }

    /// Converts a list of labels into a face, erroring on unknown labels.
    pub fn face_from_labels<'a, I>(&self, labels: I) -> Result<Face>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut face = Face::EMPTY;
        for label in labels {
            match self.index_of(label) {
                Some(i) => face = face.with(i),
                None => return Err(Error::UnknownLabel { label: label.into() }),
            }
        }
        Ok(face)
    }

    /// The labels of a face, in universe order.
    pub fn labels_of(&self, face: Face) -> Vec<String> {
        face.indices().map(|i| self.labels[i as usize].clone()).collect()
    }

    /// Renders a face as `{a,b,c}` for diagnostics.
    pub fn render_face(&self, face: Face) -> String {
        let mut out = String::from("{");
        for (n, i) in face.indices().enumerate() {
            if n > 0 {
                out.push(',');
            }
            out.push_str(&self.labels[i as usize]);
        }
        out.push('}');
        out
    }

    /// The face containing every vertex of the universe.
    pub fn full_face(&self) -> Face {
        Face::all_below(self.labels.len() as u8)
    }

    /// Whether `face` only uses indices that exist in this universe.
    pub fn contains_face(&self, face: Face) -> bool {
        face.is_subset_of(self.full_face())
    }
}

/// A face: a set of vertex indices packed into a `u64`.
///
/// The `Ord` implementation compares the ascending index sequences
/// lexicographically, so `{1} < {1,2} < {1,3} < {2}`; sets of faces iterate
/// the way they read when printed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_indices<I: IntoIterator<Item = u8>>(indices: I) -> Face {
        let mut face = Face::EMPTY;
        for i in indices {
            face = face.with(i);
        }
        face
    }

    pub fn singleton(index: u8) -> Face {
        Face::EMPTY.with(index)
    }

    /// The face `{0, 1, ..., n-1}`.
    pub fn all_below(n: u8) -> Face {
        debug_assert!(n as usize <= MAX_VERTICES);
        if n == 64 {
            Face(u64::MAX)
        } else {
            Face((1u64 << n) - 1)
        }
    }

    pub fn contains(self, index: u8) -> bool {
        debug_assert!((index as usize) < MAX_VERTICES);
        self.0 & (1u64 << index) != 0
    }

    #[must_use]
    pub fn with(self, index: u8) -> Face {
        debug_assert!((index as usize) < MAX_VERTICES);
        Face(self.0 | (1u64 << index))
    }

    #[must_use]
    pub fn without(self, index: u8) -> Face {
        debug_assert!((index as usize) < MAX_VERTICES);
        Face(self.0 & !(1u64 << index))
    }

    #[must_use]
    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Simplicial dimension: `|F| - 1`, so the empty face has dimension -1.
    pub fn dimension(self) -> i32 {
        self.0.count_ones() as i32 - 1
    }

    pub fn min_index(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as u8)
        }
    }

    pub fn max_index(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as u8)
        }
    }

    /// Iterates the vertex indices in ascending order.
    pub fn indices(self) -> Indices {
        Indices(self.0)
    }

    /// Iterates all subsets, the empty face and `self` included.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(self.0) }
    }
}

impl Ord for Face {
    /// Branchless equivalent of `self.indices().cmp(other.indices())`: the
    /// lowest differing bit decides, except that a set which runs out of
    /// elements first (a prefix) is smaller.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return core::cmp::Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !(low - 1) ^ low;
        if self.0 & low != 0 {
            if other.0 & above != 0 {
                core::cmp::Ordering::Less
            } else {
                core::cmp::Ordering::Greater
            }
        } else if self.0 & above != 0 {
            core::cmp::Ordering::Greater
        } else {
            core::cmp::Ordering::Less
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Ascending iterator over the vertex indices of a face.
pub struct Indices(u64);

impl Iterator for Indices {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as u8;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

/// Iterator over every subset of a face (descending bit pattern order).
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        let s = self.next?;
        self.next = if s == 0 { None } else { Some((s - 1) & self.mask) };
        Some(Face(s))
    }
}

/// True iff `a ⊆ b` and `b \ a` has exactly one element.
pub fn is_cover(a: Face, b: Face) -> bool {
    a.is_subset_of(b) && (b.bits() & !a.bits()).count_ones() == 1
}

/// A finite simplicial complex: a downward-closed set of faces over a fixed
/// universe.
///
/// Two distinct degenerate values exist: the *void* complex with no faces at
/// all, and the complex `{∅}` whose only face is the empty face. Every
/// nonempty complex contains the empty face.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    universe: Arc<Universe>,
    faces: BTreeSet<Face>,
}

impl SimplicialComplex {
    /// The complex with no faces at all.
    pub fn void(universe: Arc<Universe>) -> Self {
        SimplicialComplex { universe, faces: BTreeSet::new() }
    }

    /// The complex `{∅}`.
    pub fn empty_face_only(universe: Arc<Universe>) -> Self {
        let mut faces = BTreeSet::new();
        faces.insert(Face::EMPTY);
        SimplicialComplex { universe, faces }
    }

    /// The downward closure of the given facets. With no facets this is the
    /// void complex; otherwise the empty face is always present.
    pub fn closure(universe: Arc<Universe>, facets: &[Face]) -> Self {
        debug_assert!(facets.iter().all(|f| universe.contains_face(*f)));
        let mut faces = BTreeSet::new();
        for facet in facets {
            for subset in facet.subsets() {
                faces.insert(subset);
            }
        }
        SimplicialComplex { universe, faces }
    }

    /// Closure from label lists; unknown labels are construction errors.
    pub fn closure_from_labels(universe: Arc<Universe>, facets: &[Vec<String>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(facets.len());
        for facet in facets {
            masks.push(universe.face_from_labels(facet.iter().map(String::as_str))?);
        }
        Ok(Self::closure(universe, &masks))
    }

    /// Wraps an explicit face set, validating the complex axioms.
    pub fn from_face_set(universe: Arc<Universe>, faces: BTreeSet<Face>) -> Result<Self> {
        if !faces.is_empty() && !faces.contains(&Face::EMPTY) {
            return Err(Error::MissingEmptyFace);
        }
        for &face in &faces {
            if !universe.contains_face(face) {
                return Err(Error::FaceOutsideUniverse { face: universe.render_face(face) });
            }
            for i in face.indices() {
                if !faces.contains(&face.without(i)) {
                    return Err(Error::NotDownwardClosed { face: universe.render_face(face) });
                }
            }
        }
        Ok(SimplicialComplex { universe, faces })
    }

    /// Internal constructor for face sets that are downward closed by
    /// construction. Closure is re-verified in debug builds, up to a size
    /// past which the quadratic-ish sweep would dominate the build.
    pub(crate) fn from_closed_faces(universe: Arc<Universe>, faces: BTreeSet<Face>) -> Self {
        let complex = SimplicialComplex { universe, faces };
        debug_assert!(complex.faces.len() > 65536 || complex.is_downward_closed());
        complex
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, face: Face) -> bool {
        self.faces.contains(&face)
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// Largest face dimension; `None` for the void complex, `Some(-1)` for
    /// the complex `{∅}`.
    pub fn dimension(&self) -> Option<i32> {
        self.faces.iter().map(|f| f.dimension()).max()
    }

    /// Union of all faces, as a face over this universe.
    pub fn minimal_ground_set(&self) -> Face {
        let mut ground = Face::EMPTY;
        for &face in &self.faces {
            ground = ground.union(face);
        }
        ground
    }

    /// Labels of the minimal ground set, in universe order.
    pub fn minimal_ground_labels(&self) -> Vec<String> {
        self.universe.labels_of(self.minimal_ground_set())
    }

    /// Face counts per dimension, the empty face excluded: entry `k` is the
    /// number of faces with `k + 1` vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let dim = match self.dimension() {
            Some(d) if d >= 0 => d as usize,
            _ => return Vec::new(),
        };
        let mut counts = alloc::vec![0usize; dim + 1];
        for &face in &self.faces {
            if !face.is_empty() {
                counts[face.cardinality() - 1] += 1;
            }
        }
        counts
    }

    /// Euler characteristic `Σ (-1)^k f_k` from the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (k, count) in self.f_vector().into_iter().enumerate() {
            let signed = count as i64;
            if k % 2 == 0 {
                chi += signed;
            } else {
                chi -= signed;
            }
        }
        chi
    }

    /// The maximal faces. For `{∅}` this is `[∅]`; for the void complex it
    /// is empty.
    pub fn facets(&self) -> Vec<Face> {
        let full = self.universe.full_face();
        self.faces
            .iter()
            .copied()
            .filter(|&face| {
                face.difference(full).is_empty()
                    && full
                        .difference(face)
                        .indices()
                        .all(|w| !self.faces.contains(&face.with(w)))
            })
            .collect()
    }

    /// Exhaustive downward-closure check (used by tests and debug builds).
    pub fn is_downward_closed(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        if !self.faces.contains(&Face::EMPTY) {
            return false;
        }
        self.faces
            .iter()
            .all(|&face| face.indices().all(|i| self.faces.contains(&face.without(i))))
    }

    /// True iff every face of `self` is a face of `other`, compared at the
    /// label level (the universes may differ).
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        if self.universe == other.universe {
            return self.faces.is_subset(&other.faces);
        }
        match self.translation_to(other.universe()) {
            Some(translate) => self
                .faces
                .iter()
                .all(|&face| other.faces.contains(&translate.apply(face))),
            None => false,
        }
    }

    /// Label-level face-set equality, ignoring universe differences.
    pub fn same_faces(&self, other: &SimplicialComplex) -> bool {
        self.face_count() == other.face_count() && self.is_subcomplex_of(other)
    }

    /// Re-expresses this complex over another universe containing all the
    /// labels its faces use.
    pub fn reindex(&self, target: &Arc<Universe>) -> Result<SimplicialComplex> {
        let translate = self.translation_to(target).ok_or_else(|| {
            let missing = self
                .minimal_ground_set()
                .indices()
                .find(|&i| target.index_of(self.universe.label(i)).is_none())
                .expect("translation failed, so some label is missing");
            Error::UnknownLabel { label: self.universe.label(missing).into() }
        })?;
        let faces = self.faces.iter().map(|&f| translate.apply(f)).collect();
        Ok(SimplicialComplex { universe: target.clone(), faces })
    }

    /// Index translation of the minimal ground set into another universe;
    /// `None` when a label is missing there.
    fn translation_to(&self, target: &Arc<Universe>) -> Option<FaceTranslation> {
        if Arc::ptr_eq(&self.universe, target) || self.universe == *target {
            return Some(FaceTranslation::identity());
        }
        let mut table = [0u8; MAX_VERTICES];
        let ground = self.minimal_ground_set();
        for i in ground.indices() {
            table[i as usize] = target.index_of(self.universe.label(i))?;
        }
        Some(FaceTranslation { table: Some(table) })
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex({} faces over {:?})", self.faces.len(), self.universe.labels())
    }
}

struct FaceTranslation {
    table: Option<[u8; MAX_VERTICES]>,
}

impl FaceTranslation {
    fn identity() -> Self {
        FaceTranslation { table: None }
    }

    fn apply(&self, face: Face) -> Face {
        match &self.table {
            None => face,
            Some(table) => Face::from_indices(face.indices().map(|i| table[i as usize])),
        }
    }
}

/// A simplicial map: a vertex map between minimal ground sets under which
/// the image of every source face is a target face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    map: BTreeMap<u8, u8>,
}

impl SimplicialMap {
    /// Builds a map from a label-level vertex assignment. The assignment
    /// must cover the minimal ground set of the source, and the image of
    /// every source face must be a target face.
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for i in source.minimal_ground_set().indices() {
            let src_label = source.universe().label(i);
            let tgt_label = vertex_map
                .get(src_label)
                .ok_or_else(|| Error::NotTotalOnGroundSet { label: src_label.into() })?;
            let j = target
                .universe()
                .index_of(tgt_label)
                .ok_or_else(|| Error::UnknownLabel { label: tgt_label.clone() })?;
            map.insert(i, j);
        }
        Self::from_index_map(source, target, map)
    }

    /// Builds a map from universe-index pairs, verifying the image
    /// condition and reporting one offending face on failure.
    pub fn from_index_map(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: BTreeMap<u8, u8>,
    ) -> Result<Self> {
        for i in source.minimal_ground_set().indices() {
            if !map.contains_key(&i) {
                return Err(Error::NotTotalOnGroundSet { label: source.universe().label(i).into() });
            }
        }
        let candidate = SimplicialMap { source, target, map };
        for &face in candidate.source.faces() {
            if !candidate.target.contains(candidate.image_of(face)) {
                return Err(Error::ImageCondition {
                    face: candidate.source.universe().render_face(face),
                });
            }
        }
        Ok(candidate)
    }

    pub fn identity(complex: &SimplicialComplex) -> Self {
        let map = complex.minimal_ground_set().indices().map(|i| (i, i)).collect();
        SimplicialMap { source: complex.clone(), target: complex.clone(), map }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    /// The vertex assignment at the label level.
    pub fn label_map(&self) -> BTreeMap<String, String> {
        self.map
            .iter()
            .map(|(&i, &j)| {
                (self.source.universe().label(i).into(), self.target.universe().label(j).into())
            })
            .collect()
    }

    pub fn image_of(&self, face: Face) -> Face {
        Face::from_indices(face.indices().map(|i| self.map[&i]))
    }

    /// The image complex `{ f(F) : F ∈ source }` over the target universe.
    /// It is downward closed automatically.
    pub fn apply(&self) -> SimplicialComplex {
        let faces: BTreeSet<Face> = self.source.faces().iter().map(|&f| self.image_of(f)).collect();
        SimplicialComplex::from_closed_faces(self.target.universe().clone(), faces)
    }

    /// Composes `self` with `then`; the target of `self` must equal the
    /// source of `then`.
    pub fn compose(&self, then: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target != then.source {
            return Err(Error::CompositionMismatch);
        }
        let map = self.map.iter().map(|(&i, &j)| (i, then.map[&j])).collect();
        SimplicialMap::from_index_map(self.source.clone(), then.target.clone(), map)
    }

    /// True iff the vertex map is a bijection between the minimal ground
    /// sets and its inverse also satisfies the image condition.
    pub fn is_isomorphism(&self) -> bool {
        let mut inverse = BTreeMap::new();
        for (&i, &j) in &self.map {
            if inverse.insert(j, i).is_some() {
                return false;
            }
        }
        let target_ground = self.target.minimal_ground_set();
        if inverse.len() != target_ground.cardinality()
            || !target_ground.indices().all(|j| inverse.contains_key(&j))
        {
            return false;
        }
        SimplicialMap::from_index_map(self.target.clone(), self.source.clone(), inverse).is_ok()
    }
}
