//! Finite binary relations with ordered ground sets, their morphisms, and
//! the containment relation of a complex.
//!
//! A relation is stored as per-vertex adjacency bit sets on both sides, so
//! common-neighbor queries are single intersections. The lifted relation
//! `U R V ⟺ U × V ⊆ R` and the neighbor operators are the primitives all
//! complex constructions are built from.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::complex::{Face, SimplicialComplex, Universe};
use crate::error::{Error, Result};

/// Prefix reserved for the fresh face labels of [`containment_relation`].
pub const FACE_LABEL_PREFIX: &str = "F:";

/// A binary relation `R ⊆ X × Y` over two ordered universes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    x: Arc<Universe>,
    y: Arc<Universe>,
    /// Per x-vertex: the set of related y-vertices, as a mask over `Y`.
    x_adj: Vec<u64>,
    /// Per y-vertex: the set of related x-vertices, as a mask over `X`.
    y_adj: Vec<u64>,
}

impl Relation {
    /// Builds a relation from index pairs `(xi, yi)`.
    pub fn new(x: Arc<Universe>, y: Arc<Universe>, pairs: &[(u8, u8)]) -> Result<Self> {
        let mut x_adj = alloc::vec![0u64; x.len()];
        let mut y_adj = alloc::vec![0u64; y.len()];
        for &(xi, yi) in pairs {
            if xi as usize >= x.len() {
                return Err(Error::FaceOutsideUniverse {
                    face: alloc::format!("{{x#{xi}}}"),
                });
            }
            if yi as usize >= y.len() {
                return Err(Error::FaceOutsideUniverse {
                    face: alloc::format!("{{y#{yi}}}"),
                });
            }
            x_adj[xi as usize] |= 1u64 << yi;
            y_adj[yi as usize] |= 1u64 << xi;
        }
        Ok(Relation { x, y, x_adj, y_adj })
    }

    /// Builds a relation from label pairs, erroring on unknown labels.
    pub fn from_label_pairs(
        x: Arc<Universe>,
        y: Arc<Universe>,
        pairs: &[(String, String)],
    ) -> Result<Self> {
        let mut index_pairs = Vec::with_capacity(pairs.len());
        for (xl, yl) in pairs {
            let xi = x.index_of(xl).ok_or_else(|| Error::UnknownLabel { label: xl.clone() })?;
            let yi = y.index_of(yl).ok_or_else(|| Error::UnknownLabel { label: yl.clone() })?;
            index_pairs.push((xi, yi));
        }
        Relation::new(x, y, &index_pairs)
    }

    pub fn x_universe(&self) -> &Arc<Universe> {
        &self.x
    }

    pub fn y_universe(&self) -> &Arc<Universe> {
        &self.y
    }

    /// All pairs in lexicographic (x index, y index) order.
    pub fn pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for (xi, &mask) in self.x_adj.iter().enumerate() {
            for yi in Face::from_bits(mask).indices() {
                out.push((xi as u8, yi));
            }
        }
        out
    }

    pub fn pair_count(&self) -> usize {
        self.x_adj.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn contains_pair(&self, xi: u8, yi: u8) -> bool {
        (xi as usize) < self.x.len() && self.x_adj[xi as usize] & (1u64 << yi) != 0
    }

    /// Adjacency mask of one x-vertex (its related y's).
    pub fn adjacency_of_x(&self, xi: u8) -> u64 {
        self.x_adj[xi as usize]
    }

    /// Adjacency mask of one y-vertex (its related x's).
    pub fn adjacency_of_y(&self, yi: u8) -> u64 {
        self.y_adj[yi as usize]
    }

    pub fn full_x(&self) -> Face {
        self.x.full_face()
    }

    pub fn full_y(&self) -> Face {
        self.y.full_face()
    }

    /// A label occurring in both universes, if any.
    pub fn shared_label(&self) -> Option<&str> {
        self.x.labels().iter().find(|l| self.y.index_of(l).is_some()).map(String::as_str)
    }

    /// Whether the two ground sets are label-disjoint.
    pub fn is_bipartite(&self) -> bool {
        self.shared_label().is_none()
    }

    fn check_x_face(&self, u: Face) -> Result<()> {
        if u.is_subset_of(self.full_x()) {
            Ok(())
        } else {
            Err(Error::FaceOutsideUniverse { face: alloc::format!("{u:?}") })
        }
    }

    fn check_y_face(&self, v: Face) -> Result<()> {
        if v.is_subset_of(self.full_y()) {
            Ok(())
        } else {
            Err(Error::FaceOutsideUniverse { face: alloc::format!("{v:?}") })
        }
    }

    /// The lifted relation: true iff `u × v ⊆ R`. Vacuously true when
    /// either side is empty.
    pub fn bold(&self, u: Face, v: Face) -> Result<bool> {
        self.check_x_face(u)?;
        self.check_y_face(v)?;
        Ok(v.bits() & !self.y_neighbor_mask(u.bits()) == 0)
    }

    /// The common y-neighbors of `u ⊆ X`: every `y` related to all of `u`.
    /// For `u = ∅` this is all of `Y`.
    pub fn y_neighbors(&self, u: Face) -> Result<Face> {
        self.check_x_face(u)?;
        Ok(Face::from_bits(self.y_neighbor_mask(u.bits())))
    }

    /// The common x-neighbors of `v ⊆ Y`.
    pub fn x_neighbors(&self, v: Face) -> Result<Face> {
        self.check_y_face(v)?;
        Ok(Face::from_bits(self.x_neighbor_mask(v.bits())))
    }

    pub(crate) fn y_neighbor_mask(&self, u: u64) -> u64 {
        let mut mask = self.full_y().bits();
        let mut rest = u;
        while rest != 0 && mask != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            mask &= self.x_adj[i];
        }
        mask
    }

    pub(crate) fn x_neighbor_mask(&self, v: u64) -> u64 {
        let mut mask = self.full_x().bits();
        let mut rest = v;
        while rest != 0 && mask != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            mask &= self.y_adj[j];
        }
        mask
    }

    /// The transposed relation from `Y` to `X`.
    pub fn transpose(&self) -> Relation {
        Relation {
            x: self.y.clone(),
            y: self.x.clone(),
            x_adj: self.y_adj.clone(),
            y_adj: self.x_adj.clone(),
        }
    }

    /// Retags the ground sets as `(x,0)` and `(y,1)`, producing a bipartite
    /// copy together with the tagging isomorphism. Applied unconditionally,
    /// also to relations that are already bipartite.
    pub fn disjointify(&self) -> (Relation, RelationMorphism) {
        let x_labels: Vec<String> =
            self.x.labels().iter().map(|l| alloc::format!("({l},0)")).collect();
        let y_labels: Vec<String> =
            self.y.labels().iter().map(|l| alloc::format!("({l},1)")).collect();
        let x = Universe::new(x_labels).expect("tagging preserves distinctness and size");
        let y = Universe::new(y_labels).expect("tagging preserves distinctness and size");
        let tagged = Relation {
            x,
            y,
            x_adj: self.x_adj.clone(),
            y_adj: self.y_adj.clone(),
        };
        let phi_l: Vec<u8> = (0..self.x.len() as u8).collect();
        let phi_r: Vec<u8> = (0..self.y.len() as u8).collect();
        let morphism = RelationMorphism {
            source: self.clone(),
            target: tagged.clone(),
            phi_l,
            phi_r,
        };
        (tagged, morphism)
    }

    /// The universe `X ∪ Y` (x labels first, then y labels). Requires the
    /// relation to be bipartite.
    pub fn combined_universe(&self) -> Result<Arc<Universe>> {
        if let Some(label) = self.shared_label() {
            return Err(Error::NotBipartite { label: label.into() });
        }
        let labels: Vec<String> =
            self.x.labels().iter().chain(self.y.labels().iter()).cloned().collect();
        Universe::new(labels)
    }
}

/// A morphism of relations: a pair of total maps `(φ_l : X → Z, φ_r : Y → W)`
/// with `(x, y) ∈ R ⟹ (φ_l(x), φ_r(y)) ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMorphism {
    source: Relation,
    target: Relation,
    /// `phi_l[i]` is the target x-index of source x-index `i`.
    phi_l: Vec<u8>,
    /// `phi_r[j]` is the target y-index of source y-index `j`.
    phi_r: Vec<u8>,
}

impl RelationMorphism {
    pub fn new(source: Relation, target: Relation, phi_l: Vec<u8>, phi_r: Vec<u8>) -> Result<Self> {
        if phi_l.len() != source.x.len() || phi_r.len() != source.y.len() {
            return Err(Error::NotTotalOnGroundSet { label: String::from("<arity mismatch>") });
        }
        for &t in &phi_l {
            if t as usize >= target.x.len() {
                return Err(Error::UnknownLabel { label: alloc::format!("x#{t}") });
            }
        }
        for &t in &phi_r {
            if t as usize >= target.y.len() {
                return Err(Error::UnknownLabel { label: alloc::format!("y#{t}") });
            }
        }
        for (xi, yi) in source.pairs() {
            if !target.contains_pair(phi_l[xi as usize], phi_r[yi as usize]) {
                return Err(Error::PairNotPreserved {
                    x: source.x.label(xi).into(),
                    y: source.y.label(yi).into(),
                });
            }
        }
        Ok(RelationMorphism { source, target, phi_l, phi_r })
    }

    /// Builds a morphism from label-level maps; both must be total.
    pub fn from_label_maps(
        source: Relation,
        target: Relation,
        left: &BTreeMap<String, String>,
        right: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut phi_l = Vec::with_capacity(source.x.len());
        for label in source.x.labels() {
            let image = left
                .get(label)
                .ok_or_else(|| Error::NotTotalOnGroundSet { label: label.clone() })?;
            phi_l.push(
                target.x.index_of(image).ok_or_else(|| Error::UnknownLabel { label: image.clone() })?,
            );
        }
        let mut phi_r = Vec::with_capacity(source.y.len());
        for label in source.y.labels() {
            let image = right
                .get(label)
                .ok_or_else(|| Error::NotTotalOnGroundSet { label: label.clone() })?;
            phi_r.push(
                target.y.index_of(image).ok_or_else(|| Error::UnknownLabel { label: image.clone() })?,
            );
        }
        RelationMorphism::new(source, target, phi_l, phi_r)
    }

    pub fn identity(r: &Relation) -> Self {
        RelationMorphism {
            source: r.clone(),
            target: r.clone(),
            phi_l: (0..r.x.len() as u8).collect(),
            phi_r: (0..r.y.len() as u8).collect(),
        }
    }

    pub fn source(&self) -> &Relation {
        &self.source
    }

    pub fn target(&self) -> &Relation {
        &self.target
    }

    pub fn map_x_index(&self, xi: u8) -> u8 {
        self.phi_l[xi as usize]
    }

    pub fn map_y_index(&self, yi: u8) -> u8 {
        self.phi_r[yi as usize]
    }

    /// The left map at the label level.
    pub fn left_label_map(&self) -> BTreeMap<String, String> {
        self.source
            .x
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), self.target.x.label(self.phi_l[i]).into()))
            .collect()
    }

    /// The right map at the label level.
    pub fn right_label_map(&self) -> BTreeMap<String, String> {
        self.source
            .y
            .labels()
            .iter()
            .enumerate()
            .map(|(j, l)| (l.clone(), self.target.y.label(self.phi_r[j]).into()))
            .collect()
    }

    /// Componentwise composition; the target of `self` must equal the
    /// source of `then`.
    pub fn compose(&self, then: &RelationMorphism) -> Result<RelationMorphism> {
        if self.target != then.source {
            return Err(Error::CompositionMismatch);
        }
        let phi_l = self.phi_l.iter().map(|&i| then.phi_l[i as usize]).collect();
        let phi_r = self.phi_r.iter().map(|&j| then.phi_r[j as usize]).collect();
        RelationMorphism::new(self.source.clone(), then.target.clone(), phi_l, phi_r)
    }
}

/// Fresh label for a face: `F:` followed by the comma-joined member labels
/// in universe order; the empty face becomes `F:`.
pub fn face_label(universe: &Universe, face: Face) -> String {
    let mut label = String::from(FACE_LABEL_PREFIX);
    for (n, i) in face.indices().enumerate() {
        if n > 0 {
            label.push(',');
        }
        label.push_str(universe.label(i));
    }
    label
}

/// The containment relation of a nonempty complex: `X` is the minimal
/// ground set, `Y` holds one fresh label per face, and `(x, y_F) ∈ R` iff
/// `x ∈ F`. Its left Dowker complex recovers the input face-for-face.
///
/// User labels starting with `F:` are rejected so the fresh labels cannot
/// collide; complexes with more than 64 faces exceed the universe cap.
pub fn containment_relation(complex: &SimplicialComplex) -> Result<Relation> {
    if complex.is_void() {
        return Err(Error::VoidComplex);
    }
    let ground = complex.minimal_ground_set();
    for i in ground.indices() {
        let label = complex.universe().label(i);
        if label.starts_with(FACE_LABEL_PREFIX) {
            return Err(Error::ReservedLabelPrefix { label: label.into() });
        }
    }
    let x = Universe::new(complex.universe().labels_of(ground))?;
    let y_labels: Vec<String> =
        complex.faces().iter().map(|&f| face_label(complex.universe(), f)).collect();
    let y = Universe::new(y_labels)?;
    // Compact the ambient universe indices into X indices (order-preserving).
    let mut compact = BTreeMap::new();
    for (pos, i) in ground.indices().enumerate() {
        compact.insert(i, pos as u8);
    }
    let mut pairs = Vec::new();
    for (fi, &face) in complex.faces().iter().enumerate() {
        for i in face.indices() {
            pairs.push((compact[&i], fi as u8));
        }
    }
    Relation::new(x, y, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The divides relation on X = {1,2,3,4}, Y = {5,6,7,8}.
    pub(crate) fn divides_example() -> Relation {
        let x = Universe::from_labels(["1", "2", "3", "4"]).unwrap();
        let y = Universe::from_labels(["5", "6", "7", "8"]).unwrap();
        let mut pairs = Vec::new();
        for (xi, xv) in [1u32, 2, 3, 4].into_iter().enumerate() {
            for (yi, yv) in [5u32, 6, 7, 8].into_iter().enumerate() {
                if yv % xv == 0 {
                    pairs.push((xi as u8, yi as u8));
                }
            }
        }
        Relation::new(x, y, &pairs).unwrap()
    }

    fn xf(r: &Relation, labels: &[&str]) -> Face {
        r.x_universe().face_from_labels(labels.iter().copied()).unwrap()
    }

    fn yf(r: &Relation, labels: &[&str]) -> Face {
        r.y_universe().face_from_labels(labels.iter().copied()).unwrap()
    }

    #[test]
    fn bold_relation_on_divides() {
        let r = divides_example();
        assert!(r.bold(xf(&r, &["1", "2"]), yf(&r, &["6", "8"])).unwrap());
        assert!(!r.bold(xf(&r, &["1", "2", "4"]), yf(&r, &["6", "8"])).unwrap());
        assert!(r.bold(Face::EMPTY, yf(&r, &["5", "6", "7", "8"])).unwrap());
        assert!(r.bold(xf(&r, &["1", "2"]), Face::EMPTY).unwrap());
    }

    #[test]
    fn neighbors_on_divides() {
        let r = divides_example();
        assert_eq!(r.y_neighbors(xf(&r, &["1", "2"])).unwrap(), yf(&r, &["6", "8"]));
        assert_eq!(r.y_neighbors(Face::EMPTY).unwrap(), r.full_y());
        assert_eq!(r.y_neighbors(xf(&r, &["3", "4"])).unwrap(), Face::EMPTY);
        assert_eq!(r.x_neighbors(yf(&r, &["6", "8"])).unwrap(), xf(&r, &["1", "2"]));
        assert_eq!(r.x_neighbors(Face::EMPTY).unwrap(), r.full_x());
        // 1 divides everything, so it neighbors every subset of Y.
        for v in r.full_y().subsets() {
            assert!(r.x_neighbors(v).unwrap().contains(0));
        }
    }

    #[test]
    fn neighbor_antitonicity_spot_check() {
        let r = divides_example();
        let small = xf(&r, &["1"]);
        let large = xf(&r, &["1", "2"]);
        let n_small = r.y_neighbors(small).unwrap();
        let n_large = r.y_neighbors(large).unwrap();
        assert!(n_large.is_subset_of(n_small));
    }

    #[test]
    fn out_of_universe_face_is_a_domain_error() {
        let r = divides_example();
        let bad = Face::from_indices([6u8]);
        assert!(matches!(r.y_neighbors(bad), Err(Error::FaceOutsideUniverse { .. })));
        assert!(matches!(r.bold(bad, Face::EMPTY), Err(Error::FaceOutsideUniverse { .. })));
    }

    #[test]
    fn disjointify_tags_and_preserves_pairs() {
        let r = divides_example();
        let (tagged, morphism) = r.disjointify();
        assert!(tagged.is_bipartite());
        assert_eq!(tagged.x_universe().labels()[0], "(1,0)");
        assert_eq!(tagged.y_universe().labels()[3], "(8,1)");
        assert_eq!(tagged.pair_count(), r.pair_count());
        for (xi, yi) in r.pairs() {
            assert!(tagged.contains_pair(morphism.map_x_index(xi), morphism.map_y_index(yi)));
        }
        // Forgetting the tags recovers the original pair set exactly.
        assert_eq!(tagged.pairs(), r.pairs());
    }

    #[test]
    fn disjointify_is_uniform_on_bipartite_input() {
        let x = Universe::from_labels(["a"]).unwrap();
        let y = Universe::from_labels(["b"]).unwrap();
        let r = Relation::new(x, y, &[(0, 0)]).unwrap();
        assert!(r.is_bipartite());
        let (tagged, _) = r.disjointify();
        assert_eq!(tagged.x_universe().labels()[0], "(a,0)");
        assert_eq!(tagged.y_universe().labels()[0], "(b,1)");
    }

    #[test]
    fn disjointify_of_empty_relation_with_shared_labels() {
        let x = Universe::from_labels(["a"]).unwrap();
        let y = Universe::from_labels(["a"]).unwrap();
        let r = Relation::new(x, y, &[]).unwrap();
        assert!(!r.is_bipartite());
        assert!(r.combined_universe().is_err());
        let (tagged, _) = r.disjointify();
        assert!(tagged.is_bipartite());
        assert_eq!(tagged.pair_count(), 0);
        assert!(tagged.combined_universe().is_ok());
    }

    #[test]
    fn containment_relation_of_a_point() {
        let u = Universe::from_labels(["a"]).unwrap();
        let c = SimplicialComplex::closure(u.clone(), &[u.full_face()]);
        let r = containment_relation(&c).unwrap();
        assert_eq!(r.x_universe().labels(), ["a"]);
        assert_eq!(r.y_universe().labels(), ["F:", "F:a"]);
        assert_eq!(r.pairs(), [(0, 1)]);
    }

    #[test]
    fn containment_relation_of_full_edge() {
        let u = Universe::from_labels(["1", "2"]).unwrap();
        let c = SimplicialComplex::closure(u.clone(), &[u.full_face()]);
        let r = containment_relation(&c).unwrap();
        assert_eq!(r.y_universe().len(), 4);
        // 1 ∈ {1}, {1,2}; 2 ∈ {2}, {1,2}.
        let y_of = |label: &str| r.y_universe().index_of(label).unwrap();
        assert!(r.contains_pair(0, y_of("F:1")));
        assert!(r.contains_pair(0, y_of("F:1,2")));
        assert!(r.contains_pair(1, y_of("F:2")));
        assert!(r.contains_pair(1, y_of("F:1,2")));
        assert_eq!(r.pair_count(), 4);
    }

    #[test]
    fn containment_relation_rejects_void_and_reserved_labels() {
        let u = Universe::from_labels(["a"]).unwrap();
        assert_eq!(
            containment_relation(&SimplicialComplex::void(u)).unwrap_err(),
            Error::VoidComplex
        );
        let bad = Universe::from_labels(["F:x"]).unwrap();
        let c = SimplicialComplex::closure(bad.clone(), &[bad.full_face()]);
        assert!(matches!(
            containment_relation(&c),
            Err(Error::ReservedLabelPrefix { .. })
        ));
    }

    #[test]
    fn morphism_rejects_unpreserved_pairs() {
        let r = divides_example();
        let empty = Relation::new(
            r.x_universe().clone(),
            r.y_universe().clone(),
            &[],
        )
        .unwrap();
        let id: Vec<u8> = (0..4).collect();
        assert!(matches!(
            RelationMorphism::new(r.clone(), empty, id.clone(), id),
            Err(Error::PairNotPreserved { .. })
        ));
    }

    #[test]
    fn morphism_identity_and_composition() {
        let r = divides_example();
        let id = RelationMorphism::identity(&r);
        let composed = id.compose(&id).unwrap();
        assert_eq!(composed, id);
        let (_, tag) = r.disjointify();
        let tagged_then = id.compose(&tag).unwrap();
        assert_eq!(tagged_then.left_label_map(), tag.left_label_map());
    }

    #[test]
    fn transpose_swaps_sides() {
        let r = divides_example();
        let t = r.transpose();
        assert_eq!(t.x_universe().labels(), r.y_universe().labels());
        for (xi, yi) in r.pairs() {
            assert!(t.contains_pair(yi, xi));
        }
    }
}
