//! Construction of the Dowker complexes `C_X` and `C_Y`, the biclique
//! complex `B`, and the rectangle complex `E` of a relation.
//!
//! All three enumerations walk subsets in increasing vertex-index order and
//! prune on running neighbor intersections, so only faces that actually
//! belong to the complex are ever visited. The enumerated families are
//! downward closed by construction; debug builds re-verify this.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::complex::{Face, SimplicialComplex, SimplicialMap, Universe};
use crate::error::{Error, Result};
use crate::relation::{Relation, RelationMorphism};

/// Which Dowker complex a matching or collapse targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Enumeration strategy for the Dowker complexes.
///
/// Both strategies produce the same complex; `IntersectAdjacency` prunes a
/// subset walk by intersecting per-vertex adjacency masks, while
/// `ClosedMaximalFaces` enumerates candidate facets as common-neighbor sets
/// of the opposite side and closes them downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DowkerStrategy {
    #[default]
    IntersectAdjacency,
    ClosedMaximalFaces,
}

/// The left Dowker complex `C_X`: all `U ⊆ X` that are empty or have a
/// common y-neighbor.
pub fn dowker_left(r: &Relation) -> SimplicialComplex {
    dowker_left_with(r, DowkerStrategy::default())
}

pub fn dowker_left_with(r: &Relation, strategy: DowkerStrategy) -> SimplicialComplex {
    match strategy {
        DowkerStrategy::IntersectAdjacency => conic_sets_by_intersection(
            r.x_universe().clone(),
            r.x_universe().len(),
            |i| r.adjacency_of_x(i as u8),
            r.full_y().bits(),
        ),
        DowkerStrategy::ClosedMaximalFaces => conic_sets_by_facets(
            r.x_universe().clone(),
            r.y_universe().len(),
            |j| r.adjacency_of_y(j as u8),
            r.full_x().bits(),
        ),
    }
}

/// The right Dowker complex `C_Y`; mirror of [`dowker_left`].
pub fn dowker_right(r: &Relation) -> SimplicialComplex {
    dowker_right_with(r, DowkerStrategy::default())
}

pub fn dowker_right_with(r: &Relation, strategy: DowkerStrategy) -> SimplicialComplex {
    dowker_left_with(&r.transpose(), strategy)
}

/// Both Dowker complexes of one relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DowkerPair {
    pub left: SimplicialComplex,
    pub right: SimplicialComplex,
}

pub fn dowker_complexes(r: &Relation) -> DowkerPair {
    DowkerPair { left: dowker_left(r), right: dowker_right(r) }
}

/// Walks subsets of one side in increasing index order, keeping the running
/// intersection of adjacency masks; a branch dies as soon as the
/// intersection empties.
fn conic_sets_by_intersection(
    universe: Arc<Universe>,
    n: usize,
    adjacency: impl Fn(usize) -> u64 + Copy,
    full_other: u64,
) -> SimplicialComplex {
    let mut faces = BTreeSet::new();
    faces.insert(Face::EMPTY);
    let mut stack: Vec<(Face, u64, usize)> = Vec::new();
    stack.push((Face::EMPTY, full_other, 0));
    while let Some((face, neighbors, start)) = stack.pop() {
        for i in start..n {
            let pruned = neighbors & adjacency(i);
            if pruned != 0 {
                let extended = face.with(i as u8);
                faces.insert(extended);
                stack.push((extended, pruned, i + 1));
            }
        }
    }
    SimplicialComplex::from_closed_faces(universe, faces)
}

/// Enumerates candidate facets as the common-neighbor sets of nonempty
/// subsets of the opposite side, then closes downward.
fn conic_sets_by_facets(
    universe: Arc<Universe>,
    n_other: usize,
    adjacency_other: impl Fn(usize) -> u64 + Copy,
    full_self: u64,
) -> SimplicialComplex {
    let mut candidates: BTreeSet<Face> = BTreeSet::new();
    let mut stack: Vec<(u64, usize)> = Vec::new();
    stack.push((full_self, 0));
    while let Some((neighbors, start)) = stack.pop() {
        for j in start..n_other {
            let pruned = neighbors & adjacency_other(j);
            if pruned != 0 {
                candidates.insert(Face::from_bits(pruned));
                stack.push((pruned, j + 1));
            }
        }
    }
    let maximal: Vec<Face> =
        candidates.iter().copied().filter(|&f| !candidates.iter().any(|&g| f != g && f.is_subset_of(g))).collect();
    let mut complex = SimplicialComplex::closure(universe.clone(), &maximal);
    if complex.is_void() {
        complex = SimplicialComplex::empty_face_only(universe);
    }
    complex
}

/// The bicliques of a bipartite relation: faces `U ∪ V` over `X ∪ Y` with
/// `U, V` both nonempty and `U × V ⊆ R`.
pub fn bicliques(r: &Relation) -> Result<BTreeSet<Face>> {
    let (_, faces) = enumerate_biclique_faces(r)?;
    let nx = r.x_universe().len() as u8;
    let x_part = Face::all_below(nx);
    Ok(faces
        .into_iter()
        .filter(|f| !f.intersection(x_part).is_empty() && !f.difference(x_part).is_empty())
        .collect())
}

/// The biclique complex `B = {bicliques} ∪ C_X ∪ C_Y` over `X ∪ Y`.
pub fn biclique_complex(r: &Relation) -> Result<SimplicialComplex> {
    let (universe, faces) = enumerate_biclique_faces(r)?;
    Ok(SimplicialComplex::from_closed_faces(universe, faces))
}

/// Single subset walk over `X ∪ Y` (x indices first) enumerating exactly
/// the faces of `B`.
///
/// The walk carries the running common-neighbor masks of both parts. A face
/// extension is admitted when the extended face still lies in `B`:
/// extending the x-part against a nonempty y-part requires the new x to
/// neighbor all of it (and symmetrically); while one part is still empty,
/// the other just has to stay conic. Every prefix of a face of `B` along
/// ascending indices lies in `B`, so the walk reaches every face.
fn enumerate_biclique_faces(r: &Relation) -> Result<(Arc<Universe>, BTreeSet<Face>)> {
    let universe = r.combined_universe()?;
    let nx = r.x_universe().len();
    let ny = r.y_universe().len();
    let mut faces = BTreeSet::new();
    faces.insert(Face::EMPTY);
    // (face, x-neighbors of the y-part, y-neighbors of the x-part, next index)
    let mut stack: Vec<(Face, u64, u64, usize)> = Vec::new();
    stack.push((Face::EMPTY, r.full_x().bits(), r.full_y().bits(), 0));
    while let Some((face, xn, yn, start)) = stack.pop() {
        let x_part_empty = face.intersection(Face::all_below(nx as u8)).is_empty();
        let y_part_empty = face.difference(Face::all_below(nx as u8)).is_empty();
        for k in start..nx + ny {
            if k < nx {
                let new_yn = yn & r.adjacency_of_x(k as u8);
                let ok = if y_part_empty { new_yn != 0 } else { xn & (1 << k) != 0 };
                if ok {
                    let extended = face.with(k as u8);
                    faces.insert(extended);
                    stack.push((extended, xn, new_yn, k + 1));
                }
            } else {
                let j = k - nx;
                let new_xn = xn & r.adjacency_of_y(j as u8);
                let ok = if x_part_empty { new_xn != 0 } else { yn & (1 << j) != 0 };
                if ok {
                    let extended = face.with(k as u8);
                    faces.insert(extended);
                    stack.push((extended, new_xn, yn, k + 1));
                }
            }
        }
    }
    Ok((universe, faces))
}

/// The universe of the rectangle complex: one vertex `(x,y)` per pair of
/// the relation, in lexicographic (x index, y index) order. Relations with
/// more than 64 pairs exceed the bit-set cap.
pub fn pair_universe(r: &Relation) -> Result<Arc<Universe>> {
    if r.pair_count() > crate::complex::MAX_VERTICES {
        return Err(Error::UniverseTooLarge { size: r.pair_count() });
    }
    let labels: Vec<String> = r
        .pairs()
        .into_iter()
        .map(|(xi, yi)| {
            alloc::format!("({},{})", r.x_universe().label(xi), r.y_universe().label(yi))
        })
        .collect();
    Universe::new(labels)
}

/// The rectangle complex `E`: ground set the pairs of `R`, faces the pair
/// sets `S` with `proj_X(S) × proj_Y(S) ⊆ R`.
pub fn rectangle_complex(r: &Relation) -> Result<SimplicialComplex> {
    rectangle_complex_with_budget(r, usize::MAX)
}

/// [`rectangle_complex`] with an explicit face budget; enumeration aborts
/// with [`Error::TooManyFaces`] once the budget is exceeded. The face test
/// is hereditary (projections of subsets shrink), so the same prefix walk
/// as for `B` applies.
pub fn rectangle_complex_with_budget(r: &Relation, max_faces: usize) -> Result<SimplicialComplex> {
    let universe = pair_universe(r)?;
    let pairs = r.pairs();
    let mut faces = BTreeSet::new();
    faces.insert(Face::EMPTY);
    // (face, projection onto X, projection onto Y, next pair index)
    let mut stack: Vec<(Face, u64, u64, usize)> = Vec::new();
    stack.push((Face::EMPTY, 0, 0, 0));
    while let Some((face, proj_x, proj_y, start)) = stack.pop() {
        for (k, &(xi, yi)) in pairs.iter().enumerate().skip(start) {
            // Admit the pair when its row covers the current y-projection
            // and its column covers the current x-projection; together with
            // the invariant this keeps proj_X × proj_Y ⊆ R.
            if proj_y & !r.adjacency_of_x(xi) == 0 && proj_x & !r.adjacency_of_y(yi) == 0 {
                let extended = face.with(k as u8);
                if faces.len() >= max_faces {
                    return Err(Error::TooManyFaces { cap: max_faces });
                }
                faces.insert(extended);
                stack.push((extended, proj_x | (1 << xi), proj_y | (1 << yi), k + 1));
            }
        }
    }
    Ok(SimplicialComplex::from_closed_faces(universe, faces))
}

impl RelationMorphism {
    /// The induced simplicial map `C_l(φ) : C_l(R) → C_l(S)`.
    ///
    /// Validity is automatic for a valid morphism: a common neighbor of `U`
    /// maps to a common neighbor of `φ_l(U)`. The image condition is still
    /// verified by the map constructor and treated as an internal
    /// assertion.
    pub fn induced_left_map(&self) -> SimplicialMap {
        let source = dowker_left(self.source());
        let target = dowker_left(self.target());
        let map = source
            .minimal_ground_set()
            .indices()
            .map(|i| (i, self.map_x_index(i)))
            .collect();
        SimplicialMap::from_index_map(source, target, map)
            .expect("a relation morphism always induces a left Dowker map")
    }

    /// The induced simplicial map `C_r(φ) : C_r(R) → C_r(S)`.
    pub fn induced_right_map(&self) -> SimplicialMap {
        let source = dowker_right(self.source());
        let target = dowker_right(self.target());
        let map = source
            .minimal_ground_set()
            .indices()
            .map(|j| (j, self.map_y_index(j)))
            .collect();
        SimplicialMap::from_index_map(source, target, map)
            .expect("a relation morphism always induces a right Dowker map")
    }

    /// The induced simplicial map `B(φ) : B(R) → B(S)` given by
    /// `φ_l ∪ φ_r`. Both relations must be bipartite.
    pub fn induced_biclique_map(&self) -> Result<SimplicialMap> {
        let source = biclique_complex(self.source())?;
        let target = biclique_complex(self.target())?;
        let src_nx = self.source().x_universe().len() as u8;
        let tgt_nx = self.target().x_universe().len() as u8;
        let map = source
            .minimal_ground_set()
            .indices()
            .map(|k| {
                if k < src_nx {
                    (k, self.map_x_index(k))
                } else {
                    (k, tgt_nx + self.map_y_index(k - src_nx))
                }
            })
            .collect();
        Ok(SimplicialMap::from_index_map(source, target, map)
            .expect("a bipartite relation morphism always induces a biclique map"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::containment_relation;

    fn divides_example() -> Relation {
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

    /// Direct evaluation of the definitions, used as an independent oracle.
    fn oracle_dowker_left(r: &Relation) -> BTreeSet<Face> {
        let mut faces = BTreeSet::new();
        for u in r.full_x().subsets() {
            let conic = u.is_empty()
                || (0..r.y_universe().len() as u8)
                    .any(|y| u.indices().all(|x| r.contains_pair(x, y)));
            if conic {
                faces.insert(u);
            }
        }
        faces
    }

    fn oracle_biclique_faces(r: &Relation) -> BTreeSet<Face> {
        let nx = r.x_universe().len() as u8;
        let x_block = Face::all_below(nx);
        let combined = Face::all_below(nx + r.y_universe().len() as u8);
        let mut faces = BTreeSet::new();
        for f in combined.subsets() {
            let u = f.intersection(x_block);
            let v = Face::from_bits(f.difference(x_block).bits() >> nx);
            let related = u
                .indices()
                .all(|x| v.indices().all(|y| r.contains_pair(x, y)));
            let u_conic = u.is_empty() || !Face::from_bits(r.y_neighbor_mask(u.bits())).is_empty();
            let v_conic = v.is_empty() || !Face::from_bits(r.x_neighbor_mask(v.bits())).is_empty();
            let member = if v.is_empty() {
                u_conic
            } else if u.is_empty() {
                v_conic
            } else {
                related
            };
            if member {
                faces.insert(f);
            }
        }
        faces
    }

    #[test]
    fn divides_left_complex_matches_example() {
        let r = divides_example();
        let cx = dowker_left(&r);
        assert_eq!(cx.face_count(), 12);
        // Exactly the U ⊆ X with {3,4} ⊄ U.
        let three_four = r.x_universe().face_from_labels(["3", "4"]).unwrap();
        for u in r.full_x().subsets() {
            assert_eq!(cx.contains(u), !three_four.is_subset_of(u), "face {u:?}");
        }
        assert_eq!(cx.f_vector(), [4, 5, 2]);
        assert_eq!(cx.faces(), &oracle_dowker_left(&r));
        assert_eq!(cx.minimal_ground_labels(), ["1", "2", "3", "4"]);
        // One fresh face label per face of C_X.
        let contained = containment_relation(&cx).unwrap();
        assert_eq!(contained.y_universe().len(), 12);
    }

    #[test]
    fn divides_right_complex_is_full_power_set() {
        let r = divides_example();
        let cy = dowker_right(&r);
        assert_eq!(cy.face_count(), 16);
        assert_eq!(cy.f_vector(), [4, 6, 4, 1]);
    }

    #[test]
    fn strategies_agree_on_divides() {
        let r = divides_example();
        assert_eq!(
            dowker_left_with(&r, DowkerStrategy::IntersectAdjacency),
            dowker_left_with(&r, DowkerStrategy::ClosedMaximalFaces)
        );
        assert_eq!(
            dowker_right_with(&r, DowkerStrategy::IntersectAdjacency),
            dowker_right_with(&r, DowkerStrategy::ClosedMaximalFaces)
        );
    }

    #[test]
    fn transpose_mirrors_sides() {
        let r = divides_example();
        assert_eq!(dowker_right(&r), dowker_left(&r.transpose()));
    }

    #[test]
    fn empty_ground_set_gives_empty_face_only() {
        let x = Universe::from_labels::<_, String>([]).unwrap();
        let y = Universe::from_labels(["5"]).unwrap();
        let r = Relation::new(x, y, &[]).unwrap();
        let cx = dowker_left(&r);
        assert_eq!(cx.face_count(), 1);
        assert!(cx.contains(Face::EMPTY));
        let cy = dowker_right(&r);
        assert_eq!(cy.face_count(), 1);
    }

    #[test]
    fn empty_relation_gives_empty_face_only() {
        let x = Universe::from_labels(["a", "b"]).unwrap();
        let y = Universe::from_labels(["c", "d"]).unwrap();
        let r = Relation::new(x, y, &[]).unwrap();
        assert_eq!(dowker_left(&r).face_count(), 1);
        assert_eq!(dowker_right(&r).face_count(), 1);
        let b = biclique_complex(&r).unwrap();
        assert_eq!(b.face_count(), 1);
        assert!(bicliques(&r).unwrap().is_empty());
    }

    #[test]
    fn biclique_membership_on_divides() {
        let r = divides_example();
        let b = biclique_complex(&r).unwrap();
        let u = b.universe().clone();
        let f = |labels: &[&str]| u.face_from_labels(labels.iter().copied()).unwrap();
        // {1,2} × {6,8} ⊆ R, so {1,2,6,8} is a biclique.
        assert!(b.contains(f(&["1", "2", "6", "8"])));
        assert!(bicliques(&r).unwrap().contains(&f(&["1", "2", "6", "8"])));
        // {3,4} has no common neighbor: not a face, with or without y's.
        assert!(!b.contains(f(&["3", "4"])));
        for y in ["5", "6", "7", "8"] {
            assert!(!b.contains(f(&["3", "4", y])));
        }
        // A face inside X alone is never a biclique.
        for biclique in bicliques(&r).unwrap() {
            let x_block = Face::all_below(4);
            assert!(!biclique.intersection(x_block).is_empty());
            assert!(!biclique.difference(x_block).is_empty());
        }
    }

    #[test]
    fn biclique_complex_matches_oracle_and_contains_both_sides() {
        let r = divides_example();
        let b = biclique_complex(&r).unwrap();
        assert_eq!(b.faces(), &oracle_biclique_faces(&r));
        assert!(dowker_left(&r).is_subcomplex_of(&b));
        assert!(dowker_right(&r).is_subcomplex_of(&b));
        assert!(b.is_downward_closed());
        assert_eq!(b.face_count(), 56);
    }

    #[test]
    fn complete_relation_gives_full_simplex() {
        let x = Universe::from_labels(["a", "b"]).unwrap();
        let y = Universe::from_labels(["c", "d"]).unwrap();
        let pairs: Vec<(u8, u8)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        let r = Relation::new(x, y, &pairs).unwrap();
        let b = biclique_complex(&r).unwrap();
        assert_eq!(b.face_count(), 16);
        assert!(b.contains(b.universe().full_face()));
    }

    #[test]
    fn non_bipartite_input_is_rejected() {
        let x = Universe::from_labels(["a", "b"]).unwrap();
        let y = Universe::from_labels(["b", "c"]).unwrap();
        let r = Relation::new(x, y, &[(0, 0)]).unwrap();
        assert!(matches!(biclique_complex(&r), Err(Error::NotBipartite { .. })));
        assert!(matches!(bicliques(&r), Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn rectangle_complex_on_divides() {
        let r = divides_example();
        let e = rectangle_complex(&r).unwrap();
        let u = e.universe().clone();
        let f = |labels: &[&str]| u.face_from_labels(labels.iter().copied()).unwrap();
        // {(1,6),(2,8)} projects to {1,2} × {6,8} ⊆ R.
        assert!(e.contains(f(&["(1,6)", "(2,8)"])));
        // {(3,6),(4,8)} needs 3 | 8 and 4 | 6; neither holds.
        assert!(!e.contains(f(&["(3,6)", "(4,8)"])));
        // Every single pair is a 1×1 rectangle.
        for label in u.labels() {
            assert!(e.contains(f(&[label])));
        }
        assert!(e.is_downward_closed());
    }

    #[test]
    fn rectangle_budget_aborts() {
        let r = divides_example();
        assert!(matches!(
            rectangle_complex_with_budget(&r, 3),
            Err(Error::TooManyFaces { cap: 3 })
        ));
    }

    #[test]
    fn induced_maps_of_identity_are_identities() {
        let r = divides_example();
        let id = RelationMorphism::identity(&r);
        let left = id.induced_left_map();
        assert_eq!(left.apply(), dowker_left(&r));
        let right = id.induced_right_map();
        assert_eq!(right.apply(), dowker_right(&r));
    }

    #[test]
    fn disjointify_induces_isomorphisms() {
        let r = divides_example();
        let (tagged, morphism) = r.disjointify();
        let left = morphism.induced_left_map();
        assert!(left.is_isomorphism());
        assert_eq!(left.apply(), dowker_left(&tagged));
        let right = morphism.induced_right_map();
        assert!(right.is_isomorphism());
        let b_map = morphism.induced_biclique_map();
        // Source here is not bipartite? It is: X = digits, Y = digits 5..8,
        // disjoint labels, so the biclique map exists and is injective.
        assert!(b_map.unwrap().is_isomorphism());
    }

    #[test]
    fn induced_maps_respect_composition() {
        let r = divides_example();
        let (tagged, phi) = r.disjointify();
        let (_, psi) = tagged.disjointify();
        let composed = phi.compose(&psi).unwrap();
        assert_eq!(
            composed.induced_left_map(),
            phi.induced_left_map().compose(&psi.induced_left_map()).unwrap()
        );
        assert_eq!(
            composed.induced_right_map(),
            phi.induced_right_map().compose(&psi.induced_right_map()).unwrap()
        );
    }

    #[test]
    fn alpha_identity_morphism_gives_identity_right_map() {
        // The (α, id_Y) morphism between containment relations of two
        // copies of the same complex acts as the identity on C_r.
        let u = Universe::from_labels(["a", "b"]).unwrap();
        let d = SimplicialComplex::closure(u.clone(), &[u.full_face()]);
        let r = containment_relation(&d).unwrap();
        let id = RelationMorphism::identity(&r);
        let right = id.induced_right_map();
        assert_eq!(right.apply(), dowker_right(&r));
        assert!(right
            .label_map()
            .iter()
            .all(|(from, to)| from == to));
    }
}
