//! Property tests driving every construction against brute-force oracles
//! that evaluate the definitions directly.

use std::collections::BTreeSet;

use proptest::prelude::*;

use dowker_core::complex::{Face, SimplicialComplex, SimplicialMap, Universe};
use dowker_core::dowker::{
    biclique_complex, bicliques, dowker_left, dowker_left_with, dowker_right, rectangle_complex,
    DowkerStrategy, Side,
};
use dowker_core::homology::{homology, profiles_equal};
use dowker_core::morse::{
    collapse_sequence, dowker_matching, dowker_matching_with, find_cycle, isomorphic_zigzag,
    verify_certificate, verify_zigzag, C2Status, VertexOrder,
};
use dowker_core::relation::{containment_relation, Relation};

/// A relation described by per-x adjacency rows over labeled universes.
fn relation_from_rows(nx: usize, ny: usize, rows: &[u64]) -> Relation {
    let x = Universe::from_labels((0..nx).map(|i| format!("x{i}"))).unwrap();
    let y = Universe::from_labels((0..ny).map(|j| format!("y{j}"))).unwrap();
    let mut pairs = Vec::new();
    for (i, &row) in rows.iter().enumerate() {
        for j in 0..ny {
            if row & (1 << j) != 0 {
                pairs.push((i as u8, j as u8));
            }
        }
    }
    Relation::new(x, y, &pairs).unwrap()
}

fn arb_relation(max_side: usize) -> impl Strategy<Value = Relation> {
    (0..=max_side, 0..=max_side).prop_flat_map(move |(nx, ny)| {
        proptest::collection::vec(0u64..(1 << ny.max(1)), nx)
            .prop_map(move |rows| relation_from_rows(nx, ny, &rows))
    })
}

fn arb_complex(max_vertices: usize) -> impl Strategy<Value = SimplicialComplex> {
    (0..=max_vertices).prop_flat_map(move |n| {
        proptest::collection::vec(0u64..(1u64 << n.max(1)), 0..=4).prop_map(move |facet_bits| {
            let universe = Universe::from_labels((0..n).map(|i| format!("v{i}"))).unwrap();
            let facets: Vec<Face> = facet_bits
                .into_iter()
                .map(|bits| Face::from_bits(bits & universe.full_face().bits()))
                .collect();
            SimplicialComplex::closure(universe, &facets)
        })
    })
}

/// Direct evaluation of "empty or has a common y-neighbor".
fn oracle_is_left_conic(r: &Relation, u: Face) -> bool {
    u.is_empty()
        || (0..r.y_universe().len() as u8)
            .any(|y| u.indices().all(|x| r.contains_pair(x, y)))
}

fn oracle_dowker_left(r: &Relation) -> BTreeSet<Face> {
    r.full_x().subsets().filter(|&u| oracle_is_left_conic(r, u)).collect()
}

/// Membership in B checked case by case over all subsets of X ∪ Y.
fn oracle_biclique_faces(r: &Relation) -> BTreeSet<Face> {
    let nx = r.x_universe().len() as u8;
    let ny = r.y_universe().len() as u8;
    let x_block = Face::all_below(nx);
    let mut faces = BTreeSet::new();
    for f in Face::all_below(nx + ny).subsets() {
        let u = f.intersection(x_block);
        let v_shifted = Face::from_bits(f.difference(x_block).bits() >> nx);
        let all_related = u
            .indices()
            .all(|x| v_shifted.indices().all(|y| r.contains_pair(x, y)));
        let member = if v_shifted.is_empty() {
            oracle_is_left_conic(r, u)
        } else if u.is_empty() {
            oracle_is_left_conic(&r.transpose(), v_shifted)
        } else {
            all_related
        };
        if member {
            faces.insert(f);
        }
    }
    faces
}

fn oracle_rectangle_faces(r: &Relation) -> BTreeSet<Face> {
    let pairs = r.pairs();
    let mut faces = BTreeSet::new();
    for s in Face::all_below(pairs.len() as u8).subsets() {
        let chosen: Vec<(u8, u8)> = s.indices().map(|k| pairs[k as usize]).collect();
        let proj_x: BTreeSet<u8> = chosen.iter().map(|&(x, _)| x).collect();
        let proj_y: BTreeSet<u8> = chosen.iter().map(|&(_, y)| y).collect();
        if proj_x
            .iter()
            .all(|&x| proj_y.iter().all(|&y| r.contains_pair(x, y)))
        {
            faces.insert(s);
        }
    }
    faces
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn neighbors_characterize_the_lifted_relation(r in arb_relation(6), u_bits: u64, v_bits: u64) {
        let u = Face::from_bits(u_bits & r.full_x().bits());
        let v = Face::from_bits(v_bits & r.full_y().bits());
        let bold = r.bold(u, v).unwrap();
        let yn = r.y_neighbors(u).unwrap();
        let xn = r.x_neighbors(v).unwrap();
        prop_assert_eq!(bold, v.is_subset_of(yn));
        prop_assert_eq!(bold, u.is_subset_of(xn));
    }

    #[test]
    fn y_neighbors_is_antitone(r in arb_relation(6), a_bits: u64, b_bits: u64) {
        let small = Face::from_bits(a_bits & b_bits & r.full_x().bits());
        let large = Face::from_bits((a_bits | b_bits) & r.full_x().bits());
        let n_small = r.y_neighbors(small).unwrap();
        let n_large = r.y_neighbors(large).unwrap();
        prop_assert!(n_large.is_subset_of(n_small));
    }

    #[test]
    fn dowker_complexes_match_the_oracle(r in arb_relation(6)) {
        let cx = dowker_left(&r);
        prop_assert_eq!(cx.faces(), &oracle_dowker_left(&r));
        prop_assert!(cx.is_downward_closed());
        let cy = dowker_right(&r);
        prop_assert_eq!(cy.faces(), &oracle_dowker_left(&r.transpose()));
        let by_facets = dowker_left_with(&r, DowkerStrategy::ClosedMaximalFaces);
        prop_assert_eq!(by_facets.faces(), cx.faces());
    }

    #[test]
    fn disjointify_round_trips(r in arb_relation(6)) {
        let (tagged, morphism) = r.disjointify();
        prop_assert!(tagged.is_bipartite());
        prop_assert_eq!(tagged.pairs(), r.pairs());
        for (xi, yi) in r.pairs() {
            prop_assert!(tagged.contains_pair(morphism.map_x_index(xi), morphism.map_y_index(yi)));
        }
        let left = morphism.induced_left_map();
        prop_assert!(left.is_isomorphism());
        prop_assert_eq!(left.apply().f_vector(), dowker_left(&r).f_vector());
    }

    #[test]
    fn biclique_complex_matches_the_oracle(r in arb_relation(5)) {
        let (tagged, _) = r.disjointify();
        let b = biclique_complex(&tagged).unwrap();
        prop_assert_eq!(b.faces(), &oracle_biclique_faces(&tagged));
        prop_assert!(b.is_downward_closed());
        // The three families overlap only at ∅.
        let cliques = bicliques(&tagged).unwrap();
        let cx = dowker_left(&tagged);
        let cy = dowker_right(&tagged);
        prop_assert_eq!(
            b.face_count(),
            cliques.len() + (cx.face_count() - 1) + (cy.face_count() - 1) + 1
        );
        prop_assert!(cx.is_subcomplex_of(&b));
        prop_assert!(cy.is_subcomplex_of(&b));
        // Subsets of bicliques falling inside one side land in its Dowker
        // complex.
        let nx = tagged.x_universe().len() as u8;
        let x_block = Face::all_below(nx);
        for clique in &cliques {
            for sub in clique.subsets() {
                if sub.difference(x_block).is_empty() {
                    prop_assert!(cx.reindex(b.universe()).unwrap().contains(sub));
                } else if sub.intersection(x_block).is_empty() {
                    prop_assert!(cy.reindex(b.universe()).unwrap().contains(sub));
                }
            }
        }
    }

    #[test]
    fn matched_faces_meet_y_and_have_neighbors(r in arb_relation(5)) {
        let (tagged, _) = r.disjointify();
        let m = dowker_matching(&tagged, Side::Left).unwrap();
        let nx = tagged.x_universe().len() as u8;
        let x_block = Face::all_below(nx);
        for face in m.matching.faces() {
            let y_part = face.difference(x_block);
            prop_assert!(!y_part.is_empty());
            let shifted = Face::from_bits(y_part.bits() >> nx);
            prop_assert!(!r.x_neighbors(shifted).unwrap().is_empty());
        }
        prop_assert_eq!(m.matching.partner(Face::EMPTY), None);
    }

    #[test]
    fn dowker_matching_is_certified_and_acyclic(r in arb_relation(5)) {
        let (tagged, _) = r.disjointify();
        for side in [Side::Left, Side::Right] {
            let m = dowker_matching(&tagged, side).unwrap();
            prop_assert_eq!(&m.c2, &C2Status::Certified);
            prop_assert_eq!(find_cycle(&m.matching), None);
            // The assignment is invariant under the involution.
            for face in m.matching.faces() {
                let partner = m.matching.partner(face).unwrap();
                prop_assert_eq!(m.assignment[&face], m.assignment[&partner]);
            }
        }
    }

    #[test]
    fn certificates_replay_and_remove_exactly_m(r in arb_relation(5)) {
        let (tagged, _) = r.disjointify();
        for side in [Side::Left, Side::Right] {
            let m = dowker_matching(&tagged, side).unwrap();
            let cert = collapse_sequence(&m.complex, &m.target, &m.matching).unwrap();
            prop_assert_eq!(cert.steps().len(), m.matching.len() / 2);
            prop_assert!(verify_certificate(&cert).valid);
            // Replay by hand: the removed faces are exactly M.
            let mut current = m.complex.faces().clone();
            for &(tau, sigma) in cert.steps() {
                prop_assert!(current.remove(&tau));
                prop_assert!(current.remove(&sigma));
            }
            prop_assert_eq!(&current, m.target.faces());
        }
    }

    #[test]
    fn containment_relation_recovers_the_complex(d in arb_complex(5)) {
        prop_assume!(!d.is_void());
        let r = containment_relation(&d).unwrap();
        let recovered = dowker_left(&r);
        prop_assert!(recovered.same_faces(&d));
    }

    #[test]
    fn relabeling_preserves_f_vectors(d in arb_complex(5), seed in 0u64..1024) {
        prop_assume!(!d.is_void());
        let n = d.universe().len();
        // A deterministic permutation derived from the seed.
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let target = Universe::from_labels((0..n).map(|i| format!("q{i}"))).unwrap();
        let map: std::collections::BTreeMap<String, String> = (0..n)
            .map(|i| (format!("v{i}"), format!("q{}", order[i])))
            .collect();
        let facets: Vec<Face> = d
            .facets()
            .iter()
            .map(|f| Face::from_indices(f.indices().map(|i| order[i as usize] as u8)))
            .collect();
        let d2 = SimplicialComplex::closure(target, &facets);
        prop_assume!(!d2.is_void());
        let ground = d.minimal_ground_set();
        let restricted: std::collections::BTreeMap<String, String> = map
            .into_iter()
            .filter(|(k, _)| ground.indices().any(|i| d.universe().label(i) == k))
            .collect();
        let m = SimplicialMap::new(d.clone(), d2.clone(), &restricted).unwrap();
        prop_assert!(m.is_isomorphism());
        prop_assert_eq!(m.apply().f_vector(), d.f_vector());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homology_profiles_agree_across_the_complexes(r in arb_relation(4)) {
        let (tagged, _) = r.disjointify();
        let cx = dowker_left(&tagged);
        let cy = dowker_right(&tagged);
        let b = biclique_complex(&tagged).unwrap();
        let hx = homology(&cx).unwrap();
        let hy = homology(&cy).unwrap();
        let hb = homology(&b).unwrap();
        prop_assert!(profiles_equal(&hx, &hy));
        prop_assert!(profiles_equal(&hx, &hb));
        prop_assert_eq!(hx.euler, cx.euler_characteristic());
        prop_assert_eq!(hb.euler, b.euler_characteristic());
        if tagged.pair_count() <= 12 {
            let e = rectangle_complex(&tagged).unwrap();
            prop_assert_eq!(e.faces(), &oracle_rectangle_faces(&tagged));
            prop_assert!(e.is_downward_closed());
            let he = homology(&e).unwrap();
            prop_assert!(profiles_equal(&hx, &he));
        }
    }

    #[test]
    fn order_permutations_never_change_the_verdict(r in arb_relation(4), seed in 0u64..1 << 20) {
        let (tagged, _) = r.disjointify();
        let combined = match tagged.combined_universe() {
            Ok(u) => u,
            Err(_) => unreachable!("disjointified relations are bipartite"),
        };
        let n = combined.len();
        let mut labels: Vec<String> = combined.labels().to_vec();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            labels.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let order = VertexOrder::from_labels(&combined, &labels).unwrap();
        let base = dowker_matching(&tagged, Side::Left).unwrap();
        let permuted = dowker_matching_with(&tagged, Side::Left, &order, true).unwrap();
        prop_assert_eq!(&permuted.c2, &C2Status::Certified);
        prop_assert_eq!(find_cycle(&permuted.matching), None);
        let cert = collapse_sequence(&permuted.complex, &permuted.target, &permuted.matching).unwrap();
        prop_assert!(verify_certificate(&cert).valid);
        prop_assert!(cert.from_complex().same_faces(&base.complex));
        prop_assert!(cert.to_complex().same_faces(&base.target));
    }

    #[test]
    fn dowker_zigzag_is_valid(r in arb_relation(4)) {
        let zigzag = dowker_core::morse::dowker_zigzag(&r).unwrap();
        prop_assert_eq!(verify_zigzag(&zigzag), Ok(()));
        prop_assert!(zigzag.nodes[0].same_faces(&dowker_left(&r)));
        prop_assert!(zigzag.nodes[4].same_faces(&dowker_right(&r)));
    }

    #[test]
    fn isomorphic_zigzags_are_valid(d in arb_complex(4), seed in 0u64..1024) {
        prop_assume!(!d.is_void());
        let n = d.universe().len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed.wrapping_add(7);
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let target = Universe::from_labels((0..n).map(|i| format!("q{i}"))).unwrap();
        let facets: Vec<Face> = d
            .facets()
            .iter()
            .map(|f| Face::from_indices(f.indices().map(|i| order[i as usize] as u8)))
            .collect();
        let d2 = SimplicialComplex::closure(target, &facets);
        let ground = d.minimal_ground_set();
        let alpha: std::collections::BTreeMap<String, String> = ground
            .indices()
            .map(|i| (d.universe().label(i).to_string(), format!("q{}", order[i as usize])))
            .collect();
        let zigzag = isomorphic_zigzag(&d, &d2, &alpha).unwrap();
        prop_assert_eq!(verify_zigzag(&zigzag), Ok(()));
        prop_assert!(zigzag.nodes[0].same_faces(&d));
        prop_assert!(zigzag.nodes[4].same_faces(&d2));
        // Homology is carried across the whole zigzag.
        let h0 = homology(&zigzag.nodes[0]).unwrap();
        for node in &zigzag.nodes[1..] {
            prop_assert!(profiles_equal(&h0, &homology(node).unwrap()));
        }
    }
}
