//! Acyclic matchings and simplicial collapse certificates.
//!
//! A matching pairs faces with covers or cocovers; when it is acyclic and
//! covers exactly `Δ \ Γ`, the matched pairs can be ordered into a sequence
//! of elementary collapses taking `Δ` down to `Γ`. The certificate encodes
//! that order explicitly and [`verify_certificate`] replays it without
//! trusting the extraction, so the two sides check each other.
//!
//! The matching used for the Dowker complexes assigns to every face of
//! `B \ C_X` the largest common x-neighbor of its y-part and toggles that
//! vertex; the pairing construction [`pairing_matching`] turns any such
//! assignment satisfying conditions C1 (partner closure) and C2 (antitone
//! on nested faces) into a matching that is provably acyclic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::complex::{is_cover, Face, SimplicialComplex, SimplicialMap, Universe};
use crate::dowker::{biclique_complex, dowker_left, dowker_right, Side};
use crate::error::{Error, Result};
use crate::relation::{containment_relation, face_label, Relation, FACE_LABEL_PREFIX};

/// A partial matching `(M, μ)` on a complex: a fixed-point-free involution
/// on a face subset pairing each face with a cover or a cocover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    complex: SimplicialComplex,
    mu: BTreeMap<Face, Face>,
}

impl Matching {
    /// Validates the matching axioms: `μ∘μ = id`, no fixed points, every
    /// pair cover-related, every face in the complex.
    pub fn new(complex: SimplicialComplex, mu: BTreeMap<Face, Face>) -> Result<Self> {
        for (&face, &partner) in &mu {
            if !complex.contains(face) || !complex.contains(partner) {
                return Err(Error::InvalidMatching {
                    reason: alloc::format!(
                        "face {} is not in the complex",
                        complex.universe().render_face(if complex.contains(face) {
                            partner
                        } else {
                            face
                        })
                    ),
                });
            }
            if face == partner {
                return Err(Error::InvalidMatching {
                    reason: alloc::format!(
                        "fixed point at {}",
                        complex.universe().render_face(face)
                    ),
                });
            }
            if !is_cover(face, partner) && !is_cover(partner, face) {
                return Err(Error::InvalidMatching {
                    reason: alloc::format!(
                        "{} and {} are not a cover pair",
                        complex.universe().render_face(face),
                        complex.universe().render_face(partner)
                    ),
                });
            }
            if mu.get(&partner) != Some(&face) {
                return Err(Error::InvalidMatching {
                    reason: alloc::format!(
                        "not an involution at {}",
                        complex.universe().render_face(face)
                    ),
                });
            }
        }
        Ok(Matching { complex, mu })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// The matched face set `M`.
    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.mu.keys().copied()
    }

    pub fn face_set(&self) -> BTreeSet<Face> {
        self.mu.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn partner(&self, face: Face) -> Option<Face> {
        self.mu.get(&face).copied()
    }

    /// Whether `face` is the upper face of its pair.
    pub fn is_upper(&self, face: Face) -> bool {
        matches!(self.mu.get(&face), Some(p) if p.cardinality() < face.cardinality())
    }

    /// The matched pairs as `(lower, upper)` with lower ≺ upper, in face
    /// order of the upper face.
    pub fn cover_pairs(&self) -> Vec<(Face, Face)> {
        self.mu
            .iter()
            .filter(|(f, p)| p.cardinality() < f.cardinality())
            .map(|(&f, &p)| (p, f))
            .collect()
    }
}

/// Dense index over the matched faces of one matching: faces sorted by
/// raw bits, partners and successor probes resolved by binary search.
/// This keeps the cycle search and the collapse extraction allocation-lean
/// on matchings with hundreds of thousands of faces.
struct MatchedIndex {
    bits: Vec<u64>,
    partner: Vec<u32>,
}

impl MatchedIndex {
    fn new(matching: &Matching) -> Self {
        let mut bits: Vec<u64> = matching.mu.keys().map(|f| f.bits()).collect();
        bits.sort_unstable();
        let partner = bits
            .iter()
            .map(|&b| {
                let p = matching.mu[&Face::from_bits(b)];
                bits.binary_search(&p.bits()).expect("partners are matched faces") as u32
            })
            .collect();
        MatchedIndex { bits, partner }
    }

    fn len(&self) -> usize {
        self.bits.len()
    }

    fn face(&self, i: usize) -> Face {
        Face::from_bits(self.bits[i])
    }

    fn position(&self, face: Face) -> Option<usize> {
        self.bits.binary_search(&face.bits()).ok()
    }

    fn is_upper(&self, i: usize) -> bool {
        self.bits[i].count_ones() > self.bits[self.partner[i] as usize].count_ones()
    }

    /// Successor upper faces of upper face `i` in the matching digraph:
    /// every upper `h ≠ face(i)` with `μ(face(i)) ≺ h`.
    fn successors(&self, universe_size: u8, i: usize, out: &mut Vec<u32>) {
        out.clear();
        let lower = self.bits[self.partner[i] as usize];
        for w in 0..universe_size {
            if lower & (1 << w) != 0 {
                continue;
            }
            let h = lower | (1 << w);
            if h == self.bits[i] {
                continue;
            }
            if let Ok(j) = self.bits.binary_search(&h) {
                if self.is_upper(j) {
                    out.push(j as u32);
                }
            }
        }
    }
}

/// Searches the matching digraph on upper faces for a directed cycle,
/// which is exactly a cycle `F_1 ≻ μ(F_1) ≺ F_2 ≻ … ≺ F_1` of the
/// matching. Returns the upper faces of one cycle, or `None` when the
/// matching is acyclic.
///
/// Iterative depth-first search with explicit stack and three-color
/// marking; recursion depth must not bind on large matchings.
pub fn find_cycle(matching: &Matching) -> Option<Vec<Face>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let index = MatchedIndex::new(matching);
    let universe_size = matching.complex().universe().len() as u8;
    let mut colors = alloc::vec![WHITE; index.len()];
    let mut scratch = Vec::new();
    for root in 0..index.len() {
        if colors[root] != WHITE || !index.is_upper(root) {
            continue;
        }
        let mut path: Vec<(u32, Vec<u32>)> = Vec::new();
        colors[root] = GRAY;
        index.successors(universe_size, root, &mut scratch);
        path.push((root as u32, scratch.clone()));
        while let Some((_, pending)) = path.last_mut() {
            match pending.pop() {
                Some(next) => match colors[next as usize] {
                    GRAY => {
                        let start = path
                            .iter()
                            .position(|(f, _)| *f == next)
                            .expect("gray nodes lie on the current path");
                        return Some(
                            path[start..].iter().map(|(f, _)| index.face(*f as usize)).collect(),
                        );
                    }
                    BLACK => {}
                    _ => {
                        colors[next as usize] = GRAY;
                        index.successors(universe_size, next as usize, &mut scratch);
                        path.push((next, scratch.clone()));
                    }
                },
                None => {
                    let (done, _) = path.pop().expect("stack is nonempty");
                    colors[done as usize] = BLACK;
                }
            }
        }
    }
    None
}

/// A total order on the vertices of one universe, as a rank per index.
/// Declaration order is the default; any permutation may be supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    rank: Vec<u8>,
}

impl VertexOrder {
    /// Declaration order: rank equals index.
    pub fn declaration(universe_size: usize) -> Self {
        VertexOrder { rank: (0..universe_size as u8).collect() }
    }

    /// Builds the order from a permutation of the universe's labels.
    pub fn from_labels(universe: &Universe, labels: &[String]) -> Result<Self> {
        if labels.len() != universe.len() {
            return Err(Error::NotPermutation {
                label: alloc::format!("expected {} labels, got {}", universe.len(), labels.len()),
            });
        }
        let mut rank = alloc::vec![u8::MAX; universe.len()];
        for (position, label) in labels.iter().enumerate() {
            let index = universe
                .index_of(label)
                .ok_or_else(|| Error::NotPermutation { label: label.clone() })?;
            if rank[index as usize] != u8::MAX {
                return Err(Error::NotPermutation { label: label.clone() });
            }
            rank[index as usize] = position as u8;
        }
        Ok(VertexOrder { rank })
    }

    pub fn rank_of(&self, index: u8) -> u8 {
        self.rank[index as usize]
    }

    /// The largest vertex of a nonempty mask under this order.
    pub fn max_in(&self, mask: u64) -> Option<u8> {
        Face::from_bits(mask).indices().max_by_key(|&i| self.rank_of(i))
    }
}

/// Outcome of the C2 (antitone) check of the pairing construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum C2Status {
    /// C2 verified exhaustively; the matching is certified acyclic.
    Certified,
    /// C2 failed on the given nested pair; the matching is still valid but
    /// acyclicity is not certified.
    Violated { inner: Face, outer: Face },
    /// C2 was not checked.
    Unchecked,
}

/// A matching produced by the pairing construction, with its C2 verdict.
#[derive(Debug, Clone)]
pub struct PairingOutcome {
    pub matching: Matching,
    pub c2: C2Status,
}

/// The pairing construction: given `f : M → W` with condition C1 — for
/// every `F ∈ M`, both `F ∪ {f(F)}` and `F \ {f(F)}` lie in `M` and `f`
/// agrees on all three — the toggle `μ(F) = F Δ {f(F)}` is a matching on
/// the complex. C1 is checked exhaustively and a violation is an error
/// naming the face. If condition C2 — `G ⊆ F` in `M` implies
/// `f(F) ≤ f(G)` — is requested and holds, the matching is certified
/// acyclic; a C2 failure only flags the outcome.
pub fn pairing_matching(
    complex: &SimplicialComplex,
    m: &BTreeSet<Face>,
    assignment: &BTreeMap<Face, u8>,
    order: &VertexOrder,
    check_c2: bool,
) -> Result<PairingOutcome> {
    let mut mu = BTreeMap::new();
    for &face in m {
        let &v = assignment.get(&face).ok_or_else(|| Error::PairingC1 {
            face: complex.universe().render_face(face),
        })?;
        let up = face.with(v);
        let down = face.without(v);
        let c1_holds = m.contains(&up)
            && m.contains(&down)
            && assignment.get(&up) == Some(&v)
            && assignment.get(&down) == Some(&v);
        if !c1_holds {
            return Err(Error::PairingC1 { face: complex.universe().render_face(face) });
        }
        mu.insert(face, if face.contains(v) { down } else { up });
    }
    let matching = Matching::new(complex.clone(), mu)?;
    let c2 = if check_c2 { verify_c2(m, assignment, order) } else { C2Status::Unchecked };
    Ok(PairingOutcome { matching, c2 })
}

/// Exhaustive check of condition C2: every nested pair `G ⊆ F` in `M`
/// satisfies `f(F) ≤ f(G)` under the given order. Quadratic in `|M|`.
pub fn verify_c2(
    m: &BTreeSet<Face>,
    assignment: &BTreeMap<Face, u8>,
    order: &VertexOrder,
) -> C2Status {
    let entries: Vec<(Face, u8)> = m.iter().map(|&f| (f, assignment[&f])).collect();
    for &(outer, f_outer) in &entries {
        for &(inner, f_inner) in &entries {
            if inner.is_subset_of(outer) && order.rank_of(f_outer) > order.rank_of(f_inner) {
                return C2Status::Violated { inner, outer };
            }
        }
    }
    C2Status::Certified
}

/// The Dowker matching on the biclique complex, with everything a collapse
/// needs: the complex `B`, the target Dowker complex embedded in `B`'s
/// universe, the matching on `B \ C`, and the largest-neighbor assignment.
#[derive(Debug, Clone)]
pub struct DowkerMatching {
    pub side: Side,
    pub complex: SimplicialComplex,
    pub target: SimplicialComplex,
    pub matching: Matching,
    pub assignment: BTreeMap<Face, u8>,
    pub c2: C2Status,
}

/// Builds the matching on `B \ C_X` (side left) or `B \ C_Y` (side right)
/// under declaration order, with the C2 certificate checked.
pub fn dowker_matching(r: &Relation, side: Side) -> Result<DowkerMatching> {
    let universe_size = r.x_universe().len() + r.y_universe().len();
    dowker_matching_with(r, side, &VertexOrder::declaration(universe_size), true)
}

/// [`dowker_matching`] under an explicit total order on `X ∪ Y`.
///
/// For side left, `M = B \ C_X` and the assignment sends `F` to the
/// largest x-neighbor of `F ∩ Y`; the theory guarantees C1 and C2, so the
/// matching is acyclic under every total order. The C1 check always runs;
/// the quadratic C2 check runs only when requested.
pub fn dowker_matching_with(
    r: &Relation,
    side: Side,
    order: &VertexOrder,
    check_c2: bool,
) -> Result<DowkerMatching> {
    dowker_matching_on(biclique_complex(r)?, r, side, order, check_c2)
}

/// [`dowker_matching_with`] on a biclique complex built beforehand, so the
/// two sides of one relation can share it.
pub fn dowker_matching_on(
    complex: SimplicialComplex,
    r: &Relation,
    side: Side,
    order: &VertexOrder,
    check_c2: bool,
) -> Result<DowkerMatching> {
    let nx = r.x_universe().len() as u8;
    let x_block = Face::all_below(nx);
    let raw_target = match side {
        Side::Left => dowker_left(r),
        Side::Right => dowker_right(r),
    };
    let target = raw_target.reindex(complex.universe())?;
    let m: BTreeSet<Face> =
        complex.faces().iter().copied().filter(|f| !target.contains(*f)).collect();
    let mut assignment = BTreeMap::new();
    for &face in &m {
        let vertex = match side {
            Side::Left => {
                let y_part = face.difference(x_block).bits() >> nx;
                let neighbors = r.x_neighbor_mask(y_part);
                debug_assert!(neighbors != 0, "faces of B \\ C_X have an x-neighbor");
                order.max_in(neighbors)
            }
            Side::Right => {
                let x_part = face.intersection(x_block).bits();
                let neighbors = r.y_neighbor_mask(x_part);
                debug_assert!(neighbors != 0, "faces of B \\ C_Y have a y-neighbor");
                order.max_in(neighbors << nx)
            }
        }
        .expect("neighbor set is nonempty");
        assignment.insert(face, vertex);
    }
    let outcome = pairing_matching(&complex, &m, &assignment, order, check_c2)?;
    Ok(DowkerMatching {
        side,
        complex,
        target,
        matching: outcome.matching,
        assignment,
        c2: outcome.c2,
    })
}

/// An ordered list of elementary collapses from one complex down to a
/// subcomplex. Steps are `(τ, σ)` cover pairs over the universe of the
/// starting complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseCertificate {
    from: SimplicialComplex,
    to: SimplicialComplex,
    steps: Vec<(Face, Face)>,
}

impl CollapseCertificate {
    /// Wraps externally supplied data; replay validity is checked by
    /// [`verify_certificate`], not here.
    pub fn from_parts(
        from: SimplicialComplex,
        to: SimplicialComplex,
        steps: Vec<(Face, Face)>,
    ) -> Self {
        CollapseCertificate { from, to, steps }
    }

    pub fn from_complex(&self) -> &SimplicialComplex {
        &self.from
    }

    pub fn to_complex(&self) -> &SimplicialComplex {
        &self.to
    }

    pub fn steps(&self) -> &[(Face, Face)] {
        &self.steps
    }
}

/// Extracts a collapse certificate from an acyclic matching with
/// `M = Δ \ Γ`.
///
/// Pairs are emitted in reverse topological order of the digraph on upper
/// faces (ties broken by descending upper-face cardinality, then
/// lexicographic face order). Edges of that digraph only connect upper
/// faces of equal cardinality, so the emission is dimension-descending;
/// when a pair `(τ, σ)` is emitted, every higher pair and every upper face
/// covering `τ` is already gone, which is exactly the free-face condition
/// the replay checks.
pub fn collapse_sequence(
    d: &SimplicialComplex,
    g: &SimplicialComplex,
    matching: &Matching,
) -> Result<CollapseCertificate> {
    if matching.complex() != d {
        return Err(Error::InvalidMatching {
            reason: String::from("matching does not live on the starting complex"),
        });
    }
    let embedded = g
        .reindex(d.universe())
        .map_err(|_| Error::NotSubcomplex { face: first_foreign_face(g, d) })?;
    if let Some(&face) = embedded.faces().iter().find(|f| !d.contains(**f)) {
        return Err(Error::NotSubcomplex { face: d.universe().render_face(face) });
    }
    // M must be exactly Δ \ Γ. Matched faces lie in Δ by construction, so
    // checking every face of Δ covers both inclusions.
    for &face in d.faces() {
        let in_difference = !embedded.contains(face);
        let in_matching = matching.partner(face).is_some();
        if in_difference != in_matching {
            return Err(Error::MatchingScopeMismatch {
                face: d.universe().render_face(face),
                missing_from: if in_difference { "matching" } else { "face difference" },
            });
        }
    }
    if let Some(cycle) = find_cycle(matching) {
        return Err(Error::CyclicMatching {
            cycle: cycle.iter().map(|&f| d.universe().render_face(f)).collect(),
        });
    }

    let universe_size = d.universe().len() as u8;
    let index = MatchedIndex::new(matching);
    let mut out_degree = alloc::vec![0u32; index.len()];
    let mut upper_count = 0usize;
    let mut scratch = Vec::new();
    for i in 0..index.len() {
        if index.is_upper(i) {
            upper_count += 1;
            index.successors(universe_size, i, &mut scratch);
            out_degree[i] = scratch.len() as u32;
        }
    }
    // Ready set keyed by (descending cardinality, lexicographic face).
    let mut ready: BTreeSet<(Reverse<usize>, Face)> = (0..index.len())
        .filter(|&i| index.is_upper(i) && out_degree[i] == 0)
        .map(|i| {
            let f = index.face(i);
            (Reverse(f.cardinality()), f)
        })
        .collect();
    let mut steps = Vec::with_capacity(upper_count);
    while let Some(&(key, sigma)) = ready.iter().next() {
        ready.remove(&(key, sigma));
        let si = index.position(sigma).expect("ready faces are matched");
        let tau = index.face(index.partner[si] as usize);
        steps.push((tau, sigma));
        // σ leaves the digraph: predecessors are the partners of the lower
        // faces covered by σ.
        for w in sigma.indices() {
            let lower = sigma.without(w);
            if let Some(li) = index.position(lower) {
                let pred = index.partner[li] as usize;
                if pred != si && index.is_upper(pred) {
                    out_degree[pred] -= 1;
                    if out_degree[pred] == 0 {
                        let f = index.face(pred);
                        ready.insert((Reverse(f.cardinality()), f));
                    }
                }
            }
        }
    }
    assert_eq!(steps.len(), upper_count, "acyclic digraph always drains");
    Ok(CollapseCertificate { from: d.clone(), to: g.clone(), steps })
}

fn first_foreign_face(g: &SimplicialComplex, d: &SimplicialComplex) -> String {
    for &face in g.faces() {
        if face
            .indices()
            .any(|i| d.universe().index_of(g.universe().label(i)).is_none())
        {
            return g.universe().render_face(face);
        }
    }
    String::from("{}")
}

/// Why a certificate replay failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayFailure {
    Step { index: usize, reason: StepReason },
    FinalMismatch { face: String, missing_from: &'static str },
    ForeignTarget { label: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepReason {
    NotCoverPair,
    TauAbsent,
    SigmaAbsent,
    SigmaNotMaximal,
    TauNotFree,
}

impl fmt::Display for StepReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepReason::NotCoverPair => write!(f, "not a cover pair"),
            StepReason::TauAbsent => write!(f, "tau is not in the current complex"),
            StepReason::SigmaAbsent => write!(f, "sigma is not in the current complex"),
            StepReason::SigmaNotMaximal => write!(f, "sigma is not maximal"),
            StepReason::TauNotFree => write!(f, "tau has a coface other than sigma"),
        }
    }
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayFailure::Step { index, reason } => write!(f, "step {index}: {reason}"),
            ReplayFailure::FinalMismatch { face, missing_from } => {
                write!(f, "final complex mismatch: {face} missing from {missing_from}")
            }
            ReplayFailure::ForeignTarget { label } => {
                write!(f, "target complex uses label {label:?} unknown to the starting complex")
            }
        }
    }
}

/// Verdict of a certificate replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub valid: bool,
    pub failure: Option<ReplayFailure>,
}

impl ReplayReport {
    fn ok() -> Self {
        ReplayReport { valid: true, failure: None }
    }

    fn fail(failure: ReplayFailure) -> Self {
        ReplayReport { valid: false, failure: Some(failure) }
    }
}

/// Replays a certificate step by step.
///
/// Each step must remove a free pair: `τ ≺ σ`, both present, `σ` maximal
/// in the current complex, and `σ` the only coface of `τ`. The remaining
/// family after the last step must equal the target complex face-for-face.
/// Failure reports the first offending step and reason.
pub fn verify_certificate(certificate: &CollapseCertificate) -> ReplayReport {
    let universe = certificate.from.universe();
    let universe_size = universe.len() as u8;
    let target = match certificate.to.reindex(universe) {
        Ok(t) => t,
        Err(Error::UnknownLabel { label }) => {
            return ReplayReport::fail(ReplayFailure::ForeignTarget { label })
        }
        Err(_) => unreachable!("reindex only fails on unknown labels"),
    };
    // Dense alive table over the faces of the starting complex.
    let bits: Vec<u64> = certificate.from.faces().iter().map(|f| f.bits()).collect();
    let mut sorted = bits;
    sorted.sort_unstable();
    let position = |f: Face| sorted.binary_search(&f.bits()).ok();
    let mut alive = alloc::vec![true; sorted.len()];
    let live = |alive: &[bool], f: Face| position(f).map(|i| alive[i]).unwrap_or(false);
    for (index, &(tau, sigma)) in certificate.steps.iter().enumerate() {
        let step = |reason| ReplayReport::fail(ReplayFailure::Step { index, reason });
        if !is_cover(tau, sigma) {
            return step(StepReason::NotCoverPair);
        }
        if !live(&alive, sigma) {
            return step(StepReason::SigmaAbsent);
        }
        if !live(&alive, tau) {
            return step(StepReason::TauAbsent);
        }
        // The current family stays downward closed along a valid replay, so
        // cover-cofaces decide maximality and freeness.
        for w in 0..universe_size {
            if !sigma.contains(w) && live(&alive, sigma.with(w)) {
                return step(StepReason::SigmaNotMaximal);
            }
        }
        for w in 0..universe_size {
            if !tau.contains(w) {
                let coface = tau.with(w);
                if coface != sigma && live(&alive, coface) {
                    return step(StepReason::TauNotFree);
                }
            }
        }
        alive[position(tau).expect("tau is alive")] = false;
        alive[position(sigma).expect("sigma is alive")] = false;
    }
    for (i, &b) in sorted.iter().enumerate() {
        let face = Face::from_bits(b);
        if alive[i] && !target.contains(face) {
            return ReplayReport::fail(ReplayFailure::FinalMismatch {
                face: universe.render_face(face),
                missing_from: "target",
            });
        }
    }
    for &face in target.faces() {
        if !live(&alive, face) {
            return ReplayReport::fail(ReplayFailure::FinalMismatch {
                face: universe.render_face(face),
                missing_from: "replayed remainder",
            });
        }
    }
    ReplayReport::ok()
}

/// Direction of a collapse arrow between adjacent zigzag nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowDirection {
    /// The certificate collapses `nodes[i+1]` onto `nodes[i]`.
    Leftward,
    /// The certificate collapses `nodes[i]` onto `nodes[i+1]`.
    Rightward,
}

/// One arrow of a zigzag: either a collapse certificate or a relabeling
/// isomorphism.
///
/// Relabelings are kept as a distinguished arrow kind because the
/// simple-homotopy calculus composes collapses only; a relabel arrow can
/// be expanded into four genuine collapse arrows on demand with
/// [`expand_relabels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZigzagArrow {
    Collapse { direction: ArrowDirection, certificate: CollapseCertificate },
    /// Vertex bijection sending `nodes[i]` onto `nodes[i+1]`.
    Relabel { map: BTreeMap<String, String> },
}

/// A chain of complexes connected by collapses (in either direction) and
/// relabeling isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zigzag {
    pub nodes: Vec<SimplicialComplex>,
    pub arrows: Vec<ZigzagArrow>,
}

/// The simple-homotopy chain `C_X ~ C_X̃ ← B(R̃) → C_Ỹ ~ C_Y` for an
/// arbitrary relation: disjointify, collapse the biclique complex both
/// ways, and record the two retaggings as relabel arrows.
pub fn dowker_zigzag(r: &Relation) -> Result<Zigzag> {
    let (tagged, morphism) = r.disjointify();
    let order = VertexOrder::declaration(tagged.x_universe().len() + tagged.y_universe().len());
    let b = biclique_complex(&tagged)?;
    let left = dowker_matching_on(b.clone(), &tagged, Side::Left, &order, false)?;
    let right = dowker_matching_on(b, &tagged, Side::Right, &order, false)?;
    let cert_left = collapse_sequence(&left.complex, &left.target, &left.matching)?;
    let cert_right = collapse_sequence(&right.complex, &right.target, &right.matching)?;
    let nodes = alloc::vec![
        dowker_left(r),
        left.target.clone(),
        left.complex.clone(),
        right.target.clone(),
        dowker_right(r),
    ];
    let untag_right: BTreeMap<String, String> =
        morphism.right_label_map().into_iter().map(|(from, to)| (to, from)).collect();
    let arrows = alloc::vec![
        ZigzagArrow::Relabel { map: morphism.left_label_map() },
        ZigzagArrow::Collapse { direction: ArrowDirection::Leftward, certificate: cert_left },
        ZigzagArrow::Collapse { direction: ArrowDirection::Rightward, certificate: cert_right },
        ZigzagArrow::Relabel { map: untag_right },
    ];
    Ok(Zigzag { nodes, arrows })
}

/// A zigzag of genuine collapses between two isomorphic complexes:
/// `Δ ← B(R) → C_r(R) = C_r(R′) ← B(R′) → Δ′` where `R` is the containment
/// relation of `Δ` and `R′` the same relation with vertices pushed through
/// the isomorphism.
pub fn isomorphic_zigzag(
    d: &SimplicialComplex,
    d2: &SimplicialComplex,
    alpha: &BTreeMap<String, String>,
) -> Result<Zigzag> {
    if d.is_void() || d2.is_void() {
        return Err(Error::VoidComplex);
    }
    let alpha_map = SimplicialMap::new(d.clone(), d2.clone(), alpha)?;
    ensure_isomorphism(&alpha_map)?;

    let r = containment_relation(d)?;
    let r2 = relabeled_containment(d, d2, &alpha_map)?;
    debug_assert_eq!(r.y_universe(), r2.y_universe());

    let order = VertexOrder::declaration(r.x_universe().len() + r.y_universe().len());
    let b1 = biclique_complex(&r)?;
    let left1 = dowker_matching_on(b1.clone(), &r, Side::Left, &order, false)?;
    let right1 = dowker_matching_on(b1, &r, Side::Right, &order, false)?;
    let order2 = VertexOrder::declaration(r2.x_universe().len() + r2.y_universe().len());
    let b2 = biclique_complex(&r2)?;
    let left2 = dowker_matching_on(b2.clone(), &r2, Side::Left, &order2, false)?;
    let right2 = dowker_matching_on(b2, &r2, Side::Right, &order2, false)?;

    // C_l of a containment relation recovers the complex face-for-face,
    // and the right complexes of R and R′ coincide outright.
    assert!(left1.target.same_faces(d), "containment left complex equals the input");
    assert!(left2.target.same_faces(d2), "containment left complex equals the image");
    assert!(right1.target.same_faces(&right2.target), "right complexes of R and R' agree");

    let cert1 = collapse_sequence(&left1.complex, &left1.target, &left1.matching)?;
    let cert2 = collapse_sequence(&right1.complex, &right1.target, &right1.matching)?;
    let cert3 = collapse_sequence(&right2.complex, &right2.target, &right2.matching)?;
    let cert4 = collapse_sequence(&left2.complex, &left2.target, &left2.matching)?;

    let nodes = alloc::vec![
        d.clone(),
        left1.complex.clone(),
        right1.target.clone(),
        left2.complex.clone(),
        d2.clone(),
    ];
    let arrows = alloc::vec![
        ZigzagArrow::Collapse { direction: ArrowDirection::Leftward, certificate: cert1 },
        ZigzagArrow::Collapse { direction: ArrowDirection::Rightward, certificate: cert2 },
        ZigzagArrow::Collapse { direction: ArrowDirection::Leftward, certificate: cert3 },
        ZigzagArrow::Collapse { direction: ArrowDirection::Rightward, certificate: cert4 },
    ];
    Ok(Zigzag { nodes, arrows })
}

fn ensure_isomorphism(map: &SimplicialMap) -> Result<()> {
    if map.is_isomorphism() {
        return Ok(());
    }
    // Produce one offending face for the diagnosis.
    let mut seen: BTreeMap<u8, u8> = BTreeMap::new();
    for i in map.source().minimal_ground_set().indices() {
        let j = map.image_of(Face::singleton(i)).min_index().expect("image of a vertex");
        if seen.insert(j, i).is_some() {
            return Err(Error::NotIsomorphism {
                face: map.target().universe().render_face(Face::singleton(j)),
            });
        }
    }
    for j in map.target().minimal_ground_set().indices() {
        if !seen.contains_key(&j) {
            return Err(Error::NotIsomorphism {
                face: map.target().universe().render_face(Face::singleton(j)),
            });
        }
    }
    for &face in map.target().faces() {
        let preimage = Face::from_indices(face.indices().map(|j| seen[&j]));
        if !map.source().contains(preimage) {
            return Err(Error::NotIsomorphism { face: map.target().universe().render_face(face) });
        }
    }
    Err(Error::NotIsomorphism { face: String::from("{}") })
}

/// The containment relation of `d` with x-vertices pushed through `alpha`,
/// keeping the fresh y-labels derived from `d`'s faces.
fn relabeled_containment(
    d: &SimplicialComplex,
    d2: &SimplicialComplex,
    alpha_map: &SimplicialMap,
) -> Result<Relation> {
    let ground2 = d2.minimal_ground_set();
    for i in ground2.indices() {
        let label = d2.universe().label(i);
        if label.starts_with(FACE_LABEL_PREFIX) {
            return Err(Error::ReservedLabelPrefix { label: label.into() });
        }
    }
    let x2 = Universe::new(d2.universe().labels_of(ground2))?;
    let y_labels: Vec<String> =
        d.faces().iter().map(|&f| face_label(d.universe(), f)).collect();
    let y = Universe::new(y_labels)?;
    let mut pairs = Vec::new();
    for (fi, &face) in d.faces().iter().enumerate() {
        for i in face.indices() {
            let image = alpha_map.image_of(Face::singleton(i)).min_index().expect("vertex image");
            let x_index = x2
                .index_of(d2.universe().label(image))
                .expect("image vertices lie in the ground set of d2");
            pairs.push((x_index, fi as u8));
        }
    }
    Relation::new(x2, y, &pairs)
}

/// Checks a zigzag end to end: arrow endpoints match their adjacent nodes,
/// every collapse certificate replays, and every relabel arrow is a
/// genuine isomorphism onto the next node.
pub fn verify_zigzag(zigzag: &Zigzag) -> core::result::Result<(), String> {
    if zigzag.nodes.len() != zigzag.arrows.len() + 1 {
        return Err(String::from("node/arrow count mismatch"));
    }
    for (i, arrow) in zigzag.arrows.iter().enumerate() {
        let left = &zigzag.nodes[i];
        let right = &zigzag.nodes[i + 1];
        match arrow {
            ZigzagArrow::Collapse { direction, certificate } => {
                let (from, to) = match direction {
                    ArrowDirection::Leftward => (right, left),
                    ArrowDirection::Rightward => (left, right),
                };
                if !certificate.from_complex().same_faces(from) {
                    return Err(alloc::format!("arrow {i}: certificate start differs from its node"));
                }
                if !certificate.to_complex().same_faces(to) {
                    return Err(alloc::format!("arrow {i}: certificate end differs from its node"));
                }
                let report = verify_certificate(certificate);
                if !report.valid {
                    let failure = report.failure.expect("invalid replay carries a failure");
                    return Err(alloc::format!("arrow {i}: {failure}"));
                }
            }
            ZigzagArrow::Relabel { map } => {
                let simplicial = SimplicialMap::new(left.clone(), right.clone(), map)
                    .map_err(|e| alloc::format!("arrow {i}: {e}"))?;
                if !simplicial.is_isomorphism() {
                    return Err(alloc::format!("arrow {i}: relabel map is not an isomorphism"));
                }
                if !simplicial.apply().same_faces(right) {
                    return Err(alloc::format!("arrow {i}: relabel image differs from its node"));
                }
            }
        }
    }
    Ok(())
}

/// Replaces every relabel arrow by the four collapse arrows of
/// [`isomorphic_zigzag`], leaving a zigzag of collapses only.
pub fn expand_relabels(zigzag: &Zigzag) -> Result<Zigzag> {
    let mut nodes = alloc::vec![zigzag.nodes[0].clone()];
    let mut arrows = Vec::new();
    for (i, arrow) in zigzag.arrows.iter().enumerate() {
        match arrow {
            ZigzagArrow::Collapse { .. } => {
                arrows.push(arrow.clone());
                nodes.push(zigzag.nodes[i + 1].clone());
            }
            ZigzagArrow::Relabel { map } => {
                let expansion = isomorphic_zigzag(&zigzag.nodes[i], &zigzag.nodes[i + 1], map)?;
                arrows.extend(expansion.arrows);
                nodes.extend(expansion.nodes.into_iter().skip(1));
            }
        }
    }
    Ok(Zigzag { nodes, arrows })
}
