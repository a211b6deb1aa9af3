//! The end-to-end verification pipeline: one relation in, every
//! construction out, every invariant checked and reported.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use dowker_core::dowker::{biclique_complex, rectangle_complex_with_budget, Side};
use dowker_core::homology::{homology, profiles_equal, HomologyProfile};
use dowker_core::morse::{
    collapse_sequence, dowker_matching_on, find_cycle, verify_c2, verify_certificate, C2Status,
    DowkerMatching, VertexOrder,
};
use dowker_core::relation::Relation;
use dowker_core::Error as CoreError;

use crate::json::{HomologyDoc, LoadError};
use crate::random::PRNG_NAME;

/// Face budget for the rectangle complex inside the pipeline. `E` grows
/// much faster than the other three complexes; past this budget the
/// rectangle checks are skipped with a notice instead of stalling the run.
pub const RECTANGLE_FACE_BUDGET: usize = 100_000;

/// Largest matching size for which the exhaustive quadratic C2 check runs
/// inside the pipeline; acyclicity is always verified via cycle search.
pub const C2_EXHAUSTIVE_CAP: usize = 8192;

/// Widest boundary matrix the pipeline hands to the homology oracle for
/// the rectangle complex. The oracle itself accepts up to 5000 columns,
/// but `E` routinely produces several matrices near that width at once;
/// past this bound the rectangle homology check is skipped with a notice.
pub const RECTANGLE_COLUMN_CAP: usize = 1200;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationSummary {
    pub x_size: usize,
    pub y_size: usize,
    pub pair_count: usize,
    pub bipartite: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrngInfo {
    pub name: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Everything one pipeline run produces. All fields except `timings_ms`
/// are deterministic given the input relation and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub relation: RelationSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prng: Option<PrngInfo>,
    pub complex_sizes: BTreeMap<String, usize>,
    pub matching_sizes: BTreeMap<String, usize>,
    pub certificate_steps: BTreeMap<String, usize>,
    pub homology: BTreeMap<String, HomologyDoc>,
    pub checks: Vec<CheckResult>,
    pub notices: Vec<String>,
    pub passed: bool,
    pub timings_ms: BTreeMap<String, u128>,
}

/// Pipeline options; the defaults match the CLI defaults.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Total-order override on the disjointified `X ∪ Y`.
    pub order: Option<Vec<String>>,
    /// Seed to record in the report when the relation was generated.
    pub seed: Option<u64>,
    pub rectangle_face_budget: usize,
    pub rectangle_column_cap: usize,
    pub c2_exhaustive_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            order: None,
            seed: None,
            rectangle_face_budget: RECTANGLE_FACE_BUDGET,
            rectangle_column_cap: RECTANGLE_COLUMN_CAP,
            c2_exhaustive_cap: C2_EXHAUSTIVE_CAP,
        }
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
    notices: Vec<String>,
    timings: BTreeMap<String, u128>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new(), notices: Vec::new(), timings: BTreeMap::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(CheckResult { name: name.to_string(), passed, detail });
    }

    fn notice(&mut self, message: String) {
        self.notices.push(message);
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let value = f();
        self.timings.insert(stage.to_string(), start.elapsed().as_millis());
        value
    }
}

fn side_checks(
    rec: &mut Recorder,
    matching: &Result<DowkerMatching, CoreError>,
    side: Side,
    c2_cap: usize,
) -> (Option<usize>, Option<usize>, Option<HomologyProfile>) {
    let name = side.name();
    let m = match matching {
        Ok(m) => m,
        Err(e) => {
            rec.check(&format!("{name}_matching_built"), false, Some(e.to_string()));
            return (None, None, None);
        }
    };
    rec.check(&format!("{name}_matching_built"), true, None);
    match &m.c2 {
        C2Status::Certified => rec.check(&format!("{name}_matching_c2"), true, None),
        C2Status::Violated { .. } => {
            rec.check(&format!("{name}_matching_c2"), false, Some("C2 violated".into()))
        }
        C2Status::Unchecked => rec.notice(format!(
            "{name} matching: exhaustive C2 check skipped ({} matched faces exceed the cap of {c2_cap})",
            m.matching.len()
        )),
    }
    let acyclic = rec.time(&format!("{name}_cycle_search"), || find_cycle(&m.matching).is_none());
    rec.check(&format!("{name}_matching_acyclic"), acyclic, None);
    let certificate =
        rec.time(&format!("{name}_collapse"), || collapse_sequence(&m.complex, &m.target, &m.matching));
    let steps = match &certificate {
        Ok(cert) => {
            let expected = m.matching.len() / 2;
            rec.check(
                &format!("{name}_certificate_step_count"),
                cert.steps().len() == expected,
                Some(format!("{} steps, |M|/2 = {expected}", cert.steps().len())),
            );
            let report = rec.time(&format!("{name}_replay"), || verify_certificate(cert));
            rec.check(
                &format!("{name}_certificate_replays"),
                report.valid,
                report.failure.map(|f| f.to_string()),
            );
            Some(cert.steps().len())
        }
        Err(e) => {
            rec.check(&format!("{name}_certificate_built"), false, Some(e.to_string()));
            None
        }
    };
    let target_homology = rec.time(&format!("{name}_target_homology"), || homology(&m.target));
    let profile = match target_homology {
        Ok(p) => {
            let chi_name = format!("{name}_euler_matches_f_vector");
            rec.check(&chi_name, p.euler == m.target.euler_characteristic(), None);
            Some(p)
        }
        Err(e) => {
            rec.notice(format!("{name} homology skipped: {e}"));
            None
        }
    };
    (Some(m.matching.len()), steps, profile)
}

/// Runs the whole verification chain on one relation: disjointify, build
/// both Dowker complexes and the biclique complex, match both sides,
/// check acyclicity, extract and replay both certificates, then
/// cross-check homology (including the rectangle complex when it fits the
/// caps). The report carries one named pass/fail entry per check;
/// `passed` is the conjunction.
pub fn run_pipeline(relation: &Relation, options: &PipelineOptions) -> Result<PipelineReport, LoadError> {
    let mut rec = Recorder::new();
    let summary = RelationSummary {
        x_size: relation.x_universe().len(),
        y_size: relation.y_universe().len(),
        pair_count: relation.pair_count(),
        bipartite: relation.is_bipartite(),
    };

    let (tagged, _) = rec.time("disjointify", || relation.disjointify());
    let combined = tagged.combined_universe().map_err(LoadError::Core)?;
    let order = match &options.order {
        Some(labels) => VertexOrder::from_labels(&combined, labels).map_err(LoadError::Core)?,
        None => VertexOrder::declaration(combined.len()),
    };

    let mut complex_sizes = BTreeMap::new();
    let mut homology_docs = BTreeMap::new();
    let mut profiles: BTreeMap<&str, HomologyProfile> = BTreeMap::new();

    // Matchings carry B and the embedded Dowker complexes with them. The
    // quadratic C2 check is size-gated and run separately.
    let b = rec.time("biclique", || biclique_complex(&tagged)).map_err(LoadError::Core)?;
    let mut left = rec.time("left_matching", || {
        dowker_matching_on(b.clone(), &tagged, Side::Left, &order, false)
    });
    if let Ok(m) = &mut left {
        if m.matching.len() <= options.c2_exhaustive_cap {
            m.c2 = rec.time("left_c2", || {
                verify_c2(&m.matching.face_set(), &m.assignment, &order)
            });
        }
    }
    let mut right = rec.time("right_matching", || {
        dowker_matching_on(b, &tagged, Side::Right, &order, false)
    });
    if let Ok(m) = &mut right {
        if m.matching.len() <= options.c2_exhaustive_cap {
            m.c2 = rec.time("right_c2", || {
                verify_c2(&m.matching.face_set(), &m.assignment, &order)
            });
        }
    }

    if let Ok(m) = &left {
        complex_sizes.insert("biclique".to_string(), m.complex.face_count());
        complex_sizes.insert("c_x".to_string(), m.target.face_count());
        rec.check("biclique_downward_closed", m.complex.is_downward_closed(), None);
        rec.check("c_x_subcomplex_of_biclique", m.target.is_subcomplex_of(&m.complex), None);
        let b_hom = rec.time("biclique_homology", || homology(&m.complex));
        match b_hom {
            Ok(p) => {
                rec.check(
                    "biclique_euler_matches_f_vector",
                    p.euler == m.complex.euler_characteristic(),
                    None,
                );
                homology_docs.insert("biclique".to_string(), HomologyDoc::from_profile(&p)?);
                profiles.insert("biclique", p);
            }
            Err(e) => rec.notice(format!("biclique homology skipped: {e}")),
        }
    }
    if let Ok(m) = &right {
        complex_sizes.insert("c_y".to_string(), m.target.face_count());
        rec.check("c_y_subcomplex_of_biclique", m.target.is_subcomplex_of(&m.complex), None);
    }

    let mut matching_sizes = BTreeMap::new();
    let mut certificate_steps = BTreeMap::new();
    let (left_size, left_steps, left_profile) =
        side_checks(&mut rec, &left, Side::Left, options.c2_exhaustive_cap);
    let (right_size, right_steps, right_profile) =
        side_checks(&mut rec, &right, Side::Right, options.c2_exhaustive_cap);
    if let Some(n) = left_size {
        matching_sizes.insert("left".to_string(), n);
    }
    if let Some(n) = right_size {
        matching_sizes.insert("right".to_string(), n);
    }
    if let Some(n) = left_steps {
        certificate_steps.insert("left".to_string(), n);
    }
    if let Some(n) = right_steps {
        certificate_steps.insert("right".to_string(), n);
    }
    if let Some(p) = left_profile {
        homology_docs.insert("c_x".to_string(), HomologyDoc::from_profile(&p)?);
        profiles.insert("c_x", p);
    }
    if let Some(p) = right_profile {
        homology_docs.insert("c_y".to_string(), HomologyDoc::from_profile(&p)?);
        profiles.insert("c_y", p);
    }

    if let (Some(a), Some(b)) = (profiles.get("c_x"), profiles.get("c_y")) {
        rec.check("homology_c_x_equals_c_y", profiles_equal(a, b), None);
    }
    if let (Some(a), Some(b)) = (profiles.get("c_x"), profiles.get("biclique")) {
        rec.check("homology_c_x_equals_biclique", profiles_equal(a, b), None);
    }

    // Rectangle complex: constructed on the original relation (its ground
    // set is the pair set, so bipartiteness is irrelevant), skipped with a
    // notice past the caps.
    if relation.pair_count() > dowker_core::complex::MAX_VERTICES {
        rec.notice(format!(
            "rectangle complex skipped: {} pairs exceed the cap of {}",
            relation.pair_count(),
            dowker_core::complex::MAX_VERTICES
        ));
    } else {
        let rect = rec.time("rectangle", || {
            rectangle_complex_with_budget(relation, options.rectangle_face_budget)
        });
        match rect {
            Ok(e) => {
                complex_sizes.insert("rectangle".to_string(), e.face_count());
                let widest = e.f_vector().into_iter().max().unwrap_or(0);
                if widest > options.rectangle_column_cap {
                    rec.notice(format!(
                        "rectangle homology skipped: widest boundary matrix has {widest} columns, cap is {}",
                        options.rectangle_column_cap
                    ));
                } else {
                    match rec.time("rectangle_homology", || homology(&e)) {
                        Ok(p) => {
                            rec.check(
                                "rectangle_euler_matches_f_vector",
                                p.euler == e.euler_characteristic(),
                                None,
                            );
                            if let Some(a) = profiles.get("c_x") {
                                rec.check(
                                    "homology_rectangle_equals_c_x",
                                    profiles_equal(a, &p),
                                    None,
                                );
                            }
                            homology_docs
                                .insert("rectangle".to_string(), HomologyDoc::from_profile(&p)?);
                        }
                        Err(e) => rec.notice(format!("rectangle homology skipped: {e}")),
                    }
                }
            }
            Err(CoreError::TooManyFaces { cap }) => {
                rec.notice(format!("rectangle complex skipped: more than {cap} faces"));
            }
            Err(e) => return Err(LoadError::Core(e)),
        }
    }

    let passed = rec.checks.iter().all(|c| c.passed);
    Ok(PipelineReport {
        relation: summary,
        prng: options.seed.map(|seed| PrngInfo { name: PRNG_NAME.to_string(), seed }),
        complex_sizes,
        matching_sizes,
        certificate_steps,
        homology: homology_docs,
        checks: rec.checks,
        notices: rec.notices,
        passed,
        timings_ms: rec.timings,
    })
}
