//! JSON documents for relations, complexes, matchings, certificates, and
//! zigzags, with conversions to and from the core types.
//!
//! Complexes are saved as facets only; the downward closure is recomputed
//! on load. Faces serialize as arrays of labels in universe order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use dowker_core::complex::{Face, SimplicialComplex, Universe};
use dowker_core::homology::HomologyProfile;
use dowker_core::morse::{
    ArrowDirection, CollapseCertificate, Matching, Zigzag, ZigzagArrow,
};
use dowker_core::relation::Relation;
use dowker_core::Error as CoreError;

/// Errors arising while loading documents: malformed JSON or data that the
/// core constructors reject.
#[derive(Debug)]
pub enum LoadError {
    Json(serde_json::Error),
    Core(CoreError),
    Shape(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Json(e) => write!(f, "invalid JSON: {e}"),
            LoadError::Core(e) => write!(f, "{e}"),
            LoadError::Shape(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Json(e)
    }
}

impl From<CoreError> for LoadError {
    fn from(e: CoreError) -> Self {
        LoadError::Core(e)
    }
}

/// Relation document. Either `pairs` or a dense 0/1 `matrix` (rows indexed
/// by x-order) must be present; saving always emits the pair form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub x: Vec<String>,
    pub y: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u8>>>,
}

impl RelationDoc {
    pub fn from_relation(r: &Relation) -> Self {
        let pairs = r
            .pairs()
            .into_iter()
            .map(|(xi, yi)| {
                (r.x_universe().label(xi).to_string(), r.y_universe().label(yi).to_string())
            })
            .collect();
        RelationDoc {
            x: r.x_universe().labels().to_vec(),
            y: r.y_universe().labels().to_vec(),
            pairs: Some(pairs),
            matrix: None,
        }
    }

    pub fn into_relation(self) -> Result<Relation, LoadError> {
        let x = Universe::new(self.x)?;
        let y = Universe::new(self.y)?;
        match (self.pairs, self.matrix) {
            (Some(pairs), None) => Ok(Relation::from_label_pairs(x, y, &pairs)?),
            (None, Some(matrix)) => {
                if matrix.len() != x.len() {
                    return Err(LoadError::Shape(format!(
                        "matrix has {} rows but x has {} entries",
                        matrix.len(),
                        x.len()
                    )));
                }
                let mut pairs = Vec::new();
                for (i, row) in matrix.iter().enumerate() {
                    if row.len() != y.len() {
                        return Err(LoadError::Shape(format!(
                            "matrix row {i} has {} entries but y has {}",
                            row.len(),
                            y.len()
                        )));
                    }
                    for (j, &cell) in row.iter().enumerate() {
                        match cell {
                            0 => {}
                            1 => pairs.push((i as u8, j as u8)),
                            other => {
                                return Err(LoadError::Shape(format!(
                                    "matrix entry ({i},{j}) is {other}, expected 0 or 1"
                                )))
                            }
                        }
                    }
                }
                Ok(Relation::new(x, y, &pairs)?)
            }
            (Some(_), Some(_)) => {
                Err(LoadError::Shape("give either pairs or matrix, not both".into()))
            }
            (None, None) => Err(LoadError::Shape("missing pairs or matrix".into())),
        }
    }
}

/// Complex document: universe plus facets; closure is recomputed on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub universe: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

impl ComplexDoc {
    pub fn from_complex(c: &SimplicialComplex) -> Self {
        let facets = c.facets().iter().map(|&f| c.universe().labels_of(f)).collect();
        ComplexDoc { universe: c.universe().labels().to_vec(), facets }
    }

    pub fn into_complex(self) -> Result<SimplicialComplex, LoadError> {
        let universe = Universe::new(self.universe)?;
        Ok(SimplicialComplex::closure_from_labels(universe, &self.facets)?)
    }
}

/// Matching document: cover pairs `(faceA, faceB)` with `faceA ≺ faceB`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
}

impl MatchingDoc {
    pub fn from_matching(m: &Matching) -> Self {
        let universe = m.complex().universe();
        let pairs = m
            .cover_pairs()
            .into_iter()
            .map(|(lower, upper)| (universe.labels_of(lower), universe.labels_of(upper)))
            .collect();
        MatchingDoc { pairs }
    }

    /// Rebuilds the matching over an explicit host complex.
    pub fn into_matching(self, complex: SimplicialComplex) -> Result<Matching, LoadError> {
        let mut mu = BTreeMap::new();
        for (lower_labels, upper_labels) in &self.pairs {
            let lower =
                complex.universe().face_from_labels(lower_labels.iter().map(String::as_str))?;
            let upper =
                complex.universe().face_from_labels(upper_labels.iter().map(String::as_str))?;
            mu.insert(lower, upper);
            mu.insert(upper, lower);
        }
        if mu.len() != 2 * self.pairs.len() {
            return Err(LoadError::Shape("matching pairs reuse a face".into()));
        }
        Ok(Matching::new(complex, mu)?)
    }

    /// The smallest complex hosting the matched faces: the closure of all
    /// faces mentioned in the pairs.
    pub fn closure_complex(&self) -> Result<SimplicialComplex, LoadError> {
        let mut labels: Vec<String> = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for (a, b) in &self.pairs {
            for label in a.iter().chain(b.iter()) {
                if seen.insert(label) {
                    labels.push(label.clone());
                }
            }
        }
        let universe = Universe::new(labels)?;
        let facets: Vec<Face> = self
            .pairs
            .iter()
            .map(|(_, upper)| universe.face_from_labels(upper.iter().map(String::as_str)))
            .collect::<Result<_, _>>()?;
        Ok(SimplicialComplex::closure(universe, &facets))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepDoc {
    pub tau: Vec<String>,
    pub sigma: Vec<String>,
}

/// Certificate document: endpoint complexes plus the ordered steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub from: ComplexDoc,
    pub to: ComplexDoc,
    pub steps: Vec<StepDoc>,
}

impl CertificateDoc {
    pub fn from_certificate(c: &CollapseCertificate) -> Self {
        let universe = c.from_complex().universe();
        CertificateDoc {
            from: ComplexDoc::from_complex(c.from_complex()),
            to: ComplexDoc::from_complex(c.to_complex()),
            steps: c
                .steps()
                .iter()
                .map(|&(tau, sigma)| StepDoc {
                    tau: universe.labels_of(tau),
                    sigma: universe.labels_of(sigma),
                })
                .collect(),
        }
    }

    pub fn into_certificate(self) -> Result<CollapseCertificate, LoadError> {
        let from = self.from.into_complex()?;
        let to = self.to.into_complex()?;
        let steps = self
            .steps
            .iter()
            .map(|step| {
                let tau = from.universe().face_from_labels(step.tau.iter().map(String::as_str))?;
                let sigma =
                    from.universe().face_from_labels(step.sigma.iter().map(String::as_str))?;
                Ok((tau, sigma))
            })
            .collect::<Result<Vec<_>, LoadError>>()?;
        Ok(CollapseCertificate::from_parts(from, to, steps))
    }
}

/// Homology document; torsion factors are emitted as plain integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyDoc {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<u128>>,
    pub euler: i64,
}

impl HomologyDoc {
    pub fn from_profile(p: &HomologyProfile) -> Result<Self, LoadError> {
        let torsion = p
            .torsion
            .iter()
            .map(|factors| {
                factors
                    .iter()
                    .map(|f| {
                        u128::try_from(f).map_err(|_| {
                            LoadError::Shape("torsion factor exceeds 128 bits".into())
                        })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(HomologyDoc { betti: p.betti.clone(), torsion, euler: p.euler })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrowDoc {
    Collapse { direction: DirectionDoc, certificate: CertificateDoc },
    Relabel { map: BTreeMap<String, String> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionDoc {
    Leftward,
    Rightward,
}

/// Zigzag document: node complexes and the arrows between them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZigzagDoc {
    pub nodes: Vec<ComplexDoc>,
    pub arrows: Vec<ArrowDoc>,
}

impl ZigzagDoc {
    pub fn from_zigzag(z: &Zigzag) -> Self {
        ZigzagDoc {
            nodes: z.nodes.iter().map(ComplexDoc::from_complex).collect(),
            arrows: z
                .arrows
                .iter()
                .map(|arrow| match arrow {
                    ZigzagArrow::Collapse { direction, certificate } => ArrowDoc::Collapse {
                        direction: match direction {
                            ArrowDirection::Leftward => DirectionDoc::Leftward,
                            ArrowDirection::Rightward => DirectionDoc::Rightward,
                        },
                        certificate: CertificateDoc::from_certificate(certificate),
                    },
                    ZigzagArrow::Relabel { map } => ArrowDoc::Relabel { map: map.clone() },
                })
                .collect(),
        }
    }
}

/// Order-override document: a permutation of the combined ground-set
/// labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderDoc(pub Vec<String>);

/// Vertex-bijection document for the isomorphic zigzag.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMapDoc(pub BTreeMap<String, String>);
