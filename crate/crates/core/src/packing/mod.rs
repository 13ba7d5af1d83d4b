//! Packing diameter, contact-graph extraction, and penny-graph verification
//! for point configurations on the torus.

pub mod io;

use thiserror::Error;

use crate::graph::{self, GraphError, SmallGraph};
use crate::scalar::{Rat, TorusScalar};
use crate::torus::isometry::IsometryMap;
use crate::torus::{self, Displacement, TorusError, TorusPoint};

pub const MAX_POINTS: usize = 4096;

/// Relative tolerance used to classify contacts in numeric mode. The
/// cataloged configurations have exactly equal edge lengths, so the slack
/// only absorbs floating-point noise.
pub const DEFAULT_CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PackingError {
    #[error("a configuration needs between 1 and {MAX_POINTS} points, got {0}")]
    BadSize(usize),
    #[error("operation needs at least two points, got {0}")]
    Degenerate(usize),
    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An ordered list of canonical torus points. The scalar type distinguishes
/// numeric (`f64`) from exact-rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<S> {
    points: Vec<TorusPoint<S>>,
    label: Option<String>,
}

pub type NumericConfiguration = Configuration<f64>;
pub type ExactConfiguration = Configuration<Rat>;

impl<S: TorusScalar> Configuration<S> {
    pub fn new(points: Vec<TorusPoint<S>>, label: Option<String>) -> Result<Self, PackingError> {
        if points.is_empty() || points.len() > MAX_POINTS {
            return Err(PackingError::BadSize(points.len()));
        }
        Ok(Configuration { points, label })
    }

    /// Wrap raw coordinate pairs onto the torus.
    pub fn from_raw(coords: &[(S, S)], label: Option<String>) -> Result<Self, PackingError> {
        let points = coords
            .iter()
            .map(|(x, y)| TorusPoint::wrap(x.clone(), y.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(points, label)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint<S>] {
        &self.points
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: Option<String>) -> Self {
        self.label = label;
        self
    }

    pub fn to_numeric(&self) -> NumericConfiguration {
        Configuration {
            points: self.points.iter().map(|p| p.to_numeric()).collect(),
            label: self.label.clone(),
        }
    }

    pub fn mapped(&self, iso: &IsometryMap<S>) -> Self {
        Configuration {
            points: self.points.iter().map(|p| iso.apply(p)).collect(),
            label: self.label.clone(),
        }
    }

    /// Reorder points: new index `k` holds old index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Configuration {
            points: perm.iter().map(|&k| self.points[k].clone()).collect(),
            label: self.label.clone(),
        }
    }
}

/// One contact edge: the vertex pair, its squared length, and every lattice
/// displacement realizing it (two or more entries mean a tangency that wraps
/// around the torus in several directions).
#[derive(Debug, Clone)]
pub struct ContactEdge<S> {
    pub i: usize,
    pub j: usize,
    pub dist_squared: S,
    pub displacements: Vec<Displacement<S>>,
}

/// Contact graph of a configuration: the pairs at (tolerance-equal) minimal
/// distance. Simple by construction; multiplicity lives in the edge data.
#[derive(Debug, Clone)]
pub struct ContactGraph<S> {
    n: usize,
    diameter_squared: S,
    edges: Vec<ContactEdge<S>>,
}

impl<S: TorusScalar> ContactGraph<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[ContactEdge<S>] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn diameter_squared(&self) -> &S {
        &self.diameter_squared
    }

    pub fn diameter(&self) -> f64 {
        self.diameter_squared.to_f64().sqrt()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    pub fn to_small_graph(&self) -> Result<SmallGraph, GraphError> {
        let mut g = SmallGraph::new(self.n)?;
        for e in &self.edges {
            g.add_edge(e.i, e.j)?;
        }
        Ok(g)
    }
}

/// Minimal center-to-center distance (the packing diameter; tangent circles
/// have radius half of it).
pub fn packing_diameter<S: TorusScalar>(config: &Configuration<S>) -> Result<f64, PackingError> {
    Ok(packing_diameter_squared(config)?.to_f64().sqrt())
}

/// Exact squared packing diameter.
pub fn packing_diameter_exact(config: &ExactConfiguration) -> Result<Rat, PackingError> {
    packing_diameter_squared(config)
}

fn packing_diameter_squared<S: TorusScalar>(config: &Configuration<S>) -> Result<S, PackingError> {
    let pts = config.points();
    if pts.len() < 2 {
        return Err(PackingError::Degenerate(pts.len()));
    }
    let mut best: Option<S> = None;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d2 = torus::distance_squared(&pts[i], &pts[j]);
            if best.as_ref().is_none_or(|b| d2 < *b) {
                best = Some(d2);
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

/// Extract the contact graph: edges are exactly the pairs whose distance is
/// at most `diameter * (1 + tol)`. `tol = 0` is meaningful in exact mode.
pub fn contact_graph<S: TorusScalar>(
    config: &Configuration<S>,
    tol: &S,
) -> Result<ContactGraph<S>, PackingError> {
    let pts = config.points();
    let n = pts.len();
    if n < 2 {
        return Err(PackingError::Degenerate(n));
    }
    let mut d2 = vec![S::zero(); n * n];
    let mut min2: Option<S> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = torus::distance_squared(&pts[i], &pts[j]);
            if v == S::zero() {
                return Err(PackingError::CoincidentPoints { i, j });
            }
            if min2.as_ref().is_none_or(|b| v < *b) {
                min2 = Some(v.clone());
            }
            d2[i * n + j] = v;
        }
    }
    let diameter_squared = min2.expect("at least one pair");
    let one_plus = S::one() + tol.clone();
    let cutoff = diameter_squared.clone() * one_plus.clone() * one_plus;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = d2[i * n + j].clone();
            if v <= cutoff {
                let displacements = torus::realizing_displacements(&pts[i], &pts[j], tol)?;
                edges.push(ContactEdge {
                    i,
                    j,
                    dist_squared: v,
                    displacements,
                });
            }
        }
    }
    Ok(ContactGraph {
        n,
        diameter_squared,
        edges,
    })
}

/// A near-contact whose length deviates from the packing diameter by more
/// than the classification tolerance; reported as a diagnostic when a
/// configuration fails penny verification.
#[derive(Debug, Clone)]
pub struct ContactViolation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone)]
pub enum PennyFailure {
    VertexCountMismatch { expected: usize, actual: usize },
    NotIsomorphic { near_misses: Vec<ContactViolation> },
}

#[derive(Debug, Clone)]
pub struct PennyVerdict {
    pub pass: bool,
    /// Witness mapping configuration indices to vertices of the expected
    /// graph, present on success.
    pub isomorphism: Option<Vec<usize>>,
    pub failure: Option<PennyFailure>,
}

/// Verify that a configuration is a penny embedding of `expected`: all
/// contact distances equal the diameter within `tol` and the contact graph
/// is isomorphic to the expected graph.
///
/// On an isomorphism failure the diagnostics list the candidate contacts
/// that are too long: among the `expected.edge_count()` shortest pairs,
/// those deviating from the packing diameter by more than the tolerance.
pub fn verify_penny<S: TorusScalar>(
    config: &Configuration<S>,
    expected: &SmallGraph,
    tol: &S,
) -> Result<PennyVerdict, PackingError> {
    if config.len() != expected.n() {
        return Ok(PennyVerdict {
            pass: false,
            isomorphism: None,
            failure: Some(PennyFailure::VertexCountMismatch {
                expected: expected.n(),
                actual: config.len(),
            }),
        });
    }
    let contacts = contact_graph(config, tol)?;
    let small = contacts.to_small_graph()?;
    match graph::is_isomorphic(&small, expected) {
        Some(witness) => Ok(PennyVerdict {
            pass: true,
            isomorphism: Some(witness),
            failure: None,
        }),
        None => {
            let diameter = contacts.diameter();
            let tol_cutoff2 =
                contacts.diameter_squared().to_f64() * (1.0 + tol.to_f64()).powi(2);
            let pts = config.points();
            let mut pairs = Vec::new();
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    let d2 = torus::distance_squared(&pts[i], &pts[j]).to_f64();
                    pairs.push((d2, i, j));
                }
            }
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
            let near_misses = pairs
                .into_iter()
                .take(expected.edge_count())
                .filter(|&(d2, _, _)| d2 > tol_cutoff2)
                .map(|(d2, i, j)| ContactViolation {
                    i,
                    j,
                    distance: d2.sqrt(),
                    diameter,
                })
                .collect();
            Ok(PennyVerdict {
                pass: false,
                isomorphism: None,
                failure: Some(PennyFailure::NotIsomorphic { near_misses }),
            })
        }
    }
}

/// Aggregated analysis of a configuration's contact structure.
#[derive(Debug, Clone)]
pub struct PackingReport {
    pub diameter: f64,
    pub diameter_squared_exact: Option<Rat>,
    pub edges: Vec<(usize, usize)>,
    pub degree_sequence: Vec<usize>,
    pub named_match: Option<String>,
    pub planar: bool,
    pub bipartite: Option<(Vec<usize>, Vec<usize>)>,
    pub regular: Option<usize>,
}

/// Analyze a numeric configuration at the given contact tolerance.
pub fn analyze(config: &NumericConfiguration, tol: f64) -> Result<PackingReport, PackingError> {
    let contacts = contact_graph(config, &tol)?;
    report_from_contacts(&contacts, None)
}

/// Analyze an exact configuration: contacts classified exactly (`tol = 0`),
/// squared diameter reported as a rational.
pub fn analyze_exact(config: &ExactConfiguration) -> Result<PackingReport, PackingError> {
    let contacts = contact_graph(config, &<Rat as TorusScalar>::zero())?;
    let exact = contacts.diameter_squared().clone();
    report_from_contacts(&contacts, Some(exact))
}

fn report_from_contacts<S: TorusScalar>(
    contacts: &ContactGraph<S>,
    diameter_squared_exact: Option<Rat>,
) -> Result<PackingReport, PackingError> {
    let small = contacts.to_small_graph()?;
    let degree_sequence = contacts.degrees();
    let regular = degree_sequence
        .first()
        .filter(|&&d| degree_sequence.iter().all(|&x| x == d))
        .copied();
    Ok(PackingReport {
        diameter: contacts.diameter(),
        diameter_squared_exact,
        edges: contacts.edge_pairs(),
        degree_sequence,
        named_match: graph::identify(&small),
        planar: graph::is_planar(&small),
        bipartite: graph::is_bipartite(&small),
        regular,
    })
}
