//! Authoritative constructors for the cataloged configurations and the
//! straight-line toroidal drawings of K6 and K7.

use thiserror::Error;

use crate::graph::SmallGraph;
use crate::packing::{Configuration, ExactConfiguration, NumericConfiguration, PackingError};
use crate::scalar::{Rat, TorusScalar};
use crate::torus::segment::{segments_cross, GeoSegment};
use crate::torus::{min_displacement, TorusError, TorusPoint};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("vertex index {0} out of range (0..=6)")]
    VertexOutOfRange(usize),
    #[error("edge {index} does not connect its endpoints (mismatch {mismatch:.3e})")]
    InconsistentEdge { index: usize, mismatch: f64 },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Packing(#[from] PackingError),
}

fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

fn exact_config(coords: &[(i64, i64, i64)], label: &str) -> ExactConfiguration {
    // (num_x, num_y, den) triples sharing a denominator per point.
    let raw: Vec<(Rat, Rat)> = coords
        .iter()
        .map(|&(nx, ny, den)| (rat(nx, den), rat(ny, den)))
        .collect();
    Configuration::from_raw(&raw, Some(label.to_string())).expect("catalog data is valid")
}

/// The five-point configuration whose contact graph is K5 (packing diameter
/// `1/sqrt(5)`), in exact coordinates.
pub fn k5_config() -> ExactConfiguration {
    exact_config(
        &[(-2, 2, 5), (-1, 0, 5), (0, -2, 5), (2, -1, 5), (1, 1, 5)],
        "k5",
    )
}

/// The six-point configuration whose contact graph is K3,3 (packing diameter
/// `5*sqrt(2)/18`), in exact coordinates.
pub fn k33_config() -> ExactConfiguration {
    exact_config(
        &[
            (13, -13, 36),
            (11, 1, 36),
            (1, 11, 36),
            (-13, 13, 36),
            (-11, -1, 36),
            (-1, -11, 36),
        ],
        "k33",
    )
}

/// Packing diameter of the optimal six-circle configuration:
/// `l = (1 + 3*sqrt(3) - sqrt(4 + 6*sqrt(3))) / 6`.
pub fn octahedral_diameter() -> f64 {
    let s3 = 3.0f64.sqrt();
    (1.0 + 3.0 * s3 - (4.0 + 6.0 * s3).sqrt()) / 6.0
}

/// The optimal six-circle configuration, whose contact graph is the
/// octahedron. Evaluated from the closed form for `l` at runtime.
///
/// The configuration is two equilateral triangles of side `l`, `{1, 2, 5}`
/// and `{3, 4, 6}`, offset so that all six cross contacts are also at `l`.
/// The published coordinate table spaces the triangles by `(1 - l) / 2`
/// horizontally, which breaks four of the twelve contacts; the spacing
/// consistent with the equal-contact equations (and with `l` itself, which
/// is a root of exactly that system) is `sqrt((3l - 1)(1 + l)) / 2`, used
/// here.
pub fn octahedral_config() -> NumericConfiguration {
    let l = octahedral_diameter();
    let s3 = 3.0f64.sqrt();
    // Triangle {3, 4, 6} anchored at x = (1 - l)/2; triangle {1, 2, 5} at the
    // cross-contact spacing to its left.
    let r = (1.0 - l) / 2.0;
    let a = r - s3 / 2.0 * l - ((3.0 * l - 1.0) * (1.0 + l)).sqrt() / 2.0;
    let coords = [
        (a, (l - 1.0) / 2.0),
        (a + s3 / 2.0 * l, -0.5),
        (r, -l / 2.0),
        (r, l / 2.0),
        (a, (1.0 - l) / 2.0),
        (r - s3 / 2.0 * l, 0.0),
    ];
    Configuration::from_raw(&coords, Some("octahedron".to_string()))
        .expect("catalog data is valid")
}

/// Names accepted by `config_by_name` / the CLI catalog commands.
pub const CONFIG_NAMES: [&str; 3] = ["k5", "k33", "octahedron"];

pub fn config_by_name(name: &str) -> Option<crate::packing::io::LoadedConfiguration> {
    use crate::packing::io::LoadedConfiguration;
    match name.trim().to_ascii_lowercase().as_str() {
        "k5" => Some(LoadedConfiguration::Exact(k5_config())),
        "k33" | "k3,3" => Some(LoadedConfiguration::Exact(k33_config())),
        "octahedron" | "oct" => Some(LoadedConfiguration::Numeric(octahedral_config())),
        _ => None,
    }
}

/// An edge of a straight-line toroidal drawing: the chosen geodesic
/// representative from point `from` to point `to`.
#[derive(Debug, Clone)]
pub struct DrawingEdge<S> {
    pub from: usize,
    pub to: usize,
    pub dx: S,
    pub dy: S,
}

/// A straight-line drawing on the torus: a configuration plus one geodesic
/// representative per edge.
#[derive(Debug, Clone)]
pub struct ToroidalDrawing<S> {
    pub configuration: Configuration<S>,
    pub edges: Vec<DrawingEdge<S>>,
}

impl<S: TorusScalar> ToroidalDrawing<S> {
    /// Build a drawing from a configuration and a graph, using the minimal
    /// displacement for every edge.
    pub fn from_min_displacements(
        configuration: Configuration<S>,
        graph: &SmallGraph,
    ) -> Result<Self, CatalogError> {
        let pts = configuration.points();
        let edges = graph
            .edges()
            .into_iter()
            .map(|(i, j)| {
                let d = min_displacement(&pts[i], &pts[j]);
                DrawingEdge {
                    from: i,
                    to: j,
                    dx: d.dx,
                    dy: d.dy,
                }
            })
            .collect();
        Ok(ToroidalDrawing {
            configuration,
            edges,
        })
    }
}

/// Toroidal embedding of K7 as a section of a tilted triangular lattice:
/// vertices at `k * (1/7, 3/7) mod 1`, all 21 pairs joined by their minimal
/// displacement (classes `(2,-1)/7`, `(1,3)/7`, `(3,2)/7` up to sign).
pub fn k7_lattice_drawing() -> ToroidalDrawing<Rat> {
    let vx = rat(1, 7);
    let vy = rat(3, 7);
    let points: Vec<TorusPoint<Rat>> = (0..7)
        .map(|k| {
            TorusPoint::wrap(
                vx.clone() * Rat::from_integer(k.into()),
                vy.clone() * Rat::from_integer(k.into()),
            )
            .expect("finite")
        })
        .collect();
    let configuration = Configuration::new(points, Some("k7-lattice".to_string()))
        .expect("seven points");
    let mut edges = Vec::with_capacity(21);
    for i in 0..7usize {
        for j in (i + 1)..7 {
            let d = j - i;
            let (dx, _) = (vx.clone() * Rat::from_integer((d as i64).into())).wrap_unit();
            let (dy, _) = (vy.clone() * Rat::from_integer((d as i64).into())).wrap_unit();
            edges.push(DrawingEdge {
                from: i,
                to: j,
                dx,
                dy,
            });
        }
    }
    ToroidalDrawing {
        configuration,
        edges,
    }
}

/// K6 drawing obtained from the K7 lattice drawing by deleting one vertex
/// and its six incident edges.
pub fn k6_drawing(removed_vertex: usize) -> Result<ToroidalDrawing<Rat>, CatalogError> {
    if removed_vertex > 6 {
        return Err(CatalogError::VertexOutOfRange(removed_vertex));
    }
    let k7 = k7_lattice_drawing();
    let keep: Vec<usize> = (0..7).filter(|&k| k != removed_vertex).collect();
    let reindex = |v: usize| keep.iter().position(|&k| k == v).expect("kept vertex");
    let points: Vec<TorusPoint<Rat>> = keep
        .iter()
        .map(|&k| k7.configuration.points()[k].clone())
        .collect();
    let configuration =
        Configuration::new(points, Some(format!("k6-lattice-minus-{removed_vertex}")))
            .expect("six points");
    let edges = k7
        .edges
        .into_iter()
        .filter(|e| e.from != removed_vertex && e.to != removed_vertex)
        .map(|e| DrawingEdge {
            from: reindex(e.from),
            to: reindex(e.to),
            dx: e.dx,
            dy: e.dy,
        })
        .collect();
    Ok(ToroidalDrawing {
        configuration,
        edges,
    })
}

/// The straight-line drawing of the K5 contact structure from the five-point
/// catalog configuration (all ten minimal-displacement segments).
pub fn k5_drawing() -> ToroidalDrawing<Rat> {
    ToroidalDrawing::from_min_displacements(
        k5_config(),
        &crate::graph::named_graph("K5").expect("catalog name"),
    )
    .expect("catalog data is valid")
}

#[derive(Debug, Clone)]
pub struct DrawingVerdict {
    pub pass: bool,
    /// Indices (into the drawing's edge list) of crossing pairs.
    pub crossings: Vec<(usize, usize)>,
}

/// Endpoint-consistency slack for numeric drawings.
const ENDPOINT_TOL: f64 = 1e-12;

/// Check a drawing: every edge must land on its target vertex (mod 1), and
/// no two edges may cross at a point interior to both. Shared endpoints are
/// allowed.
pub fn verify_drawing<S: TorusScalar>(
    drawing: &ToroidalDrawing<S>,
) -> Result<DrawingVerdict, CatalogError> {
    let pts = drawing.configuration.points();
    let mut segments = Vec::with_capacity(drawing.edges.len());
    for (index, e) in drawing.edges.iter().enumerate() {
        if e.from >= pts.len() || e.to >= pts.len() {
            return Err(CatalogError::VertexOutOfRange(e.from.max(e.to)));
        }
        let landed = pts[e.from].translated(&e.dx, &e.dy);
        let miss = crate::torus::distance_squared(&landed, &pts[e.to]).to_f64();
        if miss > ENDPOINT_TOL * ENDPOINT_TOL {
            return Err(CatalogError::InconsistentEdge {
                index,
                mismatch: miss.sqrt(),
            });
        }
        segments.push(GeoSegment::new(
            pts[e.from].clone(),
            e.dx.clone(),
            e.dy.clone(),
        )?);
    }
    let mut crossings = Vec::new();
    for a in 0..segments.len() {
        for b in (a + 1)..segments.len() {
            if segments_cross(&segments[a], &segments[b]) {
                crossings.push((a, b));
            }
        }
    }
    Ok(DrawingVerdict {
        pass: crossings.is_empty(),
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing;
    use crate::scalar::parse_rational;

    #[test]
    fn k5_coordinates_match_table() {
        let c = k5_config();
        assert_eq!(c.points()[0].x(), &parse_rational("-2/5").unwrap());
        assert_eq!(c.points()[0].y(), &parse_rational("2/5").unwrap());
        assert_eq!(c.points()[3].x(), &parse_rational("2/5").unwrap());
        assert_eq!(c.points()[3].y(), &parse_rational("-1/5").unwrap());
    }

    #[test]
    fn k5_exact_diameter() {
        assert_eq!(
            packing::packing_diameter_exact(&k5_config()).unwrap(),
            parse_rational("1/5").unwrap()
        );
    }

    #[test]
    fn k33_coordinates_match_table() {
        let c = k33_config();
        assert_eq!(c.points()[0].x(), &parse_rational("13/36").unwrap());
        assert_eq!(c.points()[5].x(), &parse_rational("-1/36").unwrap());
        assert_eq!(c.points()[5].y(), &parse_rational("-11/36").unwrap());
    }

    #[test]
    fn k33_exact_diameter() {
        assert_eq!(
            packing::packing_diameter_exact(&k33_config()).unwrap(),
            parse_rational("25/162").unwrap()
        );
    }

    #[test]
    fn octahedral_diameter_value() {
        assert!((octahedral_diameter() - 0.400406).abs() < 1e-6);
    }

    #[test]
    fn octahedral_contacts() {
        let c = octahedral_config();
        let g = packing::contact_graph(&c, &1e-9).unwrap();
        assert_eq!(g.edges().len(), 12);
        assert!(g.degrees().iter().all(|&d| d == 4));
        let l = octahedral_diameter();
        for e in g.edges() {
            assert!((e.dist_squared.sqrt() - l).abs() < 1e-12);
        }
    }

    #[test]
    fn k7_drawing_shape() {
        let d = k7_lattice_drawing();
        assert_eq!(d.configuration.len(), 7);
        assert_eq!(d.edges.len(), 21);
        let mut deg = [0usize; 7];
        for e in &d.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        assert!(deg.iter().all(|&x| x == 6));
        // Exactly three squared lengths: 5/49, 10/49, 13/49.
        let mut lens: Vec<Rat> = d
            .edges
            .iter()
            .map(|e| e.dx.clone() * e.dx.clone() + e.dy.clone() * e.dy.clone())
            .collect();
        lens.sort();
        lens.dedup();
        assert_eq!(
            lens,
            vec![
                parse_rational("5/49").unwrap(),
                parse_rational("10/49").unwrap(),
                parse_rational("13/49").unwrap()
            ]
        );
    }

    #[test]
    fn k7_drawing_has_no_crossings() {
        let verdict = verify_drawing(&k7_lattice_drawing()).unwrap();
        assert!(verdict.pass, "crossings: {:?}", verdict.crossings);
    }

    #[test]
    fn k6_drawings_are_crossing_free_and_complete() {
        for removed in 0..7 {
            let d = k6_drawing(removed).unwrap();
            assert_eq!(d.configuration.len(), 6);
            assert_eq!(d.edges.len(), 15);
            let mut g = crate::graph::SmallGraph::new(6).unwrap();
            for e in &d.edges {
                g.add_edge(e.from, e.to).unwrap();
            }
            assert!(
                crate::graph::is_isomorphic(&g, &crate::graph::named_graph("K6").unwrap())
                    .is_some()
            );
            let verdict = verify_drawing(&d).unwrap();
            assert!(verdict.pass, "vertex {removed}: {:?}", verdict.crossings);
        }
        assert!(k6_drawing(7).is_err());
    }

    #[test]
    fn k5_drawing_is_crossing_free() {
        let verdict = verify_drawing(&k5_drawing()).unwrap();
        assert!(verdict.pass, "crossings: {:?}", verdict.crossings);
    }

    #[test]
    fn artificial_plus_sign_drawing_fails() {
        let config = crate::packing::Configuration::from_raw(
            &[(-0.25_f64, 0.0), (0.25, 0.0), (0.0, -0.25), (0.0, 0.25)],
            None,
        )
        .unwrap();
        let drawing = ToroidalDrawing {
            configuration: config,
            edges: vec![
                DrawingEdge {
                    from: 0,
                    to: 1,
                    dx: 0.5,
                    dy: 0.0,
                },
                DrawingEdge {
                    from: 2,
                    to: 3,
                    dx: 0.0,
                    dy: 0.5,
                },
            ],
        };
        let verdict = verify_drawing(&drawing).unwrap();
        assert!(!verdict.pass);
        assert_eq!(verdict.crossings, vec![(0, 1)]);
    }

    #[test]
    fn malformed_edge_rejected() {
        let config = crate::packing::Configuration::from_raw(
            &[(0.0_f64, 0.0), (0.3, 0.0)],
            None,
        )
        .unwrap();
        let drawing = ToroidalDrawing {
            configuration: config,
            edges: vec![DrawingEdge {
                from: 0,
                to: 1,
                dx: 0.2,
                dy: 0.0,
            }],
        };
        assert!(matches!(
            verify_drawing(&drawing),
            Err(CatalogError::InconsistentEdge { index: 0, .. })
        ));
    }

    #[test]
    fn k7_drawing_is_vertex_transitive_under_shift() {
        // Translation by the lattice generator maps the vertex set to itself
        // with the cyclic relabeling k -> k + 1.
        use crate::torus::isometry::{IsometryMap, PointSymmetry};
        let d = k7_lattice_drawing();
        let t = TorusPoint::wrap(parse_rational("1/7").unwrap(), parse_rational("3/7").unwrap())
            .unwrap();
        let iso = IsometryMap::new(PointSymmetry::Identity, t);
        let pts = d.configuration.points();
        for k in 0..7 {
            assert_eq!(iso.apply(&pts[k]), pts[(k + 1) % 7]);
        }
    }
}
