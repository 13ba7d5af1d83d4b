//! Deterministic SVG rendering of packings, contact edges, and k x k
//! toroidal tilings.
//!
//! Torus coordinates `[-1/2, 1/2)^2` map to a top-left-origin canvas with
//! the y axis flipped; the mapping is repeated per tile. All attribute
//! numbers are written with six decimals, so output is byte-stable across
//! runs and platforms.

use std::fmt::Write as _;

use thiserror::Error;

use crate::catalog::ToroidalDrawing;
use crate::packing::{ContactGraph, NumericConfiguration};
use crate::scalar::TorusScalar;
use crate::torus::TorusPoint;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("tiling factor {0} out of range 1..=5")]
    BadTiling(u32),
    #[error("canvas size {0} too small (minimum 64)")]
    CanvasTooSmall(u32),
    #[error("contact graph has {graph} vertices but the configuration has {config} points")]
    Mismatch { graph: usize, config: usize },
    #[error("edge {index} endpoint mismatch ({mismatch:.3e})")]
    InconsistentEdge { index: usize, mismatch: f64 },
}

#[derive(Debug, Clone)]
pub struct Style {
    pub stroke: String,
    pub stroke_width: f64,
    pub fill: String,
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// k x k repetition of the fundamental domain.
    pub tiling: u32,
    /// Total canvas width and height in pixels.
    pub canvas_size: u32,
    pub show_edges: bool,
    pub show_labels: bool,
    pub circle_style: Style,
    pub edge_style: Style,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            tiling: 1,
            canvas_size: 512,
            show_edges: true,
            show_labels: false,
            circle_style: Style {
                stroke: "black".into(),
                stroke_width: 1.0,
                fill: "none".into(),
            },
            edge_style: Style {
                stroke: "#b03030".into(),
                stroke_width: 1.0,
                fill: "none".into(),
            },
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<(), RenderError> {
        if !(1..=5).contains(&self.tiling) {
            return Err(RenderError::BadTiling(self.tiling));
        }
        if self.canvas_size < 64 {
            return Err(RenderError::CanvasTooSmall(self.canvas_size));
        }
        Ok(())
    }
}

/// Fixed-format decimal for attribute values.
fn fmt6(x: f64) -> String {
    let s = format!("{:.6}", x);
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

struct Canvas {
    k: u32,
    scale: f64,
}

impl Canvas {
    fn new(opts: &RenderOptions) -> Self {
        Canvas {
            k: opts.tiling,
            scale: opts.canvas_size as f64 / opts.tiling as f64,
        }
    }

    fn size(&self) -> f64 {
        self.scale * self.k as f64
    }

    /// Map torus coordinates in tile (tx, ty) to canvas pixels. Tile rows
    /// are counted downward on the canvas, torus y points upward.
    fn map(&self, x: f64, y: f64, tx: u32, ty: u32) -> (f64, f64) {
        let px = (x + 0.5 + tx as f64) * self.scale;
        let py = (0.5 - y + ty as f64) * self.scale;
        (px, py)
    }
}

fn svg_header(out: &mut String, canvas: &Canvas) {
    let size = fmt6(canvas.size());
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<!-- torus [-1/2,1/2)^2 mapped per tile to a top-left-origin canvas, y flipped -->\n",
    );
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
}

fn cell_outlines(out: &mut String, canvas: &Canvas) {
    for ty in 0..canvas.k {
        for tx in 0..canvas.k {
            let _ = writeln!(
                out,
                "  <rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\"/>",
                fmt6(tx as f64 * canvas.scale),
                fmt6(ty as f64 * canvas.scale),
                fmt6(canvas.scale),
                fmt6(canvas.scale)
            );
        }
    }
}

fn circles<S: TorusScalar>(
    out: &mut String,
    canvas: &Canvas,
    points: &[TorusPoint<S>],
    radius_torus: f64,
    style: &Style,
) {
    let r = fmt6(radius_torus * canvas.scale);
    for ty in 0..canvas.k {
        for tx in 0..canvas.k {
            for p in points {
                let (x, y) = p.to_f64();
                let (cx, cy) = canvas.map(x, y, tx, ty);
                let _ = writeln!(
                    out,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    fmt6(cx),
                    fmt6(cy),
                    style.fill,
                    style.stroke,
                    fmt6(style.stroke_width)
                );
            }
        }
    }
}

fn labels<S: TorusScalar>(out: &mut String, canvas: &Canvas, points: &[TorusPoint<S>]) {
    for ty in 0..canvas.k {
        for tx in 0..canvas.k {
            for (idx, p) in points.iter().enumerate() {
                let (x, y) = p.to_f64();
                let (cx, cy) = canvas.map(x, y, tx, ty);
                let _ = writeln!(
                    out,
                    "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\">{}</text>",
                    fmt6(cx),
                    fmt6(cy - 0.01 * canvas.scale),
                    fmt6(canvas.scale * 0.06),
                    idx + 1
                );
            }
        }
    }
}

/// Split a unit-cell segment at the fundamental-domain boundary. Returns
/// sub-segments as (start, delta) pairs in torus coordinates, each starting
/// at a canonical point. Crossing parameters closer than 1e-9 merge (a
/// corner exit is one split, not two).
fn split_at_boundary(start: (f64, f64), delta: (f64, f64)) -> Vec<((f64, f64), (f64, f64))> {
    let mut ts = vec![0.0, 1.0];
    for (p, d) in [(start.0, delta.0), (start.1, delta.1)] {
        if d > 0.0 {
            let t = (0.5 - p) / d;
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        } else if d < 0.0 {
            let t = (-0.5 - p) / d;
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite parameters"));
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut parts = Vec::new();
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 < 1e-9 {
            continue;
        }
        let raw = (start.0 + t0 * delta.0, start.1 + t0 * delta.1);
        let p0 = TorusPoint::wrap(raw.0, raw.1).expect("finite");
        parts.push((
            (*p0.x(), *p0.y()),
            ((t1 - t0) * delta.0, (t1 - t0) * delta.1),
        ));
    }
    parts
}

/// Emit one logical edge as a `<g class="edge">` group. In a 1 x 1 view the
/// segment is clipped to the fundamental domain (wrapping edges split into
/// visible parts); tiled views draw the full segment in every tile, the
/// copies supplying continuity.
fn edge_group(
    out: &mut String,
    canvas: &Canvas,
    from_label: usize,
    to_label: usize,
    start: (f64, f64),
    delta: (f64, f64),
    style: &Style,
) {
    let _ = writeln!(
        out,
        "  <g class=\"edge\" data-from=\"{}\" data-to=\"{}\">",
        from_label, to_label
    );
    let pieces: Vec<((f64, f64), (f64, f64))> = if canvas.k == 1 {
        split_at_boundary(start, delta)
    } else {
        vec![(start, delta)]
    };
    for ty in 0..canvas.k {
        for tx in 0..canvas.k {
            for &((sx, sy), (dx, dy)) in &pieces {
                let (x1, y1) = canvas.map(sx, sy, tx, ty);
                let (x2, y2) = canvas.map(sx + dx, sy + dy, tx, ty);
                let _ = writeln!(
                    out,
                    "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    fmt6(x1),
                    fmt6(y1),
                    fmt6(x2),
                    fmt6(y2),
                    style.stroke,
                    fmt6(style.stroke_width)
                );
            }
        }
    }
    out.push_str("  </g>\n");
}

/// Render a packing: one circle of radius `diameter / 2` per point per tile
/// copy, the fundamental-domain grid, and (optionally) the contact edges as
/// minimal-displacement segments.
pub fn render_packing<S: TorusScalar>(
    config: &NumericConfiguration,
    contacts: &ContactGraph<S>,
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    opts.validate()?;
    if contacts.n() != config.len() {
        return Err(RenderError::Mismatch {
            graph: contacts.n(),
            config: config.len(),
        });
    }
    let pts = config.points();
    // The contact data must belong to this configuration: each recorded
    // displacement has to land on its target point.
    for (index, e) in contacts.edges().iter().enumerate() {
        let dx = e.displacements[0].dx.to_f64();
        let dy = e.displacements[0].dy.to_f64();
        let landed = pts[e.i].translated(&dx, &dy);
        let miss = crate::torus::distance_squared(&landed, &pts[e.j]);
        if miss > 1e-18 {
            return Err(RenderError::InconsistentEdge {
                index,
                mismatch: miss.sqrt(),
            });
        }
    }
    let canvas = Canvas::new(opts);
    let mut out = String::new();
    svg_header(&mut out, &canvas);
    cell_outlines(&mut out, &canvas);
    circles(
        &mut out,
        &canvas,
        pts,
        contacts.diameter() / 2.0,
        &opts.circle_style,
    );
    if opts.show_edges {
        for e in contacts.edges() {
            let (sx, sy) = pts[e.i].to_f64();
            let d = &e.displacements[0];
            edge_group(
                &mut out,
                &canvas,
                e.i + 1,
                e.j + 1,
                (sx, sy),
                (d.dx.to_f64(), d.dy.to_f64()),
                &opts.edge_style,
            );
        }
    }
    if opts.show_labels {
        labels(&mut out, &canvas, pts);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Vertex dot radius for drawings, in torus units.
const DOT_RADIUS: f64 = 0.012;

/// Render a straight-line toroidal drawing: vertex dots plus the chosen
/// geodesic representative of every edge.
pub fn render_drawing<S: TorusScalar>(
    drawing: &ToroidalDrawing<S>,
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    opts.validate()?;
    let pts = drawing.configuration.points();
    for (index, e) in drawing.edges.iter().enumerate() {
        if e.from >= pts.len() || e.to >= pts.len() {
            return Err(RenderError::Mismatch {
                graph: e.from.max(e.to) + 1,
                config: pts.len(),
            });
        }
        let landed = pts[e.from].translated(&e.dx, &e.dy);
        let miss = crate::torus::distance_squared(&landed, &pts[e.to]).to_f64();
        if miss > 1e-18 {
            return Err(RenderError::InconsistentEdge {
                index,
                mismatch: miss.sqrt(),
            });
        }
    }
    let canvas = Canvas::new(opts);
    let mut out = String::new();
    svg_header(&mut out, &canvas);
    cell_outlines(&mut out, &canvas);
    let dot_style = Style {
        stroke: "none".into(),
        stroke_width: 0.0,
        fill: opts.circle_style.stroke.clone(),
    };
    circles(&mut out, &canvas, pts, DOT_RADIUS, &dot_style);
    if opts.show_edges {
        for e in &drawing.edges {
            let (sx, sy) = pts[e.from].to_f64();
            edge_group(
                &mut out,
                &canvas,
                e.from + 1,
                e.to + 1,
                (sx, sy),
                (e.dx.to_f64(), e.dy.to_f64()),
                &opts.edge_style,
            );
        }
    }
    if opts.show_labels {
        labels(&mut out, &canvas, pts);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
