//! Geodesic segments on the torus and proper crossing detection.

use super::{TorusError, TorusPoint};
use crate::scalar::TorusScalar;

/// A geodesic segment: a start point and a raw displacement vector with
/// Euclidean norm in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoSegment<S> {
    start: TorusPoint<S>,
    dx: S,
    dy: S,
}

impl<S: TorusScalar> GeoSegment<S> {
    pub fn new(start: TorusPoint<S>, dx: S, dy: S) -> Result<Self, TorusError> {
        if !dx.is_finite_value() || !dy.is_finite_value() {
            return Err(TorusError::NonFinite {
                x: dx.to_f64(),
                y: dy.to_f64(),
            });
        }
        let norm2 = dx.clone() * dx.clone() + dy.clone() * dy.clone();
        if norm2 == S::zero() {
            return Err(TorusError::ZeroLengthSegment);
        }
        if norm2 >= S::one() {
            return Err(TorusError::SegmentTooLong {
                norm: norm2.to_f64().sqrt(),
            });
        }
        Ok(GeoSegment { start, dx, dy })
    }

    pub fn start(&self) -> &TorusPoint<S> {
        &self.start
    }

    pub fn displacement(&self) -> (&S, &S) {
        (&self.dx, &self.dy)
    }

    /// Endpoints of the planar lift starting at the canonical representative.
    fn lift(&self) -> [(S, S); 2] {
        let a = (self.start.x().clone(), self.start.y().clone());
        let b = (
            self.start.x().clone() + self.dx.clone(),
            self.start.y().clone() + self.dy.clone(),
        );
        [a, b]
    }
}

fn cross_product<S: TorusScalar>(ax: &S, ay: &S, bx: &S, by: &S) -> S {
    ax.clone() * by.clone() - ay.clone() * bx.clone()
}

/// Orientation of `c` relative to the directed line `a -> b`.
fn orient<S: TorusScalar>(a: &(S, S), b: &(S, S), c: &(S, S)) -> S {
    cross_product(
        &(b.0.clone() - a.0.clone()),
        &(b.1.clone() - a.1.clone()),
        &(c.0.clone() - a.0.clone()),
        &(c.1.clone() - a.1.clone()),
    )
}

/// Proper crossing of two planar segments: an intersection point interior to
/// both. Touching at an endpoint does not count; collinear overlap of
/// positive length does.
fn planar_proper_cross<S: TorusScalar>(a: &(S, S), b: &(S, S), c: &(S, S), d: &(S, S)) -> bool {
    let zero = S::zero();
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if (o1.clone() * o2.clone()) < zero && (o3 * o4) < zero {
        return true;
    }
    if o1 == zero && o2 == zero {
        // Collinear: check for overlap of positive length along the segment
        // direction.
        let ux = b.0.clone() - a.0.clone();
        let uy = b.1.clone() - a.1.clone();
        let proj = |p: &(S, S)| p.0.clone() * ux.clone() + p.1.clone() * uy.clone();
        let (pa, pb) = (proj(a), proj(b));
        let (lo1, hi1) = if pa <= pb { (pa, pb) } else { (pb, pa) };
        let (pc, pd) = (proj(c), proj(d));
        let (lo2, hi2) = if pc <= pd { (pc, pd) } else { (pd, pc) };
        let lo = if lo1 >= lo2 { lo1 } else { lo2 };
        let hi = if hi1 <= hi2 { hi1 } else { hi2 };
        return lo < hi;
    }
    false
}

/// Do two toroidal geodesic segments cross at a point interior to both?
///
/// The lift of the first segment is tested against lattice translates of the
/// lift of the second. Translates in `{-2..2}^2` cover every possible
/// intersection when both displacement norms are below 1. A double-precision
/// bounding-box check (with margin well above conversion error) skips the
/// translates that cannot touch before any exact arithmetic runs.
pub fn segments_cross<S: TorusScalar>(s1: &GeoSegment<S>, s2: &GeoSegment<S>) -> bool {
    let [a, b] = s1.lift();
    let [c0, d0] = s2.lift();

    const MARGIN: f64 = 1e-9;
    let fbox = |p: &(S, S), q: &(S, S)| -> (f64, f64, f64, f64) {
        let (px, py) = (p.0.to_f64(), p.1.to_f64());
        let (qx, qy) = (q.0.to_f64(), q.1.to_f64());
        (px.min(qx), px.max(qx), py.min(qy), py.max(qy))
    };
    let (ax0, ax1, ay0, ay1) = fbox(&a, &b);
    let (bx0, bx1, by0, by1) = fbox(&c0, &d0);

    for mx in -2i64..=2 {
        for my in -2i64..=2 {
            let (sx, sy) = (mx as f64, my as f64);
            if bx1 + sx < ax0 - MARGIN
                || bx0 + sx > ax1 + MARGIN
                || by1 + sy < ay0 - MARGIN
                || by0 + sy > ay1 + MARGIN
            {
                continue;
            }
            let shift_x = S::from_int(mx);
            let shift_y = S::from_int(my);
            let c = (c0.0.clone() + shift_x.clone(), c0.1.clone() + shift_y.clone());
            let d = (d0.0.clone() + shift_x, d0.1.clone() + shift_y);
            if planar_proper_cross(&a, &b, &c, &d) {
                return true;
            }
        }
    }
    false
}
