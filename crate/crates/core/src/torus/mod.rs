//! Metric geometry of the flat unit square torus.
//!
//! Points live in the half-open fundamental domain `[-1/2, 1/2)^2`; the
//! distance between two points is the Euclidean norm of the minimal lattice
//! displacement between their representatives. Because canonical coordinate
//! differences lie in `(-1, 1)`, per-coordinate minimization over lattice
//! offsets in `{-1, 0, 1}` is equivalent to global minimization.

pub mod isometry;
pub mod segment;

use thiserror::Error;

use crate::scalar::TorusScalar;

#[derive(Debug, Error)]
pub enum TorusError {
    #[error("coordinates must be finite, got ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("points coincide; displacement multiplicity is undefined")]
    DegeneratePair,
    #[error("segment has zero length")]
    ZeroLengthSegment,
    #[error("segment displacement norm must be < 1, got {norm}")]
    SegmentTooLong { norm: f64 },
    #[error("configurations have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
}

/// A point on the unit square torus, stored by its canonical representative
/// in `[-1/2, 1/2)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint<S> {
    x: S,
    y: S,
}

impl<S: TorusScalar> TorusPoint<S> {
    /// Wrap raw coordinates onto their canonical representative.
    pub fn wrap(x: S, y: S) -> Result<Self, TorusError> {
        if !x.is_finite_value() || !y.is_finite_value() {
            return Err(TorusError::NonFinite {
                x: x.to_f64(),
                y: y.to_f64(),
            });
        }
        let (x, _) = x.wrap_unit();
        let (y, _) = y.wrap_unit();
        Ok(TorusPoint { x, y })
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn y(&self) -> &S {
        &self.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn to_numeric(&self) -> TorusPoint<f64> {
        let (x, y) = self.to_f64();
        TorusPoint { x, y }
    }

    /// Translate by a raw vector and re-wrap.
    pub fn translated(&self, dx: &S, dy: &S) -> Self {
        let (x, _) = (self.x.clone() + dx.clone()).wrap_unit();
        let (y, _) = (self.y.clone() + dy.clone()).wrap_unit();
        TorusPoint { x, y }
    }
}

/// The minimal lattice displacement from one canonical point to another,
/// together with the lattice offset that realizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct Displacement<S> {
    pub dx: S,
    pub dy: S,
    /// Integer translate `(mx, my)` with `q - p + (mx, my) = (dx, dy)`.
    pub offset: (i32, i32),
}

impl<S: TorusScalar> Displacement<S> {
    pub fn norm_squared(&self) -> S {
        self.dx.clone() * self.dx.clone() + self.dy.clone() * self.dy.clone()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().to_f64().sqrt()
    }

    pub fn negated(&self) -> Self {
        Displacement {
            dx: -self.dx.clone(),
            dy: -self.dy.clone(),
            offset: (-self.offset.0, -self.offset.1),
        }
    }
}

/// Minimal displacement from `p` to `q`.
///
/// Per-coordinate minimization: each canonical coordinate difference lies in
/// `(-1, 1)`, so re-wrapping it yields the representative in `[-1/2, 1/2)`
/// and the offset used is in `{-1, 0, 1}`.
pub fn min_displacement<S: TorusScalar>(p: &TorusPoint<S>, q: &TorusPoint<S>) -> Displacement<S> {
    let (dx, kx) = (q.x.clone() - p.x.clone()).wrap_unit();
    let (dy, ky) = (q.y.clone() - p.y.clone()).wrap_unit();
    Displacement {
        dx,
        dy,
        offset: (-kx as i32, -ky as i32),
    }
}

/// Exact squared toroidal distance.
pub fn distance_squared<S: TorusScalar>(p: &TorusPoint<S>, q: &TorusPoint<S>) -> S {
    min_displacement(p, q).norm_squared()
}

/// Toroidal distance as a double.
pub fn torus_distance<S: TorusScalar>(p: &TorusPoint<S>, q: &TorusPoint<S>) -> f64 {
    distance_squared(p, q).to_f64().sqrt()
}

/// All displacements `q - p + m` for `m` in `{-1, 0, 1}^2`, in a fixed scan
/// order.
fn offset_displacements<S: TorusScalar>(
    p: &TorusPoint<S>,
    q: &TorusPoint<S>,
) -> Vec<Displacement<S>> {
    let rx = q.x.clone() - p.x.clone();
    let ry = q.y.clone() - p.y.clone();
    let mut out = Vec::with_capacity(9);
    for mx in -1i32..=1 {
        for my in -1i32..=1 {
            out.push(Displacement {
                dx: rx.clone() + S::from_int(mx as i64),
                dy: ry.clone() + S::from_int(my as i64),
                offset: (mx, my),
            });
        }
    }
    out
}

/// The displacements that realize the minimal distance within a relative
/// tolerance: every offset whose distance is at most `(1 + tol)` times the
/// minimum. With `tol = 0` the comparison is exact.
pub fn realizing_displacements<S: TorusScalar>(
    p: &TorusPoint<S>,
    q: &TorusPoint<S>,
    tol: &S,
) -> Result<Vec<Displacement<S>>, TorusError> {
    let all = offset_displacements(p, q);
    let min2 = all
        .iter()
        .map(|d| d.norm_squared())
        .min_by(|a, b| a.partial_cmp(b).expect("finite norms"))
        .expect("nine candidates");
    if min2 == S::zero() {
        return Err(TorusError::DegeneratePair);
    }
    let scale = (S::one() + tol.clone()) * (S::one() + tol.clone());
    let cutoff = min2 * scale;
    Ok(all
        .into_iter()
        .filter(|d| d.norm_squared() <= cutoff)
        .collect())
}

/// Number of distinct lattice offsets achieving the minimal distance within
/// the relative tolerance. Distinguishes a simple tangency from a double
/// tangency through the torus.
pub fn distance_multiplicity<S: TorusScalar>(
    p: &TorusPoint<S>,
    q: &TorusPoint<S>,
    tol: &S,
) -> Result<usize, TorusError> {
    Ok(realizing_displacements(p, q, tol)?.len())
}
