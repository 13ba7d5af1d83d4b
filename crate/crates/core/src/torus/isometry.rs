//! Isometries of the square torus: the 8-element point group of the square
//! lattice semidirect with translations.

use super::{min_displacement, TorusError, TorusPoint};
use crate::scalar::TorusScalar;

/// The 8 linear parts: rotations by multiples of 90 degrees and reflections
/// across the two axes and the two diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointSymmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    FlipMainDiagonal,
    FlipAntiDiagonal,
}

impl PointSymmetry {
    pub const ALL: [PointSymmetry; 8] = [
        PointSymmetry::Identity,
        PointSymmetry::Rot90,
        PointSymmetry::Rot180,
        PointSymmetry::Rot270,
        PointSymmetry::FlipX,
        PointSymmetry::FlipY,
        PointSymmetry::FlipMainDiagonal,
        PointSymmetry::FlipAntiDiagonal,
    ];

    /// Row-major integer matrix with entries in `{-1, 0, 1}`.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            PointSymmetry::Identity => [[1, 0], [0, 1]],
            PointSymmetry::Rot90 => [[0, -1], [1, 0]],
            PointSymmetry::Rot180 => [[-1, 0], [0, -1]],
            PointSymmetry::Rot270 => [[0, 1], [-1, 0]],
            PointSymmetry::FlipX => [[1, 0], [0, -1]],
            PointSymmetry::FlipY => [[-1, 0], [0, 1]],
            PointSymmetry::FlipMainDiagonal => [[0, 1], [1, 0]],
            PointSymmetry::FlipAntiDiagonal => [[0, -1], [-1, 0]],
        }
    }

    fn from_matrix(m: [[i64; 2]; 2]) -> Self {
        *Self::ALL
            .iter()
            .find(|s| s.matrix() == m)
            .expect("product of point-group matrices is in the point group")
    }

    /// Apply the linear part to raw coordinates.
    pub fn apply_raw<S: TorusScalar>(self, x: &S, y: &S) -> (S, S) {
        let m = self.matrix();
        let term = |c: i64, v: &S| match c {
            0 => S::zero(),
            1 => v.clone(),
            -1 => -v.clone(),
            _ => unreachable!(),
        };
        (
            term(m[0][0], x) + term(m[0][1], y),
            term(m[1][0], x) + term(m[1][1], y),
        )
    }

    pub fn compose(self, other: Self) -> Self {
        let a = self.matrix();
        let b = other.matrix();
        let mut m = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::from_matrix(m)
    }

    /// All 8 matrices are orthogonal, so the inverse is the transpose.
    pub fn inverse(self) -> Self {
        let m = self.matrix();
        Self::from_matrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }
}

/// An isometry `p -> wrap(Q p + t)` of the square torus.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryMap<S> {
    pub linear: PointSymmetry,
    pub translation: TorusPoint<S>,
}

impl<S: TorusScalar> IsometryMap<S> {
    pub fn identity() -> Self {
        IsometryMap {
            linear: PointSymmetry::Identity,
            translation: TorusPoint::wrap(S::zero(), S::zero()).expect("zero is finite"),
        }
    }

    pub fn new(linear: PointSymmetry, translation: TorusPoint<S>) -> Self {
        IsometryMap {
            linear,
            translation,
        }
    }

    pub fn apply(&self, p: &TorusPoint<S>) -> TorusPoint<S> {
        let (x, y) = self.linear.apply_raw(p.x(), p.y());
        TorusPoint::wrap(
            x + self.translation.x().clone(),
            y + self.translation.y().clone(),
        )
        .expect("isometry of finite point is finite")
    }

    /// `self` after `other`: `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        let (tx, ty) = self
            .linear
            .apply_raw(other.translation.x(), other.translation.y());
        IsometryMap {
            linear: self.linear.compose(other.linear),
            translation: TorusPoint::wrap(
                tx + self.translation.x().clone(),
                ty + self.translation.y().clone(),
            )
            .expect("finite"),
        }
    }

    pub fn inverse(&self) -> Self {
        let q_inv = self.linear.inverse();
        let (tx, ty) = q_inv.apply_raw(self.translation.x(), self.translation.y());
        IsometryMap {
            linear: q_inv,
            translation: TorusPoint::wrap(-tx, -ty).expect("finite"),
        }
    }
}

/// Apply an isometry to a point (free-function form).
pub fn apply_isometry<S: TorusScalar>(iso: &IsometryMap<S>, p: &TorusPoint<S>) -> TorusPoint<S> {
    iso.apply(p)
}

/// Search for an isometry plus vertex relabeling carrying `a` onto `b`, with
/// every image within `tol` of its target (toroidal distance per coordinate).
///
/// For each of the 8 linear parts and each anchor pair `(i, j)` the candidate
/// translation is `b[j] - Q a[i]`; the induced matching is then tested
/// greedily. Returns the witness isometry and the permutation `perm` with
/// `iso(a[k]) ~ b[perm[k]]`.
pub fn find_isometry(
    a: &[TorusPoint<f64>],
    b: &[TorusPoint<f64>],
    tol: f64,
) -> Result<Option<(IsometryMap<f64>, Vec<usize>)>, TorusError> {
    if a.len() != b.len() {
        return Err(TorusError::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(Some((IsometryMap::identity(), Vec::new())));
    }
    for linear in PointSymmetry::ALL {
        let images: Vec<(f64, f64)> = a.iter().map(|p| linear.apply_raw(p.x(), p.y())).collect();
        for i in 0..n {
            for j in 0..n {
                let translation = TorusPoint::wrap(b[j].x() - images[i].0, b[j].y() - images[i].1)
                    .expect("finite");
                let iso = IsometryMap::new(linear, translation.clone());
                if let Some(perm) = try_matching(&images, &translation, b, tol) {
                    return Ok(Some((iso, perm)));
                }
            }
        }
    }
    Ok(None)
}

fn try_matching(
    images: &[(f64, f64)],
    translation: &TorusPoint<f64>,
    b: &[TorusPoint<f64>],
    tol: f64,
) -> Option<Vec<usize>> {
    let n = b.len();
    let mut used = vec![false; n];
    let mut perm = vec![0usize; n];
    for (k, (ix, iy)) in images.iter().enumerate() {
        let mapped =
            TorusPoint::wrap(ix + translation.x(), iy + translation.y()).expect("finite");
        let mut found = None;
        for (t, target) in b.iter().enumerate() {
            if used[t] {
                continue;
            }
            let d = min_displacement(&mapped, target);
            if d.dx.abs() <= tol && d.dy.abs() <= tol {
                found = Some(t);
                break;
            }
        }
        match found {
            Some(t) => {
                used[t] = true;
                perm[k] = t;
            }
            None => return None,
        }
    }
    Some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn fpt(x: f64, y: f64) -> TorusPoint<f64> {
        TorusPoint::wrap(x, y).unwrap()
    }

    #[test]
    fn identity_fixes_points() {
        let p = fpt(0.2, 0.2);
        assert_eq!(IsometryMap::identity().apply(&p), p);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let iso = IsometryMap::new(PointSymmetry::Rot90, fpt(0.0, 0.0));
        let p = fpt(0.2, 0.0);
        let q = iso.apply(&p);
        assert!((q.x() - 0.0).abs() < 1e-15);
        assert!((q.y() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn translation_wraps() {
        let iso = IsometryMap::new(PointSymmetry::Identity, fpt(0.5, 0.0));
        let p = fpt(0.25, 0.0);
        let q = iso.apply(&p);
        assert!((q.x() - (-0.25)).abs() < 1e-15);
    }

    #[test]
    fn exact_isometry_preserves_distance() {
        let p = TorusPoint::wrap(
            parse_rational("13/36").unwrap(),
            parse_rational("-13/36").unwrap(),
        )
        .unwrap();
        let q = TorusPoint::wrap(
            parse_rational("11/36").unwrap(),
            parse_rational("1/36").unwrap(),
        )
        .unwrap();
        let t = TorusPoint::wrap(
            parse_rational("1/3").unwrap(),
            parse_rational("-2/7").unwrap(),
        )
        .unwrap();
        for linear in PointSymmetry::ALL {
            let iso = IsometryMap::new(linear, t.clone());
            assert_eq!(
                super::super::distance_squared(&iso.apply(&p), &iso.apply(&q)),
                super::super::distance_squared(&p, &q),
            );
        }
    }

    #[test]
    fn group_axioms() {
        for a in PointSymmetry::ALL {
            assert_eq!(a.compose(a.inverse()), PointSymmetry::Identity);
            for b in PointSymmetry::ALL {
                // Closure is implicit in from_matrix not panicking.
                let _ = a.compose(b);
            }
        }
    }

    #[test]
    fn isometry_inverse_round_trip() {
        let iso = IsometryMap::new(PointSymmetry::Rot270, fpt(0.31, -0.17));
        let p = fpt(0.05, 0.44);
        let back = iso.inverse().apply(&iso.apply(&p));
        assert!((back.x() - p.x()).abs() < 1e-12);
        assert!((back.y() - p.y()).abs() < 1e-12);
    }

    #[test]
    fn find_isometry_size_mismatch() {
        let a = vec![fpt(0.0, 0.0)];
        let b = vec![fpt(0.0, 0.0), fpt(0.1, 0.1)];
        assert!(find_isometry(&a, &b, 1e-7).is_err());
    }

    #[test]
    fn find_isometry_detects_perturbation() {
        let a = vec![fpt(0.0, 0.0), fpt(0.3, 0.1), fpt(-0.2, 0.4)];
        let mut b = a.clone();
        b[1] = fpt(0.3 + 1e-3, 0.1);
        assert!(find_isometry(&a, &b, 1e-9).unwrap().is_none());
        assert!(find_isometry(&a, &b, 1e-2).unwrap().is_some());
    }
}
