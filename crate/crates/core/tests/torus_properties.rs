//! Metric and isometry invariants of the torus geometry.

use proptest::prelude::*;

use penny_torus::optimizer::SplitMix64;
use penny_torus::scalar::{parse_rational, Rat, TorusScalar};
use penny_torus::torus::isometry::{find_isometry, IsometryMap, PointSymmetry};
use penny_torus::torus::{distance_squared, min_displacement, torus_distance, TorusPoint};

fn fpt(x: f64, y: f64) -> TorusPoint<f64> {
    TorusPoint::wrap(x, y).unwrap()
}

fn random_point(rng: &mut SplitMix64) -> TorusPoint<f64> {
    fpt(rng.next_f64() - 0.5, rng.next_f64() - 0.5)
}

proptest! {
    #[test]
    fn wrap_is_idempotent(x in -100.0f64..100.0, y in -100.0f64..100.0) {
        let once = fpt(x, y);
        let twice = fpt(*once.x(), *once.y());
        prop_assert_eq!(once.x().to_bits(), twice.x().to_bits());
        prop_assert_eq!(once.y().to_bits(), twice.y().to_bits());
    }

    #[test]
    fn distance_is_symmetric_and_bounded(
        ax in -0.5f64..0.5, ay in -0.5f64..0.5,
        bx in -0.5f64..0.5, by in -0.5f64..0.5,
    ) {
        let p = fpt(ax, ay);
        let q = fpt(bx, by);
        let dpq = torus_distance(&p, &q);
        let dqp = torus_distance(&q, &p);
        prop_assert_eq!(dpq.to_bits(), dqp.to_bits());
        // No two canonical points are farther than the half-diagonal.
        prop_assert!(dpq <= 0.5f64 * std::f64::consts::SQRT_2 + 1e-15);
    }
}

#[test]
fn triangle_inequality_on_random_triples() {
    let mut rng = SplitMix64::keyed(2024, 0);
    for _ in 0..10_000 {
        let a = random_point(&mut rng);
        let b = random_point(&mut rng);
        let c = random_point(&mut rng);
        let ab = torus_distance(&a, &b);
        let bc = torus_distance(&b, &c);
        let ac = torus_distance(&a, &c);
        assert!(ac <= ab + bc + 1e-12, "triangle violated: {ac} > {ab} + {bc}");
    }
}

#[test]
fn per_coordinate_minimization_matches_brute_force() {
    // Oracle: minimize over the 25 offsets in {-2..2}^2 directly.
    let brute = |p: &TorusPoint<f64>, q: &TorusPoint<f64>| -> f64 {
        let mut best = f64::INFINITY;
        for mx in -2i32..=2 {
            for my in -2i32..=2 {
                let dx = q.x() + mx as f64 - p.x();
                let dy = q.y() + my as f64 - p.y();
                best = best.min(dx * dx + dy * dy);
            }
        }
        best
    };
    let mut rng = SplitMix64::keyed(2024, 1);
    for _ in 0..10_000 {
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let fast = distance_squared(&p, &q);
        let slow = brute(&p, &q);
        assert!(
            (fast - slow).abs() <= 1e-15 * (1.0 + slow),
            "per-coordinate {fast} vs brute {slow}"
        );
        let d = min_displacement(&p, &q);
        assert!(d.dx.abs() <= 0.5 && d.dy.abs() <= 0.5);
        assert!(d.offset.0.abs() <= 1 && d.offset.1.abs() <= 1);
    }
}

#[test]
fn isometries_preserve_distances() {
    let mut rng = SplitMix64::keyed(2024, 2);
    for trial in 0..200 {
        let linear = PointSymmetry::ALL[trial % 8];
        let iso = IsometryMap::new(linear, random_point(&mut rng));
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let before = torus_distance(&p, &q);
        let after = torus_distance(&iso.apply(&p), &iso.apply(&q));
        assert!(
            (before - after).abs() <= 1e-12,
            "{linear:?}: {before} vs {after}"
        );
    }
}

#[test]
fn exact_isometries_preserve_squared_distance_exactly() {
    let p = TorusPoint::wrap(
        parse_rational("13/36").unwrap(),
        parse_rational("-13/36").unwrap(),
    )
    .unwrap();
    let q = TorusPoint::wrap(
        parse_rational("-11/36").unwrap(),
        parse_rational("-1/36").unwrap(),
    )
    .unwrap();
    let t = TorusPoint::wrap(
        parse_rational("5/7").unwrap(),
        parse_rational("-3/11").unwrap(),
    )
    .unwrap();
    let d0: Rat = distance_squared(&p, &q);
    for linear in PointSymmetry::ALL {
        let iso = IsometryMap::new(linear, t.clone());
        assert_eq!(distance_squared(&iso.apply(&p), &iso.apply(&q)), d0);
    }
}

#[test]
fn find_isometry_recovers_random_isometries() {
    let mut rng = SplitMix64::keyed(2024, 3);
    for trial in 0..100 {
        let points: Vec<TorusPoint<f64>> = (0..6).map(|_| random_point(&mut rng)).collect();
        let linear = PointSymmetry::ALL[(trial * 5) % 8];
        let iso = IsometryMap::new(linear, random_point(&mut rng));
        let mut images: Vec<TorusPoint<f64>> = points.iter().map(|p| iso.apply(p)).collect();
        // Shuffle labels deterministically.
        for k in (1..images.len()).rev() {
            let j = (rng.next_u64() as usize) % (k + 1);
            images.swap(k, j);
        }
        let witness = find_isometry(&points, &images, 1e-7).unwrap();
        let (found, perm) = witness.expect("constructed equivalence must be found");
        for (k, p) in points.iter().enumerate() {
            let mapped = found.apply(p);
            let target = &images[perm[k]];
            assert!(torus_distance(&mapped, target) <= 1e-6);
        }
    }
}

proptest! {
    #[test]
    fn segment_crossing_is_symmetric_and_translation_invariant(
        ax in -0.5f64..0.5, ay in -0.5f64..0.5,
        dx1 in -0.45f64..0.45, dy1 in -0.45f64..0.45,
        bx in -0.5f64..0.5, by in -0.5f64..0.5,
        dx2 in -0.45f64..0.45, dy2 in -0.45f64..0.45,
        tx in -0.5f64..0.5, ty in -0.5f64..0.5,
    ) {
        use penny_torus::torus::segment::{segments_cross, GeoSegment};
        prop_assume!(dx1.abs() + dy1.abs() > 1e-6 && dx2.abs() + dy2.abs() > 1e-6);
        let s1 = GeoSegment::new(fpt(ax, ay), dx1, dy1).unwrap();
        let s2 = GeoSegment::new(fpt(bx, by), dx2, dy2).unwrap();
        let forward = segments_cross(&s1, &s2);
        let backward = segments_cross(&s2, &s1);
        prop_assert_eq!(forward, backward);
        // Translating both segments by the same vector preserves crossing.
        let t1 = GeoSegment::new(fpt(ax + tx, ay + ty), dx1, dy1).unwrap();
        let t2 = GeoSegment::new(fpt(bx + tx, by + ty), dx2, dy2).unwrap();
        prop_assert_eq!(segments_cross(&t1, &t2), forward);
    }
}

#[test]
fn find_isometry_respects_tolerance() {
    let mut rng = SplitMix64::keyed(2024, 4);
    let points: Vec<TorusPoint<f64>> = (0..6).map(|_| random_point(&mut rng)).collect();
    let mut perturbed = points.clone();
    perturbed[2] = fpt(perturbed[2].x() + 1e-3, *perturbed[2].y());
    assert!(find_isometry(&points, &perturbed, 1e-9).unwrap().is_none());
}
