//! Small-graph invariants: isomorphism versus brute force, planarity
//! consistency with the Euler bounds, witness validity, and the penny-graph
//! edge bound.

use penny_torus::graph::{
    check_planarity, harborth_bound, is_bipartite, is_isomorphic, is_planar, named_graph,
    SmallGraph,
};
use penny_torus::optimizer::SplitMix64;

fn random_graph(rng: &mut SplitMix64, n: usize, edge_prob: f64) -> SmallGraph {
    let mut g = SmallGraph::new(n).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < edge_prob {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

fn random_permutation(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        let j = (rng.next_u64() as usize) % (k + 1);
        perm.swap(k, j);
    }
    perm
}

/// Brute-force isomorphism oracle: try every permutation.
fn brute_force_isomorphic(g: &SmallGraph, h: &SmallGraph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = (0..n).all(|u| {
            (u + 1..n).all(|v| g.has_edge(u, v) == h.has_edge(perm[u], perm[v]))
        });
        if ok {
            return true;
        }
        // Next lexicographic permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return false;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn isomorphism_agrees_with_brute_force() {
    let mut rng = SplitMix64::keyed(7, 0);
    for trial in 0..200 {
        let n = 4 + (trial % 4); // 4..=7
        let g = random_graph(&mut rng, n, 0.5);
        let h = if trial % 2 == 0 {
            g.relabeled(&random_permutation(&mut rng, n)).unwrap()
        } else {
            random_graph(&mut rng, n, 0.5)
        };
        let fast = is_isomorphic(&g, &h).is_some();
        let slow = brute_force_isomorphic(&g, &h);
        assert_eq!(fast, slow, "disagreement on trial {trial}");
        if let Some(witness) = is_isomorphic(&g, &h) {
            for u in 0..n {
                for v in (u + 1)..n {
                    assert_eq!(g.has_edge(u, v), h.has_edge(witness[u], witness[v]));
                }
            }
        }
    }
}

#[test]
fn planar_verdicts_respect_euler_bounds() {
    let mut rng = SplitMix64::keyed(7, 1);
    for trial in 0..400 {
        let n = 3 + (trial % 8); // 3..=10
        let g = random_graph(&mut rng, n, 0.55);
        if is_planar(&g) {
            assert!(g.edge_count() <= 3 * n - 6);
            if is_bipartite(&g).is_some() {
                assert!(g.edge_count() <= 2 * n - 4);
            }
        }
    }
}

#[test]
fn planarity_invariant_under_relabeling() {
    let mut rng = SplitMix64::keyed(7, 2);
    for name in ["K5", "k33", "octahedron"] {
        let g = named_graph(name).unwrap();
        let expected = is_planar(&g);
        for _ in 0..100 {
            let perm = random_permutation(&mut rng, g.n());
            assert_eq!(is_planar(&g.relabeled(&perm).unwrap()), expected);
        }
    }
}

/// Drop isolated vertices and suppress degree-2 vertices, yielding the
/// topological core of a subdivision.
fn suppressed_core(g: &SmallGraph) -> Option<SmallGraph> {
    let mut edges = g.edges();
    loop {
        let mut degree = vec![0usize; 16];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let Some(mid) = (0..16).find(|&v| degree[v] == 2) else {
            break;
        };
        let incident: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(u, v)| u == mid || v == mid)
            .collect();
        let other = |(u, v): (usize, usize)| if u == mid { v } else { u };
        let (a, b) = (other(incident[0]), other(incident[1]));
        if a == b || edges.contains(&(a.min(b), a.max(b))) {
            // Not a simple subdivision; reject.
            return None;
        }
        edges.retain(|&e| !incident.contains(&e));
        edges.push((a.min(b), a.max(b)));
    }
    // Compact the labels.
    let mut used: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    used.sort_unstable();
    used.dedup();
    let index = |v: usize| used.iter().position(|&u| u == v).unwrap();
    let mut core = SmallGraph::new(used.len()).ok()?;
    for (u, v) in edges {
        core.add_edge(index(u), index(v)).ok()?;
    }
    Some(core)
}

#[test]
fn kuratowski_witnesses_are_valid_subdivisions() {
    let k5 = named_graph("K5").unwrap();
    let k33 = named_graph("k33").unwrap();
    let mut targets: Vec<SmallGraph> = vec![
        named_graph("K5").unwrap(),
        named_graph("k33").unwrap(),
        named_graph("K6").unwrap(),
        named_graph("K7").unwrap(),
    ];
    // Petersen graph: non-planar, triangle-free.
    let petersen = SmallGraph::from_edges(
        10,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
        ],
    )
    .unwrap();
    targets.push(petersen);
    // A few random non-planar graphs.
    let mut rng = SplitMix64::keyed(7, 3);
    while targets.len() < 12 {
        let g = random_graph(&mut rng, 8, 0.6);
        if !is_planar(&g) {
            targets.push(g);
        }
    }
    for g in &targets {
        let verdict = check_planarity(g);
        assert!(!verdict.planar);
        let witness = verdict.witness.expect("witness");
        assert!(!is_planar(&witness));
        for (u, v) in witness.edges() {
            assert!(g.has_edge(u, v), "witness edge outside graph");
        }
        let core = suppressed_core(&witness).expect("witness suppresses to a simple core");
        let is_k5 = is_isomorphic(&core, &k5).is_some();
        let is_k33 = is_isomorphic(&core, &k33).is_some();
        assert!(
            is_k5 || is_k33,
            "core has {} vertices and {} edges",
            core.n(),
            core.edge_count()
        );
    }
}

#[test]
fn harborth_bound_properties() {
    let mut previous = 0;
    for n in 1..=1000u64 {
        let b = harborth_bound(n).unwrap();
        assert!(b < 3 * n, "bound must stay below 3n");
        assert!(b >= previous, "bound must be nondecreasing");
        previous = b;
    }
}

#[test]
fn harborth_bound_matches_float_evaluation() {
    // Independent oracle: IEEE sqrt is exactly rounded, and for n <= 100 the
    // true square root is never close enough to an integer to flip the
    // floor, so the double-precision formula is exact.
    for n in 1..=100u64 {
        let float_value = (3 * n) as f64 - ((12 * n - 3) as f64).sqrt();
        assert_eq!(harborth_bound(n).unwrap(), float_value.floor() as u64, "n = {n}");
    }
    assert_eq!(harborth_bound(11).unwrap(), 21);
}
