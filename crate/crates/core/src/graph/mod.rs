//! Small-graph utilities: isomorphism, planarity, bipartiteness, a catalog
//! of named graphs, and the planar penny-graph edge bound.
//!
//! Everything here is sized for graphs with at most 16 vertices, which leaves
//! headroom over the 7-vertex graphs the packing side produces; adjacency is
//! a bitmask per vertex.

pub mod planarity;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use planarity::{check_planarity, is_planar, PlanarityVerdict};

pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices; the limit is {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("edge bound is undefined for zero vertices")]
    ZeroVertices,
}

/// Undirected simple graph on at most 16 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    n: usize,
    adj: [u16; MAX_VERTICES],
}

impl SmallGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        Ok(SmallGraph {
            n,
            adj: [0; MAX_VERTICES],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SmallGraph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[v];
        (0..self.n).filter(move |&u| mask & (1 << u) != 0)
    }

    /// Edges as `(i, j)` pairs with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relabel vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut g = SmallGraph::new(self.n)?;
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v])?;
        }
        Ok(g)
    }
}

/// JSON form of the graph interchange schema: 0-based indices, `i < j`.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SmallGraph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        SmallGraph::from_edges(json.n, &json.edges)
    }
}

fn complete(n: usize) -> SmallGraph {
    let mut g = SmallGraph::new(n).expect("catalog sizes fit");
    for i in 0..n {
        for j in (i + 1)..n {
            g.add_edge(i, j).expect("valid");
        }
    }
    g
}

fn complete_bipartite(a: usize, b: usize) -> SmallGraph {
    let mut g = SmallGraph::new(a + b).expect("catalog sizes fit");
    for i in 0..a {
        for j in 0..b {
            g.add_edge(i, a + j).expect("valid");
        }
    }
    g
}

fn octahedron() -> SmallGraph {
    // Complete graph on 6 vertices minus the perfect matching of antipodal
    // pairs (0,3), (1,4), (2,5).
    let mut g = complete(6);
    g.remove_edge(0, 3);
    g.remove_edge(1, 4);
    g.remove_edge(2, 5);
    g
}

fn cycle(n: usize) -> Result<SmallGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::UnknownName(format!("cycle({n})")));
    }
    let mut g = SmallGraph::new(n)?;
    for i in 0..n {
        g.add_edge(i, (i + 1) % n)?;
    }
    Ok(g)
}

fn path(n: usize) -> Result<SmallGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::UnknownName("path(0)".into()));
    }
    let mut g = SmallGraph::new(n)?;
    for i in 0..n.saturating_sub(1) {
        g.add_edge(i, i + 1)?;
    }
    Ok(g)
}

/// Construct a named graph. Accepted names: `K4`, `K5`, `K6`, `K7`, `K33`
/// (also `K3,3`), `octahedron`, `cycle(n)`, `path(n)`; case-insensitive.
pub fn named_graph(name: &str) -> Result<SmallGraph, GraphError> {
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "k4" => return Ok(complete(4)),
        "k5" => return Ok(complete(5)),
        "k6" => return Ok(complete(6)),
        "k7" => return Ok(complete(7)),
        "k33" | "k3,3" => return Ok(complete_bipartite(3, 3)),
        "octahedron" => return Ok(octahedron()),
        _ => {}
    }
    for (prefix, ctor) in [
        ("cycle(", cycle as fn(usize) -> Result<SmallGraph, GraphError>),
        ("path(", path),
    ] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            if let Some(num) = rest.strip_suffix(')') {
                if let Ok(n) = num.parse::<usize>() {
                    return ctor(n).map_err(|_| GraphError::UnknownName(name.to_string()));
                }
            }
        }
    }
    Err(GraphError::UnknownName(name.to_string()))
}

/// Names checked by `identify`, most specific first.
fn identification_candidates(n: usize) -> Vec<String> {
    let mut names = Vec::new();
    if (4..=7).contains(&n) {
        names.push(format!("K{n}"));
    }
    if n == 6 {
        names.push("K3,3".to_string());
        names.push("octahedron".to_string());
    }
    if n >= 3 {
        names.push(format!("cycle({n})"));
    }
    names.push(format!("path({n})"));
    names
}

/// Match a graph against the named catalog, returning the display name of
/// the first isomorphic entry.
pub fn identify(g: &SmallGraph) -> Option<String> {
    for name in identification_candidates(g.n()) {
        if let Ok(h) = named_graph(&name) {
            if is_isomorphic(g, &h).is_some() {
                return Some(name);
            }
        }
    }
    None
}

/// Exhaustive isomorphism test with degree-sequence pruning.
///
/// Returns the lexicographically first witness `perm` (indexed by vertices of
/// `g`, `perm[u]` a vertex of `h`) such that adjacency is preserved both
/// ways, or `None` when no bijection exists.
pub fn is_isomorphic(g: &SmallGraph, h: &SmallGraph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let n = g.n();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        g: &SmallGraph,
        h: &SmallGraph,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        k: usize,
    ) -> bool {
        let n = g.n();
        if k == n {
            return true;
        }
        for candidate in 0..n {
            if used[candidate] || g.degree(k) != h.degree(candidate) {
                continue;
            }
            let consistent = (0..k).all(|m| g.has_edge(m, k) == h.has_edge(perm[m], candidate));
            if !consistent {
                continue;
            }
            perm[k] = candidate;
            used[candidate] = true;
            if extend(g, h, perm, used, k + 1) {
                return true;
            }
            used[candidate] = false;
            perm[k] = usize::MAX;
        }
        false
    }
    if extend(g, h, &mut perm, &mut used, 0) {
        Some(perm)
    } else {
        None
    }
}

/// Two-coloring by breadth-first traversal. Returns the bipartition with
/// each side ascending, or `None` if an odd cycle exists.
pub fn is_bipartite(g: &SmallGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let mut color = vec![None::<bool>; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            for v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut one = Vec::new();
    let mut two = Vec::new();
    for (v, c) in color.iter().enumerate() {
        if c.expect("all colored") {
            two.push(v);
        } else {
            one.push(v);
        }
    }
    Some((one, two))
}

/// Maximum edge count of a planar penny graph on `n` vertices:
/// `floor(3n - sqrt(12n - 3))`, with the floor taken exactly via integer
/// square root.
pub fn harborth_bound(n: u64) -> Result<u64, GraphError> {
    if n == 0 {
        return Err(GraphError::ZeroVertices);
    }
    let m = 12 * n - 3;
    let s = m.isqrt();
    if s * s == m {
        Ok(3 * n - s)
    } else {
        Ok(3 * n - s - 1)
    }
}
