//! Planarity testing via face embedding (Demoucron–Malgrange–Pertuiset).
//!
//! The graph is split into biconnected blocks; each block is embedded
//! incrementally: starting from a cycle, fragments are placed into admissible
//! faces, forced placements first. A fragment with no admissible face proves
//! non-planarity. Quadratic time, which is plenty below 16 vertices.

use super::SmallGraph;

/// Boolean verdict plus, for non-planar graphs, an edge-minimal non-planar
/// subgraph (a subdivision of K5 or K3,3, possibly with isolated vertices).
#[derive(Debug, Clone)]
pub struct PlanarityVerdict {
    pub planar: bool,
    pub witness: Option<SmallGraph>,
}

pub fn is_planar(g: &SmallGraph) -> bool {
    blocks(g).iter().all(|b| dmp_block_planar(b))
}

/// Planarity verdict with a Kuratowski witness for non-planar input, found
/// by greedily deleting edges while preserving non-planarity.
pub fn check_planarity(g: &SmallGraph) -> PlanarityVerdict {
    if is_planar(g) {
        return PlanarityVerdict {
            planar: true,
            witness: None,
        };
    }
    let mut h = g.clone();
    for (u, v) in g.edges() {
        h.remove_edge(u, v);
        if is_planar(&h) {
            h.add_edge(u, v).expect("restoring a removed edge");
        }
    }
    PlanarityVerdict {
        planar: false,
        witness: Some(h),
    }
}

/// Biconnected blocks as edge lists (standard lowpoint computation).
fn blocks(g: &SmallGraph) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        g: &'a SmallGraph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
    }

    fn dfs(st: &mut State, u: usize, parent: Option<usize>) {
        st.time += 1;
        st.disc[u] = st.time;
        st.low[u] = st.time;
        let neighbors: Vec<usize> = st.g.neighbors(u).collect();
        for v in neighbors {
            if Some(v) == parent {
                continue;
            }
            if st.disc[v] == 0 {
                st.stack.push((u, v));
                dfs(st, v, Some(u));
                st.low[u] = st.low[u].min(st.low[v]);
                if st.low[v] >= st.disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = st.stack.pop() {
                        block.push(e);
                        if e == (u, v) {
                            break;
                        }
                    }
                    st.blocks.push(block);
                }
            } else if st.disc[v] < st.disc[u] {
                st.stack.push((u, v));
                st.low[u] = st.low[u].min(st.disc[v]);
            }
        }
    }

    let mut st = State {
        g,
        disc: vec![0; g.n()],
        low: vec![0; g.n()],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..g.n() {
        if st.disc[v] == 0 {
            dfs(&mut st, v, None);
        }
    }
    st.blocks
}

struct Dmp {
    adj: [u16; super::MAX_VERTICES],
    verts: u16,
    h_adj: [u16; super::MAX_VERTICES],
    h_verts: u16,
    faces: Vec<Vec<usize>>,
}

enum Fragment {
    Chord(usize, usize),
    Component { members: u16, attachments: u16 },
}

impl Fragment {
    fn attachments(&self) -> u16 {
        match *self {
            Fragment::Chord(u, v) => (1 << u) | (1 << v),
            Fragment::Component { attachments, .. } => attachments,
        }
    }
}

fn mask_vertices(mask: u16) -> impl Iterator<Item = usize> {
    (0..super::MAX_VERTICES).filter(move |&v| mask & (1 << v) != 0)
}

fn dmp_block_planar(edges: &[(usize, usize)]) -> bool {
    let mut adj = [0u16; super::MAX_VERTICES];
    let mut verts = 0u16;
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        verts |= (1 << u) | (1 << v);
    }
    let k = verts.count_ones() as usize;
    let m = edges.len();
    // A non-planar graph needs at least 5 vertices and 9 edges (K3,3).
    if k < 5 || m < 9 {
        return true;
    }
    if m > 3 * k - 6 {
        return false;
    }

    let mut st = Dmp {
        adj,
        verts,
        h_adj: [0; super::MAX_VERTICES],
        h_verts: 0,
        faces: Vec::new(),
    };
    let cycle = st.find_cycle().expect("biconnected block with >= 9 edges has a cycle");
    for i in 0..cycle.len() {
        st.add_h_edge(cycle[i], cycle[(i + 1) % cycle.len()]);
    }
    st.faces.push(cycle.clone());
    st.faces.push(cycle);

    loop {
        let fragments = st.fragments();
        if fragments.is_empty() {
            return true;
        }
        let face_masks: Vec<u16> = st
            .faces
            .iter()
            .map(|f| f.iter().fold(0u16, |m, &v| m | (1 << v)))
            .collect();
        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|frag| {
                let att = frag.attachments();
                (0..st.faces.len())
                    .filter(|&f| face_masks[f] & att == att)
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return false;
        }
        // Forced placements first, otherwise any fragment works.
        let pick = admissible
            .iter()
            .position(|a| a.len() == 1)
            .unwrap_or(0);
        let face_idx = admissible[pick][0];
        let path = st.fragment_path(&fragments[pick]);
        st.embed_path(face_idx, &path);
    }
}

impl Dmp {
    fn add_h_edge(&mut self, u: usize, v: usize) {
        self.h_adj[u] |= 1 << v;
        self.h_adj[v] |= 1 << u;
        self.h_verts |= (1 << u) | (1 << v);
    }

    /// Any cycle, via depth-first search until a back edge appears.
    fn find_cycle(&self) -> Option<Vec<usize>> {
        let start = mask_vertices(self.verts).next()?;
        let mut parent = [usize::MAX; super::MAX_VERTICES];
        let mut on_path = vec![start];
        let mut visited = 1u16 << start;
        // Iterative DFS keeping the current tree path explicit.
        let mut stack = vec![(start, self.adj[start])];
        while let Some((u, mut remaining)) = stack.pop() {
            let mut advanced = false;
            while remaining != 0 {
                let v = remaining.trailing_zeros() as usize;
                remaining &= remaining - 1;
                if v == parent[u] {
                    continue;
                }
                if visited & (1 << v) != 0 {
                    if let Some(pos) = on_path.iter().position(|&w| w == v) {
                        return Some(on_path[pos..].to_vec());
                    }
                    continue;
                }
                visited |= 1 << v;
                parent[v] = u;
                stack.push((u, remaining));
                stack.push((v, self.adj[v]));
                on_path.push(v);
                advanced = true;
                break;
            }
            if !advanced {
                on_path.pop();
            }
        }
        None
    }

    fn fragments(&self) -> Vec<Fragment> {
        let mut out = Vec::new();
        // Chords: edges outside H with both endpoints embedded.
        for u in mask_vertices(self.h_verts) {
            let candidates = self.adj[u] & !self.h_adj[u] & self.h_verts;
            for v in mask_vertices(candidates) {
                if u < v {
                    out.push(Fragment::Chord(u, v));
                }
            }
        }
        // Components of the graph minus H, with their attachments.
        let mut unassigned = self.verts & !self.h_verts;
        while unassigned != 0 {
            let seed = unassigned.trailing_zeros() as usize;
            let mut members = 1u16 << seed;
            let mut frontier = vec![seed];
            while let Some(w) = frontier.pop() {
                let next = self.adj[w] & !self.h_verts & !members;
                for x in mask_vertices(next) {
                    members |= 1 << x;
                    frontier.push(x);
                }
            }
            let mut attachments = 0u16;
            for w in mask_vertices(members) {
                attachments |= self.adj[w] & self.h_verts;
            }
            out.push(Fragment::Component {
                members,
                attachments,
            });
            unassigned &= !members;
        }
        out
    }

    /// A path through the fragment between two distinct attachments.
    fn fragment_path(&self, frag: &Fragment) -> Vec<usize> {
        match *frag {
            Fragment::Chord(u, v) => vec![u, v],
            Fragment::Component {
                members,
                attachments,
            } => {
                let mut att = mask_vertices(attachments);
                let a1 = att.next().expect("biconnected fragment has attachments");
                let a2 = att
                    .next()
                    .expect("biconnected fragment has two attachments");
                // Breadth-first from a1 through the component to a2.
                let mut pred = [usize::MAX; super::MAX_VERTICES];
                let mut visited = 0u16;
                let mut queue = std::collections::VecDeque::new();
                for w in mask_vertices(self.adj[a1] & members) {
                    pred[w] = a1;
                    visited |= 1 << w;
                    queue.push_back(w);
                }
                while let Some(w) = queue.pop_front() {
                    if self.adj[w] & (1 << a2) != 0 {
                        let mut path = vec![a2, w];
                        let mut cur = w;
                        while pred[cur] != a1 {
                            cur = pred[cur];
                            path.push(cur);
                        }
                        path.push(a1);
                        path.reverse();
                        return path;
                    }
                    for x in mask_vertices(self.adj[w] & members & !visited) {
                        visited |= 1 << x;
                        pred[x] = w;
                        queue.push_back(x);
                    }
                }
                unreachable!("attachments of one fragment are connected through it")
            }
        }
    }

    fn embed_path(&mut self, face_idx: usize, path: &[usize]) {
        let boundary = self.faces.swap_remove(face_idx);
        let len = boundary.len();
        let a1 = path[0];
        let a2 = *path.last().expect("path has endpoints");
        let i = boundary
            .iter()
            .position(|&v| v == a1)
            .expect("attachment on face boundary");
        let j = boundary
            .iter()
            .position(|&v| v == a2)
            .expect("attachment on face boundary");
        let interior = &path[1..path.len() - 1];

        let arc = |from: usize, to: usize| {
            let mut out = Vec::new();
            let mut cur = from;
            loop {
                out.push(boundary[cur]);
                if cur == to {
                    break;
                }
                cur = (cur + 1) % len;
            }
            out
        };

        let mut face1 = arc(i, j);
        face1.extend(interior.iter().rev());
        let mut face2 = arc(j, i);
        face2.extend(interior.iter());
        self.faces.push(face1);
        self.faces.push(face2);

        for w in path.windows(2) {
            self.add_h_edge(w[0], w[1]);
        }
    }
}
