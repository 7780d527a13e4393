//! Labeled simple undirected graphs and the structural predicates the
//! counting engine relies on: connectivity, bipartiteness, atomicity
//! (cut-vertex freeness), induced subgraphs and deletions.

use crate::error::{Error, Result};

/// A finite simple undirected graph with vertices labeled `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted, so two graphs with the
/// same vertex count and the same edge set compare equal regardless of the
/// order edges were supplied in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Deterministic memoization key for a labeled graph.
///
/// Equal labeled graphs map to equal keys. This is *not* an isomorphism
/// canonical form; relabeled copies of the same graph get distinct keys.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GraphKey(Box<[u64]>);

impl Graph {
    /// Validates and builds a graph. Rejects self-loops, duplicate edges and
    /// endpoints `>= n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("vertex count {n} too large")));
        }
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has endpoint >= n = {n}"
                )));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            let dup = norm.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                dup.0, dup.1
            )));
        }
        Ok(Graph { n, edges: norm })
    }

    /// The empty graph on zero vertices.
    pub fn empty() -> Self {
        Graph {
            n: 0,
            edges: Vec::new(),
        }
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Path with `edges` edges on `edges + 1` vertices.
    pub fn path(edges: usize) -> Self {
        Graph::new(edges + 1, (0..edges).map(|i| (i, i + 1))).unwrap()
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::new(
            a + b,
            (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))),
        )
        .unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Adjacency lists for all vertices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff the graph has at most one connected component.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True iff the vertices admit a proper 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &v in &adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Cut vertices (articulation points), by iterative DFS lowlink.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut is_cut = vec![false; self.n];
        let mut timer = 0usize;

        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            // Stack frames: (vertex, parent, next neighbor index).
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            let mut root_children = 0usize;
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                if *idx < adj[u].len() {
                    let v = adj[u][*idx];
                    *idx += 1;
                    if disc[v] == usize::MAX {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else if v != parent {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[u]);
                        if p != root && low[u] >= disc[p] {
                            is_cut[p] = true;
                        }
                    }
                }
            }
            is_cut[root] = root_children >= 2;
        }
        (0..self.n).filter(|&v| is_cut[v]).collect()
    }

    /// True iff the (connected, non-edgeless) graph admits no decomposition
    /// into two connected edge-disjoint subgraphs sharing one vertex:
    /// it is K2, or it has no cut vertex.
    pub fn is_atomic(&self) -> Result<bool> {
        if self.edges.is_empty() {
            return Err(Error::InvalidArgument(
                "atomicity is defined for graphs with at least one edge".into(),
            ));
        }
        if !self.is_connected() {
            return Err(Error::InvalidArgument(
                "atomicity is defined for connected graphs".into(),
            ));
        }
        if self.n == 2 {
            return Ok(true);
        }
        Ok(self.cut_vertices().is_empty())
    }

    /// Subgraph induced by `verts`, relabeled densely; `verts[i]` is the old
    /// label of new vertex `i`, so the argument doubles as the mapping.
    pub fn induced_subgraph(&self, verts: &[usize]) -> Result<Graph> {
        let mut new_label = vec![usize::MAX; self.n];
        for (new, &old) in verts.iter().enumerate() {
            if old >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {old} out of range (n = {})",
                    self.n
                )));
            }
            if new_label[old] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {old} repeated")));
            }
            new_label[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_label[u] != usize::MAX && new_label[v] != usize::MAX)
            .map(|&(u, v)| (new_label[u], new_label[v]));
        Graph::new(verts.len(), edges)
    }

    /// Removes one edge, keeping both endpoints.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let key = (u.min(v), u.max(v));
        match self.edges.binary_search(&key) {
            Ok(pos) => {
                let mut edges = self.edges.clone();
                edges.remove(pos);
                Ok(Graph { n: self.n, edges })
            }
            Err(_) => Err(Error::InvalidArgument(format!("no edge ({u},{v})"))),
        }
    }

    /// Removes the given vertices and all incident edges, relabeling the
    /// survivors densely in increasing order of their old labels.
    pub fn delete_vertices(&self, verts: &[usize]) -> Result<Graph> {
        let mut drop = vec![false; self.n];
        for &v in verts {
            if v >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} out of range (n = {})",
                    self.n
                )));
            }
            drop[v] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !drop[v]).collect();
        self.induced_subgraph(&keep)
    }

    /// Deterministic key over the exact labeled encoding (n + sorted edges).
    pub fn cache_key(&self) -> GraphKey {
        let mut words = Vec::with_capacity(1 + self.edges.len());
        words.push(self.n as u64);
        for &(u, v) in &self.edges {
            words.push(((u as u64) << 32) | v as u64);
        }
        GraphKey(words.into_boxed_slice())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// A connected graph with one selected ("topmost") vertex.
///
/// The degenerate single-vertex graph is allowed; it plays the role of the
/// identity in the composition algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootedGraph {
    graph: Graph,
    root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        if root >= graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "root {root} out of range (n = {})",
                graph.vertex_count()
            )));
        }
        if !graph.is_connected() {
            return Err(Error::InvalidArgument(
                "rooted graphs must be connected".into(),
            ));
        }
        Ok(RootedGraph { graph, root })
    }

    /// The single-vertex rooted graph.
    pub fn single_vertex() -> Self {
        RootedGraph {
            graph: Graph::new(1, []).unwrap(),
            root: 0,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_graph_validates() {
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4, Graph::cycle(4));
        assert!(matches!(
            Graph::new(3, [(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::cycle(4).is_connected());
        assert!(!Graph::new(4, [(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::new(1, []).unwrap().is_connected());
        assert!(Graph::empty().is_connected());
    }

    #[test]
    fn bipartiteness() {
        assert!(Graph::cycle(6).is_bipartite());
        assert!(!Graph::cycle(3).is_bipartite());
        // C6 plus the antipodal chord stays bipartite.
        let mut edges: Vec<_> = Graph::cycle(6).edges().to_vec();
        edges.push((0, 3));
        assert!(Graph::new(6, edges).unwrap().is_bipartite());
        // ... but a short chord does not.
        let mut edges: Vec<_> = Graph::cycle(6).edges().to_vec();
        edges.push((0, 2));
        assert!(!Graph::new(6, edges).unwrap().is_bipartite());
    }

    #[test]
    fn atomicity_basics() {
        assert!(Graph::new(2, [(0, 1)]).unwrap().is_atomic().unwrap());
        assert!(!Graph::path(2).is_atomic().unwrap());
        assert!(Graph::cycle(8).is_atomic().unwrap());
        assert!(Graph::new(4, [(0, 1), (2, 3)])
            .unwrap()
            .is_atomic()
            .is_err());
        assert!(Graph::new(1, []).unwrap().is_atomic().is_err());
    }

    #[test]
    fn cut_vertices_on_known_shapes() {
        assert_eq!(Graph::path(2).cut_vertices(), vec![1]);
        assert!(Graph::cycle(5).cut_vertices().is_empty());
        // Two triangles sharing vertex 2.
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(g.cut_vertices(), vec![2]);
    }

    #[test]
    fn induced_and_deletions() {
        let c4 = Graph::cycle(4);
        assert_eq!(c4.induced_subgraph(&[0, 1, 2, 3]).unwrap(), c4);
        let p = c4.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(p.edge_count(), 2);
        assert!(p.is_connected());
        assert_eq!(c4.induced_subgraph(&[]).unwrap(), Graph::empty());

        let path = c4.delete_edge(3, 0).unwrap();
        assert_eq!(path.edge_count(), 3);
        assert!(path.is_connected());
        assert!(c4.delete_edge(0, 2).is_err());

        let p2 = c4.delete_vertices(&[3]).unwrap();
        assert_eq!(p2, Graph::path(2));
        assert_eq!(
            Graph::new(2, [(0, 1)]).unwrap().delete_vertices(&[0, 1]).unwrap(),
            Graph::empty()
        );
        // No surviving edge touches a deleted vertex's former label.
        let g = Graph::cycle(5).delete_vertices(&[2]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.edges().iter().all(|&(u, v)| u < 4 && v < 4));
    }

    #[test]
    fn cache_keys() {
        let a = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = Graph::new(4, [(3, 0), (2, 3), (1, 0), (2, 1)]).unwrap();
        assert_eq!(a.cache_key(), b.cache_key());
        assert_ne!(Graph::cycle(4).cache_key(), Graph::path(3).cache_key());
        assert_ne!(Graph::empty().cache_key(), Graph::new(1, []).unwrap().cache_key());
    }

    #[test]
    fn rooted_graph_validation() {
        assert!(RootedGraph::new(Graph::cycle(4), 3).is_ok());
        assert!(RootedGraph::new(Graph::cycle(4), 4).is_err());
        assert!(RootedGraph::new(Graph::new(4, [(0, 1), (2, 3)]).unwrap(), 0).is_err());
        let single = RootedGraph::single_vertex();
        assert_eq!(single.graph().vertex_count(), 1);
    }
}
