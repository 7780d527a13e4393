//! Atomic bipartite graphs: isomorphism tests, canonical forms, the seven
//! reference atoms, and exhaustive enumeration below a cover-count threshold.

use std::collections::BTreeSet;

use crate::count::{count_covers, CoverCount};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Vertex cap for the permutation-based isomorphism machinery.
pub const DEFAULT_ISO_VERTEX_GUARD: usize = 10;

/// Vertex cap for atom enumeration.
pub const DEFAULT_ATOM_VERTEX_GUARD: usize = 10;

fn adjacency_masks(g: &Graph) -> Vec<u16> {
    let mut adj = vec![0u16; g.vertex_count()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn check_iso_guard(g: &Graph) -> Result<()> {
    if g.vertex_count() > DEFAULT_ISO_VERTEX_GUARD {
        return Err(Error::GuardExceeded(format!(
            "isomorphism machinery needs |V| = {} <= {DEFAULT_ISO_VERTEX_GUARD}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// True iff some vertex bijection maps the edges of `g1` onto those of `g2`.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    check_iso_guard(g1)?;
    check_iso_guard(g2)?;
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    let deg1 = g1.degrees();
    let deg2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let adj1 = adjacency_masks(g1);
    let adj2 = adjacency_masks(g2);
    // Order g1's vertices so each one touches as many already-placed
    // vertices as possible; that makes the adjacency constraint bite early.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u16;
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| placed & (1 << v) == 0)
            .max_by_key(|&v| ((adj1[v] & placed).count_ones(), deg1[v], std::cmp::Reverse(v)))
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        k: usize,
        order: &[usize],
        adj1: &[u16],
        adj2: &[u16],
        deg1: &[usize],
        deg2: &[usize],
        map: &mut [usize],
        used: u16,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let u = order[k];
        // Image of u's already-placed neighbors.
        let mut want = 0u16;
        for (i, &w) in order[..k].iter().enumerate() {
            if adj1[u] & (1 << w) != 0 {
                want |= 1 << map[i];
            }
        }
        for v in 0..adj2.len() {
            if used & (1 << v) != 0 || deg2[v] != deg1[u] {
                continue;
            }
            if adj2[v] & used != want {
                continue;
            }
            map[k] = v;
            if assign(k + 1, order, adj1, adj2, deg1, deg2, map, used | (1 << v)) {
                return true;
            }
        }
        false
    }

    let mut map = vec![0usize; n];
    Ok(assign(0, &order, &adj1, &adj2, &deg1, &deg2, &mut map, 0))
}

struct CanonState<'a> {
    adj: &'a [u16],
    n: usize,
    best: Vec<u16>,
    best_perm: Vec<usize>,
    have_best: bool,
}

fn canon_dfs(st: &mut CanonState, perm: &mut Vec<usize>, enc: &mut Vec<u16>, used: u16, tight: bool) {
    let k = perm.len();
    if k == st.n {
        if !st.have_best || enc[..] < st.best[..] {
            st.best = enc.clone();
            st.best_perm = perm.clone();
            st.have_best = true;
        }
        return;
    }
    // Adjacency bits of each candidate toward the placed prefix; earlier
    // positions are more significant so comparisons are lexicographic.
    let mut cands: Vec<(u16, usize)> = (0..st.n)
        .filter(|&v| used & (1 << v) == 0)
        .map(|v| {
            let mut e = 0u16;
            for (i, &p) in perm.iter().enumerate() {
                if st.adj[v] & (1 << p) != 0 {
                    e |= 1 << (k - 1 - i);
                }
            }
            (e, v)
        })
        .collect();
    cands.sort_unstable();
    for (e, v) in cands {
        let mut t = tight;
        if st.have_best && t {
            if e > st.best[k] {
                break; // sorted, so everything after is worse too
            }
            t = e == st.best[k];
        }
        perm.push(v);
        enc.push(e);
        canon_dfs(st, perm, enc, used | (1 << v), t);
        perm.pop();
        enc.pop();
    }
}

/// Relabels a graph into its canonical form: the lexicographically least
/// adjacency encoding over all vertex orderings. Isomorphic graphs map to
/// equal canonical forms.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    check_iso_guard(g)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(g.clone());
    }
    let adj = adjacency_masks(g);
    let mut st = CanonState {
        adj: &adj,
        n,
        best: Vec::new(),
        best_perm: Vec::new(),
        have_best: false,
    };
    canon_dfs(&mut st, &mut Vec::with_capacity(n), &mut Vec::with_capacity(n), 0, true);
    let mut pos = vec![0usize; n];
    for (new, &old) in st.best_perm.iter().enumerate() {
        pos[old] = new;
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (pos[u], pos[v])).collect();
    Graph::new(n, edges)
}

/// Orbit representative (smallest member) of each vertex under the full
/// automorphism group, found by brute-force permutation search.
pub fn vertex_orbits(g: &Graph) -> Result<Vec<usize>> {
    check_iso_guard(g)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj = adjacency_masks(g);
    let deg = g.degrees();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let r = find(parent, parent[v]);
            parent[v] = r;
        }
        parent[v]
    }

    fn walk(
        k: usize,
        adj: &[u16],
        deg: &[usize],
        map: &mut Vec<usize>,
        used: u16,
        parent: &mut Vec<usize>,
    ) {
        let n = adj.len();
        if k == n {
            for (v, &img) in map.iter().enumerate() {
                let (a, b) = (find(parent, v), find(parent, img));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                }
            }
            return;
        }
        let mut want = 0u16;
        for (w, &img) in map.iter().enumerate() {
            if adj[k] & (1 << w) != 0 {
                want |= 1 << img;
            }
        }
        for v in 0..n {
            if used & (1 << v) != 0 || deg[v] != deg[k] {
                continue;
            }
            if adj[v] & used != want {
                continue;
            }
            map.push(v);
            walk(k + 1, adj, deg, map, used | (1 << v), parent);
            map.pop();
        }
    }

    walk(0, &adj, &deg, &mut Vec::with_capacity(n), 0, &mut parent);
    Ok((0..n).map(|v| find(&mut parent, v)).collect())
}

/// C6 with its only bipartite chord, joining an antipodal vertex pair.
pub fn c6_with_chord() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap()
}

/// C6 with one extra degree-2 vertex attached to two cycle vertices at
/// distance 2, the only attachment that keeps the graph bipartite.
pub fn c6_with_apex() -> Graph {
    Graph::new(
        7,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (6, 0), (6, 2)],
    )
    .unwrap()
}

/// All atomic bipartite graphs below a threshold, up to isomorphism.
#[derive(Clone, Debug)]
pub struct AtomCatalog {
    threshold: u64,
    atoms: Vec<(Graph, CoverCount)>,
}

impl AtomCatalog {
    pub fn new(threshold: u64, atoms: Vec<(Graph, CoverCount)>) -> Self {
        AtomCatalog { threshold, atoms }
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn atoms(&self) -> &[(Graph, CoverCount)] {
        &self.atoms
    }

    pub fn graphs(&self) -> Vec<Graph> {
        self.atoms.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Sorts catalog entries by (vertices, edges, canonical edge list).
fn sort_catalog(atoms: &mut [(Graph, CoverCount)]) {
    atoms.sort_by(|(g1, _), (g2, _)| {
        (g1.vertex_count(), g1.edge_count(), g1.edges())
            .cmp(&(g2.vertex_count(), g2.edge_count(), g2.edges()))
    });
}

/// The seven reference atoms reconstructed from the case analysis: K2, the
/// 4-cycle and its two-edge augmentation K_{2,3}, the 6-cycle with its chord
/// and apex variants, and the 8-cycle. Complete only for thresholds <= 67.
///
/// Each reconstruction is validated against its stated cover count before
/// being returned; the chord variant has no stated value and must land in
/// 36..=67.
pub fn proof_guided_atoms(max_alpha: u64) -> Vec<(Graph, CoverCount)> {
    let named: Vec<(Graph, Option<u64>)> = vec![
        (Graph::new(2, [(0, 1)]).unwrap(), Some(1)),
        (Graph::cycle(4), Some(7)),
        (Graph::complete_bipartite(2, 3), Some(25)),
        (Graph::cycle(6), Some(18)),
        (c6_with_chord(), None),
        (c6_with_apex(), Some(66)),
        (Graph::cycle(8), Some(47)),
    ];
    let mut out = Vec::new();
    for (g, stated) in named {
        let alpha = count_covers(&g);
        match stated {
            Some(v) => assert_eq!(
                alpha,
                CoverCount::from(v),
                "reconstructed atom does not match its stated cover count"
            ),
            None => {
                assert!(
                    alpha >= CoverCount::from(36) && alpha <= CoverCount::from(67),
                    "chord atom cover count outside the required bracket"
                );
            }
        }
        if alpha <= CoverCount::from(max_alpha) {
            out.push((g, alpha));
        }
    }
    sort_catalog(&mut out);
    out
}

/// Cover count of a bipartite graph given as right-vertex neighbor masks
/// over `a` left vertices, by inclusion-exclusion over uncovered vertices.
fn bipartite_alpha(a: usize, rows: &[u16]) -> u64 {
    let mut total: i64 = 0;
    for keep in 0..(1u32 << a) {
        let sign_l = if (a as u32 - keep.count_ones()).is_multiple_of(2) {
            1i64
        } else {
            -1
        };
        let mut prod: i64 = 1;
        for &row in rows {
            let c = (row as u32 & keep).count_ones();
            prod *= (1i64 << c) - 1;
            if prod == 0 {
                break;
            }
        }
        total += sign_l * prod;
    }
    debug_assert!(total >= 0);
    total as u64
}

/// Enumerates every connected bipartite atomic graph with at most
/// `max_vertices` vertices and cover count at most `max_alpha`, up to
/// isomorphism, K2 included.
pub fn enumerate_atoms(max_alpha: u64, max_vertices: usize) -> Result<AtomCatalog> {
    if max_vertices > DEFAULT_ATOM_VERTEX_GUARD {
        return Err(Error::GuardExceeded(format!(
            "atom enumeration needs max_vertices = {max_vertices} <= {DEFAULT_ATOM_VERTEX_GUARD}"
        )));
    }
    if max_alpha < 1 || max_vertices < 2 {
        return Err(Error::InvalidArgument(
            "atom enumeration needs max_alpha >= 1 and max_vertices >= 2".into(),
        ));
    }
    let mut atoms: Vec<(Graph, CoverCount)> = vec![(
        Graph::new(2, [(0, 1)]).unwrap(),
        CoverCount::one(),
    )];
    let mut seen: BTreeSet<Graph> = BTreeSet::new();
    // Any other atom is 2-connected, so both sides have >= 2 vertices and
    // every right vertex has >= 2 left neighbors.
    for a in 2..=max_vertices / 2 {
        for b in a..=max_vertices - a {
            let masks: Vec<u16> = (0..(1u16 << a))
                .filter(|m| m.count_ones() >= 2)
                .collect();
            let mut rows = vec![0u16; b];
            enumerate_rows(&masks, 0, 0, &mut rows, &mut |rows| {
                consider_candidate(a, rows, max_alpha, &mut seen, &mut atoms);
            });
        }
    }
    sort_catalog(&mut atoms);
    Ok(AtomCatalog::new(max_alpha, atoms))
}

fn enumerate_rows(
    masks: &[u16],
    slot: usize,
    start: usize,
    rows: &mut Vec<u16>,
    visit: &mut impl FnMut(&[u16]),
) {
    if slot == rows.len() {
        visit(rows);
        return;
    }
    for i in start..masks.len() {
        rows[slot] = masks[i];
        enumerate_rows(masks, slot + 1, i, rows, visit);
    }
}

fn consider_candidate(
    a: usize,
    rows: &[u16],
    max_alpha: u64,
    seen: &mut BTreeSet<Graph>,
    atoms: &mut Vec<(Graph, CoverCount)>,
) {
    // Left degrees >= 2.
    for i in 0..a {
        let col = rows.iter().filter(|&&r| r & (1 << i) != 0).count();
        if col < 2 {
            return;
        }
    }
    // Connectivity: union left vertices through shared rows.
    let mut comp: Vec<usize> = (0..a).collect();
    fn root(comp: &mut [usize], mut v: usize) -> usize {
        while comp[v] != v {
            comp[v] = comp[comp[v]];
            v = comp[v];
        }
        v
    }
    for &row in rows {
        let first = row.trailing_zeros() as usize;
        let mut rest = row & (row - 1);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (x, y) = (root(&mut comp, first), root(&mut comp, v));
            if x != y {
                comp[x.max(y)] = x.min(y);
            }
        }
    }
    if (0..a).any(|v| root(&mut comp, v) != 0) {
        return;
    }
    if bipartite_alpha(a, rows) > max_alpha {
        return;
    }
    let b = rows.len();
    let mut edges = Vec::new();
    for (j, &row) in rows.iter().enumerate() {
        for i in 0..a {
            if row & (1 << i) != 0 {
                edges.push((i, a + j));
            }
        }
    }
    let g = Graph::new(a + b, edges).unwrap();
    if !g.is_atomic().unwrap_or(false) {
        return;
    }
    let canon = canonical_form(&g).expect("atom within iso guard");
    if !seen.insert(canon.clone()) {
        return;
    }
    let alpha = count_covers(&canon);
    debug_assert_eq!(alpha.to_u64(), Some(bipartite_alpha(a, rows)));
    atoms.push((canon, alpha));
}
