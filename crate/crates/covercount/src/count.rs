//! Exact edge-cover counting: a brute-force enumerator over edge subsets,
//! the memoized four-term recursion, and the rooted profile (alpha, beta).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKey, RootedGraph};

/// Default cap on `|E|` for the brute-force enumerators.
pub const DEFAULT_BRUTE_EDGE_GUARD: usize = 20;

/// An exact, unbounded count of edge coverings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CoverCount(BigUint);

impl CoverCount {
    pub fn zero() -> Self {
        CoverCount(BigUint::zero())
    }

    pub fn one() -> Self {
        CoverCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(CoverCount(&self.0 + &other.0))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(CoverCount(&self.0 * &other.0))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.0 >= other.0 {
            Some(CoverCount(&self.0 - &other.0))
        } else {
            None
        }
    }
}

impl From<u64> for CoverCount {
    fn from(v: u64) -> Self {
        CoverCount(BigUint::from(v))
    }
}

impl std::fmt::Display for CoverCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// The rooted profile: `alpha` counts coverings of the whole graph, `beta`
/// counts coverings of the graph with the root (and incident edges) removed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairAB {
    pub alpha: CoverCount,
    pub beta: CoverCount,
}

impl PairAB {
    pub fn new(alpha: CoverCount, beta: CoverCount) -> Self {
        PairAB { alpha, beta }
    }

    /// The profile (0, 1) of the single-vertex rooted graph; the identity of
    /// both composition rules.
    pub fn identity() -> Self {
        PairAB::new(CoverCount::zero(), CoverCount::one())
    }

    /// `s = alpha + beta`, the number of edge precoverings.
    pub fn s(&self) -> CoverCount {
        self.alpha.checked_add(&self.beta).unwrap()
    }
}

/// Counts subsets of `edges` whose endpoint-bit union covers `required`.
///
/// Meet-in-the-middle over the two halves of the edge list, so memory stays
/// at `O(2^(m/2))` words.
fn count_covering_subsets(edge_masks: &[u64], required: u64) -> BigUint {
    let m = edge_masks.len();
    let lo = m / 2;
    let (lo_masks, hi_masks) = edge_masks.split_at(lo);
    let table = |masks: &[u64]| -> Vec<u64> {
        let mut t = vec![0u64; 1 << masks.len()];
        for s in 1..t.len() {
            let b = s.trailing_zeros() as usize;
            t[s] = t[s & (s - 1)] | masks[b];
        }
        t
    };
    let lo_table = table(lo_masks);
    let hi_table = table(hi_masks);
    let mut count = BigUint::zero();
    for &h in &hi_table {
        let mut local = 0u64;
        for &l in &lo_table {
            if (h | l) & required == required {
                local += 1;
            }
        }
        count += local;
    }
    count
}

fn brute_force_with_exempt(g: &Graph, exempt: Option<usize>, guard: usize) -> Result<CoverCount> {
    if g.edge_count() > guard {
        return Err(Error::GuardExceeded(format!(
            "brute-force cover count needs |E| = {} <= {guard}",
            g.edge_count()
        )));
    }
    let deg = g.degrees();
    // Vertices that must be covered get a bit each; an uncoverable one ends it.
    let mut bit = vec![u64::MAX; g.vertex_count()];
    let mut next = 0u32;
    for v in 0..g.vertex_count() {
        if Some(v) == exempt {
            continue;
        }
        if deg[v] == 0 {
            return Ok(CoverCount::zero());
        }
        bit[v] = 1u64 << next;
        next += 1;
    }
    debug_assert!(next <= 64);
    let required = if next == 64 { u64::MAX } else { (1u64 << next) - 1 };
    let edge_masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut m = 0;
            if bit[u] != u64::MAX {
                m |= bit[u];
            }
            if bit[v] != u64::MAX {
                m |= bit[v];
            }
            m
        })
        .collect();
    Ok(CoverCount(count_covering_subsets(&edge_masks, required)))
}

/// Number of edge subsets covering every vertex, by direct enumeration.
/// The empty graph has one covering; any isolated vertex forces zero.
pub fn count_covers_bruteforce(g: &Graph) -> Result<CoverCount> {
    count_covers_bruteforce_guarded(g, DEFAULT_BRUTE_EDGE_GUARD)
}

pub fn count_covers_bruteforce_guarded(g: &Graph, guard: usize) -> Result<CoverCount> {
    brute_force_with_exempt(g, None, guard)
}

/// Number of edge subsets covering every vertex except (possibly) the root.
pub fn count_precovers_bruteforce(rg: &RootedGraph) -> Result<CoverCount> {
    count_precovers_bruteforce_guarded(rg, DEFAULT_BRUTE_EDGE_GUARD)
}

pub fn count_precovers_bruteforce_guarded(rg: &RootedGraph, guard: usize) -> Result<CoverCount> {
    brute_force_with_exempt(rg.graph(), Some(rg.root()), guard)
}

/// Memoizing cover counter built on the recursion
/// `alpha(G) = 2 alpha(G\e) + alpha(G\u) + alpha(G\v) + alpha(G\{u,v})`.
///
/// Disconnected graphs are counted multiplicatively over components; the
/// memo table is keyed by the exact labeled encoding of each subgraph.
#[derive(Default)]
pub struct CoverCounter {
    memo: HashMap<GraphKey, BigUint>,
}

impl CoverCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&mut self, g: &Graph) -> CoverCount {
        CoverCount(self.count_inner(g))
    }

    fn count_inner(&mut self, g: &Graph) -> BigUint {
        if g.edge_count() == 0 {
            return if g.vertex_count() == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        let comps = g.components();
        if comps.len() == 1 {
            return self.count_connected(g);
        }
        let mut product = BigUint::one();
        for comp in comps {
            let sub = g.induced_subgraph(&comp).expect("component vertices valid");
            let c = self.count_inner(&sub);
            if c.is_zero() {
                return BigUint::zero();
            }
            product *= c;
        }
        product
    }

    fn count_connected(&mut self, g: &Graph) -> BigUint {
        if g.vertex_count() == 2 {
            return BigUint::one(); // K2
        }
        let key = g.cache_key();
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (u, v) = pick_edge(g);
        let no_edge = self.count_inner(&g.delete_edge(u, v).expect("edge exists"));
        let no_u = self.count_inner(&g.delete_vertices(&[u]).expect("vertex exists"));
        let no_v = self.count_inner(&g.delete_vertices(&[v]).expect("vertex exists"));
        let no_uv = self.count_inner(&g.delete_vertices(&[u, v]).expect("vertices exist"));
        let total: BigUint = (no_edge << 1u32) + no_u + no_v + no_uv;
        self.memo.insert(key, total.clone());
        total
    }
}

/// Picks an edge incident to a maximum-degree vertex (ties broken by label),
/// which keeps the recursion tree small.
fn pick_edge(g: &Graph) -> (usize, usize) {
    let deg = g.degrees();
    let u = (0..g.vertex_count())
        .max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
        .expect("graph has vertices");
    let adj = g.adjacency();
    let v = adj[u]
        .iter()
        .copied()
        .max_by_key(|&w| (deg[w], std::cmp::Reverse(w)))
        .expect("max-degree vertex has a neighbor");
    (u, v)
}

/// Exact number of edge coverings, via the memoized recursion.
pub fn count_covers(g: &Graph) -> CoverCount {
    CoverCounter::new().count(g)
}

/// The rooted profile `(alpha, beta)` of a rooted graph.
pub fn rooted_profile(rg: &RootedGraph) -> PairAB {
    rooted_profile_with(&mut CoverCounter::new(), rg)
}

/// Same as [`rooted_profile`] but reusing a shared memo table.
pub fn rooted_profile_with(counter: &mut CoverCounter, rg: &RootedGraph) -> PairAB {
    let alpha = counter.count(rg.graph());
    let rest = rg
        .graph()
        .delete_vertices(&[rg.root()])
        .expect("root in range");
    let beta = counter.count(&rest);
    PairAB::new(alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(v: u64) -> CoverCount {
        CoverCount::from(v)
    }

    #[test]
    fn brute_force_basics() {
        assert_eq!(count_covers_bruteforce(&Graph::cycle(4)).unwrap(), cc(7));
        assert_eq!(
            count_covers_bruteforce(&Graph::new(2, [(0, 1)]).unwrap()).unwrap(),
            cc(1)
        );
        assert_eq!(
            count_covers_bruteforce(&Graph::complete_bipartite(2, 3)).unwrap(),
            cc(25)
        );
        assert_eq!(count_covers_bruteforce(&Graph::empty()).unwrap(), cc(1));
        // An isolated vertex can never be covered.
        assert_eq!(
            count_covers_bruteforce(&Graph::new(3, [(0, 1)]).unwrap()).unwrap(),
            cc(0)
        );
        assert!(matches!(
            count_covers_bruteforce_guarded(&Graph::cycle(12), 10),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn recursion_matches_named_values() {
        assert_eq!(count_covers(&Graph::cycle(6)), cc(18));
        assert_eq!(count_covers(&Graph::cycle(8)), cc(47));
        assert_eq!(count_covers(&Graph::cycle(10)), cc(123));
        assert_eq!(
            count_covers(&Graph::cycle(10)),
            count_covers_bruteforce(&Graph::cycle(10)).unwrap()
        );
    }

    #[test]
    fn disconnected_is_multiplicative() {
        let two_c4 = Graph::new(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ],
        )
        .unwrap();
        assert_eq!(count_covers(&two_c4), cc(49));
        assert_eq!(count_covers_bruteforce(&two_c4).unwrap(), cc(49));
    }

    #[test]
    fn profiles() {
        let k2 = RootedGraph::new(Graph::new(2, [(0, 1)]).unwrap(), 0).unwrap();
        assert_eq!(rooted_profile(&k2), PairAB::new(cc(1), cc(0)));
        assert_eq!(rooted_profile(&RootedGraph::single_vertex()), PairAB::identity());
        let c4 = RootedGraph::new(Graph::cycle(4), 2).unwrap();
        assert_eq!(rooted_profile(&c4), PairAB::new(cc(7), cc(1)));
    }

    #[test]
    fn precover_counts() {
        let k2 = RootedGraph::new(Graph::new(2, [(0, 1)]).unwrap(), 0).unwrap();
        assert_eq!(count_precovers_bruteforce(&k2).unwrap(), cc(1));
        let c4 = RootedGraph::new(Graph::cycle(4), 0).unwrap();
        assert_eq!(count_precovers_bruteforce(&c4).unwrap(), cc(8));
        assert_eq!(
            count_precovers_bruteforce(&RootedGraph::single_vertex()).unwrap(),
            cc(1)
        );
    }

    #[test]
    fn precovers_equal_s_on_small_graphs() {
        for (g, root) in [
            (Graph::cycle(6), 1),
            (Graph::path(4), 0),
            (Graph::complete_bipartite(2, 3), 4),
        ] {
            let rg = RootedGraph::new(g, root).unwrap();
            let profile = rooted_profile(&rg);
            assert_eq!(count_precovers_bruteforce(&rg).unwrap(), profile.s());
        }
    }
}
