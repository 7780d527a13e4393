//! Test corpora: every connected graph with few edges up to isomorphism,
//! and seeded random connected graphs.

use std::collections::BTreeSet;

use rand::Rng;

use crate::atoms::canonical_form;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Every connected graph with 1..=max_edges edges, one per isomorphism
/// class, in canonical form. Grown level by level: a connected graph with
/// m+1 edges is always reachable from one with m edges by adding an edge
/// between existing vertices or hanging a new leaf vertex.
pub fn connected_graphs_up_to(max_edges: usize) -> Result<Vec<Graph>> {
    if max_edges > 9 {
        // 9 edges can already need 10 vertices, the isomorphism guard.
        return Err(Error::GuardExceeded(format!(
            "exhaustive corpus needs max_edges = {max_edges} <= 9"
        )));
    }
    let mut all: Vec<Graph> = Vec::new();
    let mut level: BTreeSet<Graph> = BTreeSet::new();
    level.insert(Graph::new(2, [(0, 1)]).unwrap());
    for depth in 1..=max_edges {
        all.extend(level.iter().cloned());
        if depth == max_edges {
            break;
        }
        let mut next: BTreeSet<Graph> = BTreeSet::new();
        for g in &level {
            let n = g.vertex_count();
            for u in 0..n {
                for v in u + 1..n {
                    if !g.has_edge(u, v) {
                        let mut edges = g.edges().to_vec();
                        edges.push((u, v));
                        let h = Graph::new(n, edges).unwrap();
                        next.insert(canonical_form(&h)?);
                    }
                }
                let mut edges = g.edges().to_vec();
                edges.push((u, n));
                let h = Graph::new(n + 1, edges).unwrap();
                next.insert(canonical_form(&h)?);
            }
        }
        level = next;
    }
    Ok(all)
}

/// A random connected graph with at most `max_vertices` vertices and at most
/// `max_edges` edges: a random attachment tree plus random extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Graph {
    assert!(max_vertices >= 2 && max_edges >= 1);
    let n = rng.gen_range(2..=max_vertices.min(max_edges + 1));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let mut spare: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
                spare.push((u, v));
            }
        }
    }
    let room = max_edges - (n - 1);
    if room > 0 && !spare.is_empty() {
        let take = rng.gen_range(0..=room.min(spare.len()));
        for _ in 0..take {
            let i = rng.gen_range(0..spare.len());
            edges.push(spare.swap_remove(i));
        }
    }
    Graph::new(n, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn level_counts_match_known_sequence() {
        // Connected graphs by edge count: 1, 1, 3, 5, 12, 30 for m = 1..6.
        let corpus = connected_graphs_up_to(6).unwrap();
        let mut by_edges = [0usize; 7];
        for g in &corpus {
            assert!(g.is_connected());
            by_edges[g.edge_count()] += 1;
        }
        assert_eq!(&by_edges[1..], &[1, 1, 3, 5, 12, 30]);
    }

    #[test]
    fn corpus_entries_are_distinct_canonical_forms() {
        let corpus = connected_graphs_up_to(5).unwrap();
        let set: BTreeSet<&Graph> = corpus.iter().collect();
        assert_eq!(set.len(), corpus.len());
        for g in &corpus {
            assert_eq!(&canonical_form(g).unwrap(), g);
        }
    }

    #[test]
    fn guard_on_corpus_size() {
        assert!(matches!(
            connected_graphs_up_to(10),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn random_graphs_are_connected_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut again = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_connected_graph(&mut rng, 8, 12);
            assert!(g.is_connected());
            assert!(g.vertex_count() <= 8 && g.edge_count() <= 12);
            assert_eq!(g, random_connected_graph(&mut again, 8, 12));
        }
    }
}
