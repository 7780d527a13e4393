//! The pool fixpoint search: close {(0,1)} under both gluing rules over an
//! atom set, within alpha/beta bounds, retaining one witness per pair.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::build_core_table;
use crate::atoms::{proof_guided_atoms, vertex_orbits, DEFAULT_ISO_VERTEX_GUARD};
use crate::count::{rooted_profile_with, CoverCounter};
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};

/// Largest value below which the default seven-atom set is provably
/// complete, hence below which absence from the pool proves impossibility.
pub const DEFAULT_CERTIFICATION_BOUND: u64 = 67;

/// An atom list together with the bound below which it is known complete.
#[derive(Clone, Debug)]
pub struct AtomSet {
    id: String,
    graphs: Vec<Graph>,
    certification_bound: u64,
}

impl AtomSet {
    /// `certification_bound` is the threshold below which the caller asserts
    /// the list contains every relevant atom; 0 claims nothing.
    pub fn new(
        id: impl Into<String>,
        graphs: Vec<Graph>,
        certification_bound: u64,
    ) -> Result<Self> {
        for g in &graphs {
            if g.edge_count() == 0 || !g.is_connected() {
                return Err(Error::InvalidGraph(
                    "invalid atom: every atom must be connected with at least one edge".into(),
                ));
            }
        }
        Ok(AtomSet {
            id: id.into(),
            graphs,
            certification_bound,
        })
    }

    /// The seven atomic bipartite graphs with cover count at most 67.
    pub fn default_seven() -> Self {
        let graphs = proof_guided_atoms(67).into_iter().map(|(g, _)| g).collect();
        AtomSet::new("default7", graphs, DEFAULT_CERTIFICATION_BOUND).unwrap()
    }

    /// K2 alone: every tree is glued from single edges, so within the tree
    /// universe this set is complete at any bound.
    pub fn trees() -> Self {
        AtomSet::new("k2", vec![Graph::new(2, [(0, 1)]).unwrap()], u64::MAX).unwrap()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn certification_bound(&self) -> u64 {
        self.certification_bound
    }
}

/// Construction trace of a pool pair, realizable as a concrete rooted graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The bare single-vertex rooted graph, the (0,1) identity.
    Single,
    /// An atom rooted at one of its vertices.
    Atom { atom: usize, root: usize },
    /// Rooted graphs glued at a shared root.
    Glue1(Vec<Arc<Witness>>),
    /// Rooted graphs glued onto non-root vertices of an atom; slots holding
    /// the identity are omitted.
    Glue2 {
        atom: usize,
        root: usize,
        slots: Vec<(usize, Arc<Witness>)>,
    },
}

/// Serializes a witness into the report term syntax.
pub fn serialize_witness(w: &Witness) -> String {
    match w {
        Witness::Single => "single".into(),
        Witness::Atom { atom, root } => format!("atom({atom},{root})"),
        Witness::Glue1(children) => {
            let inner: Vec<String> = children.iter().map(|c| serialize_witness(c)).collect();
            format!("glue1({})", inner.join(","))
        }
        Witness::Glue2 { atom, root, slots } => {
            let mut s = format!("glue2({atom},{root}");
            for (i, (v, c)) in slots.iter().enumerate() {
                s.push_str(if i == 0 { "; " } else { ", " });
                s.push_str(&format!("{v}={}", serialize_witness(c)));
            }
            s.push(')');
            s
        }
    }
}

/// Parses the term syntax produced by [`serialize_witness`].
pub fn parse_witness(input: &str) -> Result<Witness> {
    let mut p = TermParser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let w = p.term()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Parse(format!(
            "trailing input in witness term at byte {}",
            p.pos
        )));
    }
    Ok(w)
}

struct TermParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at byte {} of witness term",
                c as char, self.pos
            )))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected number at byte {start} of witness term")))
    }

    fn term(&mut self) -> Result<Witness> {
        let head = self.ident();
        match head.as_str() {
            "single" => Ok(Witness::Single),
            "atom" => {
                self.eat(b'(')?;
                let atom = self.number()?;
                self.eat(b',')?;
                let root = self.number()?;
                self.eat(b')')?;
                Ok(Witness::Atom { atom, root })
            }
            "glue1" => {
                self.eat(b'(')?;
                let mut children = vec![Arc::new(self.term()?)];
                while self.peek() == Some(b',') {
                    self.eat(b',')?;
                    children.push(Arc::new(self.term()?));
                }
                self.eat(b')')?;
                Ok(Witness::Glue1(children))
            }
            "glue2" => {
                self.eat(b'(')?;
                let atom = self.number()?;
                self.eat(b',')?;
                let root = self.number()?;
                let mut slots = Vec::new();
                while self.peek() == Some(b';') {
                    self.eat(b';')?;
                    let v = self.number()?;
                    self.eat(b'=')?;
                    slots.push((v, Arc::new(self.term()?)));
                    while self.peek() == Some(b',') {
                        self.eat(b',')?;
                        let v = self.number()?;
                        self.eat(b'=')?;
                        slots.push((v, Arc::new(self.term()?)));
                    }
                }
                self.eat(b')')?;
                Ok(Witness::Glue2 { atom, root, slots })
            }
            other => Err(Error::Parse(format!(
                "unknown witness head '{other}' at byte {}",
                self.pos
            ))),
        }
    }
}

/// Builds the concrete rooted graph a witness describes: disjoint union plus
/// vertex identification, root first.
pub fn realize_witness(w: &Witness, atoms: &[Graph]) -> Result<RootedGraph> {
    match w {
        Witness::Single => Ok(RootedGraph::single_vertex()),
        Witness::Atom { atom, root } => {
            let g = atoms.get(*atom).ok_or_else(|| {
                Error::InvalidArgument(format!("witness references unknown atom {atom}"))
            })?;
            RootedGraph::new(g.clone(), *root)
        }
        Witness::Glue1(children) => {
            if children.is_empty() {
                return Err(Error::InvalidArgument(
                    "glue1 witness needs at least one child".into(),
                ));
            }
            let mut edges: Vec<(usize, usize)> = Vec::new();
            let mut n = 1; // shared root is vertex 0
            for child in children {
                let sub = realize_witness(child, atoms)?;
                let offset = n;
                let map = |v: usize| -> usize {
                    use std::cmp::Ordering::*;
                    match v.cmp(&sub.root()) {
                        Equal => 0,
                        Less => offset + v,
                        Greater => offset + v - 1,
                    }
                };
                for &(u, v) in sub.graph().edges() {
                    edges.push((map(u), map(v)));
                }
                n += sub.graph().vertex_count() - 1;
            }
            RootedGraph::new(Graph::new(n, edges)?, 0)
        }
        Witness::Glue2 { atom, root, slots } => {
            let core = atoms.get(*atom).ok_or_else(|| {
                Error::InvalidArgument(format!("witness references unknown atom {atom}"))
            })?;
            if *root >= core.vertex_count() {
                return Err(Error::InvalidArgument(format!(
                    "glue2 root {root} out of range"
                )));
            }
            let mut used = vec![false; core.vertex_count()];
            let mut edges: Vec<(usize, usize)> = core.edges().to_vec();
            let mut n = core.vertex_count();
            for (at, child) in slots {
                if *at >= core.vertex_count() || *at == *root || used[*at] {
                    return Err(Error::InvalidArgument(format!(
                        "glue2 slot {at} invalid or repeated"
                    )));
                }
                used[*at] = true;
                let sub = realize_witness(child, atoms)?;
                let offset = n;
                let map = |v: usize| -> usize {
                    use std::cmp::Ordering::*;
                    match v.cmp(&sub.root()) {
                        Equal => *at,
                        Less => offset + v,
                        Greater => offset + v - 1,
                    }
                };
                for &(u, v) in sub.graph().edges() {
                    edges.push((map(u), map(v)));
                }
                n += sub.graph().vertex_count() - 1;
            }
            RootedGraph::new(Graph::new(n, edges)?, *root)
        }
    }
}

/// A stored pool pair's construction record.
#[derive(Clone, Debug)]
pub struct PoolEntry {
    pub witness: Arc<Witness>,
    /// Edge count of the realized graph, tracked compositionally.
    pub edges: u32,
}

/// The bounded fixpoint of realizable (alpha, beta) pairs.
#[derive(Debug)]
pub struct Pool {
    entries: BTreeMap<(u64, u64), PoolEntry>,
    alpha_bound: u64,
    beta_bound: u64,
    atoms: AtomSet,
    rounds: usize,
}

impl Pool {
    pub fn alpha_bound(&self) -> u64 {
        self.alpha_bound
    }

    pub fn beta_bound(&self) -> u64 {
        self.beta_bound
    }

    pub fn atom_set(&self) -> &AtomSet {
        &self.atoms
    }

    /// Closure rounds taken to reach the fixpoint.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, alpha: u64, beta: u64) -> bool {
        self.entries.contains_key(&(alpha, beta))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u64, u64), &PoolEntry)> {
        self.entries.iter()
    }

    pub fn entry(&self, alpha: u64, beta: u64) -> Option<&PoolEntry> {
        self.entries.get(&(alpha, beta))
    }

    /// The stored entry with this alpha and the smallest beta, if any.
    pub fn entry_for_alpha(&self, alpha: u64) -> Option<(&(u64, u64), &PoolEntry)> {
        self.entries.range((alpha, 0)..=(alpha, u64::MAX)).next()
    }

    /// Alphas >= 1 of stored pairs.
    pub fn achievable_alphas(&self) -> BTreeSet<u64> {
        self.entries
            .keys()
            .map(|&(a, _)| a)
            .filter(|&a| a >= 1)
            .collect()
    }

    /// Values in 1..=t missing from the pool. Only sound below the atom
    /// set's certification bound; `force` overrides that check.
    pub fn certified_impossible(&self, t: u64, force: bool) -> Result<BTreeSet<u64>> {
        if t > self.alpha_bound {
            return Err(Error::InvalidArgument(format!(
                "completeness bound {t} exceeds the search bound {}",
                self.alpha_bound
            )));
        }
        if t > self.atoms.certification_bound && !force {
            return Err(Error::InvalidArgument(format!(
                "completeness bound {t} exceeds the atom set's certification bound {}",
                self.atoms.certification_bound
            )));
        }
        let have = self.achievable_alphas();
        Ok((1..=t).filter(|x| !have.contains(x)).collect())
    }

    /// Values in t+1..=alpha_bound missing from the pool: not found, but
    /// not provably impossible either.
    pub fn unresolved(&self, t: u64) -> BTreeSet<u64> {
        let have = self.achievable_alphas();
        (t.saturating_add(1)..=self.alpha_bound)
            .filter(|x| !have.contains(x))
            .collect()
    }

    /// Runs one full closure round over the whole pool; true iff it adds
    /// nothing new.
    pub fn verify_closed(&self) -> Result<bool> {
        let state = SearchState::prepare(&self.atoms, self.alpha_bound, self.beta_bound)?;
        let all: BTreeSet<(u64, u64)> = self.entries.keys().copied().collect();
        let cands = state.round_candidates(&self.entries, &all)?;
        Ok(cands.keys().all(|pair| self.entries.contains_key(pair)))
    }
}

/// One slot/operand choice during a closure round.
#[derive(Clone)]
struct SlotCand {
    s: u64,
    alpha: u64,
    beta: u64,
    edges: u32,
    witness: Arc<Witness>,
}

/// A produced candidate pair with its construction.
#[derive(Clone)]
struct Cand {
    edges: u32,
    witness: Arc<Witness>,
}

type CandMap = BTreeMap<(u64, u64), Cand>;

/// Keep the candidate with fewer edges; break ties by the serialized term so
/// the retained witness never depends on scheduling.
fn upsert_min(map: &mut CandMap, pair: (u64, u64), cand: Cand) {
    match map.entry(pair) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(cand);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let cur = e.get();
            let better = cand.edges < cur.edges
                || (cand.edges == cur.edges
                    && serialize_witness(&cand.witness) < serialize_witness(&cur.witness));
            if better {
                e.insert(cand);
            }
        }
    }
}

fn merge_cand_maps(mut a: CandMap, b: CandMap) -> CandMap {
    if a.len() < b.len() {
        return merge_cand_maps(b, a);
    }
    for (pair, cand) in b {
        upsert_min(&mut a, pair, cand);
    }
    a
}

/// Per-(atom, root) Way-2 context: the core's subset table folded onto slot
/// bitmasks, split by root membership.
struct CoreCtx {
    atom: usize,
    root: usize,
    /// Non-root vertices, ascending; position i is slot i.
    slots: Vec<usize>,
    /// Indexed by slot subset T: (sum of table[S] with root in S and
    /// S cap slots = T, same with root not in S).
    folded: Vec<(u64, u64)>,
    atom_edges: u32,
}

struct SearchState {
    alpha_bound: u64,
    beta_bound: u64,
    /// Seed profiles: (alpha, beta, atom, root, edges).
    seeds: Vec<(u64, u64, usize, usize, u32)>,
    cores: Vec<CoreCtx>,
}

impl SearchState {
    fn prepare(set: &AtomSet, alpha_bound: u64, beta_bound: u64) -> Result<SearchState> {
        let mut seeds = Vec::new();
        let mut cores = Vec::new();
        let mut counter = CoverCounter::new();
        for (idx, g) in set.graphs().iter().enumerate() {
            let roots: Vec<usize> = if g.vertex_count() <= DEFAULT_ISO_VERTEX_GUARD {
                let orbits = vertex_orbits(g)?;
                let mut reps: Vec<usize> = orbits
                    .iter()
                    .enumerate()
                    .filter(|&(v, &rep)| v == rep)
                    .map(|(v, _)| v)
                    .collect();
                reps.sort_unstable();
                reps
            } else {
                (0..g.vertex_count()).collect()
            };
            for &root in &roots {
                let rg = RootedGraph::new(g.clone(), root)?;
                let profile = rooted_profile_with(&mut counter, &rg);
                if let (Some(a), Some(b)) = (profile.alpha.to_u64(), profile.beta.to_u64()) {
                    if a <= alpha_bound && b <= beta_bound {
                        seeds.push((a, b, idx, root, g.edge_count() as u32));
                    }
                }
                let table = build_core_table(g, root)?;
                let full = match table.full_entry().to_u64() {
                    Some(v) => v,
                    None => continue,
                };
                if full > alpha_bound {
                    // Any gluing on this core has alpha >= full: useless.
                    continue;
                }
                let entries = table.entries_u64().ok_or_else(|| {
                    Error::Overflow("core table entry exceeds u64".into())
                })?;
                let n = g.vertex_count();
                let slots: Vec<usize> = (0..n).filter(|&v| v != root).collect();
                let mut folded = vec![(0u64, 0u64); 1 << slots.len()];
                for (mask, &val) in entries.iter().enumerate() {
                    if val == 0 {
                        continue;
                    }
                    let mut t = 0usize;
                    for (i, &v) in slots.iter().enumerate() {
                        if mask & (1 << v) != 0 {
                            t |= 1 << i;
                        }
                    }
                    let cell = &mut folded[t];
                    if mask & (1 << root) != 0 {
                        cell.0 = cell.0.checked_add(val).ok_or_else(overflow)?;
                    } else {
                        cell.1 = cell.1.checked_add(val).ok_or_else(overflow)?;
                    }
                }
                cores.push(CoreCtx {
                    atom: idx,
                    root,
                    slots,
                    folded,
                    atom_edges: g.edge_count() as u32,
                });
            }
        }
        Ok(SearchState {

            alpha_bound,
            beta_bound,
            seeds,
            cores,
        })
    }

    /// All candidate pairs producible with at least one operand drawn from
    /// `frontier`, as a deterministic map.
    fn round_candidates(
        &self,
        pool: &BTreeMap<(u64, u64), PoolEntry>,
        frontier: &BTreeSet<(u64, u64)>,
    ) -> Result<CandMap> {
        let mut all: Vec<(SlotCand, bool)> = pool
            .iter()
            .map(|(&(alpha, beta), e)| {
                (
                    SlotCand {
                        s: alpha + beta,
                        alpha,
                        beta,
                        edges: e.edges,
                        witness: e.witness.clone(),
                    },
                    frontier.contains(&(alpha, beta)),
                )
            })
            .collect();
        all.sort_by_key(|(c, _)| (c.s, c.alpha, c.beta));
        let cands_all: Vec<SlotCand> = all.iter().map(|(c, _)| c.clone()).collect();
        let cands_new: Vec<SlotCand> = all
            .iter()
            .filter(|(_, is_new)| *is_new)
            .map(|(c, _)| c.clone())
            .collect();
        let cands_old: Vec<SlotCand> = all
            .iter()
            .filter(|(_, is_new)| !*is_new)
            .map(|(c, _)| c.clone())
            .collect();

        enum Task<'a> {
            Way1 { chunk: &'a [SlotCand] },
            Way2 { core: &'a CoreCtx, new_at: usize },
        }
        let mut tasks: Vec<Task> = Vec::new();
        for chunk in cands_new.chunks(32) {
            tasks.push(Task::Way1 { chunk });
        }
        for core in &self.cores {
            for new_at in 0..core.slots.len() {
                if new_at > 0 && cands_old.is_empty() {
                    break; // a prefix slot would have nothing to draw from
                }
                tasks.push(Task::Way2 { core, new_at });
            }
        }

        tasks
            .into_par_iter()
            .map(|task| -> Result<CandMap> {
                let mut out = CandMap::new();
                match task {
                    Task::Way1 { chunk } => {
                        self.way1_chunk(chunk, &cands_all, &mut out)?;
                    }
                    Task::Way2 { core, new_at } => {
                        self.way2_core(core, new_at, &cands_old, &cands_new, &cands_all, &mut out)?;
                    }
                }
                Ok(out)
            })
            .try_reduce(CandMap::new, |a, b| Ok(merge_cand_maps(a, b)))
    }

    fn way1_chunk(
        &self,
        frontier: &[SlotCand],
        all: &[SlotCand],
        out: &mut CandMap,
    ) -> Result<()> {
        for p in frontier {
            if p.alpha == 0 {
                continue; // identity operand adds nothing
            }
            for q in all {
                if q.alpha == 0 {
                    continue;
                }
                // alpha result >= p.alpha * q.s; the list is s-ascending.
                if p.alpha.checked_mul(q.s).ok_or_else(overflow)? > self.alpha_bound {
                    break;
                }
                let beta = p.beta.checked_mul(q.beta).ok_or_else(overflow)?;
                let alpha = p
                    .s
                    .checked_mul(q.s)
                    .ok_or_else(overflow)?
                    .checked_sub(beta)
                    .ok_or_else(overflow)?;
                if alpha > self.alpha_bound || beta > self.beta_bound {
                    continue;
                }
                let children = if (p.alpha, p.beta) <= (q.alpha, q.beta) {
                    vec![p.witness.clone(), q.witness.clone()]
                } else {
                    vec![q.witness.clone(), p.witness.clone()]
                };
                upsert_min(
                    out,
                    (alpha, beta),
                    Cand {
                        edges: p.edges + q.edges,
                        witness: Arc::new(Witness::Glue1(children)),
                    },
                );
            }
        }
        Ok(())
    }

    /// Way-2 enumeration over one core with the first frontier pair forced
    /// at slot `new_at`: slots before it draw from old pairs, slots after it
    /// from the whole pool. Together over all `new_at` this partitions every
    /// assignment that uses at least one frontier pair.
    fn way2_core(
        &self,
        core: &CoreCtx,
        new_at: usize,
        old: &[SlotCand],
        new: &[SlotCand],
        all: &[SlotCand],
        out: &mut CandMap,
    ) -> Result<()> {
        let k = core.slots.len();
        let mut scratch: Vec<Vec<(u64, u64)>> = (0..k).map(|d| vec![(0, 0); 1 << (k - d - 1)]).collect();
        let mut chosen: Vec<SlotCand> = Vec::with_capacity(k);
        self.way2_dfs(core, new_at, old, new, all, 0, &core.folded, &mut scratch, &mut chosen, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn way2_dfs(
        &self,
        core: &CoreCtx,
        new_at: usize,
        old: &[SlotCand],
        new: &[SlotCand],
        all: &[SlotCand],
        depth: usize,
        g: &[(u64, u64)],
        scratch: &mut [Vec<(u64, u64)>],
        chosen: &mut Vec<SlotCand>,
        out: &mut CandMap,
    ) -> Result<()> {
        let k = core.slots.len();
        if depth == k {
            let (alpha, beta) = g[0];
            if alpha <= self.alpha_bound && beta <= self.beta_bound {
                let slots: Vec<(usize, Arc<Witness>)> = chosen
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !matches!(*c.witness, Witness::Single))
                    .map(|(i, c)| (core.slots[i], c.witness.clone()))
                    .collect();
                let edges = core.atom_edges + chosen.iter().map(|c| c.edges).sum::<u32>();
                upsert_min(
                    out,
                    (alpha, beta),
                    Cand {
                        edges,
                        witness: Arc::new(Witness::Glue2 {
                            atom: core.atom,
                            root: core.root,
                            slots,
                        }),
                    },
                );
            }
            return Ok(());
        }
        let cands = match depth.cmp(&new_at) {
            std::cmp::Ordering::Less => old,
            std::cmp::Ordering::Equal => new,
            std::cmp::Ordering::Greater => all,
        };
        let full_in = g[g.len() - 1].0;
        let part_in = g[g.len() - 2].0;
        let (head, tail) = scratch.split_first_mut().expect("scratch per depth");
        for cand in cands {
            // Any completion from here has alpha >= full_in * s.
            let s_term = full_in.checked_mul(cand.s).ok_or_else(overflow)?;
            if s_term > self.alpha_bound {
                break; // s-ascending order
            }
            let bound = s_term
                .checked_add(part_in.checked_mul(cand.alpha).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
            if bound > self.alpha_bound {
                continue;
            }
            for t in 0..head.len() {
                let (hi_in, hi_out) = g[2 * t + 1];
                let (lo_in, lo_out) = g[2 * t];
                head[t] = (
                    hi_in
                        .checked_mul(cand.s)
                        .and_then(|x| x.checked_add(lo_in.checked_mul(cand.alpha)?))
                        .ok_or_else(overflow)?,
                    hi_out
                        .checked_mul(cand.s)
                        .and_then(|x| x.checked_add(lo_out.checked_mul(cand.alpha)?))
                        .ok_or_else(overflow)?,
                );
            }
            chosen.push(cand.clone());
            let head_view: &Vec<(u64, u64)> = head;
            let result = self.way2_dfs(
                core, new_at, old, new, all, depth + 1, head_view, tail, chosen, out,
            );
            chosen.pop();
            result?;
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Overflow("pool arithmetic exceeded u64; lower the bound".into())
}

/// Runs the bounded fixpoint search over an atom set.
pub fn run_closure(atoms: &AtomSet, alpha_bound: u64) -> Result<Pool> {
    if alpha_bound < 1 {
        return Err(Error::InvalidArgument("alpha bound must be >= 1".into()));
    }
    let beta_bound = alpha_bound;
    let state = SearchState::prepare(atoms, alpha_bound, beta_bound)?;
    let mut entries: BTreeMap<(u64, u64), PoolEntry> = BTreeMap::new();
    entries.insert(
        (0, 1),
        PoolEntry {
            witness: Arc::new(Witness::Single),
            edges: 0,
        },
    );
    let mut frontier: BTreeSet<(u64, u64)> = BTreeSet::new();
    frontier.insert((0, 1));
    for &(a, b, atom, root, edges) in &state.seeds {
        let pair = (a, b);
        if let std::collections::btree_map::Entry::Vacant(e) = entries.entry(pair) {
            e.insert(PoolEntry {
                witness: Arc::new(Witness::Atom { atom, root }),
                edges,
            });
            frontier.insert(pair);
        }
    }
    let mut rounds = 0usize;
    while !frontier.is_empty() {
        let cands = state.round_candidates(&entries, &frontier)?;
        let mut next = BTreeSet::new();
        for (pair, cand) in cands {
            if let std::collections::btree_map::Entry::Vacant(e) = entries.entry(pair) {
                e.insert(PoolEntry {
                    witness: cand.witness,
                    edges: cand.edges,
                });
                next.insert(pair);
            }
        }
        frontier = next;
        rounds += 1;
    }
    Ok(Pool {
        entries,
        alpha_bound,
        beta_bound,
        atoms: atoms.clone(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::rooted_profile;

    fn k2_set() -> AtomSet {
        AtomSet::trees()
    }

    #[test]
    fn empty_atom_set() {
        let pool = run_closure(&AtomSet::new("none", vec![], 0).unwrap(), 5).unwrap();
        assert_eq!(pool.len(), 1);
        assert!(pool.contains(0, 1));
        assert!(pool.achievable_alphas().is_empty());
        assert!(pool.verify_closed().unwrap());
    }

    #[test]
    fn k2_pool_small() {
        let pool = run_closure(&k2_set(), 10).unwrap();
        assert!(pool.contains(1, 0));
        assert!(pool.contains(1, 1));
        let ach = pool.achievable_alphas();
        for v in [1, 3, 5, 7] {
            assert!(ach.contains(&v), "missing {v}");
        }
        assert!(pool.verify_closed().unwrap());
        // Every stored pair must reproduce its (alpha, beta) when realized.
        for (&(a, b), entry) in pool.entries() {
            let rg = realize_witness(&entry.witness, pool.atom_set().graphs()).unwrap();
            assert_eq!(rg.graph().edge_count() as u32, entry.edges);
            let profile = rooted_profile(&rg);
            assert_eq!(profile.alpha.to_u64(), Some(a));
            assert_eq!(profile.beta.to_u64(), Some(b));
        }
    }

    #[test]
    fn invalid_atoms_rejected() {
        assert!(AtomSet::new("bad", vec![Graph::new(1, []).unwrap()], 0).is_err());
        let disconnected = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(AtomSet::new("bad", vec![disconnected], 0).is_err());
        assert!(run_closure(&k2_set(), 0).is_err());
    }

    #[test]
    fn certification_validation() {
        let pool = run_closure(&k2_set(), 20).unwrap();
        assert!(pool.certified_impossible(25, false).is_err()); // above L
        let imp = pool.certified_impossible(20, false).unwrap();
        assert!(imp.contains(&19));
        let custom = AtomSet::new("c", vec![Graph::new(2, [(0, 1)]).unwrap()], 0).unwrap();
        let pool = run_closure(&custom, 20).unwrap();
        assert!(pool.certified_impossible(10, false).is_err()); // uncertified set
        assert!(pool.certified_impossible(10, true).is_ok());
    }

    #[test]
    fn realize_examples() {
        let atoms = vec![Graph::new(2, [(0, 1)]).unwrap()];
        let leaf = Arc::new(Witness::Atom { atom: 0, root: 0 });
        let rg = realize_witness(&leaf, &atoms).unwrap();
        assert_eq!(rg.graph().edge_count(), 1);
        assert_eq!(rg.root(), 0);

        let path_mid = Witness::Glue1(vec![leaf.clone(), leaf.clone()]);
        let rg = realize_witness(&path_mid, &atoms).unwrap();
        let profile = rooted_profile(&rg);
        assert_eq!((profile.alpha.to_u64(), profile.beta.to_u64()), (Some(1), Some(0)));

        let path_end = Witness::Glue2 {
            atom: 0,
            root: 0,
            slots: vec![(1, leaf.clone())],
        };
        let rg = realize_witness(&path_end, &atoms).unwrap();
        let profile = rooted_profile(&rg);
        assert_eq!((profile.alpha.to_u64(), profile.beta.to_u64()), (Some(1), Some(1)));
    }

    #[test]
    fn witness_terms_round_trip() {
        let atoms = vec![Graph::new(2, [(0, 1)]).unwrap()];
        let leaf = Arc::new(Witness::Atom { atom: 0, root: 0 });
        let w = Witness::Glue2 {
            atom: 0,
            root: 0,
            slots: vec![(1, Arc::new(Witness::Glue1(vec![leaf.clone(), leaf])))],
        };
        let term = serialize_witness(&w);
        assert_eq!(term, "glue2(0,0; 1=glue1(atom(0,0),atom(0,0)))");
        let back = parse_witness(&term).unwrap();
        assert_eq!(back, w);
        let r1 = realize_witness(&w, &atoms).unwrap();
        let r2 = realize_witness(&back, &atoms).unwrap();
        assert_eq!(r1.graph(), r2.graph());
        assert!(parse_witness("glue3(1)").is_err());
        assert!(parse_witness("atom(0,0) extra").is_err());
        assert_eq!(parse_witness("single").unwrap(), Witness::Single);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let run = |threads: usize| {
            let tp = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            tp.install(|| run_closure(&k2_set(), 30).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.len(), b.len());
        for ((pa, ea), (pb, eb)) in a.entries().zip(b.entries()) {
            assert_eq!(pa, pb);
            assert_eq!(ea.edges, eb.edges);
            assert_eq!(
                serialize_witness(&ea.witness),
                serialize_witness(&eb.witness)
            );
        }
    }

    #[test]
    fn seven_atoms_at_67() {
        let pool = run_closure(&AtomSet::default_seven(), 67).unwrap();
        let imp = pool.certified_impossible(67, false).unwrap();
        let expected: BTreeSet<u64> = [19, 37, 41, 59, 67].into_iter().collect();
        assert_eq!(imp, expected);
        assert!(pool.verify_closed().unwrap());
    }
}
