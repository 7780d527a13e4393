//! Composition of rooted profiles: gluing graphs at a shared root and gluing
//! rooted graphs onto the non-root vertices of a core graph.

use crate::count::{CoverCount, CoverCounter, PairAB};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on core vertex count for [`build_core_table`].
pub const DEFAULT_CORE_VERTEX_GUARD: usize = 16;

/// Checked counting arithmetic, implemented by `u64` (search hot path) and
/// [`CoverCount`] (exact public results).
pub trait Count: Clone + Ord {
    fn zero() -> Self;
    fn one() -> Self;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
}

impl Count for u64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        u64::checked_add(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        u64::checked_mul(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        u64::checked_sub(*self, *other)
    }
}

impl Count for CoverCount {
    fn zero() -> Self {
        CoverCount::zero()
    }
    fn one() -> Self {
        CoverCount::one()
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        CoverCount::checked_add(self, other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        CoverCount::checked_mul(self, other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        CoverCount::checked_sub(self, other)
    }
}

/// Way 1 on raw `(alpha, beta)` tuples: `beta = prod beta_i`,
/// `alpha = prod (alpha_i + beta_i) - prod beta_i`. `None` on overflow.
pub(crate) fn glue_pairs_generic<C: Count>(pairs: &[(C, C)]) -> Option<(C, C)> {
    let mut s_prod = C::one();
    let mut b_prod = C::one();
    for (a, b) in pairs {
        let s = a.checked_add(b)?;
        s_prod = s_prod.checked_mul(&s)?;
        b_prod = b_prod.checked_mul(b)?;
    }
    // s_i >= beta_i termwise, so the subtraction cannot underflow.
    let alpha = s_prod.checked_sub(&b_prod)?;
    Some((alpha, b_prod))
}

/// Way 2 on raw tuples. `table` is bitmask-indexed over the core's vertices,
/// `slots[i]` holds the pair attached at vertex `i` and is `None` exactly at
/// the root. `None` on overflow.
pub(crate) fn glue_core_generic<C: Count>(
    table: &[C],
    root: usize,
    slots: &[Option<(C, C)>],
) -> Option<(C, C)> {
    let n = slots.len();
    debug_assert_eq!(table.len(), 1usize << n);
    let root_bit = 1usize << root;
    let mut alpha = C::zero();
    let mut beta = C::zero();
    for (mask, base) in table.iter().enumerate() {
        if *base == C::zero() {
            continue;
        }
        let mut term = base.clone();
        let mut dead = false;
        for (i, slot) in slots.iter().enumerate() {
            let (a, b) = match slot {
                Some(p) => p,
                None => continue,
            };
            let f = if mask & (1 << i) != 0 {
                a.checked_add(b)?
            } else {
                a.clone()
            };
            if f == C::zero() {
                dead = true;
                break;
            }
            term = term.checked_mul(&f)?;
        }
        if dead {
            continue;
        }
        if mask & root_bit != 0 {
            alpha = alpha.checked_add(&term)?;
        } else {
            beta = beta.checked_add(&term)?;
        }
    }
    Some((alpha, beta))
}

/// Glues rooted graphs at a shared root (Way 1) on the profile level.
pub fn glue_at_root(pairs: &[PairAB]) -> Result<PairAB> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "glue_at_root needs at least one pair".into(),
        ));
    }
    let raw: Vec<(CoverCount, CoverCount)> = pairs
        .iter()
        .map(|p| (p.alpha.clone(), p.beta.clone()))
        .collect();
    let (alpha, beta) = glue_pairs_generic(&raw).expect("CoverCount arithmetic is unbounded");
    Ok(PairAB::new(alpha, beta))
}

/// Cover counts of every induced subgraph of a core, indexed by vertex-subset
/// bitmask, for Way-2 gluing.
#[derive(Clone, Debug)]
pub struct CoreTable {
    core: Graph,
    root: usize,
    alpha_by_subset: Vec<CoverCount>,
}

impl CoreTable {
    pub fn core(&self) -> &Graph {
        &self.core
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Cover count of the subgraph induced by the bitmask `subset`.
    pub fn entry(&self, subset: usize) -> &CoverCount {
        &self.alpha_by_subset[subset]
    }

    pub fn entries(&self) -> &[CoverCount] {
        &self.alpha_by_subset
    }

    /// Entry for the full vertex set, i.e. alpha of the core itself.
    pub fn full_entry(&self) -> &CoverCount {
        &self.alpha_by_subset[self.alpha_by_subset.len() - 1]
    }

    /// The whole table narrowed to `u64`, or `None` if any entry overflows.
    pub fn entries_u64(&self) -> Option<Vec<u64>> {
        self.alpha_by_subset.iter().map(|c| c.to_u64()).collect()
    }
}

/// Builds the induced-subgraph cover table of a connected core.
pub fn build_core_table(core: &Graph, root: usize) -> Result<CoreTable> {
    build_core_table_guarded(core, root, DEFAULT_CORE_VERTEX_GUARD)
}

pub fn build_core_table_guarded(core: &Graph, root: usize, guard: usize) -> Result<CoreTable> {
    let n = core.vertex_count();
    if n > guard {
        return Err(Error::GuardExceeded(format!(
            "core table needs |V| = {n} <= {guard}"
        )));
    }
    if root >= n {
        return Err(Error::InvalidArgument(format!(
            "root {root} out of range for core with {n} vertices"
        )));
    }
    if !core.is_connected() {
        return Err(Error::InvalidGraph("core must be connected".into()));
    }
    let mut counter = CoverCounter::new();
    let mut alpha_by_subset = Vec::with_capacity(1 << n);
    for mask in 0usize..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        let sub = core.induced_subgraph(&verts).expect("subset in range");
        alpha_by_subset.push(counter.count(&sub));
    }
    Ok(CoreTable {
        core: core.clone(),
        root,
        alpha_by_subset,
    })
}

/// Glues rooted graphs onto the non-root vertices of a core (Way 2).
///
/// `attach` must assign a pair to every non-root core vertex, exactly once;
/// the identity pair (0, 1) stands for an empty slot.
pub fn glue_on_core(table: &CoreTable, attach: &[(usize, PairAB)]) -> Result<PairAB> {
    let n = table.core().vertex_count();
    let mut slots: Vec<Option<(CoverCount, CoverCount)>> = vec![None; n];
    for (v, pair) in attach {
        if *v >= n {
            return Err(Error::InvalidArgument(format!(
                "attachment vertex {v} out of range"
            )));
        }
        if *v == table.root() {
            return Err(Error::InvalidArgument(
                "nothing may attach to the root".into(),
            ));
        }
        if slots[*v].is_some() {
            return Err(Error::InvalidArgument(format!(
                "attachment vertex {v} assigned twice"
            )));
        }
        slots[*v] = Some((pair.alpha.clone(), pair.beta.clone()));
    }
    for (v, slot) in slots.iter().enumerate() {
        if v != table.root() && slot.is_none() {
            return Err(Error::InvalidArgument(format!(
                "attachment missing for core vertex {v}"
            )));
        }
    }
    let (alpha, beta) = glue_core_generic(table.entries(), table.root(), &slots)
        .expect("CoverCount arithmetic is unbounded");
    Ok(PairAB::new(alpha, beta))
}
