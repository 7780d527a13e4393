//! Exact edge-cover counting and the search for achievable cover counts.

pub mod algebra;
pub mod atoms;
pub mod corpus;
pub mod count;
pub mod error;
pub mod graph;
pub mod io;
pub mod report;
pub mod search;
pub mod verify;

pub use algebra::{build_core_table, glue_at_root, glue_on_core, CoreTable, Count};
pub use atoms::{canonical_form, enumerate_atoms, isomorphic, proof_guided_atoms, AtomCatalog};
pub use count::{
    count_covers, count_covers_bruteforce, count_precovers_bruteforce, rooted_profile,
    CoverCount, CoverCounter, PairAB,
};
pub use error::{Error, Result};
pub use graph::{Graph, GraphKey, RootedGraph};
pub use search::{realize_witness, run_closure, AtomSet, Pool, Witness};
