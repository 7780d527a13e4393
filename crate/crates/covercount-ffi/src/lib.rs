//! C ABI over the covercount engine. Every fallible call returns a
//! [`CcStatus`] and writes results through out pointers; detailed messages
//! are kept per thread and fetched with [`cc_last_error`]. Handles are
//! opaque and freed with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use covercount::report::{SearchReport, Status};
use covercount::{
    count_covers, rooted_profile, run_closure, AtomSet, Error, Graph, RootedGraph,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CcStatus {
    Ok = 0,
    InvalidGraph = 1,
    InvalidArgument = 2,
    GuardExceeded = 3,
    Overflow = 4,
    ParseError = 5,
    IoError = 6,
    NullPointer = 7,
    BufferTooSmall = 8,
    InternalPanic = 9,
}

/// Classification of one value in a finished search.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CcValueStatus {
    Achievable = 0,
    CertifiedImpossible = 1,
    Unresolved = 2,
}

/// An immutable graph handle.
pub struct CcGraph(Graph);

/// A finished search: the pool flattened into per-value rows.
pub struct CcSearch {
    report: SearchReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn fail(e: &Error) -> CcStatus {
    set_error(e.to_string());
    match e {
        Error::InvalidGraph(_) => CcStatus::InvalidGraph,
        Error::InvalidArgument(_) => CcStatus::InvalidArgument,
        Error::GuardExceeded(_) => CcStatus::GuardExceeded,
        Error::Overflow(_) => CcStatus::Overflow,
        Error::Parse(_) => CcStatus::ParseError,
        Error::Io(_) => CcStatus::IoError,
    }
}

fn null_pointer(what: &str) -> CcStatus {
    set_error(format!("{what} must not be null"));
    CcStatus::NullPointer
}

/// Runs a body that can't be allowed to unwind across the ABI.
fn guarded(body: impl FnOnce() -> CcStatus) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            CcStatus::InternalPanic
        }
    }
}

fn write_str(text: &str, buf: *mut c_char, buf_len: usize) -> CcStatus {
    if buf.is_null() {
        return null_pointer("buf");
    }
    let bytes = text.as_bytes();
    if buf_len < bytes.len() + 1 {
        set_error(format!(
            "buffer of {buf_len} bytes cannot hold {} bytes plus the terminator",
            bytes.len()
        ));
        return CcStatus::BufferTooSmall;
    }
    unsafe {
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
        *buf.add(bytes.len()) = 0;
    }
    CcStatus::Ok
}

/// Copies the most recent error message of this thread into `buf` as a
/// NUL-terminated string; empty string if no error was recorded.
///
/// # Safety
/// `buf` must point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cc_last_error(buf: *mut c_char, buf_len: usize) -> CcStatus {
    let msg = LAST_ERROR.with(|slot| slot.borrow().clone());
    let text = msg.as_deref().map(CStr::to_bytes).unwrap_or(b"");
    write_str(std::str::from_utf8(text).unwrap_or(""), buf, buf_len)
}

/// Builds a graph on `n` vertices from `edge_pairs` edges given as a flat
/// `u0 v0 u1 v1 ...` array, and stores the new handle in `*out`.
///
/// # Safety
/// `edges` must point to `2 * edge_pairs` readable u32 values (or be null
/// when `edge_pairs` is 0); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_new(
    n: u32,
    edges: *const u32,
    edge_pairs: usize,
    out: *mut *mut CcGraph,
) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if edges.is_null() && edge_pairs > 0 {
        return null_pointer("edges");
    }
    let pairs: Vec<(usize, usize)> = (0..edge_pairs)
        .map(|i| {
            (
                *edges.add(2 * i) as usize,
                *edges.add(2 * i + 1) as usize,
            )
        })
        .collect();
    guarded(|| match Graph::new(n as usize, pairs) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(CcGraph(g)));
            CcStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Parses a graph from edge-list text, or graph6 when the text carries the
/// `>>graph6<<` header or `force_graph6` is nonzero.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_parse(
    text: *const c_char,
    force_graph6: i32,
    out: *mut *mut CcGraph,
) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if text.is_null() {
        return null_pointer("text");
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("text is not valid UTF-8".into());
            return CcStatus::ParseError;
        }
    };
    guarded(|| match covercount::io::parse_graph_auto(text, force_graph6 != 0) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(CcGraph(g)));
            CcStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Frees a graph handle; null is ignored.
///
/// # Safety
/// `g` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_free(g: *mut CcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_vertex_count(g: *const CcGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.0.vertex_count() as u32)
}

/// Edge count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_edge_count(g: *const CcGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.0.edge_count() as u32)
}

unsafe fn predicate(
    g: *const CcGraph,
    out: *mut i32,
    f: impl FnOnce(&Graph) -> covercount::Result<bool>,
) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(g) = g.as_ref() else {
        return null_pointer("graph");
    };
    match f(&g.0) {
        Ok(v) => {
            *out = i32::from(v);
            CcStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Stores 1 in `*out` iff the graph is connected.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_is_connected(g: *const CcGraph, out: *mut i32) -> CcStatus {
    predicate(g, out, |g| Ok(g.is_connected()))
}

/// Stores 1 in `*out` iff the graph is bipartite.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_is_bipartite(g: *const CcGraph, out: *mut i32) -> CcStatus {
    predicate(g, out, |g| Ok(g.is_bipartite()))
}

/// Stores 1 in `*out` iff the graph is atomic (connected, at least one
/// edge, no cut vertex).
///
/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_is_atomic(g: *const CcGraph, out: *mut i32) -> CcStatus {
    predicate(g, out, |g| g.is_atomic())
}

/// Writes the number of edge coverings as a decimal string. The count is
/// exact and unbounded, hence the string interface.
///
/// # Safety
/// `g` must be a live handle; `buf` must point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cc_count_covers(
    g: *const CcGraph,
    buf: *mut c_char,
    buf_len: usize,
) -> CcStatus {
    let Some(g) = g.as_ref() else {
        return null_pointer("graph");
    };
    guarded(|| write_str(&count_covers(&g.0).to_string(), buf, buf_len))
}

/// Stores the number of edge coverings in `*out`; fails with Overflow when
/// it does not fit in 64 bits.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_count_covers_u64(g: *const CcGraph, out: *mut u64) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(g) = g.as_ref() else {
        return null_pointer("graph");
    };
    guarded(|| {
        let count = count_covers(&g.0);
        match count.to_u64() {
            Some(v) => {
                *out = v;
                CcStatus::Ok
            }
            None => {
                set_error(format!("cover count {count} does not fit in 64 bits"));
                CcStatus::Overflow
            }
        }
    })
}

/// Computes the rooted profile: `*out_alpha` coverings of the graph,
/// `*out_beta` coverings with the root removed, `*out_s` their sum. The
/// graph must be connected. Fails with Overflow if any value needs more
/// than 64 bits.
///
/// # Safety
/// `g` must be a live handle; the three out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_rooted_profile_u64(
    g: *const CcGraph,
    root: u32,
    out_alpha: *mut u64,
    out_beta: *mut u64,
    out_s: *mut u64,
) -> CcStatus {
    if out_alpha.is_null() || out_beta.is_null() || out_s.is_null() {
        return null_pointer("out");
    }
    let Some(g) = g.as_ref() else {
        return null_pointer("graph");
    };
    guarded(|| {
        let rg = match RootedGraph::new(g.0.clone(), root as usize) {
            Ok(rg) => rg,
            Err(e) => return fail(&e),
        };
        let p = rooted_profile(&rg);
        match (p.alpha.to_u64(), p.beta.to_u64(), p.s().to_u64()) {
            (Some(a), Some(b), Some(s)) => {
                *out_alpha = a;
                *out_beta = b;
                *out_s = s;
                CcStatus::Ok
            }
            _ => {
                set_error("profile does not fit in 64 bits".into());
                CcStatus::Overflow
            }
        }
    })
}

unsafe fn run_search(atoms: AtomSet, max_alpha: u64, out: *mut *mut CcSearch) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guarded(|| match run_closure(&atoms, max_alpha) {
        Ok(pool) => {
            let report = SearchReport::from_pool(&pool);
            *out = Box::into_raw(Box::new(CcSearch { report }));
            CcStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Runs the bipartite search over the built-in seven-atom set and stores a
/// handle to the finished report. Impossibility is certified only up to 67.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_search_bipartite(max_alpha: u64, out: *mut *mut CcSearch) -> CcStatus {
    run_search(AtomSet::default_seven(), max_alpha, out)
}

/// Runs the tree search (single-edge atom set).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_search_trees(max_alpha: u64, out: *mut *mut CcSearch) -> CcStatus {
    run_search(AtomSet::trees(), max_alpha, out)
}

/// Frees a search handle; null is ignored.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cc_search_free(s: *mut CcSearch) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Stores the classification of `value` (which must lie in 1..=L) in
/// `*out`.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cc_search_status_of(
    s: *const CcSearch,
    value: u64,
    out: *mut CcValueStatus,
) -> CcStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(s) = s.as_ref() else {
        return null_pointer("search");
    };
    let Some(row) = value
        .checked_sub(1)
        .and_then(|i| s.report.rows().get(i as usize))
    else {
        set_error(format!(
            "value {value} is outside 1..={}",
            s.report.max_alpha()
        ));
        return CcStatus::InvalidArgument;
    };
    *out = match row.status {
        Status::Achievable => CcValueStatus::Achievable,
        Status::CertifiedImpossible => CcValueStatus::CertifiedImpossible,
        Status::Unresolved => CcValueStatus::Unresolved,
    };
    CcStatus::Ok
}

/// Writes the witness term of an achievable `value` as a NUL-terminated
/// string; fails with InvalidArgument when the value is not achievable.
///
/// # Safety
/// `s` must be a live handle; `buf` must point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cc_search_witness(
    s: *const CcSearch,
    value: u64,
    buf: *mut c_char,
    buf_len: usize,
) -> CcStatus {
    let Some(s) = s.as_ref() else {
        return null_pointer("search");
    };
    let row = value
        .checked_sub(1)
        .and_then(|i| s.report.rows().get(i as usize));
    match row.and_then(|r| r.witness.as_deref()) {
        Some(term) => write_str(term, buf, buf_len),
        None => {
            set_error(format!("value {value} carries no witness"));
            CcStatus::InvalidArgument
        }
    }
}
