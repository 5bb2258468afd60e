//! C ABI for keynet.
//!
//! Graphs and stabilized results are opaque handles created and freed by
//! this library. Every fallible call returns a [`KnStatus`]; on failure the
//! message is available from [`kn_last_error`] on the same thread. Panics
//! never cross the boundary.
//!
//! The header `include/keynet.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use keynet::community::{louvain, modularity, stabilize, LouvainConfig, Partition, StabilizeOptions};
use keynet::{analyze, parse_jsonl, AnalyzeConfig, Error, KeywordGraph, StabilizedResult, StopWordList};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    /// The graph has no edges, so modularity is undefined.
    EmptyGraph = 5,
    NoVertices = 6,
    PartitionMismatch = 7,
    NoData = 8,
    Panic = 99,
}

/// Opaque weighted keyword graph.
pub struct KnGraph(KeywordGraph);

/// Opaque stabilized community-count result.
pub struct KnStabilized(StabilizedResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn status_of(e: &Error) -> KnStatus {
    match e {
        Error::Io(_) => KnStatus::Io,
        Error::Csv(_) | Error::Json(_) | Error::Xml(_) => KnStatus::Parse,
        Error::EmptyGraph => KnStatus::EmptyGraph,
        Error::NoVertices => KnStatus::NoVertices,
        Error::PartitionMismatch { .. } | Error::InvalidPartition(_) => KnStatus::PartitionMismatch,
        Error::NoData => KnStatus::NoData,
        _ => KnStatus::InvalidArgument,
    }
}

struct Failure(KnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(KnStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KnStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {message}"));
            KnStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn slice_mut<'a, T>(data: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(data, len))
}

unsafe fn graph<'a>(g: *const KnGraph) -> Result<&'a KeywordGraph, Failure> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(KnStatus::InvalidArgument, format!("{what} is not UTF-8: {e}")))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `vertex_count` vertices from `edge_count` edges given
/// as parallel arrays. Repeated pairs accumulate; self-loops are rejected.
///
/// # Safety
/// The three arrays must hold `edge_count` elements each, and `out` must be
/// a valid pointer. Free the result with [`kn_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn kn_graph_from_edges(
    vertex_count: usize,
    sources: *const usize,
    targets: *const usize,
    weights: *const u64,
    edge_count: usize,
    out: *mut *mut KnGraph,
) -> KnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = slice(sources, edge_count, "sources")?;
        let t = slice(targets, edge_count, "targets")?;
        let w = slice(weights, edge_count, "weights")?;
        let edges: Vec<(usize, usize, u64)> = (0..edge_count).map(|i| (s[i], t[i], w[i])).collect();
        let g = KeywordGraph::with_vertices(vertex_count, &edges)?;
        *out = Box::into_raw(Box::new(KnGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`kn_graph_from_edges`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kn_graph_free(g: *mut KnGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn kn_graph_vertex_count(g: *const KnGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Total edge weight `m`.
///
/// # Safety
/// `g` must be a live graph handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn kn_graph_total_weight(g: *const KnGraph) -> u64 {
    g.as_ref().map_or(0, |g| g.0.total_weight())
}

/// Modularity of the partition given by `assignment` (one community label
/// per vertex).
///
/// # Safety
/// `assignment` must hold `len` elements and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kn_modularity(
    g: *const KnGraph,
    assignment: *const usize,
    len: usize,
    out: *mut f64,
) -> KnStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let labels = slice(assignment, len, "assignment")?;
        *out = modularity(g, &Partition::from_labels(labels))?;
        Ok(())
    })
}

/// One seeded Louvain run. Writes one community label per vertex into
/// `assignment` (labels numbered by first appearance) and the community
/// count into `community_count`.
///
/// # Safety
/// `assignment` must have room for `len` elements, `len` must equal the
/// vertex count, and `community_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kn_louvain(
    g: *const KnGraph,
    seed: u64,
    assignment: *mut usize,
    len: usize,
    community_count: *mut usize,
) -> KnStatus {
    guard(|| {
        let g = graph(g)?;
        if community_count.is_null() {
            return Err(null("community_count"));
        }
        if len != g.vertex_count() {
            return Err(Error::PartitionMismatch {
                expected: g.vertex_count(),
                got: len,
            }
            .into());
        }
        let out = slice_mut(assignment, len, "assignment")?;
        let p = louvain(g, &LouvainConfig::with_seed(seed))?;
        out.copy_from_slice(p.assignment());
        *community_count = p.community_count();
        Ok(())
    })
}

/// Modal community count over `runs` seeded Louvain runs.
///
/// # Safety
/// `g` must be a live graph handle and `out` valid. Free the result with
/// [`kn_stabilized_free`].
#[no_mangle]
pub unsafe extern "C" fn kn_stabilize(
    g: *const KnGraph,
    runs: usize,
    master_seed: u64,
    parallel: bool,
    out: *mut *mut KnStabilized,
) -> KnStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = StabilizeOptions {
            parallel,
            ..StabilizeOptions::new(runs, master_seed)
        };
        *out = Box::into_raw(Box::new(KnStabilized(stabilize(g, &opts)?)));
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`kn_stabilize`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kn_stabilized_free(r: *mut KnStabilized) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn kn_stabilized_modal_count(r: *const KnStabilized) -> usize {
    r.as_ref().map_or(0, |r| r.0.modal_count)
}

/// Number of runs that produced `count` communities.
///
/// # Safety
/// `r` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn kn_stabilized_runs_with_count(r: *const KnStabilized, count: usize) -> usize {
    r.as_ref()
        .and_then(|r| r.0.count_histogram.get(&count).copied())
        .unwrap_or(0)
}

/// Modularity of the representative partition; `KN_STATUS_EMPTY_GRAPH`
/// when the graph has no edges.
///
/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn kn_stabilized_modularity(r: *const KnStabilized, out: *mut f64) -> KnStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.0.representative_modularity.ok_or(Error::EmptyGraph)?;
        Ok(())
    })
}

/// Copies the representative partition into `assignment`.
///
/// # Safety
/// `r` must be a live handle; `assignment` must have room for `len`
/// elements, and `len` must equal the vertex count.
#[no_mangle]
pub unsafe extern "C" fn kn_stabilized_assignment(
    r: *const KnStabilized,
    assignment: *mut usize,
    len: usize,
) -> KnStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        let p = &r.0.representative;
        if len != p.len() {
            return Err(Error::PartitionMismatch {
                expected: p.len(),
                got: len,
            }
            .into());
        }
        slice_mut(assignment, len, "assignment")?.copy_from_slice(p.assignment());
        Ok(())
    })
}

/// Runs the full pipeline on JSONL corpus text and returns the report as a
/// JSON string. `config_json` may be null for defaults or hold any subset
/// of `period`, `top_k`, `runs`, `master_seed`, `filter`, `label` and
/// `parallel`. The bundled English stop words are used.
///
/// # Safety
/// Both strings must be NUL-terminated (or `config_json` null) and `out`
/// valid. Free the result with [`kn_string_free`].
#[no_mangle]
pub unsafe extern "C" fn kn_analyze_jsonl(
    corpus_jsonl: *const c_char,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> KnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let corpus = text(corpus_jsonl, "corpus")?;
        let cfg: AnalyzeConfig = if config_json.is_null() {
            AnalyzeConfig::default()
        } else {
            serde_json::from_str(text(config_json, "config")?).map_err(Error::from)?
        };
        let (corpus, rejects) = parse_jsonl(BufReader::new(corpus.as_bytes()), "ffi")?;
        let mut analysis = analyze(&corpus, &StopWordList::english(), &cfg)?;
        analysis.report.input.rejected = rejects.len();
        let json = analysis.report.to_json()?;
        *out = CString::new(json)
            .map_err(|e| Failure(KnStatus::InvalidArgument, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
