use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use keynet_ffi::*;

fn two_triangles() -> *mut KnGraph {
    let s = [0usize, 1, 0, 3, 4, 3, 2];
    let t = [1usize, 2, 2, 4, 5, 5, 3];
    let w = [1u64; 7];
    let mut g = ptr::null_mut();
    let status = unsafe { kn_graph_from_edges(6, s.as_ptr(), t.as_ptr(), w.as_ptr(), 7, &mut g) };
    assert_eq!(status, KnStatus::Ok);
    g
}

fn last_error() -> String {
    let p = kn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_and_modularity() {
    let g = two_triangles();
    unsafe {
        assert_eq!(kn_graph_vertex_count(g), 6);
        assert_eq!(kn_graph_total_weight(g), 7);
        let labels = [0usize, 0, 0, 1, 1, 1];
        let mut q = 0.0;
        assert_eq!(kn_modularity(g, labels.as_ptr(), 6, &mut q), KnStatus::Ok);
        assert!((q - 5.0 / 14.0).abs() < 1e-12);

        assert_eq!(
            kn_modularity(g, labels.as_ptr(), 5, &mut q),
            KnStatus::PartitionMismatch
        );
        assert!(last_error().contains("partition"));
        kn_graph_free(g);
    }
}

#[test]
fn louvain_and_stabilize() {
    let g = two_triangles();
    unsafe {
        let mut labels = [9usize; 6];
        let mut count = 0;
        assert_eq!(kn_louvain(g, 3, labels.as_mut_ptr(), 6, &mut count), KnStatus::Ok);
        assert_eq!(labels, [0, 0, 0, 1, 1, 1]);
        assert_eq!(count, 2);
        assert_eq!(
            kn_louvain(g, 3, labels.as_mut_ptr(), 4, &mut count),
            KnStatus::PartitionMismatch
        );

        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(kn_stabilize(g, 50, 11, true, &mut a), KnStatus::Ok);
        assert_eq!(kn_stabilize(g, 50, 11, false, &mut b), KnStatus::Ok);
        assert_eq!(kn_stabilized_modal_count(a), 2);
        assert_eq!(kn_stabilized_runs_with_count(a, 2), 50);
        let (mut qa, mut qb) = (0.0, 0.0);
        assert_eq!(kn_stabilized_modularity(a, &mut qa), KnStatus::Ok);
        assert_eq!(kn_stabilized_modularity(b, &mut qb), KnStatus::Ok);
        assert_eq!(qa.to_bits(), qb.to_bits());
        let mut rep = [0usize; 6];
        assert_eq!(kn_stabilized_assignment(a, rep.as_mut_ptr(), 6), KnStatus::Ok);
        assert_eq!(rep, [0, 0, 0, 1, 1, 1]);
        kn_stabilized_free(a);
        kn_stabilized_free(b);
        kn_graph_free(g);
    }
}

#[test]
fn edgeless_graph_has_no_modularity() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            kn_graph_from_edges(3, ptr::null(), ptr::null(), ptr::null(), 0, &mut g),
            KnStatus::Ok
        );
        let mut r = ptr::null_mut();
        assert_eq!(kn_stabilize(g, 5, 0, false, &mut r), KnStatus::Ok);
        assert_eq!(kn_stabilized_modal_count(r), 3);
        let mut q = 0.0;
        assert_eq!(kn_stabilized_modularity(r, &mut q), KnStatus::EmptyGraph);
        let labels = [0usize, 1, 2];
        assert_eq!(kn_modularity(g, labels.as_ptr(), 3, &mut q), KnStatus::EmptyGraph);
        kn_stabilized_free(r);
        kn_graph_free(g);
    }
}

#[test]
fn invalid_arguments() {
    unsafe {
        let s = [0usize];
        let w = [1u64];
        let mut g = ptr::null_mut();
        assert_eq!(
            kn_graph_from_edges(2, s.as_ptr(), s.as_ptr(), w.as_ptr(), 1, &mut g),
            KnStatus::InvalidArgument
        );
        assert!(last_error().contains("self-loop"));
        assert!(g.is_null());
        assert_eq!(
            kn_graph_from_edges(2, ptr::null(), s.as_ptr(), w.as_ptr(), 1, &mut g),
            KnStatus::NullPointer
        );
        let mut q = 0.0;
        assert_eq!(kn_modularity(ptr::null(), s.as_ptr(), 1, &mut q), KnStatus::NullPointer);
        assert_eq!(kn_graph_vertex_count(ptr::null()), 0);
        kn_graph_free(ptr::null_mut());
        kn_string_free(ptr::null_mut());
    }
}

#[test]
fn analyze_returns_report_json() {
    let corpus =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/ten_tweets.jsonl"))
            .unwrap();
    let corpus = CString::new(corpus).unwrap();
    let config = CString::new(r#"{"master_seed": 42, "runs": 20, "label": "fixture"}"#).unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            kn_analyze_jsonl(corpus.as_ptr(), config.as_ptr(), &mut out),
            KnStatus::Ok
        );
        let json = CStr::from_ptr(out).to_str().unwrap().to_string();
        kn_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["label"], "fixture");
        assert_eq!(v["config"]["runs"], 20);
        assert_eq!(v["buckets"][0]["community_count"], 3);

        let mut again = ptr::null_mut();
        assert_eq!(
            kn_analyze_jsonl(corpus.as_ptr(), config.as_ptr(), &mut again),
            KnStatus::Ok
        );
        assert_eq!(CStr::from_ptr(again).to_str().unwrap(), json);
        kn_string_free(again);

        let bad = CString::new("{\"runs\": \"many\"}").unwrap();
        assert_eq!(
            kn_analyze_jsonl(corpus.as_ptr(), bad.as_ptr(), &mut out),
            KnStatus::Parse
        );
        let zero = CString::new("{\"runs\": 0}").unwrap();
        assert_eq!(
            kn_analyze_jsonl(corpus.as_ptr(), zero.as_ptr(), &mut out),
            KnStatus::InvalidArgument
        );
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(kn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/keynet.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 15);
    for name in exported {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct KnGraph KnGraph;"));
    assert!(header.contains("KN_STATUS_OK = 0"));
}

/// Directory holding the library artefacts for this build profile.
fn artefact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = artefact_dir().join("libkeynet_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "keynet.h"

int main(void) {
    size_t s[] = {0, 2};
    size_t t[] = {1, 3};
    uint64_t w[] = {1, 1};
    KnGraph *g = NULL;
    if (kn_graph_from_edges(4, s, t, w, 2, &g) != KN_STATUS_OK) return 1;
    size_t labels[] = {0, 0, 1, 1};
    double q = 0.0;
    if (kn_modularity(g, labels, 4, &q) != KN_STATUS_OK) return 2;
    KnStabilized *r = NULL;
    if (kn_stabilize(g, 10, 1, false, &r) != KN_STATUS_OK) return 3;
    printf("%.6f %zu\n", q, kn_stabilized_modal_count(r));
    kn_stabilized_free(r);
    kn_graph_free(g);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.500000 2\n");
}
