//! Benchmark programs checked for correctness, plus segment-size reports.

mod common;

use vpyc::driver::{self, bench, BuildConfig, MICRO_HEAP_BYTES};
use vpyc::oracle::{self, Limits};

fn sieve_run(variant: &str, size: i64, cfg: &BuildConfig) -> Vec<i64> {
    let params = bench::Params {
        sieve_size: size,
        sieve_reps: 3,
        linpack_n: 0,
    };
    let src = bench::vpy_source(variant, &params).unwrap().unwrap();
    let unit = driver::compile_source(&src, cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let exe = driver::build_executable(&unit, cfg, &dir.path().join("sieve")).unwrap();
    let out = driver::run_executable(&exe, b"").unwrap();
    assert_eq!(out.exit, 0, "{}", out.stderr);
    String::from_utf8(out.stdout)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect()
}

#[test]
fn sieve_counts_match_brute_force() {
    // Expected values come first, before anything is built.
    let cases = [(8190, driver::DEFAULT_HEAP_BYTES), (4095, MICRO_HEAP_BYTES)];
    let expected: Vec<i64> = cases.iter().map(|&(n, _)| common::brute_force_sieve_count(n)).collect();
    let Some(base) = common::toolchain() else {
        eprintln!("skipped: no C compiler");
        return;
    };
    for (&(size, heap), want) in cases.iter().zip(&expected) {
        let cfg = BuildConfig {
            heap_bytes: heap,
            ..base.clone()
        };
        for variant in ["sieve-for", "sieve-while"] {
            let got = sieve_run(variant, size, &cfg);
            assert_eq!(got[0], *want, "{variant} at size {size}");
            assert_eq!(got[1], 3 * want, "{variant} total at size {size}");
            assert_eq!(got[2], 2 * size + 1, "{variant} largest prime at size {size}");
        }
    }
}

#[test]
fn native_sieve_agrees() {
    let Some(cfg) = common::toolchain() else {
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("native");
    let defines = [("SIZE", "4095".to_string()), ("REPS", "3".to_string())];
    driver::toolchain::build_native(bench::SIEVE_NATIVE, &cfg, &defines, &exe).unwrap();
    let out = driver::run_executable(&exe, b"").unwrap();
    let want = common::brute_force_sieve_count(4095);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        format!("{want} {} 8191", 3 * want)
    );
}

#[test]
fn linpack_small_passes_its_residual_check() {
    let Some(cfg) = common::toolchain() else {
        return;
    };
    let params = bench::Params {
        sieve_size: 0,
        sieve_reps: 0,
        linpack_n: 50,
    };
    let src = bench::vpy_source("linpack", &params).unwrap().unwrap();
    let tree = driver::typed_tree(&src, &cfg).unwrap();
    let expected = oracle::interpret_with(&tree, "", Limits::default());
    let unit = driver::compile_source(&src, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let exe = driver::build_executable(&unit, &cfg, &dir.path().join("linpack")).unwrap();
    let out = driver::run_executable(&exe, b"").unwrap();
    assert_eq!(out.stdout, expected.stdout);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("True"), "{text}");
}

fn sizes(heap: u64) -> Option<driver::Sizes> {
    let base = common::toolchain()?;
    let cfg = BuildConfig {
        heap_bytes: heap,
        opt: driver::OptLevel::Size,
        ..base
    };
    let src = bench::vpy_source("sieve-for", &bench::Params::for_heap(heap))
        .unwrap()
        .unwrap();
    let unit = driver::compile_source(&src, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let exe = driver::build_executable(&unit, &cfg, &dir.path().join("p")).unwrap();
    Some(driver::segment_sizes(&exe).unwrap())
}

#[test]
fn desktop_heap_dominates_zero_init() {
    if let Some(s) = sizes(driver::DEFAULT_HEAP_BYTES) {
        assert!(s.zeroinit >= 8_000_000, "{s:?}");
    }
}

#[test]
fn micro_heap_zero_init_is_small() {
    if let Some(s) = sizes(MICRO_HEAP_BYTES) {
        assert!((24 * 1024..=40 * 1024).contains(&s.zeroinit), "{s:?}");
    }
}
