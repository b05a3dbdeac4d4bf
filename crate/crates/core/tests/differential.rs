//! Corpus-wide checks: oracle against compiled programs, oracle before and
//! after loop lowering, and the frozen-type audit of every emitted unit.

mod common;

use std::thread;

use vpyc::codegen::isa;
use vpyc::driver::{self, BuildConfig};
use vpyc::oracle::{self, Limits};
use vpyc::typeinfer;

#[test]
fn corpus_is_large_enough() {
    assert!(common::corpus().len() >= 30);
}

#[test]
fn oracle_matches_compiled_programs() {
    let Some(cfg) = common::toolchain() else {
        eprintln!("skipped: no C compiler");
        return;
    };
    let failures: Vec<String> = thread::scope(|s| {
        let handles: Vec<_> = common::corpus()
            .into_iter()
            .map(|p| {
                let cfg = cfg.clone();
                s.spawn(move || check_program(&p, &cfg).err().map(|e| format!("{}: {e}", p.name)))
            })
            .collect();
        handles.into_iter().filter_map(|h| h.join().expect("worker")).collect()
    });
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

fn check_program(p: &common::Program, cfg: &BuildConfig) -> Result<(), String> {
    let tree = driver::typed_tree(&p.source, cfg).map_err(|e| e.to_string())?;
    let expected = oracle::interpret_with(
        &tree,
        &String::from_utf8_lossy(&p.stdin),
        Limits::for_heap(cfg.heap_bytes),
    );
    let unit = driver::compile_source(&p.source, cfg).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exe = driver::build_executable(&unit, cfg, &dir.path().join("prog")).map_err(|e| e.to_string())?;
    let got = driver::run_executable(&exe, &p.stdin).map_err(|e| e.to_string())?;
    driver::compare_outputs(&expected.stdout, &got.stdout, 1e-9)?;
    if expected.exit != got.exit {
        return Err(format!("exit: oracle {}, program {}", expected.exit, got.exit));
    }
    Ok(())
}

#[test]
fn lowering_preserves_oracle_behaviour() {
    let cfg = BuildConfig::default();
    for p in common::corpus() {
        let input = String::from_utf8_lossy(&p.stdin).into_owned();
        let typed = driver::typed_tree(&p.source, &cfg).unwrap();
        let lowered = driver::advance(typed.clone(), 3, cfg.numeric()).unwrap();
        let a = oracle::interpret(&typed, &input);
        let b = oracle::interpret(&lowered, &input);
        assert_eq!(a.stdout_text(), b.stdout_text(), "{}", p.name);
        assert_eq!(a.exit, b.exit, "{}", p.name);
        assert_eq!(a.trap.is_some(), b.trap.is_some(), "{}", p.name);
    }
}

#[test]
fn types_are_frozen_and_units_use_only_isa_mnemonics() {
    let cfg = BuildConfig::default();
    for p in common::corpus() {
        let typed = driver::typed_tree(&p.source, &cfg).unwrap();
        let problems = typeinfer::check_frozen(&typed);
        assert!(problems.is_empty(), "{}: {problems:?}", p.name);
        let unit = driver::compile_source(&p.source, &cfg).unwrap();
        assert_eq!(isa::unknown_mnemonics(&unit), Vec::<String>::new(), "{}", p.name);
        assert!(!isa::has_type_dispatch(&unit), "{}", p.name);
    }
}

#[test]
fn wide_numeric_profile_agrees_too() {
    let Some(base) = common::toolchain() else {
        return;
    };
    let cfg = BuildConfig { int_bits: 64, ..base };
    for name in ["02_int_arith", "04_int_wrap", "30_primes"] {
        let p = common::corpus().into_iter().find(|p| p.name == name).unwrap();
        check_program(&p, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
