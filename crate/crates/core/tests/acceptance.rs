//! Acceptance report: one PASS or FAIL line per primary criterion.
//! Runs without the test harness so the lines always print; exits 1 when
//! any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use vpyc::codegen::{isa, Backend};
use vpyc::driver::{self, bench, BuildConfig, OptLevel, MICRO_HEAP_BYTES};
use vpyc::oracle::{self, Limits};
use vpyc::typeinfer;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn need_cc() -> Result<BuildConfig, String> {
    common::toolchain().ok_or_else(|| "no working C compiler (set VPYC_CC)".to_string())
}

fn differential_corpus() -> Check {
    let cfg = need_cc()?;
    let corpus = common::corpus();
    if corpus.len() < 30 {
        return Err(format!("only {} programs", corpus.len()));
    }
    let failures: Vec<String> = std::thread::scope(|s| {
        let jobs: Vec<_> = corpus
            .iter()
            .map(|p| {
                let cfg = &cfg;
                s.spawn(move || -> Result<(), String> {
                    let e = |x: driver::DriverError| format!("{}: {x}", p.name);
                    let tree = driver::typed_tree(&p.source, cfg).map_err(e)?;
                    let want = oracle::interpret_with(
                        &tree,
                        &String::from_utf8_lossy(&p.stdin),
                        Limits::for_heap(cfg.heap_bytes),
                    );
                    let unit = driver::compile_source(&p.source, cfg).map_err(e)?;
                    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
                    let exe = driver::build_executable(&unit, cfg, &dir.path().join("p")).map_err(e)?;
                    let got = driver::run_executable(&exe, &p.stdin).map_err(e)?;
                    driver::compare_outputs(&want.stdout, &got.stdout, 1e-9).map_err(|d| format!("{}: {d}", p.name))?;
                    if want.exit != got.exit {
                        return Err(format!("{}: exit {} vs {}", p.name, want.exit, got.exit));
                    }
                    Ok(())
                })
            })
            .collect();
        jobs.into_iter().filter_map(|j| j.join().unwrap().err()).collect()
    });
    if failures.is_empty() {
        Ok(format!("{} programs agree", corpus.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn sieve_correctness() -> Check {
    let cases = [(8190i64, driver::DEFAULT_HEAP_BYTES), (4095, MICRO_HEAP_BYTES)];
    let want: Vec<i64> = cases.iter().map(|&(n, _)| common::brute_force_sieve_count(n)).collect();
    let base = need_cc()?;
    let mut seen = Vec::new();
    for (&(size, heap), &count) in cases.iter().zip(&want) {
        let cfg = BuildConfig {
            heap_bytes: heap,
            ..base.clone()
        };
        let params = bench::Params {
            sieve_size: size,
            sieve_reps: 1,
            linpack_n: 0,
        };
        for variant in ["sieve-for", "sieve-while"] {
            let src = bench::vpy_source(variant, &params).map_err(|e| e.to_string())?.unwrap();
            let unit = driver::compile_source(&src, &cfg).map_err(|e| e.to_string())?;
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let exe = driver::build_executable(&unit, &cfg, &dir.path().join("s")).map_err(|e| e.to_string())?;
            let out = driver::run_executable(&exe, b"").map_err(|e| e.to_string())?;
            let text = String::from_utf8_lossy(&out.stdout).into_owned();
            let got: Option<i64> = text.split_whitespace().next().and_then(|t| t.parse().ok());
            if got != Some(count) {
                return Err(format!("{variant} size {size}: printed {text:?}, brute force {count}"));
            }
        }
        seen.push(format!("size {size} -> {count}"));
    }
    Ok(seen.join(", "))
}

fn golden_mnemonics() -> Check {
    let cfg = BuildConfig::default();
    let shapes = [
        ("listing_complex", vec!["STCR(ADDRF(1,2),4.3);"]),
        ("listing_vector", vec!["STAI(ADDRL(1),LDI(ADDRL(0)),42);"]),
        (
            "sieve_for",
            vec![
                "FOR($iter_i$,0,LDI(ADDRL(2)),1)",
                "STAI(ADDRL(4),$iter_i$,TRUE);",
                "END",
            ],
        ),
        (
            "sieve_while",
            vec![
                "WHILE((LDI(ADDRL(10))<LDI(ADDRL(2))))",
                "STAI(ADDRL(4),LDI(ADDRL(10)),TRUE);",
            ],
        ),
    ];
    for (name, lines) in shapes {
        let unit = driver::compile_source(&common::golden(&format!("{name}.vpy")), &cfg).map_err(|e| e.to_string())?;
        if unit != common::golden(&format!("{name}.c")) {
            return Err(format!("{name}: unit differs from golden file"));
        }
        let body: Vec<&str> = unit.lines().map(str::trim).collect();
        let found = body.windows(lines.len()).any(|w| w == lines.as_slice());
        if !found {
            return Err(format!("{name}: missing {lines:?}"));
        }
    }
    Ok("4 golden units, all shapes present".into())
}

fn loop_ratio() -> Check {
    let base = BuildConfig {
        opt: OptLevel::Speed,
        ..need_cc()?
    };
    let mut spec = bench::BenchSpec::new(base);
    spec.variants = vec!["sieve-for".into(), "sieve-while".into(), "sieve-native".into()];
    spec.opts = vec![OptLevel::Speed];
    // One core and noisy neighbours: more rounds than the bench default.
    spec.repetitions = 11;
    spec.params.sieve_reps = 10_000;
    let rows = bench::run_bench(&spec).map_err(|e| e.to_string())?;
    let t = |v: &str| {
        rows.iter()
            .find(|r| r.variant == v)
            .map(|r| r.seconds_median)
            .unwrap_or(f64::NAN)
    };
    let native = bench::ratio(&rows, "sieve-for", "sieve-native", OptLevel::Speed);
    let r = native
        .value
        .ok_or(format!("for/native ratio unavailable: {}", native.note))?;
    let same = bench::ratio(&rows, "sieve-while", "sieve-for", OptLevel::Speed);
    same.value
        .ok_or(format!("while/for ratio unavailable: {}", same.note))?;
    let detail = format!(
        "for {:.3}s, while {:.3}s, native {:.3}s, for/native {r:.2}",
        t("sieve-for"),
        t("sieve-while"),
        t("sieve-native")
    );
    if t("sieve-for") < t("sieve-while") && r <= 3.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn type_freezing() -> Check {
    let cfg = BuildConfig::default();
    let mut units = 0;
    for p in common::corpus() {
        let typed = driver::typed_tree(&p.source, &cfg).map_err(|e| format!("{}: {e}", p.name))?;
        let problems = typeinfer::check_frozen(&typed);
        if !problems.is_empty() {
            return Err(format!("{}: {problems:?}", p.name));
        }
        let unit = driver::compile_source(&p.source, &cfg).map_err(|e| e.to_string())?;
        let unknown = isa::unknown_mnemonics(&unit);
        if !unknown.is_empty() || isa::has_type_dispatch(&unit) {
            return Err(format!("{}: unknown {unknown:?}", p.name));
        }
        units += 1;
    }
    Ok(format!("{units} units scanned"))
}

fn oracle_lowering() -> Check {
    let cfg = BuildConfig::default();
    let corpus = common::corpus();
    for p in &corpus {
        let input = String::from_utf8_lossy(&p.stdin);
        let typed = driver::typed_tree(&p.source, &cfg).map_err(|e| e.to_string())?;
        let lowered = driver::advance(typed.clone(), 3, cfg.numeric()).map_err(|e| e.to_string())?;
        let (a, b) = (oracle::interpret(&typed, &input), oracle::interpret(&lowered, &input));
        if a.stdout != b.stdout || a.exit != b.exit {
            return Err(format!("{} differs after lowering", p.name));
        }
    }
    Ok(format!("{} programs", corpus.len()))
}

fn stage(args: &[&str], input: &[u8]) -> Result<Vec<u8>, String> {
    let mut child = Command::new(common::vpyc_bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    let mut pipe = child.stdin.take().unwrap();
    let data = input.to_vec();
    let writer = std::thread::spawn(move || std::io::Write::write_all(&mut pipe, &data));
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    let _ = writer.join();
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn pipe_equivalence() -> Check {
    let cfg = BuildConfig::default();
    let corpus = common::corpus();
    for p in &corpus {
        let p1 = stage(&["ast", "-", "--phase", "1"], p.source.as_bytes())?;
        let p2 = stage(&["ast", "-", "--phase", "2"], &p1)?;
        let p3 = stage(&["ast", "-", "--phase", "3"], &p2)?;
        let unit = stage(&["compile", "-", "--emit", "c"], &p3)?;
        let direct = driver::compile_source(&p.source, &cfg).map_err(|e| e.to_string())?;
        if unit != direct.as_bytes() {
            return Err(format!("{}: piped unit differs", p.name));
        }
    }
    Ok(format!("{} programs through 4 processes", corpus.len()))
}

fn dot_validity() -> Check {
    let cfg = BuildConfig {
        backend: Backend::Dot,
        ..BuildConfig::default()
    };
    let corpus = common::corpus();
    for p in &corpus {
        let dot = driver::compile_source(&p.source, &cfg).map_err(|e| e.to_string())?;
        let (nodes, edges) = common::parse_dot(&dot).map_err(|e| format!("{}: {e}", p.name))?;
        let tree = driver::advance(driver::load(&p.source).map_err(|e| e.to_string())?, 3, cfg.numeric())
            .map_err(|e| e.to_string())?;
        let size = common::tree_size(&tree);
        if nodes.len() != size || edges.len() + 1 != size {
            return Err(format!(
                "{}: {} nodes, {} edges, tree size {size}",
                p.name,
                nodes.len(),
                edges.len()
            ));
        }
    }
    Ok(format!("{} graphs", corpus.len()))
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; listing mode must not run anything.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 8] = [
        ("differential corpus", differential_corpus),
        ("sieve correctness", sieve_correctness),
        ("golden mnemonics", golden_mnemonics),
        ("loop optimization ratio", loop_ratio),
        ("type freezing", type_freezing),
        ("oracle/optimizer equivalence", oracle_lowering),
        ("pipe equivalence", pipe_equivalence),
        ("dot validity", dot_validity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({detail}; {secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
