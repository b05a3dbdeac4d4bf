//! Phase boundaries as processes, the DOT backend, and CLI behaviour.

mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use vpyc::codegen::Backend;
use vpyc::driver::{self, BuildConfig};

fn vpyc(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(common::vpyc_bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("vpyc runs");
    let mut pipe = child.stdin.take().unwrap();
    let data = stdin.to_vec();
    let writer = std::thread::spawn(move || {
        let _ = pipe.write_all(&data);
    });
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap();
    out
}

fn ok(out: Output) -> Vec<u8> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn piped_phases_equal_in_process() {
    let cfg = BuildConfig::default();
    for p in common::corpus() {
        let path = common::crate_dir().join("corpus").join(format!("{}.vpy", p.name));
        let p1 = ok(vpyc(&["ast", path.to_str().unwrap(), "--phase", "1"], b""));
        let p2 = ok(vpyc(&["ast", "-", "--phase", "2"], &p1));
        let p3 = ok(vpyc(&["ast", "-", "--phase", "3"], &p2));
        let unit = ok(vpyc(&["compile", "-", "--emit", "c"], &p3));
        let direct = driver::compile_source(&p.source, &cfg).unwrap();
        assert_eq!(String::from_utf8(unit).unwrap(), direct, "{}", p.name);
        let direct3 = driver::pipe_stage(&p.source, 3, &cfg).unwrap();
        assert_eq!(String::from_utf8(p3).unwrap(), direct3, "{}", p.name);
    }
}

#[test]
fn piped_dot_equals_in_process() {
    let cfg = BuildConfig {
        backend: Backend::Dot,
        ..BuildConfig::default()
    };
    let p = &common::corpus()[14];
    let p2 = ok(vpyc(&["ast", "-", "--phase", "2"], p.source.as_bytes()));
    let dot = ok(vpyc(&["compile", "-", "--backend", "dot"], &p2));
    assert_eq!(
        String::from_utf8(dot).unwrap(),
        driver::compile_source(&p.source, &cfg).unwrap()
    );
}

#[test]
fn dot_is_well_formed_and_mirrors_the_tree() {
    let cfg = BuildConfig {
        backend: Backend::Dot,
        ..BuildConfig::default()
    };
    for p in common::corpus() {
        let dot = driver::compile_source(&p.source, &cfg).unwrap();
        let (nodes, edges) = common::parse_dot(&dot).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        let tree = driver::advance(driver::phase1(&p.source).unwrap(), 3, cfg.numeric()).unwrap();
        let size = common::tree_size(&tree);
        assert_eq!(nodes.len(), size, "{}", p.name);
        assert_eq!(edges.len(), size - 1, "{}", p.name);
        let declared: std::collections::HashSet<&String> = nodes.iter().collect();
        assert_eq!(declared.len(), nodes.len(), "{}: duplicate node ids", p.name);
        for (a, b) in &edges {
            assert!(
                declared.contains(a) && declared.contains(b),
                "{}: dangling edge",
                p.name
            );
        }
    }
}

#[test]
fn merlin_backend_is_refused() {
    let out = vpyc(&["compile", "-", "--backend", "merlin", "--emit", "c"], b"print(1)\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("merlin"));
}

#[test]
fn phases_cannot_run_backwards() {
    let p3 = ok(vpyc(&["ast", "-", "--phase", "3"], b"print(1)\n"));
    let out = vpyc(&["ast", "-", "--phase", "1"], &p3);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compile_errors_exit_one() {
    let out = vpyc(&["compile", "-", "--emit", "c"], b"x = 1\nx = \"s\" +\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("vpyc: "));
}

#[test]
fn run_check_passes_and_propagates_output() {
    if common::toolchain().is_none() {
        return;
    }
    let out = vpyc(&["run", "-", "--check"], b"x = 6\nprint(x * 7)\n");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, b"42\n");
}

/// A compiler wrapper that silently builds with 64-bit ints makes the
/// program disagree with the 32-bit oracle, which `--check` must report.
#[cfg(unix)]
#[test]
fn run_check_reports_a_mismatch() {
    use std::os::unix::fs::PermissionsExt;
    let Some(cfg) = common::toolchain() else {
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let wrapper = dir.path().join("cc-int64");
    std::fs::write(
        &wrapper,
        format!("#!/bin/sh\nexec {} \"$@\" -UOLYMPUS_INT64 -DOLYMPUS_INT64=1\n", cfg.cc),
    )
    .unwrap();
    std::fs::set_permissions(&wrapper, std::fs::Permissions::from_mode(0o755)).unwrap();
    let out = vpyc(
        &["run", "-", "--check", "--cc", wrapper.to_str().unwrap()],
        b"x = 2147483647\nprint(x + 1)\n",
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn oracle_binary_runs_sources() {
    let out = Command::new(env!("CARGO_BIN_EXE_oracle"))
        .args(["run", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(b"print(1 + 2)\n")?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.stdout, b"3\n");
}
