//! The platform C toolchain and the bundled runtime.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use super::{BuildConfig, DriverError, Result};

pub const RUNTIME_HEADER: &str = include_str!("../../runtime/olympus.h");
pub const RUNTIME_SOURCE: &str = include_str!("../../runtime/olympus.c");

/// Fixed flags: the dialect the runtime needs, wrapping signed arithmetic,
/// and no fused multiply-add so reals match the oracle bit for bit.
pub const BASE_FLAGS: &[&str] = &["-std=gnu99", "-fwrapv", "-ffp-contract=off"];

/// Flags for one build, in command-line order (sources excluded).
pub fn compile_flags(cfg: &BuildConfig) -> Vec<String> {
    let mut flags: Vec<String> = BASE_FLAGS.iter().map(|s| s.to_string()).collect();
    flags.push(cfg.opt.flag().into());
    flags.push(format!("-DOLYMPUS_HEAP_BYTES={}", cfg.heap_bytes));
    flags.push(format!("-DOLYMPUS_BOUNDS={}", u8::from(cfg.bounds)));
    flags.push(format!("-DOLYMPUS_INT64={}", u8::from(cfg.int_bits == 64)));
    flags.push(format!("-DOLYMPUS_REAL32={}", u8::from(cfg.real_bits == 32)));
    flags
}

fn run_tool(cmd: &mut Command) -> Result<std::process::Output> {
    let text = format!("{cmd:?}");
    let out = cmd.output().map_err(|e| DriverError::Toolchain {
        command: text.clone(),
        output: e.to_string(),
    })?;
    if !out.status.success() {
        let mut output = String::from_utf8_lossy(&out.stdout).into_owned();
        output.push_str(&String::from_utf8_lossy(&out.stderr));
        return Err(DriverError::Toolchain { command: text, output });
    }
    Ok(out)
}

/// Compile an emitted unit against the runtime into `out`.
pub fn build_executable(unit: &str, cfg: &BuildConfig, out: &Path) -> Result<PathBuf> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("olympus.h"), RUNTIME_HEADER)?;
    std::fs::write(dir.path().join("olympus.c"), RUNTIME_SOURCE)?;
    let unit_path = dir.path().join("unit.c");
    std::fs::write(&unit_path, unit)?;
    let mut cmd = Command::new(&cfg.cc);
    cmd.args(compile_flags(cfg))
        .arg("-I")
        .arg(dir.path())
        .arg(&unit_path)
        .arg(dir.path().join("olympus.c"))
        .arg("-o")
        .arg(out)
        .arg("-lm");
    run_tool(&mut cmd)?;
    Ok(out.to_path_buf())
}

/// Compile a self-contained C program (the native reference benchmarks).
pub fn build_native(source: &str, cfg: &BuildConfig, defines: &[(&str, String)], out: &Path) -> Result<PathBuf> {
    let dir = tempfile::tempdir()?;
    let src = dir.path().join("native.c");
    std::fs::write(&src, source)?;
    let mut cmd = Command::new(&cfg.cc);
    cmd.args(BASE_FLAGS).arg(cfg.opt.flag());
    for (k, v) in defines {
        cmd.arg(format!("-D{k}={v}"));
    }
    cmd.arg(&src).arg("-o").arg(out).arg("-lm");
    run_tool(&mut cmd)?;
    Ok(out.to_path_buf())
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub exit: i32,
}

pub fn run_executable(path: &Path, stdin: &[u8]) -> Result<RunOutput> {
    let mut child = Command::new(path)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    let mut input = child.stdin.take().expect("piped stdin");
    let data = stdin.to_vec();
    // A writer thread keeps a program that ignores its input from blocking us.
    let writer = std::thread::spawn(move || {
        let _ = input.write_all(&data);
    });
    let out = child.wait_with_output()?;
    let _ = writer.join();
    Ok(RunOutput {
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        exit: out.status.code().unwrap_or(-1),
    })
}

/// Berkeley-format segment sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Sizes {
    pub text: u64,
    pub data: u64,
    pub zeroinit: u64,
}

/// `VPYC_SIZE` or `size`.
pub fn size_tool() -> String {
    std::env::var("VPYC_SIZE")
        .ok()
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "size".into())
}

pub fn segment_sizes(path: &Path) -> Result<Sizes> {
    let out = run_tool(Command::new(size_tool()).arg(path))?;
    parse_size_output(&String::from_utf8_lossy(&out.stdout)).ok_or_else(|| DriverError::Toolchain {
        command: size_tool(),
        output: "unrecognized output".into(),
    })
}

/// Second line of `size` output: text data bss dec hex file.
pub fn parse_size_output(text: &str) -> Option<Sizes> {
    let line = text.lines().nth(1)?;
    let mut nums = line.split_whitespace().map(str::parse::<u64>);
    Some(Sizes {
        text: nums.next()?.ok()?,
        data: nums.next()?.ok()?,
        zeroinit: nums.next()?.ok()?,
    })
}

/// Compare program output: bytes must agree except real-looking tokens,
/// which may differ by a relative `tol`. Returns a diff report on mismatch.
pub fn compare_outputs(expected: &[u8], actual: &[u8], tol: f64) -> std::result::Result<(), String> {
    if expected == actual {
        return Ok(());
    }
    let e = String::from_utf8_lossy(expected);
    let a = String::from_utf8_lossy(actual);
    let (el, al): (Vec<&str>, Vec<&str>) = (e.split('\n').collect(), a.split('\n').collect());
    for i in 0..el.len().max(al.len()) {
        let (x, y) = (
            el.get(i).copied().unwrap_or("<missing>"),
            al.get(i).copied().unwrap_or("<missing>"),
        );
        if !lines_match(x, y, tol) {
            return Err(format!("line {}:\n  expected: {x}\n  actual:   {y}", i + 1));
        }
    }
    Ok(())
}

fn lines_match(x: &str, y: &str, tol: f64) -> bool {
    if x == y {
        return true;
    }
    let split = |s: &str| -> Vec<String> { s.split([' ', ',', '[', ']', '(', ')']).map(str::to_string).collect() };
    let (xs, ys) = (split(x), split(y));
    xs.len() == ys.len()
        && xs.iter().zip(&ys).all(|(p, q)| {
            p == q
                || match (real_token(p), real_token(q)) {
                    (Some(u), Some(v)) => u == v || (u - v).abs() <= tol * u.abs().max(v.abs()),
                    _ => false,
                }
        })
}

/// Reals always print with `.`, `e`, `inf` or `nan`; ints never do.
fn real_token(t: &str) -> Option<f64> {
    let t = t.trim_end_matches('j');
    let looks_real = t.contains(['.', 'e', 'n']);
    if !looks_real {
        return None;
    }
    t.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_output() {
        let text = "   text\t   data\t    bss\t    dec\t    hex\tfilename\n   9185\t    928\t8001440\t8011553\t 7a3f21\tthreaded_sieve.elf\n";
        assert_eq!(
            parse_size_output(text),
            Some(Sizes {
                text: 9185,
                data: 928,
                zeroinit: 8_001_440
            })
        );
    }

    #[test]
    fn output_tolerance() {
        assert!(compare_outputs(b"1 0.30000000000000004\n", b"1 0.3\n", 1e-9).is_ok());
        assert!(compare_outputs(b"1 0.3\n", b"1 0.31\n", 1e-9).is_err());
        assert!(compare_outputs(b"10\n", b"11\n", 1e-9).is_err());
        assert!(compare_outputs(b"[1.0, (1+2j)]\n", b"[1.0000000000001, (1+2j)]\n", 1e-9).is_ok());
        let err = compare_outputs(b"a\nb\n", b"a\n", 1e-9).unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }
}
