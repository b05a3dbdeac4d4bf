//! Shared helpers for the integration suites.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use vpyc::ast::Node;
use vpyc::driver::BuildConfig;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Program {
    pub name: String,
    pub source: String,
    pub stdin: Vec<u8>,
}

/// Corpus programs in name order, each with its `.in` file when present.
pub fn corpus() -> Vec<Program> {
    let dir = crate_dir().join("corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "vpy"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| Program {
            name: p.file_stem().unwrap().to_string_lossy().into_owned(),
            source: std::fs::read_to_string(&p).expect("readable source"),
            stdin: std::fs::read(p.with_extension("in")).unwrap_or_default(),
        })
        .collect()
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(crate_dir().join("tests/golden").join(name))
        .unwrap_or_else(|e| panic!("golden file {name}: {e}"))
}

pub fn tree_size(n: &Node) -> usize {
    1 + n.children.iter().map(tree_size).sum::<usize>()
}

/// A working C compiler, or `None` so toolchain-bound checks can say why
/// they were skipped.
pub fn toolchain() -> Option<BuildConfig> {
    let cfg = BuildConfig::default();
    let ok = std::process::Command::new(&cfg.cc)
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success());
    ok.then_some(cfg)
}

/// Odd primes in 3..=2*size+2 by trial division: the count the byte sieve
/// reports for a flags array of `size` entries.
pub fn brute_force_sieve_count(size: i64) -> i64 {
    let limit = 2 * size + 2;
    let is_prime = |n: i64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
    (3..=limit).step_by(2).filter(|&n| is_prime(n)).count() as i64
}

pub fn vpyc_bin() -> &'static Path {
    Path::new(env!("CARGO_BIN_EXE_vpyc"))
}

/// Node ids and edges of a parsed graph.
pub type DotGraph = (Vec<String>, Vec<(String, String)>);

/// Minimal DOT grammar check for the shape the backend promises:
/// `digraph ID { stmt* }` where a statement is a node statement
/// `ID [attr=value, ...];`, an edge `ID -> ID [attrs]?;`, or a default
/// `node|edge|graph [attrs];`. Returns (node ids, edges) on success.
pub fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let toks = dot_tokens(text)?;
    let mut p = 0usize;
    let mut next = |what: &str| -> Result<String, String> {
        let t = toks
            .get(p)
            .cloned()
            .ok_or_else(|| format!("expected {what}, found end"))?;
        p += 1;
        Ok(t)
    };
    if next("digraph")? != "digraph" {
        return Err("missing `digraph`".into());
    }
    let mut head = next("graph id or `{`")?;
    if head != "{" {
        if !is_id(&head) {
            return Err(format!("bad graph id {head}"));
        }
        head = next("`{`")?;
    }
    if head != "{" {
        return Err("missing `{`".into());
    }
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    loop {
        let first = next("statement or `}`")?;
        if first == "}" {
            break;
        }
        if !is_id(&first) {
            return Err(format!("statement cannot start with {first}"));
        }
        let mut t = next("`;`, `[` or `->`")?;
        let mut target = None;
        if t == "->" {
            let to = next("edge target")?;
            if !is_id(&to) {
                return Err(format!("bad edge target {to}"));
            }
            target = Some(to);
            t = next("`;` or `[`")?;
        }
        if t == "[" {
            loop {
                let key = next("attribute")?;
                if key == "]" {
                    break;
                }
                if !is_id(&key) || next("`=`")? != "=" {
                    return Err(format!("bad attribute near {key}"));
                }
                let val = next("attribute value")?;
                if !is_id(&val) {
                    return Err(format!("bad attribute value {val}"));
                }
                let sep = next("`,` or `]`")?;
                if sep == "]" {
                    break;
                }
                if sep != "," && sep != ";" {
                    return Err(format!("unexpected {sep} in attribute list"));
                }
            }
            t = next("`;`")?;
        }
        if t != ";" {
            return Err(format!("expected `;`, found {t}"));
        }
        match target {
            Some(to) => edges.push((first, to)),
            None if matches!(first.as_str(), "node" | "edge" | "graph") => {}
            None => nodes.push(first),
        }
    }
    if p != toks.len() {
        return Err("text after closing brace".into());
    }
    Ok((nodes, edges))
}

fn is_id(t: &str) -> bool {
    t.starts_with('"')
        || t.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn dot_tokens(text: &str) -> Result<Vec<String>, String> {
    let b: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let start = i;
            i += 1;
            while i < b.len() && b[i] != '"' {
                if b[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            if i >= b.len() {
                return Err("unterminated string".into());
            }
            i += 1;
            out.push(b[start..i].iter().collect());
        } else if c == '-' && b.get(i + 1) == Some(&'>') {
            out.push("->".into());
            i += 2;
        } else if "{}[]=;,".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_' || b[i] == '.') {
                i += 1;
            }
            out.push(b[start..i].iter().collect());
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[test]
fn brute_force_counts_match_known_values() {
    // odd primes up to 16381
    assert_eq!(brute_force_sieve_count(8190), 1899);
    assert_eq!(brute_force_sieve_count(10), 7);
}

#[test]
fn dot_checker_rejects_broken_graphs() {
    assert!(parse_dot("digraph g { a [label=\"x\"]; a -> b; }").is_ok());
    assert!(parse_dot("digraph g { a [label=\"x\"] }").is_err());
    assert!(parse_dot("digraph g { a -> ; }").is_err());
    assert!(parse_dot("graph g { }").is_err());
    assert!(parse_dot("digraph g { a [label=\"x]; }").is_err());
}
