//! Pipeline orchestration: phases in process or as `.oast` pipes, the
//! platform toolchain, artifact runs, benchmarks and size reports.

pub mod bench;
pub mod toolchain;

use std::fmt;
use std::str::FromStr;

use crate::ast::{Atom, Kind, Node};
use crate::codegen::Backend;
use crate::config::NumericConfig;
use crate::{optimizer, parser, sexpr, typeinfer};

pub use toolchain::{build_executable, compare_outputs, run_executable, segment_sizes, RunOutput, Sizes};

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("{0}")]
    Compile(#[from] crate::Error),
    #[error("toolchain failed: {command}\n{output}")]
    Toolchain { command: String, output: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("output mismatch against the oracle:\n{0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, DriverError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptLevel {
    Size,
    Speed,
}

impl OptLevel {
    pub fn flag(self) -> &'static str {
        match self {
            OptLevel::Size => "-Os",
            OptLevel::Speed => "-O3",
        }
    }
}

impl FromStr for OptLevel {
    type Err = DriverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "size" | "size-opt" => Ok(OptLevel::Size),
            "speed" | "speed-opt" => Ok(OptLevel::Speed),
            _ => Err(DriverError::Usage(format!("unknown opt level `{s}` (size or speed)"))),
        }
    }
}

impl fmt::Display for OptLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptLevel::Size => "size",
            OptLevel::Speed => "speed",
        })
    }
}

/// Everything that shapes one build.
#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub backend: Backend,
    pub opt: OptLevel,
    pub heap_bytes: u64,
    pub int_bits: u32,
    pub real_bits: u32,
    pub bounds: bool,
    pub cc: String,
}

pub const DEFAULT_HEAP_BYTES: u64 = 8_388_608;
pub const MICRO_HEAP_BYTES: u64 = 24_576;

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            backend: Backend::Olympus,
            opt: OptLevel::Speed,
            heap_bytes: DEFAULT_HEAP_BYTES,
            int_bits: 32,
            real_bits: 64,
            bounds: true,
            cc: default_cc(),
        }
    }
}

/// `VPYC_CC` or `gcc`.
pub fn default_cc() -> String {
    std::env::var("VPYC_CC")
        .ok()
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "gcc".into())
}

impl BuildConfig {
    pub fn numeric(&self) -> NumericConfig {
        NumericConfig::new(self.int_bits, self.real_bits)
    }

    pub fn validate(&self) -> Result<()> {
        if ![32, 64].contains(&self.int_bits) || ![32, 64].contains(&self.real_bits) {
            return Err(DriverError::Usage("widths must be 32 or 64".into()));
        }
        if self.heap_bytes < 1024 || self.heap_bytes > (1 << 32) {
            return Err(DriverError::Usage("heap bytes must be within 1 KiB..4 GiB".into()));
        }
        Ok(())
    }
}

/// Phase reached by a tree, recorded on the module so a `.oast` file says
/// which phases remain.
pub fn phase_of(root: &Node) -> u8 {
    root.attr_int("phase").unwrap_or(1) as u8
}

fn mark(mut root: Node, phase: u8) -> Node {
    root.set_attr("phase", Atom::Int(i64::from(phase)));
    root
}

pub fn phase1(source: &str) -> Result<Node> {
    Ok(mark(parser::parse_source(source)?, 1))
}

/// Inference plus the frozen-type audit.
pub fn phase2(root: &Node, cfg: NumericConfig) -> Result<Node> {
    let typed = typeinfer::infer_with(root, cfg).map_err(crate::Error::from)?;
    let problems = typeinfer::check_frozen(&typed);
    if !problems.is_empty() {
        return Err(crate::Error::Frozen(problems).into());
    }
    Ok(mark(typed, 2))
}

pub fn phase3(root: &Node) -> Result<Node> {
    let lowered = optimizer::lower_for_range(&optimizer::fold_constants(root)).map_err(crate::Error::from)?;
    Ok(mark(lowered, 3))
}

pub fn phase4(root: &Node, backend: Backend) -> Result<String> {
    Ok(backend.emit(root).map_err(crate::Error::from)?)
}

/// Advance a tree from whatever phase it reached through phase `upto`.
pub fn advance(mut root: Node, upto: u8, cfg: NumericConfig) -> Result<Node> {
    if root.kind != Kind::Module {
        return Err(DriverError::Usage("input is not a module".into()));
    }
    let mut at = phase_of(&root);
    while at < upto {
        root = match at {
            1 => phase2(&root, cfg)?,
            _ => phase3(&root)?,
        };
        at += 1;
    }
    Ok(root)
}

/// Source text or `.oast` text to a tree. `.oast` is recognized by content.
pub fn load(text: &str) -> Result<Node> {
    if is_oast(text) {
        Ok(sexpr::deserialize_ast(text).map_err(crate::Error::from)?)
    } else {
        phase1(text)
    }
}

pub fn is_oast(text: &str) -> bool {
    text.trim_start().starts_with("(module")
}

/// One pipe stage: run phase `phase` (1..=3) on the input and serialize, or
/// with `phase == 4` render through the backend. `.oast` input at an earlier
/// phase is advanced first; source input runs every phase up to `phase`.
pub fn pipe_stage(input: &str, phase: u8, cfg: &BuildConfig) -> Result<String> {
    let root = load(input)?;
    if phase >= 4 {
        let root = advance(root, 3, cfg.numeric())?;
        return phase4(&root, cfg.backend);
    }
    if phase_of(&root) > phase {
        return Err(DriverError::Usage(format!(
            "input already passed phase {}, cannot stop at phase {phase}",
            phase_of(&root)
        )));
    }
    Ok(sexpr::serialize_ast(&advance(root, phase, cfg.numeric())?))
}

/// Whole pipeline in one process.
pub fn compile_source(source: &str, cfg: &BuildConfig) -> Result<String> {
    pipe_stage(source, 4, cfg)
}

/// Typed tree before lowering, the form the oracle runs by default.
pub fn typed_tree(source: &str, cfg: &BuildConfig) -> Result<Node> {
    advance(load(source)?, 2, cfg.numeric())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staged_equals_direct() {
        let src = "s = 0\nfor i in range(0, 4):\n    s = s + i\nprint(s)\n";
        let cfg = BuildConfig::default();
        let direct = compile_source(src, &cfg).unwrap();
        let mut text = src.to_string();
        for phase in 1..=4 {
            text = pipe_stage(&text, phase, &cfg).unwrap();
        }
        assert_eq!(text, direct);
    }

    #[test]
    fn phase_two_output_is_fully_typed() {
        let out = pipe_stage("x = 1\nprint(x)\n", 2, &BuildConfig::default()).unwrap();
        assert!(!out.contains('?'), "{out}");
    }

    #[test]
    fn cannot_rewind() {
        let cfg = BuildConfig::default();
        let p3 = pipe_stage("print(1)\n", 3, &cfg).unwrap();
        assert!(matches!(pipe_stage(&p3, 2, &cfg), Err(DriverError::Usage(_))));
    }

    #[test]
    fn merlin_is_reserved() {
        let cfg = BuildConfig {
            backend: Backend::Merlin,
            ..BuildConfig::default()
        };
        let err = compile_source("print(1)\n", &cfg).unwrap_err();
        assert!(err.to_string().contains("merlin"), "{err}");
    }
}
