//! Phase 4 backends.

pub mod dot;
pub mod isa;
pub mod olympus;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ast::Node;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    /// The tree reached the backend in a state earlier phases never produce.
    #[error("internal compiler error: {0}")]
    Internal(String),
    #[error("backend `{0}` is reserved but not implemented")]
    UnsupportedBackend(String),
    #[error("unknown backend `{0}` (expected olympus, dot, ast or merlin)")]
    UnknownBackend(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Olympus,
    Dot,
    Ast,
    Merlin,
}

impl FromStr for Backend {
    type Err = CodegenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "olympus" => Ok(Backend::Olympus),
            "dot" => Ok(Backend::Dot),
            "ast" => Ok(Backend::Ast),
            "merlin" => Ok(Backend::Merlin),
            other => Err(CodegenError::UnknownBackend(other.to_string())),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Olympus => "olympus",
            Backend::Dot => "dot",
            Backend::Ast => "ast",
            Backend::Merlin => "merlin",
        })
    }
}

impl Backend {
    pub fn extension(self) -> &'static str {
        match self {
            Backend::Olympus => "c",
            Backend::Dot => "dot",
            Backend::Ast => "oast",
            Backend::Merlin => "asm",
        }
    }

    /// Render a lowered, slotted module.
    pub fn emit(self, root: &Node) -> Result<String, CodegenError> {
        match self {
            Backend::Olympus => olympus::emit_module(root),
            Backend::Dot => Ok(dot::emit_dot(root)),
            Backend::Ast => Ok(crate::sexpr::serialize_ast(root)),
            Backend::Merlin => Err(CodegenError::UnsupportedBackend("merlin".into())),
        }
    }
}
