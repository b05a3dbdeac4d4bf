//! vpyc: an ahead-of-time compiler for a statically inferable Python subset
//! that emits Olympus abstract-machine mnemonic C.
//!
//! Pipeline: [`lexer`] and [`parser`] (phase 1), [`typeinfer`] (phase 2),
//! [`optimizer`] (phase 3), then a backend from [`codegen`] (phase 4). Every
//! phase boundary can be crossed as `.oast` text via [`sexpr`]. The [`oracle`]
//! interprets typed trees and defines the reference semantics.

pub mod ast;
pub mod codegen;
pub mod config;
pub mod driver;
pub mod format;
pub mod lexer;
pub mod optimizer;
pub mod oracle;
pub mod parser;
pub mod pretty;
pub mod sexpr;
pub mod typeinfer;

use thiserror::Error;

/// Any failure of the compiler pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lex error: {0}")]
    Lex(#[from] lexer::LexError),
    #[error("parse error: {0}")]
    Parse(#[from] parser::ParseError),
    #[error("{0}")]
    AstFormat(#[from] sexpr::AstFormatError),
    #[error("{0}")]
    Infer(#[from] typeinfer::InferError),
    #[error("{0}")]
    Codegen(#[from] codegen::CodegenError),
    #[error("{0}")]
    Optimize(#[from] optimizer::OptError),
    #[error("type check failed:\n{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Frozen(Vec<typeinfer::Diagnostic>),
}
