//! Textual AST format (`.oast`): one s-expression per tree.
//!
//! ```text
//! form  := '(' KIND positional* (':' ATTR VALUE)* form* ')'
//! VALUE := integer | decimal | "string" | L<level>.<offset> | ? | word
//! ```
//!
//! Positional values carry the name of declarations, identifiers, defs and
//! nonlocals, and the tag plus value of literals. `#` starts a line comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ast::{Atom, FrozenType, Kind, Literal, Loc, Node, Op, SlotRef};
use crate::format::format_real;
use crate::pretty::quote_str;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: malformed AST text: {message}")]
pub struct AstFormatError {
    pub line: u32,
    pub message: String,
}

pub fn serialize_ast(root: &Node) -> String {
    let mut out = String::new();
    write_node(&mut out, root);
    out.push('\n');
    out
}

fn write_node(out: &mut String, node: &Node) {
    out.push('(');
    out.push_str(node.kind.keyword());
    if node.kind.has_positional_name() {
        out.push(' ');
        out.push_str(&quote_str(node.name_str()));
    }
    if node.kind == Kind::Literal {
        match node.lit.as_ref().unwrap_or(&Literal::None) {
            Literal::Int(v) => write!(out, " int {v}").unwrap(),
            Literal::Real(v) => write!(out, " real {}", format_real(*v)).unwrap(),
            Literal::Imag(v) => write!(out, " imag {}", format_real(*v)).unwrap(),
            Literal::Str(s) => write!(out, " string {}", quote_str(s)).unwrap(),
            Literal::Bool(b) => write!(out, " bool {b}").unwrap(),
            Literal::None => out.push_str(" none"),
        }
    }
    if let Some(loc) = node.loc {
        write!(out, " :loc {loc}").unwrap();
    }
    if !node.kind.has_positional_name() {
        if let Some(name) = &node.name {
            write!(out, " :name {}", quote_str(name)).unwrap();
        }
    }
    if let Some(op) = node.op {
        write!(out, " :op {}", op.keyword()).unwrap();
    }
    for (key, value) in &node.attrs {
        match value {
            Atom::Int(v) => write!(out, " :{key} {v}").unwrap(),
            Atom::Str(s) => write!(out, " :{key} {}", quote_str(s)).unwrap(),
        }
    }
    let always = matches!(node.kind, Kind::Identifier | Kind::Declaration);
    match (&node.ty, node.kind) {
        (Some(ty), Kind::Literal) if literal_implies(node, ty) => {}
        (Some(ty), _) => write!(out, " :type {ty}").unwrap(),
        (None, _) if always => out.push_str(" :type ?"),
        _ => {}
    }
    match node.slot {
        Some(slot) => write!(out, " :slot {slot}").unwrap(),
        None if always && !node.is_native() => out.push_str(" :slot ?"),
        None => {}
    }
    for child in &node.children {
        out.push(' ');
        write_node(out, child);
    }
    out.push(')');
}

fn literal_implies(node: &Node, ty: &FrozenType) -> bool {
    *ty == implied_type(node)
}

fn implied_type(node: &Node) -> FrozenType {
    match node.lit {
        Some(Literal::Int(_)) => FrozenType::Int,
        Some(Literal::Real(_)) => FrozenType::Real,
        Some(Literal::Str(_)) => FrozenType::Str,
        Some(Literal::Bool(_)) => FrozenType::Bool,
        Some(Literal::Imag(_)) => FrozenType::Complex,
        Some(Literal::None) | None => FrozenType::None,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, u32)>, AstFormatError> {
    let mut toks = Vec::new();
    let mut line = 1u32;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                toks.push((Tok::Open, line));
                chars.next();
            }
            ')' => {
                toks.push((Tok::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => {
                            return Err(AstFormatError {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            Some('0') => s.push('\0'),
                            Some('\\') => s.push('\\'),
                            Some('"') => s.push('"'),
                            other => {
                                return Err(AstFormatError {
                                    line,
                                    message: format!("bad escape {other:?}"),
                                })
                            }
                        },
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(c) => s.push(c),
                    }
                }
                toks.push((Tok::Str(s), start));
            }
            _ => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    w.push(c);
                    chars.next();
                }
                toks.push((Tok::Word(w), line));
            }
        }
    }
    Ok(toks)
}

pub fn deserialize_ast(text: &str) -> Result<Node, AstFormatError> {
    let toks = lex(text)?;
    let mut pos = 0;
    let mut node = read_form(&toks, &mut pos)?;
    if let Some((_, line)) = toks.get(pos) {
        return Err(AstFormatError {
            line: *line,
            message: "trailing content after the top-level form".into(),
        });
    }
    // Typed modules elide literal types the tag already implies.
    if node.kind == Kind::Module && node.attr("int").is_some() {
        restore_literal_types(&mut node);
    }
    Ok(node)
}

fn restore_literal_types(node: &mut Node) {
    if node.kind == Kind::Literal && node.ty.is_none() {
        node.ty = Some(implied_type(node));
    }
    node.children.iter_mut().for_each(restore_literal_types);
}

fn read_form(toks: &[(Tok, u32)], pos: &mut usize) -> Result<Node, AstFormatError> {
    let last_line = toks.last().map(|t| t.1).unwrap_or(1);
    let err = |line: u32, message: String| AstFormatError { line, message };
    let next = |pos: &mut usize| -> Option<(Tok, u32)> {
        let t = toks.get(*pos).cloned();
        *pos += 1;
        t
    };
    match next(pos) {
        Some((Tok::Open, _)) => {}
        Some((t, line)) => return Err(err(line, format!("expected `(`, found {t:?}"))),
        None => return Err(err(last_line, "empty input".into())),
    }
    let (kind_word, line) = match next(pos) {
        Some((Tok::Word(w), line)) => (w, line),
        Some((t, line)) => return Err(err(line, format!("expected node kind, found {t:?}"))),
        None => return Err(err(last_line, "unexpected end of input".into())),
    };
    let kind = Kind::from_keyword(&kind_word).ok_or_else(|| err(line, format!("unknown node kind `{kind_word}`")))?;
    let mut node = Node::new(kind);

    if kind.has_positional_name() {
        match next(pos) {
            Some((Tok::Str(s), _)) => node.name = Some(s),
            Some((_, l)) => return Err(err(l, format!("`{kind_word}` needs a quoted name"))),
            None => return Err(err(last_line, "unexpected end of input".into())),
        }
    }
    if kind == Kind::Literal {
        let tag = match next(pos) {
            Some((Tok::Word(w), _)) => w,
            Some((_, l)) => return Err(err(l, "literal needs a tag".into())),
            None => return Err(err(last_line, "unexpected end of input".into())),
        };
        let lit = if tag == "none" {
            Literal::None
        } else {
            let (value, l) = match next(pos) {
                Some((Tok::Word(w), l)) => (Some(w), l),
                Some((Tok::Str(s), l)) if tag == "string" => {
                    node.lit = Some(Literal::Str(s));
                    (None, l)
                }
                Some((_, l)) => return Err(err(l, "literal needs a value".into())),
                None => return Err(err(last_line, "unexpected end of input".into())),
            };
            match (tag.as_str(), value) {
                ("string", None) => node.lit.take().unwrap(),
                ("int", Some(v)) => Literal::Int(v.parse().map_err(|_| err(l, format!("bad int literal `{v}`")))?),
                ("real", Some(v)) => Literal::Real(v.parse().map_err(|_| err(l, format!("bad real literal `{v}`")))?),
                ("imag", Some(v)) => Literal::Imag(v.parse().map_err(|_| err(l, format!("bad imag literal `{v}`")))?),
                ("bool", Some(v)) => match v.as_str() {
                    "true" => Literal::Bool(true),
                    "false" => Literal::Bool(false),
                    _ => return Err(err(l, format!("bad bool literal `{v}`"))),
                },
                _ => return Err(err(l, format!("bad literal tag `{tag}`"))),
            }
        };
        node.lit = Some(lit);
    }

    loop {
        match toks.get(*pos) {
            None => return Err(err(last_line, format!("unclosed `({kind_word}`"))),
            Some((Tok::Close, _)) => {
                *pos += 1;
                break;
            }
            Some((Tok::Open, _)) => {
                let child = read_form(toks, pos)?;
                node.children.push(child);
            }
            Some((Tok::Word(w), l)) if w.starts_with(':') => {
                if !node.children.is_empty() {
                    return Err(err(*l, format!("attribute {w} after child forms")));
                }
                let key = w[1..].to_string();
                let l = *l;
                *pos += 1;
                let value = next(pos).ok_or_else(|| err(l, format!("missing value for {w}")))?;
                apply_attr(&mut node, &key, value.0, l)?;
            }
            Some((t, l)) => return Err(err(*l, format!("unexpected {t:?} in `{kind_word}`"))),
        }
    }
    Ok(node)
}

fn apply_attr(node: &mut Node, key: &str, value: Tok, line: u32) -> Result<(), AstFormatError> {
    let err = |message: String| AstFormatError { line, message };
    match (key, value) {
        ("loc", Tok::Word(w)) => {
            let (l, c) = w.split_once(':').ok_or_else(|| err(format!("bad location `{w}`")))?;
            let l = l.parse().map_err(|_| err(format!("bad location `{w}`")))?;
            let c = c.parse().map_err(|_| err(format!("bad location `{w}`")))?;
            node.loc = Some(Loc::new(l, c));
        }
        ("type", Tok::Word(w)) => {
            if w != "?" {
                node.ty = Some(FrozenType::parse(&w).ok_or_else(|| err(format!("bad type `{w}`")))?);
            }
        }
        ("slot", Tok::Word(w)) => {
            if w != "?" {
                node.slot = Some(SlotRef::parse(&w).ok_or_else(|| err(format!("bad slot `{w}`")))?);
            }
        }
        ("op", Tok::Word(w)) => {
            node.op = Some(Op::from_keyword(&w).ok_or_else(|| err(format!("bad operator `{w}`")))?);
        }
        ("name", Tok::Str(s)) | ("name", Tok::Word(s)) => node.name = Some(s),
        (_, Tok::Str(s)) => node.attrs.push((key.to_string(), Atom::Str(s))),
        (_, Tok::Word(w)) => {
            let atom = match w.parse::<i64>() {
                Ok(v) => Atom::Int(v),
                Err(_) => Atom::Str(w),
            };
            node.attrs.push((key.to_string(), atom));
        }
        (_, other) => return Err(err(format!("bad value {other:?} for :{key}"))),
    }
    Ok(())
}
