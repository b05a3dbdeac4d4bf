//! Graphviz rendering of the tree for inspection.

use std::fmt::Write;

use crate::ast::{Kind, Literal, Node};
use crate::format::format_real;

/// One DOT node per tree node, numbered in pre-order, with parent to child
/// edges in child order.
pub fn emit_dot(root: &Node) -> String {
    let mut out = String::from("digraph ast {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut next = 0usize;
    visit(root, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn visit(n: &Node, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let _ = writeln!(out, "  n{id} [label=\"{}\"];", escape(&label(n)));
    for c in &n.children {
        let cid = visit(c, next, out);
        let _ = writeln!(out, "  n{id} -> n{cid};");
    }
    id
}

/// `kind name`, then the type and the slot on their own lines when present.
pub fn label(n: &Node) -> String {
    let mut head = n.kind.keyword().to_string();
    if let Some(name) = &n.name {
        head.push(' ');
        head.push_str(name);
    }
    if let Some(op) = n.op {
        head.push(' ');
        head.push_str(op.symbol());
    }
    if let (Kind::Literal, Some(lit)) = (n.kind, &n.lit) {
        head.push(' ');
        head.push_str(&match lit {
            Literal::Int(v) => v.to_string(),
            Literal::Real(v) => format_real(*v),
            Literal::Imag(v) => format!("{}j", format_real(*v)),
            Literal::Str(s) => crate::pretty::quote_str(s),
            Literal::Bool(b) => crate::format::format_bool(*b).to_string(),
            Literal::None => "None".to_string(),
        });
    }
    let mut lines = vec![head];
    if let Some(t) = &n.ty {
        lines.push(t.to_string());
    }
    if let Some(s) = n.slot {
        lines.push(s.to_string());
    }
    lines.join("\n")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_source;

    #[test]
    fn pass_module() {
        let text = emit_dot(&parse_source("pass\n").unwrap());
        assert_eq!(text.matches(" [label=").count(), 2);
        assert_eq!(text.matches(" -> ").count(), 1);
    }

    #[test]
    fn typed_ident_label() {
        let m = crate::typeinfer::infer(&parse_source("a = 3\n").unwrap()).unwrap();
        assert!(emit_dot(&m).contains(r#"label="ident a\nint\nL0.0""#));
    }

    #[test]
    fn quotes_escaped() {
        let text = emit_dot(&parse_source("print(\"a\\\"b\")\n").unwrap());
        assert!(text.contains(r#"lit \"a\\\"b\""#), "{text}");
    }
}
