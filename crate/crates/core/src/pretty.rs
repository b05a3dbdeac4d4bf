//! Renders an untyped AST back to vPython source.
//!
//! Sub-expressions are fully parenthesized, so re-parsing the output yields
//! the same tree shape. Declarations inserted by inference are skipped.

use crate::ast::{Kind, Literal, Node};
use crate::format::format_real;

pub fn pretty_print(module: &Node) -> String {
    let mut out = String::new();
    for stmt in &module.children {
        stmt_into(&mut out, stmt, 0);
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn block(out: &mut String, stmts: &[Node], depth: usize) {
    if stmts.iter().all(|s| s.kind == Kind::Declaration) {
        indent(out, depth);
        out.push_str("pass\n");
        return;
    }
    for s in stmts {
        stmt_into(out, s, depth);
    }
}

fn stmt_into(out: &mut String, node: &Node, depth: usize) {
    if node.kind == Kind::Declaration {
        return;
    }
    indent(out, depth);
    match node.kind {
        Kind::Pass => out.push_str("pass\n"),
        Kind::Assign => {
            out.push_str(&expr(&node.children[0]));
            out.push_str(" = ");
            out.push_str(&expr(&node.children[1]));
            out.push('\n');
        }
        Kind::IndexAssign => {
            out.push_str(&format!(
                "{}[{}] = {}\n",
                postfix_operand(&node.children[0]),
                expr(&node.children[1]),
                expr(&node.children[2])
            ));
        }
        Kind::AttrAssign => {
            out.push_str(&format!(
                "{}.{} = {}\n",
                postfix_operand(&node.children[0]),
                node.name_str(),
                expr(&node.children[1])
            ));
        }
        Kind::If => {
            let (cond, then, els) = node.if_parts();
            out.push_str(&format!("if {}:\n", expr(cond)));
            block(out, then, depth + 1);
            if !els.is_empty() {
                indent(out, depth);
                out.push_str("else:\n");
                block(out, els, depth + 1);
            }
        }
        Kind::While => {
            out.push_str(&format!("while {}:\n", expr(&node.children[0])));
            block(out, &node.children[1..], depth + 1);
        }
        Kind::ForRange => {
            out.push_str(&format!(
                "for {} in range({}, {}, {}):\n",
                node.children[0].name_str(),
                expr(&node.children[1]),
                expr(&node.children[2]),
                expr(&node.children[3])
            ));
            block(out, &node.children[4..], depth + 1);
        }
        Kind::FunctionDef => {
            let (_, params, body) = node.def_parts();
            let ps: Vec<String> = params
                .iter()
                .map(|p| match p.attr_str("ann") {
                    Some(ann) => format!("{}: {}", p.name_str(), ann),
                    None => p.name_str().to_string(),
                })
                .collect();
            out.push_str(&format!("def {}({})", node.name_str(), ps.join(", ")));
            if let Some(ret) = node.attr_str("ret") {
                out.push_str(&format!(" -> {ret}"));
            }
            out.push_str(":\n");
            block(out, body, depth + 1);
        }
        Kind::Return => {
            out.push_str("return");
            if let Some(v) = node.children.first() {
                out.push(' ');
                out.push_str(&expr(v));
            }
            out.push('\n');
        }
        Kind::Nonlocal => {
            out.push_str(&format!("nonlocal {}\n", node.name_str()));
        }
        Kind::Print => {
            let args: Vec<String> = node.children.iter().map(expr).collect();
            out.push_str(&format!("print({})\n", args.join(", ")));
        }
        Kind::ExprStmt => {
            out.push_str(&expr(&node.children[0]));
            out.push('\n');
        }
        _ => {
            out.push_str(&expr(node));
            out.push('\n');
        }
    }
}

fn postfix_operand(node: &Node) -> String {
    match node.kind {
        Kind::Identifier | Kind::Index | Kind::Attr | Kind::Call | Kind::ListLit => expr(node),
        _ => format!("({})", expr(node)),
    }
}

pub fn quote_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn literal(lit: &Literal) -> String {
    match lit {
        Literal::Int(v) if *v < 0 => format!("({v})"),
        Literal::Int(v) => v.to_string(),
        Literal::Real(v) => format_real(*v),
        Literal::Imag(v) => format!("{}j", format_real(*v)),
        Literal::Str(s) => quote_str(s),
        Literal::Bool(true) => "True".into(),
        Literal::Bool(false) => "False".into(),
        Literal::None => "None".into(),
    }
}

pub fn expr(node: &Node) -> String {
    match node.kind {
        Kind::Identifier | Kind::Declaration => node.name_str().to_string(),
        Kind::Literal => literal(node.lit.as_ref().unwrap_or(&Literal::None)),
        Kind::BinOp | Kind::Compare | Kind::BoolOp => {
            let op = node.op.map(|o| o.symbol()).unwrap_or("?");
            format!("({} {} {})", expr(&node.children[0]), op, expr(&node.children[1]))
        }
        Kind::UnOp => {
            let op = node.op.map(|o| o.symbol()).unwrap_or("?");
            if op == "not" {
                format!("(not {})", expr(&node.children[0]))
            } else {
                format!("({}{})", op, expr(&node.children[0]))
            }
        }
        Kind::Ref => format!("(&{})", expr(&node.children[0])),
        Kind::Call => {
            let (callee, args) = match node.attr_str("builtin") {
                Some(b) => (b.to_string(), &node.children[..]),
                None => (postfix_operand(&node.children[0]), &node.children[1..]),
            };
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{}({})", callee, args.join(", "))
        }
        Kind::Index => format!("{}[{}]", postfix_operand(&node.children[0]), expr(&node.children[1])),
        Kind::Attr => format!("{}.{}", postfix_operand(&node.children[0]), node.name_str()),
        Kind::ListLit => {
            let items: Vec<String> = node.children.iter().map(expr).collect();
            format!("[{}]", items.join(", "))
        }
        Kind::LambdaExpr => {
            let n = node.param_count();
            let params: Vec<&str> = node.children[..n].iter().map(|p| p.name_str()).collect();
            format!("(lambda {}: {})", params.join(", "), expr(&node.children[n]))
        }
        _ => format!("<{}>", node.kind.keyword()),
    }
}
