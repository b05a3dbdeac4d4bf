//! Recursive-descent parser producing the untyped AST.

use thiserror::Error;

use crate::ast::{Atom, Kind, Literal, Loc, Node, Op};
use crate::lexer::{Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: u32,
        col: u32,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: unsupported construct: {what} is not part of the vPython subset")]
    Subset { line: u32, col: u32, what: String },
}

impl ParseError {
    pub fn loc(&self) -> Loc {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Subset { line, col, .. } => Loc::new(*line, *col),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

pub fn parse(tokens: &[Token]) -> PResult<Node> {
    let mut p = Parser { toks: tokens, pos: 0 };
    let mut stmts = Vec::new();
    while !p.at_kind(TokenKind::Eof) {
        if p.at_kind(TokenKind::Newline) {
            p.pos += 1;
            continue;
        }
        stmts.extend(p.statement()?);
    }
    Ok(Node::module(stmts))
}

/// Tokenize and parse in one step.
pub fn parse_source(source: &str) -> Result<Node, crate::Error> {
    let tokens = crate::lexer::tokenize(source)?;
    Ok(parse(&tokens)?)
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
}

const UNSUPPORTED_KEYWORDS: &[(&str, &str)] = &[
    ("class", "class definition"),
    ("import", "import"),
    ("from", "import"),
    ("try", "exception handling"),
    ("except", "exception handling"),
    ("finally", "exception handling"),
    ("raise", "exception handling"),
    ("with", "with statement"),
    ("yield", "generator"),
    ("global", "global declaration"),
    ("del", "del statement"),
    ("assert", "assert statement"),
    ("break", "break statement"),
    ("continue", "continue statement"),
    ("async", "async code"),
    ("await", "async code"),
    ("is", "identity comparison"),
];

const TYPE_NAMES: &[&str] = &["int", "float", "str", "bool", "complex"];

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, n: usize) -> &'t Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn loc(&self) -> Loc {
        let t = self.peek();
        Loc::new(t.line, t.col)
    }

    fn advance(&mut self) -> &'t Token {
        let t = self.peek();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at_kind(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_op(op)
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().is_kw(kw)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.to_string(),
        }
    }

    fn subset(&self, loc: Loc, what: impl Into<String>) -> ParseError {
        ParseError::Subset {
            line: loc.line,
            col: loc.col,
            what: what.into(),
        }
    }

    fn expect_op(&mut self, op: &str) -> PResult<&'t Token> {
        if self.at_op(op) {
            Ok(self.advance())
        } else {
            Err(self.error(&[&format!("`{op}`")]))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<&'t Token> {
        if self.at_kw(kw) {
            Ok(self.advance())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn expect_name(&mut self) -> PResult<&'t Token> {
        if self.at_kind(TokenKind::Name) {
            Ok(self.advance())
        } else {
            Err(self.error(&["name"]))
        }
    }

    fn expect_newline(&mut self) -> PResult<()> {
        if self.at_kind(TokenKind::Newline) {
            self.advance();
            Ok(())
        } else if self.at_kind(TokenKind::Eof) || self.at_kind(TokenKind::Dedent) {
            Ok(())
        } else {
            Err(self.error(&["newline"]))
        }
    }

    fn check_unsupported_keyword(&self) -> PResult<()> {
        let t = self.peek();
        if t.kind == TokenKind::Keyword {
            if let Some((_, what)) = UNSUPPORTED_KEYWORDS.iter().find(|(k, _)| *k == t.lexeme) {
                return Err(self.subset(self.loc(), *what));
            }
        }
        if t.is_op("@") {
            return Err(self.subset(self.loc(), "decorator"));
        }
        Ok(())
    }

    // ---- statements ----------------------------------------------------

    fn statement(&mut self) -> PResult<Vec<Node>> {
        self.check_unsupported_keyword()?;
        let t = self.peek();
        if t.kind == TokenKind::Keyword {
            match t.lexeme.as_str() {
                "if" => return Ok(vec![self.if_stmt()?]),
                "while" => return Ok(vec![self.while_stmt()?]),
                "for" => return Ok(vec![self.for_stmt()?]),
                "def" => return Ok(vec![self.def_stmt()?]),
                _ => {}
            }
        }
        let stmts = self.simple_statement()?;
        self.expect_newline()?;
        Ok(stmts)
    }

    fn block(&mut self) -> PResult<Vec<Node>> {
        self.expect_op(":")?;
        if !self.at_kind(TokenKind::Newline) {
            let stmts = self.simple_statement()?;
            self.expect_newline()?;
            return Ok(stmts);
        }
        self.advance();
        if !self.at_kind(TokenKind::Indent) {
            return Err(self.error(&["indented block"]));
        }
        self.advance();
        let mut body = Vec::new();
        while !self.at_kind(TokenKind::Dedent) && !self.at_kind(TokenKind::Eof) {
            if self.at_kind(TokenKind::Newline) {
                self.advance();
                continue;
            }
            body.extend(self.statement()?);
        }
        if self.at_kind(TokenKind::Dedent) {
            self.advance();
        }
        Ok(body)
    }

    fn if_stmt(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance(); // `if` or `elif`
        let cond = self.expr()?;
        let then = self.block()?;
        let mut els = Vec::new();
        if self.at_kw("elif") {
            els.push(self.if_stmt()?);
        } else if self.at_kw("else") {
            self.advance();
            els = self.block()?;
        }
        let mut node = Node::new(Kind::If)
            .at(loc)
            .with_attr("then", Atom::Int(then.len() as i64))
            .child(cond);
        node.children.extend(then);
        node.children.extend(els);
        Ok(node)
    }

    fn while_stmt(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance();
        let cond = self.expr()?;
        let body = self.block()?;
        if self.at_kw("else") {
            return Err(self.subset(self.loc(), "loop else clause"));
        }
        let mut node = Node::new(Kind::While).at(loc).child(cond);
        node.children.extend(body);
        Ok(node)
    }

    fn for_stmt(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance();
        let name_tok = self.expect_name()?;
        let var = Node::ident(&name_tok.lexeme).at(Loc::new(name_tok.line, name_tok.col));
        if self.at_op(",") {
            return Err(self.subset(self.loc(), "tuple unpacking in for"));
        }
        self.expect_kw("in")?;
        let range_loc = self.loc();
        let is_range =
            self.peek().kind == TokenKind::Name && self.peek().lexeme == "range" && self.peek_at(1).is_op("(");
        if !is_range {
            return Err(self.subset(
                range_loc,
                "iteration over anything but range() (use `for NAME in range(...)`)",
            ));
        }
        self.advance();
        self.expect_op("(")?;
        let mut args = Vec::new();
        if !self.at_op(")") {
            loop {
                args.push(self.expr()?);
                if self.at_op(",") {
                    self.advance();
                    if self.at_op(")") {
                        break;
                    }
                } else {
                    break;
                }
            }
        }
        self.expect_op(")")?;
        let int_lit = |v| Node::literal(Literal::Int(v)).at(range_loc);
        let (start, end, step) = match args.len() {
            1 => (int_lit(0), args.pop().unwrap(), int_lit(1)),
            2 => {
                let end = args.pop().unwrap();
                (args.pop().unwrap(), end, int_lit(1))
            }
            3 => {
                let step = args.pop().unwrap();
                let end = args.pop().unwrap();
                (args.pop().unwrap(), end, step)
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: range_loc.line,
                    col: range_loc.col,
                    expected: vec!["1 to 3 range() arguments".into()],
                    found: format!("{} arguments", args.len()),
                })
            }
        };
        let body = self.block()?;
        if self.at_kw("else") {
            return Err(self.subset(self.loc(), "loop else clause"));
        }
        let mut node = Node::new(Kind::ForRange)
            .at(loc)
            .with_children(vec![var, start, end, step]);
        node.children.extend(body);
        Ok(node)
    }

    fn type_annotation(&mut self) -> PResult<String> {
        let t = self.peek();
        if t.kind == TokenKind::Name && t.lexeme == "list" {
            self.advance();
            self.expect_op("[")?;
            let inner = self.type_annotation()?;
            self.expect_op("]")?;
            return Ok(format!("list[{inner}]"));
        }
        if t.kind == TokenKind::Name && TYPE_NAMES.contains(&t.lexeme.as_str()) {
            self.advance();
            return Ok(t.lexeme.clone());
        }
        Err(self.error(&["type name (int, float, str, bool, complex, list[...])"]))
    }

    fn def_stmt(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance();
        let name = self.expect_name()?.lexeme.clone();
        self.expect_op("(")?;
        let mut params = Vec::new();
        while !self.at_op(")") {
            if self.at_op("*") || self.at_op("**") {
                return Err(self.subset(self.loc(), "variadic parameters"));
            }
            let tok = self.expect_name()?;
            let mut p = Node::ident(&tok.lexeme).at(Loc::new(tok.line, tok.col));
            if self.at_op(":") {
                self.advance();
                let ann = self.type_annotation()?;
                p.set_attr("ann", Atom::Str(ann));
            }
            if self.at_op("=") {
                return Err(self.subset(self.loc(), "default parameter values"));
            }
            params.push(p);
            if self.at_op(",") {
                self.advance();
            } else {
                break;
            }
        }
        self.expect_op(")")?;
        let mut node = Node::new(Kind::FunctionDef)
            .at(loc)
            .named(name)
            .with_attr("params", Atom::Int(params.len() as i64));
        if self.at_op("->") {
            self.advance();
            let ann = self.type_annotation()?;
            node.set_attr("ret", Atom::Str(ann));
        }
        let body = self.block()?;
        node.children = params;
        node.children.extend(body);
        Ok(node)
    }

    fn simple_statement(&mut self) -> PResult<Vec<Node>> {
        self.check_unsupported_keyword()?;
        let loc = self.loc();
        let t = self.peek();
        if t.kind == TokenKind::Keyword {
            match t.lexeme.as_str() {
                "pass" => {
                    self.advance();
                    return Ok(vec![Node::new(Kind::Pass).at(loc)]);
                }
                "return" => {
                    self.advance();
                    let mut node = Node::new(Kind::Return).at(loc);
                    if !self.at_kind(TokenKind::Newline)
                        && !self.at_kind(TokenKind::Eof)
                        && !self.at_kind(TokenKind::Dedent)
                    {
                        node.children.push(self.expr()?);
                    }
                    return Ok(vec![node]);
                }
                "nonlocal" => {
                    self.advance();
                    let mut out = Vec::new();
                    loop {
                        let tok = self.expect_name()?;
                        out.push(
                            Node::new(Kind::Nonlocal)
                                .at(Loc::new(tok.line, tok.col))
                                .named(&tok.lexeme),
                        );
                        if self.at_op(",") {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                    return Ok(out);
                }
                _ => {}
            }
        }
        if t.kind == TokenKind::Name && t.lexeme == "print" {
            return Ok(vec![self.print_stmt()?]);
        }
        let target = self.expr()?;
        if self.at_op(",") {
            return Err(self.subset(self.loc(), "tuples"));
        }
        if self.at_op("=") {
            let eq_loc = self.loc();
            self.advance();
            let value = self.expr()?;
            if self.at_op("=") {
                return Err(self.subset(self.loc(), "chained assignment"));
            }
            return Ok(vec![self.make_assign(loc, eq_loc, target, value)?]);
        }
        if self.at_op("+=") || self.at_op("-=") {
            let op = if self.at_op("+=") { Op::Add } else { Op::Sub };
            let eq_loc = self.loc();
            self.advance();
            let rhs = self.expr()?;
            let read = target.clone();
            let value = Node::new(Kind::BinOp)
                .with_loc(target.loc)
                .with_op(op)
                .with_children(vec![read, rhs]);
            return Ok(vec![self.make_assign(loc, eq_loc, target, value)?]);
        }
        Ok(vec![Node::new(Kind::ExprStmt).at(loc).child(target)])
    }

    fn make_assign(&self, loc: Loc, eq_loc: Loc, target: Node, value: Node) -> PResult<Node> {
        match target.kind {
            Kind::Identifier => Ok(Node::new(Kind::Assign).at(loc).with_children(vec![target, value])),
            Kind::Index => {
                let mut parts = target.children;
                let index = parts.pop().unwrap();
                let container = parts.pop().unwrap();
                Ok(Node::new(Kind::IndexAssign)
                    .at(loc)
                    .with_children(vec![container, index, value]))
            }
            Kind::Attr => {
                let name = target.name.clone().unwrap_or_default();
                let container = target.children.into_iter().next().unwrap();
                Ok(Node::new(Kind::AttrAssign)
                    .at(loc)
                    .named(name)
                    .with_children(vec![container, value]))
            }
            _ => Err(ParseError::Syntax {
                line: eq_loc.line,
                col: eq_loc.col,
                expected: vec!["assignable target before `=`".into()],
                found: "`=`".into(),
            }),
        }
    }

    fn print_stmt(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance();
        let mut node = Node::new(Kind::Print).at(loc);
        if self.at_op("(") {
            self.advance();
            while !self.at_op(")") {
                node.children.push(self.expr()?);
                if self.at_op(",") {
                    self.advance();
                } else {
                    break;
                }
            }
            self.expect_op(")")?;
        } else if !self.at_kind(TokenKind::Newline) && !self.at_kind(TokenKind::Eof) {
            loop {
                node.children.push(self.expr()?);
                if self.at_op(",") {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        Ok(node)
    }

    // ---- expressions ---------------------------------------------------

    fn expr(&mut self) -> PResult<Node> {
        if self.at_kw("lambda") {
            return self.lambda();
        }
        let e = self.or_expr()?;
        if self.at_kw("if") {
            return Err(self.subset(self.loc(), "conditional expression"));
        }
        Ok(e)
    }

    fn lambda(&mut self) -> PResult<Node> {
        let loc = self.loc();
        self.advance();
        let mut params = Vec::new();
        while !self.at_op(":") {
            let tok = self.expect_name()?;
            params.push(Node::ident(&tok.lexeme).at(Loc::new(tok.line, tok.col)));
            if self.at_op(",") {
                self.advance();
            } else {
                break;
            }
        }
        self.expect_op(":")?;
        let body = self.expr()?;
        let mut node = Node::new(Kind::LambdaExpr)
            .at(loc)
            .with_attr("params", Atom::Int(params.len() as i64));
        node.children = params;
        node.children.push(body);
        Ok(node)
    }

    fn or_expr(&mut self) -> PResult<Node> {
        let mut lhs = self.and_expr()?;
        while self.at_kw("or") {
            let loc = self.loc();
            self.advance();
            let rhs = self.and_expr()?;
            lhs = Node::new(Kind::BoolOp)
                .at(loc)
                .with_op(Op::Or)
                .with_children(vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Node> {
        let mut lhs = self.not_expr()?;
        while self.at_kw("and") {
            let loc = self.loc();
            self.advance();
            let rhs = self.not_expr()?;
            lhs = Node::new(Kind::BoolOp)
                .at(loc)
                .with_op(Op::And)
                .with_children(vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> PResult<Node> {
        if self.at_kw("not") {
            let loc = self.loc();
            self.advance();
            let operand = self.not_expr()?;
            return Ok(Node::new(Kind::UnOp).at(loc).with_op(Op::Not).child(operand));
        }
        self.comparison()
    }

    fn comparison_op(&self) -> Option<Op> {
        let t = self.peek();
        if t.kind == TokenKind::Keyword && (t.lexeme == "in" || t.lexeme == "is") {
            return None;
        }
        if t.kind != TokenKind::Operator {
            return None;
        }
        Some(match t.lexeme.as_str() {
            "<" => Op::Lt,
            "<=" => Op::Le,
            ">" => Op::Gt,
            ">=" => Op::Ge,
            "==" => Op::Eq,
            "!=" => Op::Ne,
            _ => return None,
        })
    }

    fn comparison(&mut self) -> PResult<Node> {
        let lhs = self.ref_expr()?;
        if self.at_kw("in") || self.at_kw("is") {
            return Err(self.subset(self.loc(), format!("`{}` operator", self.peek().lexeme)));
        }
        let Some(op) = self.comparison_op() else {
            return Ok(lhs);
        };
        let loc = self.loc();
        self.advance();
        let rhs = self.ref_expr()?;
        if self.comparison_op().is_some() {
            return Err(self.subset(self.loc(), "chained comparison"));
        }
        Ok(Node::new(Kind::Compare)
            .at(loc)
            .with_op(op)
            .with_children(vec![lhs, rhs]))
    }

    fn ref_expr(&mut self) -> PResult<Node> {
        if self.at_op("&") {
            let loc = self.loc();
            self.advance();
            let operand = self.ref_expr()?;
            return Ok(Node::new(Kind::Ref).at(loc).child(operand));
        }
        self.arith()
    }

    fn arith(&mut self) -> PResult<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.at_op("+") {
                Op::Add
            } else if self.at_op("-") {
                Op::Sub
            } else {
                break;
            };
            let loc = self.loc();
            self.advance();
            let rhs = self.term()?;
            lhs = Node::new(Kind::BinOp).at(loc).with_op(op).with_children(vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.at_op("*") {
                Op::Mul
            } else if self.at_op("/") {
                if self.peek_at(1).is_op("/") {
                    return Err(self.subset(self.loc(), "floor division"));
                }
                Op::Div
            } else if self.at_op("%") {
                Op::Mod
            } else {
                break;
            };
            let loc = self.loc();
            self.advance();
            let rhs = self.unary()?;
            lhs = Node::new(Kind::BinOp).at(loc).with_op(op).with_children(vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Node> {
        if self.at_op("-") {
            let loc = self.loc();
            self.advance();
            let operand = self.unary()?;
            return Ok(Node::new(Kind::UnOp).at(loc).with_op(Op::Neg).child(operand));
        }
        if self.at_op("+") {
            self.advance();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Node> {
        let base = self.postfix()?;
        if self.at_op("**") {
            let loc = self.loc();
            self.advance();
            let exp = self.unary()?;
            return Ok(Node::new(Kind::BinOp)
                .at(loc)
                .with_op(Op::Pow)
                .with_children(vec![base, exp]));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> PResult<Node> {
        let mut e = self.atom()?;
        loop {
            if self.at_op("(") {
                let loc = e.loc.unwrap_or_else(|| self.loc());
                self.advance();
                let mut call = Node::new(Kind::Call).at(loc).child(e);
                while !self.at_op(")") {
                    if self.peek().kind == TokenKind::Name && self.peek_at(1).is_op("=") {
                        return Err(self.subset(self.loc(), "keyword arguments"));
                    }
                    call.children.push(self.expr()?);
                    if self.at_op(",") {
                        self.advance();
                    } else {
                        break;
                    }
                }
                self.expect_op(")")?;
                e = call;
            } else if self.at_op("[") {
                let loc = self.loc();
                self.advance();
                let index = self.expr()?;
                if self.at_op(":") {
                    return Err(self.subset(self.loc(), "slicing"));
                }
                self.expect_op("]")?;
                e = Node::new(Kind::Index).at(loc).with_children(vec![e, index]);
            } else if self.at_op(".") {
                let loc = self.loc();
                self.advance();
                let tok = self.expect_name()?;
                if tok.lexeme != "real" && tok.lexeme != "imag" {
                    return Err(self.subset(
                        Loc::new(tok.line, tok.col),
                        format!("attribute `.{}` (only .real and .imag exist)", tok.lexeme),
                    ));
                }
                e = Node::new(Kind::Attr).at(loc).named(&tok.lexeme).child(e);
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Node> {
        self.check_unsupported_keyword()?;
        let loc = self.loc();
        let t = self.peek();
        match t.kind {
            TokenKind::Name => {
                self.advance();
                Ok(Node::ident(&t.lexeme).at(loc))
            }
            TokenKind::IntLit => {
                self.advance();
                let v = parse_int(&t.lexeme).ok_or_else(|| ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    expected: vec!["integer literal within 64 bits".into()],
                    found: t.lexeme.clone(),
                })?;
                Ok(Node::literal(Literal::Int(v)).at(loc))
            }
            TokenKind::RealLit => {
                self.advance();
                let v: f64 = t.lexeme.parse().unwrap_or(f64::NAN);
                Ok(Node::literal(Literal::Real(v)).at(loc))
            }
            TokenKind::ImagLit => {
                self.advance();
                let v: f64 = t.lexeme.parse().unwrap_or(f64::NAN);
                Ok(Node::literal(Literal::Imag(v)).at(loc))
            }
            TokenKind::StrLit => {
                self.advance();
                let mut s = t.lexeme.clone();
                // Adjacent string literals concatenate.
                while self.at_kind(TokenKind::StrLit) {
                    s.push_str(&self.advance().lexeme);
                }
                Ok(Node::literal(Literal::Str(s)).at(loc))
            }
            TokenKind::Keyword => match t.lexeme.as_str() {
                "True" | "False" => {
                    self.advance();
                    Ok(Node::literal(Literal::Bool(t.lexeme == "True")).at(loc))
                }
                "None" => {
                    self.advance();
                    Ok(Node::literal(Literal::None).at(loc))
                }
                "lambda" => self.lambda(),
                _ => Err(self.error(&["expression"])),
            },
            TokenKind::Operator => match t.lexeme.as_str() {
                "(" => {
                    self.advance();
                    if self.at_op(")") {
                        return Err(self.subset(loc, "tuples"));
                    }
                    let e = self.expr()?;
                    if self.at_op(",") {
                        return Err(self.subset(loc, "tuples"));
                    }
                    self.expect_op(")")?;
                    Ok(e)
                }
                "[" => {
                    self.advance();
                    let mut list = Node::new(Kind::ListLit).at(loc);
                    while !self.at_op("]") {
                        list.children.push(self.expr()?);
                        if self.at_kw("for") {
                            return Err(self.subset(self.loc(), "list comprehension"));
                        }
                        if self.at_op(",") {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                    self.expect_op("]")?;
                    Ok(list)
                }
                "{" => Err(self.subset(loc, "dict/set literal")),
                _ => Err(self.error(&["expression"])),
            },
            _ => Err(self.error(&["expression"])),
        }
    }
}

fn parse_int(text: &str) -> Option<i64> {
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        return i64::from_str_radix(hex, 16).ok();
    }
    text.parse::<i64>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;

    fn p(src: &str) -> Node {
        parse(&tokenize(src).unwrap()).unwrap()
    }

    fn perr(src: &str) -> ParseError {
        parse(&tokenize(src).unwrap()).unwrap_err()
    }

    #[test]
    fn single_pass() {
        let m = p("pass\n");
        assert_eq!(m.kind, Kind::Module);
        assert_eq!(m.children.len(), 1);
        assert_eq!(m.children[0].kind, Kind::Pass);
        assert_eq!(m.children[0].loc, Some(Loc::new(1, 1)));
    }

    #[test]
    fn unpythonic_list_access() {
        let m = p("arr = [\"a\",\"b\",\"c\"]\nfor i in range(0,len(arr)):\n  arr[i] = \"x\"\n");
        assert_eq!(m.children.len(), 2);
        let assign = &m.children[0];
        assert_eq!(assign.kind, Kind::Assign);
        assert_eq!(assign.children[0].name_str(), "arr");
        assert_eq!(assign.children[1].kind, Kind::ListLit);
        assert_eq!(assign.children[1].children.len(), 3);

        let f = &m.children[1];
        assert_eq!(f.kind, Kind::ForRange);
        assert_eq!(f.children[0].name_str(), "i");
        assert_eq!(f.children[1].lit, Some(Literal::Int(0)));
        let end = &f.children[2];
        assert_eq!(end.kind, Kind::Call);
        assert_eq!(end.children[0].name_str(), "len");
        assert_eq!(end.children[1].name_str(), "arr");
        assert_eq!(f.children[3].lit, Some(Literal::Int(1)));
        let body = &f.children[4];
        assert_eq!(body.kind, Kind::IndexAssign);
        assert_eq!(body.children[0].name_str(), "arr");
        assert_eq!(body.children[1].name_str(), "i");
        assert_eq!(body.children[2].lit, Some(Literal::Str("x".into())));
    }

    #[test]
    fn unbalanced_paren_errors_at_eof() {
        match perr("x = (") {
            ParseError::Syntax { found, .. } => assert_eq!(found, "end of input"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn class_is_subset_error() {
        assert!(matches!(perr("class A:\n  pass\n"), ParseError::Subset { .. }));
        assert!(matches!(
            perr("@offload\ndef f():\n  pass\n"),
            ParseError::Subset { .. }
        ));
        assert!(matches!(perr("for x in arr:\n  pass\n"), ParseError::Subset { .. }));
        assert!(matches!(perr("x = {}\n"), ParseError::Subset { .. }));
        assert!(matches!(perr("a < b < c\n"), ParseError::Subset { .. }));
        assert!(matches!(perr("import os\n"), ParseError::Subset { .. }));
    }

    #[test]
    fn print_forms_normalize() {
        let a = p("print \"Hello World\"\n");
        let b = p("print(\"Hello World\")\n");
        assert!(a.children[0].same_shape(&b.children[0]));
        assert_eq!(a.children[0].kind, Kind::Print);
    }

    #[test]
    fn augmented_assignment_desugars() {
        let m = p("x += 2\n");
        let a = &m.children[0];
        assert_eq!(a.kind, Kind::Assign);
        assert_eq!(a.children[1].op, Some(Op::Add));
        assert_eq!(a.children[1].children[0].name_str(), "x");
    }

    #[test]
    fn ref_binds_looser_than_index() {
        let m = p("y = &a[1] == 0\n");
        let cmp = &m.children[0].children[1];
        assert_eq!(cmp.kind, Kind::Compare);
        assert_eq!(cmp.children[0].kind, Kind::Ref);
        assert_eq!(cmp.children[0].children[0].kind, Kind::Index);
    }

    #[test]
    fn power_is_right_associative_and_above_unary() {
        let m = p("x = -2 ** 3 ** 2\n");
        let e = &m.children[0].children[1];
        assert_eq!(e.op, Some(Op::Neg));
        let pow = &e.children[0];
        assert_eq!(pow.op, Some(Op::Pow));
        assert_eq!(pow.children[1].op, Some(Op::Pow));
    }

    #[test]
    fn elif_chain_nests() {
        let m = p("if a:\n  x = 1\nelif b:\n  x = 2\nelse:\n  x = 3\n");
        let (_, then, els) = m.children[0].if_parts();
        assert_eq!(then.len(), 1);
        assert_eq!(els.len(), 1);
        assert_eq!(els[0].kind, Kind::If);
        let (_, t2, e2) = els[0].if_parts();
        assert_eq!((t2.len(), e2.len()), (1, 1));
    }

    #[test]
    fn def_with_annotations() {
        let m = p("def f(n: int, v: list[float]) -> int:\n  return n\n");
        let d = &m.children[0];
        assert_eq!(d.kind, Kind::FunctionDef);
        assert_eq!(d.param_count(), 2);
        assert_eq!(d.children[1].attr_str("ann"), Some("list[float]"));
        assert_eq!(d.attr_str("ret"), Some("int"));
    }

    #[test]
    fn nonlocal_list() {
        let m = p("def f():\n  nonlocal a, b\n  a = 1\n");
        let d = &m.children[0];
        assert_eq!(d.children[0].kind, Kind::Nonlocal);
        assert_eq!(d.children[1].kind, Kind::Nonlocal);
    }
}
