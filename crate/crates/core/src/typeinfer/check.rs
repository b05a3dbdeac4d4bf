//! Post-inference gates: slot validation and the frozen-type check.

use std::fmt;

use crate::ast::{FrozenType, Kind, Literal, Loc, Node, Op};

use super::InferError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub loc: Option<Loc>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.loc {
            Some(l) => write!(f, "{l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Validate that every identifier and declaration carries a slot that
/// addresses an existing frame offset. Inference assigns the slots; this pass
/// is the gate a standalone phase runs on `.oast` input.
pub fn resolve_scopes(root: &Node) -> Result<Node, InferError> {
    let mut frames = vec![root.attr_int("frame").unwrap_or(0) as u32];
    walk_scopes(root, &mut frames)?;
    Ok(root.clone())
}

fn walk_scopes(node: &Node, frames: &mut Vec<u32>) -> Result<(), InferError> {
    for c in &node.children {
        let nested = matches!(c.kind, Kind::FunctionDef | Kind::LambdaExpr);
        if nested {
            // The def target lives in the enclosing frame.
            if c.def_has_target() {
                check_slot(&c.children[0], frames)?;
            }
            frames.push(c.attr_int("frame").unwrap_or(0) as u32);
            let skip = usize::from(c.def_has_target());
            for g in &c.children[skip..] {
                check_slot(g, frames)?;
                walk_scopes(g, frames)?;
            }
            frames.pop();
        } else {
            check_slot(c, frames)?;
            walk_scopes(c, frames)?;
        }
    }
    Ok(())
}

fn check_slot(n: &Node, frames: &[u32]) -> Result<(), InferError> {
    if !matches!(n.kind, Kind::Identifier | Kind::Declaration) || n.is_native() {
        return Ok(());
    }
    let loc = n.loc.unwrap_or_default();
    let unbound = |msg: String| InferError::Name {
        loc,
        name: n.name_str().to_string(),
        message: msg,
    };
    let Some(slot) = n.slot else {
        return Err(unbound(format!("unbound identifier `{}`", n.name_str())));
    };
    if n.ty.is_none() {
        return Err(unbound(format!("identifier `{}` has no type", n.name_str())));
    }
    let level = slot.level as usize;
    if level >= frames.len() {
        return Err(unbound(format!(
            "`{}` addresses scope level {level} but only {} enclosing scopes exist",
            n.name_str(),
            frames.len() - 1
        )));
    }
    let size = frames[frames.len() - 1 - level];
    if slot.offset >= size {
        return Err(unbound(format!(
            "`{}` addresses offset {} in a frame of {size} slots",
            n.name_str(),
            slot.offset
        )));
    }
    Ok(())
}

/// Re-derive every operation's type from its operands and report any
/// operation whose operand types are unknown or incompatible. An empty list
/// means the backend can emit code without runtime type dispatch.
pub fn check_frozen(root: &Node) -> Vec<Diagnostic> {
    let mut c = Checker {
        diags: Vec::new(),
        results: Vec::new(),
    };
    c.stmts(&root.children);
    c.diags
}

struct Checker {
    diags: Vec<Diagnostic>,
    /// Declared result types of the enclosing functions.
    results: Vec<Option<FrozenType>>,
}

impl Checker {
    fn diag(&mut self, n: &Node, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            loc: n.loc,
            message: message.into(),
        });
    }

    fn stmts(&mut self, list: &[Node]) {
        for s in list {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Node) {
        match s.kind {
            Kind::Pass | Kind::Nonlocal => {}
            Kind::Declaration => {
                if s.ty.is_none() || s.slot.is_none() {
                    self.diag(s, format!("declaration of `{}` is not typed", s.name_str()));
                }
            }
            Kind::Assign => {
                let dst = self.expr(&s.children[0]);
                let src = self.expr(&s.children[1]);
                if let (Some(d), Some(v)) = (dst, src) {
                    if !assignable(&d, &v) {
                        self.diag(
                            s,
                            format!("cannot store {v} into `{}` of type {d}", s.children[0].name_str()),
                        );
                    }
                }
            }
            Kind::IndexAssign => {
                let c = self.expr(&s.children[0]);
                self.index(&s.children[1]);
                let v = self.expr(&s.children[2]);
                match (c, v) {
                    (Some(FrozenType::Vector(e)), Some(v)) => {
                        if !assignable(&e, &v) {
                            self.diag(s, format!("cannot store {v} into vector[{e}]"));
                        }
                    }
                    (Some(FrozenType::Vector(_)), None) | (None, _) => {}
                    (Some(t), _) => self.diag(s, format!("cannot index-assign into {t}")),
                }
            }
            Kind::AttrAssign => {
                let c = self.expr(&s.children[0]);
                let v = self.expr(&s.children[1]);
                if c.as_ref().is_some_and(|c| *c != FrozenType::Complex) {
                    self.diag(s, "complex part store needs a complex value");
                }
                if v.as_ref().is_some_and(|v| !v.is_numeric()) {
                    self.diag(s, "complex part must be int or real");
                }
            }
            Kind::If => {
                let (cond, then, els) = s.if_parts();
                self.cond(cond);
                self.stmts(then);
                self.stmts(els);
            }
            Kind::While => {
                self.cond(&s.children[0]);
                self.stmts(&s.children[1..]);
            }
            Kind::ForRange => {
                let var = &s.children[0];
                if var.ty != Some(FrozenType::Int) {
                    self.diag(var, "loop variable must be int");
                }
                for b in &s.children[1..4] {
                    if let Some(t) = self.expr(b) {
                        if t != FrozenType::Int {
                            self.diag(b, format!("range() argument must be int, found {t}"));
                        }
                    }
                }
                self.stmts(&s.children[4..]);
            }
            Kind::FunctionDef => {
                let (target, params, body) = s.def_parts();
                let result = target.and_then(|t| match &t.ty {
                    Some(FrozenType::Lambda { result, .. }) => Some((**result).clone()),
                    _ => None,
                });
                if target.is_none() {
                    self.diag(s, format!("function `{}` has no typed binding", s.name_str()));
                }
                for p in params {
                    if p.ty.is_none() || p.slot.is_none() {
                        self.diag(p, format!("parameter `{}` is not typed", p.name_str()));
                    }
                }
                self.results.push(result);
                self.stmts(body);
                self.results.pop();
            }
            Kind::Return => {
                let want = self.results.last().cloned();
                match want {
                    None => self.diag(s, "return outside a function"),
                    Some(want) => {
                        let got = match s.children.first() {
                            Some(v) => self.expr(v),
                            None => Some(FrozenType::None),
                        };
                        if let (Some(w), Some(g)) = (want, got) {
                            if !assignable(&w, &g) {
                                self.diag(s, format!("returns {g} from a function typed {w}"));
                            }
                        }
                    }
                }
            }
            Kind::Print => {
                for a in &s.children {
                    if let Some(FrozenType::Lambda { .. }) = self.expr(a) {
                        self.diag(a, "functions cannot be printed");
                    }
                }
            }
            Kind::ExprStmt => {
                self.expr(&s.children[0]);
            }
            _ => self.diag(s, format!("`{}` is not a statement", s.kind.keyword())),
        }
    }

    fn cond(&mut self, e: &Node) {
        if let Some(t) = self.expr(e) {
            if !matches!(t, FrozenType::Bool | FrozenType::Int) {
                self.diag(e, format!("condition must be bool or int, found {t}"));
            }
        }
    }

    fn index(&mut self, e: &Node) {
        if let Some(t) = self.expr(e) {
            if t != FrozenType::Int {
                self.diag(e, "index must be int");
            }
        }
    }

    /// Derive the type of `e`, reporting mismatches with its annotation.
    fn expr(&mut self, e: &Node) -> Option<FrozenType> {
        let derived = self.derive(e);
        match (&derived, &e.ty) {
            (_, None) if e.kind != Kind::Literal => {
                self.diag(e, format!("`{}` has no frozen type", e.kind.keyword()));
                None
            }
            (Some(d), Some(t)) if d != t => {
                self.diag(
                    e,
                    format!("`{}` is annotated {t} but its operands give {d}", e.kind.keyword()),
                );
                None
            }
            (Some(d), _) => Some(d.clone()),
            (None, _) => None,
        }
    }

    fn derive(&mut self, e: &Node) -> Option<FrozenType> {
        use FrozenType as T;
        match e.kind {
            Kind::Literal => match e.lit.as_ref()? {
                Literal::Int(_) => Some(T::Int),
                Literal::Real(_) => Some(T::Real),
                Literal::Str(_) => Some(T::Str),
                Literal::Bool(_) => Some(T::Bool),
                Literal::Imag(_) => Some(T::Complex),
                Literal::None => {
                    self.diag(e, "None is not a value");
                    None
                }
            },
            Kind::Identifier => {
                if e.slot.is_none() && !e.is_native() {
                    self.diag(e, format!("identifier `{}` has no slot", e.name_str()));
                }
                e.ty.clone()
            }
            Kind::ListLit => {
                let elem = match &e.ty {
                    Some(T::Vector(x)) => (**x).clone(),
                    _ => return None,
                };
                for c in &e.children {
                    if let Some(t) = self.expr(c) {
                        if !assignable(&elem, &t) {
                            self.diag(c, format!("list element {t} in vector[{elem}]"));
                        }
                    }
                }
                if matches!(elem, T::Lambda { .. }) {
                    self.diag(e, "vectors of functions are not supported");
                }
                e.ty.clone()
            }
            Kind::Index => {
                let c = self.expr(&e.children[0]);
                self.index(&e.children[1]);
                match c? {
                    T::Vector(x) => Some(*x),
                    T::Str => Some(T::Str),
                    t => {
                        self.diag(e, format!("{t} cannot be indexed"));
                        None
                    }
                }
            }
            Kind::Attr => match self.expr(&e.children[0])? {
                T::Complex => Some(T::Real),
                t => {
                    self.diag(e, format!("`.{}` on {t}", e.name_str()));
                    None
                }
            },
            Kind::Ref => {
                let inner = &e.children[0];
                if inner.kind != Kind::Identifier {
                    self.diag(e, "reference needs a variable");
                }
                self.expr(inner);
                Some(T::Int)
            }
            Kind::UnOp => {
                let t = self.expr(&e.children[0])?;
                match (e.op?, &t) {
                    (Op::Not, T::Bool | T::Int) => Some(T::Bool),
                    (Op::Neg, T::Int | T::Real | T::Complex) => Some(t),
                    (op, _) => {
                        self.diag(e, format!("bad operand type for unary {}: {t}", op.symbol()));
                        None
                    }
                }
            }
            Kind::BinOp => {
                let a = self.expr(&e.children[0]);
                let b = self.expr(&e.children[1]);
                let (a, b) = (a?, b?);
                let op = e.op?;
                let r = binop(op, &a, &b);
                if r.is_none() {
                    self.diag(e, format!("unsupported operand types for {}: {a} and {b}", op.symbol()));
                }
                r
            }
            Kind::Compare => {
                let a = self.expr(&e.children[0]);
                let b = self.expr(&e.children[1]);
                let (a, b) = (a?, b?);
                let eq = matches!(e.op?, Op::Eq | Op::Ne);
                let num = |t: &T| matches!(t, T::Int | T::Real);
                let ok = (num(&a) && num(&b))
                    || (a == T::Str && b == T::Str)
                    || (eq && a == T::Bool && b == T::Bool)
                    || (eq
                        && (a == T::Complex || b == T::Complex)
                        && matches!(a, T::Int | T::Real | T::Complex)
                        && matches!(b, T::Int | T::Real | T::Complex));
                if !ok {
                    self.diag(e, format!("cannot compare {a} and {b}"));
                }
                Some(T::Bool)
            }
            Kind::BoolOp => {
                for c in &e.children {
                    if let Some(t) = self.expr(c) {
                        if t != T::Bool {
                            self.diag(c, format!("boolean operand must be bool, found {t}"));
                        }
                    }
                }
                Some(T::Bool)
            }
            Kind::Call => self.call(e),
            Kind::LambdaExpr => {
                let n = e.param_count();
                let (params, result) = match &e.ty {
                    Some(T::Lambda { params, result }) => (params.clone(), (**result).clone()),
                    _ => {
                        self.diag(e, "lambda has no frozen signature");
                        return None;
                    }
                };
                for (p, want) in e.children[..n].iter().zip(&params) {
                    if p.ty.as_ref() != Some(want) {
                        self.diag(p, "lambda parameter type differs from its signature");
                    }
                }
                if let Some(body) = e.children.get(n) {
                    if let Some(t) = self.expr(body) {
                        if !assignable(&result, &t) {
                            self.diag(body, format!("lambda body gives {t}, signature says {result}"));
                        }
                    }
                }
                e.ty.clone()
            }
            _ => {
                self.diag(e, format!("`{}` is not an expression", e.kind.keyword()));
                None
            }
        }
    }

    fn call(&mut self, e: &Node) -> Option<FrozenType> {
        use FrozenType as T;
        if let Some(b) = e.attr_str("builtin") {
            let arg = match e.children.first() {
                Some(a) => Some(self.expr(a)?),
                None => None,
            };
            let r = match (b, arg.as_ref()) {
                ("len", Some(T::Vector(_) | T::Str)) => T::Int,
                ("int", Some(T::Int | T::Real | T::Str | T::Bool)) => T::Int,
                ("float", Some(T::Int | T::Real | T::Str | T::Bool)) => T::Real,
                ("str", Some(T::Int | T::Real | T::Str | T::Bool | T::Complex)) => T::Str,
                ("abs", Some(T::Int)) => T::Int,
                ("abs", Some(T::Real | T::Complex)) => T::Real,
                ("input", None) => T::Str,
                ("id", Some(_)) => {
                    if e.children[0].kind != Kind::Identifier {
                        self.diag(e, "id() needs a variable");
                    }
                    T::Int
                }
                (b, a) => {
                    let a = a.map(|t| t.to_string()).unwrap_or_else(|| "no argument".into());
                    self.diag(e, format!("{b}() does not accept {a}"));
                    return None;
                }
            };
            return Some(r);
        }
        let callee = self.expr(&e.children[0])?;
        let T::Lambda { params, result } = callee else {
            self.diag(e, format!("{callee} value is not callable"));
            return None;
        };
        let args = &e.children[1..];
        if args.len() != params.len() {
            self.diag(
                e,
                format!("call passes {} arguments to a function of {}", args.len(), params.len()),
            );
        }
        for (a, p) in args.iter().zip(&params) {
            if let Some(t) = self.expr(a) {
                if !assignable(p, &t) {
                    self.diag(a, format!("argument {t} where {p} is expected"));
                }
            }
        }
        Some(*result)
    }
}

fn assignable(dst: &FrozenType, src: &FrozenType) -> bool {
    dst == src || (*dst == FrozenType::Real && *src == FrozenType::Int)
}

fn binop(op: Op, a: &FrozenType, b: &FrozenType) -> Option<FrozenType> {
    use FrozenType as T;
    let numeric = |t: &T| matches!(t, T::Int | T::Real);
    let num = || match (a, b) {
        (T::Int, T::Int) => Some(T::Int),
        _ if numeric(a) && numeric(b) => Some(T::Real),
        _ => None,
    };
    let cplx = || {
        let ok = |t: &T| matches!(t, T::Int | T::Real | T::Complex);
        (ok(a) && ok(b) && (*a == T::Complex || *b == T::Complex)).then_some(T::Complex)
    };
    match op {
        Op::Add => match (a, b) {
            (T::Str, T::Str) => Some(T::Str),
            (T::Vector(x), T::Vector(y)) if x == y => Some(a.clone()),
            _ => num().or_else(cplx),
        },
        Op::Sub => num().or_else(cplx),
        Op::Mul => match (a, b) {
            (T::Str, T::Int) | (T::Int, T::Str) => Some(T::Str),
            (T::Vector(_), T::Int) => Some(a.clone()),
            (T::Int, T::Vector(_)) => Some(b.clone()),
            _ => num().or_else(cplx),
        },
        Op::Div => {
            if numeric(a) && numeric(b) {
                Some(T::Real)
            } else {
                cplx()
            }
        }
        Op::Mod | Op::Pow => num(),
        _ => None,
    }
}
