//! Phase 2: flow-order type inference with type freezing.
//!
//! A single forward pass walks each body in execution order. Every binding of
//! a name gets a declaration with a frozen type; assigning a value of another
//! type creates a fresh declaration at a new frame offset. Function bodies are
//! inferred at their first call site with the argument types seen there, using
//! the bindings of the defining scopes as they stand at that moment.
//!
//! Offsets are assigned only after the whole module is inferred, so functions
//! that are never called can be dropped without leaving holes in a frame.

mod check;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::ast::{Atom, FrozenType, Kind, Literal, Loc, Node, Op, SlotRef};
use crate::config::NumericConfig;

pub use check::{check_frozen, resolve_scopes, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("{loc}: type error: {message}")]
    Type { loc: Loc, message: String },
    #[error("{loc}: name error: {message}")]
    Name { loc: Loc, name: String, message: String },
    #[error("{loc}: nonlocal error: no binding for `{name}` in an enclosing function")]
    Nonlocal { loc: Loc, name: String },
}

type R<T> = Result<T, InferError>;

const BUILTINS: &[&str] = &["len", "int", "float", "str", "abs", "input", "id", "range", "print"];

fn type_err(loc: Option<Loc>, message: impl Into<String>) -> InferError {
    InferError::Type {
        loc: loc.unwrap_or_default(),
        message: message.into(),
    }
}

fn name_err(loc: Option<Loc>, name: &str, message: impl Into<String>) -> InferError {
    InferError::Name {
        loc: loc.unwrap_or_default(),
        name: name.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Int,
    Real,
    Bool,
    Str,
    Complex,
    None,
    Vector(Box<Ty>),
    Fn(usize),
}

impl Ty {
    fn has_fn(&self) -> bool {
        match self {
            Ty::Fn(_) => true,
            Ty::Vector(e) => e.has_fn(),
            _ => false,
        }
    }

    fn from_annotation(text: &str) -> Option<Ty> {
        Some(match text {
            "int" => Ty::Int,
            "float" => Ty::Real,
            "str" => Ty::Str,
            "bool" => Ty::Bool,
            "complex" => Ty::Complex,
            _ => {
                let inner = text.strip_prefix("list[")?.strip_suffix(']')?;
                Ty::Vector(Box::new(Ty::from_annotation(inner)?))
            }
        })
    }

    fn numeric(&self) -> bool {
        matches!(self, Ty::Int | Ty::Real)
    }
}

struct Sig {
    parent: usize,
    params: Option<Vec<Ty>>,
    /// Per-parameter annotations when only some are annotated.
    partial: Vec<Option<Ty>>,
    result: Option<Ty>,
    defs: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum DefState {
    Pending,
    Active,
    Done,
}

struct DefInfo {
    node: Node,
    parent_scope: usize,
    sig: usize,
    state: DefState,
    typed: Option<Node>,
}

struct Scope {
    parent: Option<usize>,
    depth: u32,
    is_module: bool,
    decls: Vec<usize>,
    bindings: HashMap<String, usize>,
    locals: HashSet<String>,
    nonlocals: HashMap<String, usize>,
    size: u32,
}

struct Decl {
    name: String,
    ty: Ty,
    scope: usize,
    seq: usize,
    captured: bool,
    loop_var: bool,
    read: bool,
    defs: Vec<usize>,
    offset: Option<u32>,
}

#[derive(Default, Clone)]
struct Ctx {
    scope: usize,
    def: Option<usize>,
    barriers: Vec<usize>,
    /// Declarations created inside the then-branches being inferred.
    created: Vec<Vec<usize>>,
    /// Then-branch declarations reusable by the else-branches being inferred.
    pools: Vec<Vec<usize>>,
}

struct Infer {
    cfg: NumericConfig,
    sigs: Vec<Sig>,
    defs: Vec<DefInfo>,
    scopes: Vec<Scope>,
    decls: Vec<Decl>,
    tys: Vec<Ty>,
    seq: usize,
    ctx: Ctx,
}

/// Infer types and frame slots for a parsed module.
pub fn infer(root: &Node) -> R<Node> {
    infer_with(root, NumericConfig::default())
}

pub fn infer_with(root: &Node, cfg: NumericConfig) -> R<Node> {
    if root.kind != Kind::Module {
        return Err(type_err(root.loc, "expected a module"));
    }
    let mut inf = Infer {
        cfg,
        sigs: Vec::new(),
        defs: Vec::new(),
        scopes: Vec::new(),
        decls: Vec::new(),
        tys: Vec::new(),
        seq: 0,
        ctx: Ctx::default(),
    };
    let (locals, nonlocals) = assigned_names(&root.children);
    if let Some((name, loc)) = nonlocals.into_iter().next() {
        return Err(type_err(loc, format!("`nonlocal {name}` at module level")));
    }
    inf.scopes.push(Scope {
        parent: None,
        depth: 0,
        is_module: true,
        decls: Vec::new(),
        bindings: HashMap::new(),
        locals,
        nonlocals: HashMap::new(),
        size: 0,
    });
    let body = inf.stmts(&root.children)?;
    let mut module = Node::module(body);
    inf.finish(&mut module)?;
    Ok(module)
}

/// Names bound by assignment, `def` or `for` in a body (not descending into
/// nested functions), and the names declared `nonlocal`.
fn assigned_names(body: &[Node]) -> (HashSet<String>, Vec<(String, Option<Loc>)>) {
    fn go(body: &[Node], out: &mut HashSet<String>, nl: &mut Vec<(String, Option<Loc>)>) {
        for s in body {
            match s.kind {
                Kind::Assign => {
                    out.insert(s.children[0].name_str().to_string());
                }
                Kind::FunctionDef => {
                    out.insert(s.name_str().to_string());
                }
                Kind::ForRange => {
                    out.insert(s.children[0].name_str().to_string());
                    go(&s.children[4..], out, nl);
                }
                Kind::If => go(&s.children[1..], out, nl),
                Kind::While => go(&s.children[1..], out, nl),
                Kind::Nonlocal => nl.push((s.name_str().to_string(), s.loc)),
                _ => {}
            }
        }
    }
    let mut out = HashSet::new();
    let mut nl = Vec::new();
    go(body, &mut out, &mut nl);
    (out, nl)
}

impl Infer {
    // ---- signatures ----

    fn new_sig(&mut self) -> usize {
        let id = self.sigs.len();
        self.sigs.push(Sig {
            parent: id,
            params: None,
            partial: Vec::new(),
            result: None,
            defs: Vec::new(),
        });
        id
    }

    fn find(&mut self, s: usize) -> usize {
        let p = self.sigs[s].parent;
        if p == s {
            return s;
        }
        let root = self.find(p);
        self.sigs[s].parent = root;
        root
    }

    /// Structural equality, merging function signatures where needed.
    fn unify(&mut self, a: &Ty, b: &Ty, loc: Option<Loc>) -> R<bool> {
        match (a, b) {
            (Ty::Fn(x), Ty::Fn(y)) => {
                self.merge(*x, *y, loc)?;
                Ok(true)
            }
            (Ty::Vector(x), Ty::Vector(y)) => self.unify(x, y, loc),
            _ => Ok(a == b),
        }
    }

    /// Whether a value of type `src` may be stored where `dst` is expected
    /// (equal types, or an int widened to real).
    fn assignable(&mut self, dst: &Ty, src: &Ty, loc: Option<Loc>) -> R<bool> {
        if *dst == Ty::Real && *src == Ty::Int {
            return Ok(true);
        }
        self.unify(dst, src, loc)
    }

    fn merge(&mut self, x: usize, y: usize, loc: Option<Loc>) -> R<()> {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return Ok(());
        }
        let params = match (self.sigs[x].params.clone(), self.sigs[y].params.clone()) {
            (Some(a), Some(b)) => {
                if a.len() != b.len() {
                    return Err(type_err(
                        loc,
                        "functions with different parameter counts are mixed here",
                    ));
                }
                for (p, q) in a.iter().zip(&b) {
                    if !self.unify(p, q, loc)? {
                        return Err(type_err(loc, "functions with different parameter types are mixed here"));
                    }
                }
                Some(a)
            }
            (a, b) => a.or(b),
        };
        let result = match (self.sigs[x].result.clone(), self.sigs[y].result.clone()) {
            (Some(a), Some(b)) => {
                if !self.unify(&a, &b, loc)? {
                    return Err(type_err(loc, "functions with different result types are mixed here"));
                }
                Some(a)
            }
            (a, b) => a.or(b),
        };
        let partial = if self.sigs[x].partial.is_empty() {
            std::mem::take(&mut self.sigs[y].partial)
        } else {
            std::mem::take(&mut self.sigs[x].partial)
        };
        let mut defs = std::mem::take(&mut self.sigs[y].defs);
        self.sigs[y].parent = x;
        let sx = &mut self.sigs[x];
        sx.defs.append(&mut defs);
        sx.params = params;
        sx.result = result;
        sx.partial = partial;
        if self.sigs[x].params.is_some() {
            self.instantiate_pending(x)?;
        }
        Ok(())
    }

    fn instantiate_pending(&mut self, sig: usize) -> R<()> {
        let defs = self.sigs[sig].defs.clone();
        for d in defs {
            if self.defs[d].state == DefState::Pending {
                self.instantiate(d)?;
            }
        }
        Ok(())
    }

    fn frozen(&mut self, t: &Ty, loc: Option<Loc>) -> R<FrozenType> {
        Ok(match t {
            Ty::Int => FrozenType::Int,
            Ty::Real => FrozenType::Real,
            Ty::Bool => FrozenType::Bool,
            Ty::Str => FrozenType::Str,
            Ty::Complex => FrozenType::Complex,
            Ty::None => FrozenType::None,
            Ty::Vector(e) => FrozenType::vector(self.frozen(e, loc)?),
            Ty::Fn(s) => {
                let s = self.find(*s);
                let (params, result) = match (&self.sigs[s].params, &self.sigs[s].result) {
                    (Some(p), Some(r)) => (p.clone(), r.clone()),
                    _ => {
                        let name = self.sigs[s]
                            .defs
                            .first()
                            .map(|d| self.defs[*d].node.name_str().to_string())
                            .filter(|n| !n.is_empty())
                            .unwrap_or_else(|| "lambda".to_string());
                        return Err(type_err(
                            loc,
                            format!(
                                "cannot infer type of {name}; it is never called (annotate with int()/float()/str() or call it)"
                            ),
                        ));
                    }
                };
                let mut ps = Vec::new();
                for p in &params {
                    ps.push(self.frozen(p, loc)?);
                }
                FrozenType::lambda(ps, self.frozen(&result, loc)?)
            }
        })
    }

    fn describe(&mut self, t: &Ty) -> String {
        match self.frozen(t, None) {
            Ok(f) => f.to_string(),
            Err(_) => "function".to_string(),
        }
    }

    fn set_ty(&mut self, node: &mut Node, t: &Ty) {
        if t.has_fn() {
            self.tys.push(t.clone());
            node.set_attr("_t", Atom::Int(self.tys.len() as i64 - 1));
        } else {
            node.ty = Some(self.frozen(t, None).expect("no function types"));
        }
    }

    // ---- scopes and bindings ----

    fn cur(&self) -> &Scope {
        &self.scopes[self.ctx.scope]
    }

    fn new_decl(&mut self, name: &str, ty: Ty, scope: usize) -> usize {
        self.seq += 1;
        let id = self.decls.len();
        self.decls.push(Decl {
            name: name.to_string(),
            ty,
            scope,
            seq: self.seq,
            captured: false,
            loop_var: false,
            read: false,
            defs: Vec::new(),
            offset: None,
        });
        self.scopes[scope].decls.push(id);
        for c in &mut self.ctx.created {
            c.push(id);
        }
        id
    }

    fn decl_node(&mut self, d: usize, loc: Option<Loc>) -> Node {
        let name = self.decls[d].name.clone();
        let ty = self.decls[d].ty.clone();
        let mut n = Node::new(Kind::Declaration).named(name).with_loc(loc);
        n.set_attr("_d", Atom::Int(d as i64));
        n.slot = Some(SlotRef::new(0, 0));
        self.set_ty(&mut n, &ty);
        n
    }

    fn ident_node(&mut self, d: usize, level: u32, loc: Option<Loc>) -> Node {
        let name = self.decls[d].name.clone();
        let ty = self.decls[d].ty.clone();
        let mut n = Node::ident(name).with_loc(loc);
        n.set_attr("_d", Atom::Int(d as i64));
        n.slot = Some(SlotRef::new(level, 0));
        self.set_ty(&mut n, &ty);
        n
    }

    /// Resolve a read of `name` to (declaration, level).
    fn lookup(&mut self, name: &str, loc: Option<Loc>) -> R<Option<(usize, u32)>> {
        let cur_depth = self.cur().depth;
        let mut s = self.ctx.scope;
        loop {
            let scope = &self.scopes[s];
            let found = if let Some(&target) = scope.nonlocals.get(name) {
                match self.scopes[target].bindings.get(name) {
                    Some(&d) => Some(d),
                    None => {
                        return Err(name_err(
                            loc,
                            name,
                            format!("free variable '{name}' referenced before assignment"),
                        ))
                    }
                }
            } else if let Some(&d) = scope.bindings.get(name) {
                Some(d)
            } else if scope.locals.contains(name) {
                let msg = if s == self.ctx.scope {
                    format!("local variable '{name}' referenced before assignment")
                } else {
                    format!("free variable '{name}' referenced before assignment in enclosing scope")
                };
                return Err(name_err(loc, name, msg));
            } else {
                None
            };
            if let Some(d) = found {
                let level = cur_depth - self.scopes[self.decls[d].scope].depth;
                if level > 0 {
                    if self.decls[d].loop_var {
                        return Err(type_err(
                            loc,
                            format!("loop variable `{name}` cannot be captured by a nested function"),
                        ));
                    }
                    self.decls[d].captured = true;
                }
                self.decls[d].read = true;
                return Ok(Some((d, level)));
            }
            match scope.parent {
                Some(p) => s = p,
                None => return Ok(None),
            }
        }
    }

    fn is_builtin(&self, name: &str) -> bool {
        if !BUILTINS.contains(&name) {
            return false;
        }
        let mut s = Some(self.ctx.scope);
        while let Some(i) = s {
            let sc = &self.scopes[i];
            if sc.bindings.contains_key(name) || sc.locals.contains(name) || sc.nonlocals.contains_key(name) {
                return false;
            }
            s = sc.parent;
        }
        true
    }

    /// Bind `name` to a value of type `ty` in the current scope, emitting a
    /// declaration statement into `out` when a new slot is needed. Returns
    /// the declaration and its level.
    fn bind(&mut self, name: &str, ty: &Ty, loc: Option<Loc>, out: &mut Vec<Node>) -> R<(usize, u32)> {
        if let Some(&target) = self.cur().nonlocals.get(name) {
            let d = match self.scopes[target].bindings.get(name) {
                Some(&d) => d,
                None => {
                    return Err(InferError::Nonlocal {
                        loc: loc.unwrap_or_default(),
                        name: name.to_string(),
                    })
                }
            };
            if ty.has_fn() {
                return Err(type_err(
                    loc,
                    format!("a function cannot be stored in enclosing-scope variable `{name}`"),
                ));
            }
            let dty = self.decls[d].ty.clone();
            if !self.unify(&dty, ty, loc)? {
                let (a, b) = (self.describe(&dty), self.describe(ty));
                return Err(type_err(
                    loc,
                    format!("cannot retype nonlocal `{name}` from {a} to {b}"),
                ));
            }
            self.decls[d].captured = true;
            let level = self.cur().depth - self.scopes[target].depth;
            return Ok((d, level));
        }
        let scope = self.ctx.scope;
        if let Some(&d) = self.cur().bindings.get(name) {
            let dty = self.decls[d].ty.clone();
            if self.unify(&dty, ty, loc)? {
                return Ok((d, 0));
            }
            let (a, b) = (self.describe(&dty), self.describe(ty));
            if self.decls[d].captured {
                return Err(type_err(
                    loc,
                    format!("cannot retype `{name}` from {a} to {b}: it is captured by a nested function"),
                ));
            }
            if self.decls[d].loop_var || self.ctx.barriers.last().is_some_and(|&b| self.decls[d].seq <= b) {
                return Err(type_err(
                    loc,
                    format!("type of `{name}` changes inside a loop (from {a} to {b}); annotate with int()/float()/str() to keep one type"),
                ));
            }
        }
        // Reuse a declaration made for the same name and type in a then-branch.
        let pool: Vec<usize> = self.ctx.pools.iter().rev().flatten().copied().collect();
        for d in pool {
            if self.decls[d].name == name && self.decls[d].scope == scope {
                let dty = self.decls[d].ty.clone();
                if dty == *ty || (dty.has_fn() && ty.has_fn() && self.unify(&dty, ty, loc)?) {
                    self.scopes[scope].bindings.insert(name.to_string(), d);
                    return Ok((d, 0));
                }
            }
        }
        let d = self.new_decl(name, ty.clone(), scope);
        self.scopes[scope].bindings.insert(name.to_string(), d);
        let decl = self.decl_node(d, loc);
        out.push(decl);
        Ok((d, 0))
    }

    // ---- statements ----

    fn stmts(&mut self, body: &[Node]) -> R<Vec<Node>> {
        let mut out = Vec::new();
        for s in body {
            self.stmt(s, &mut out)?;
        }
        Ok(out)
    }

    fn stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        match s.kind {
            Kind::Pass => out.push(s.clone()),
            Kind::Assign => {
                let target = &s.children[0];
                let (value, ty) = self.expr(&s.children[1])?;
                if ty == Ty::None {
                    return Err(type_err(s.loc, "cannot assign a value-less expression"));
                }
                let name = target.name_str();
                let (d, level) = self.bind(name, &ty, target.loc, out)?;
                let ident = self.ident_node(d, level, target.loc);
                out.push(
                    Node::new(Kind::Assign)
                        .with_loc(s.loc)
                        .with_children(vec![ident, value]),
                );
            }
            Kind::IndexAssign => {
                let (container, cty) = self.expr(&s.children[0])?;
                let (index, _) = self.expr(&s.children[1])?;
                let (value, vty) = self.expr(&s.children[2])?;
                match &cty {
                    Ty::Vector(elem) => {
                        if !self.assignable(elem, &vty, s.loc)? {
                            let (a, b) = (self.describe(elem), self.describe(&vty));
                            return Err(type_err(
                                s.loc,
                                format!("cannot store {b} into an element of vector[{a}]"),
                            ));
                        }
                    }
                    Ty::Str => return Err(type_err(s.loc, "strings are immutable")),
                    other => {
                        let t = self.describe(other);
                        return Err(type_err(s.loc, format!("cannot index-assign into {t}")));
                    }
                }
                out.push(
                    Node::new(Kind::IndexAssign)
                        .with_loc(s.loc)
                        .with_children(vec![container, index, value]),
                );
            }
            Kind::AttrAssign => {
                let (container, cty) = self.expr(&s.children[0])?;
                let (value, vty) = self.expr(&s.children[1])?;
                if cty != Ty::Complex {
                    let t = self.describe(&cty);
                    return Err(type_err(
                        s.loc,
                        format!("`.{}` needs a complex value, found {t}", s.name_str()),
                    ));
                }
                if !vty.numeric() {
                    let t = self.describe(&vty);
                    return Err(type_err(s.loc, format!("cannot store {t} into a complex part")));
                }
                out.push(
                    Node::new(Kind::AttrAssign)
                        .with_loc(s.loc)
                        .named(s.name_str())
                        .with_children(vec![container, value]),
                );
            }
            Kind::ExprStmt => {
                let (e, _) = self.expr_allow_none(&s.children[0])?;
                out.push(Node::new(Kind::ExprStmt).with_loc(s.loc).child(e));
            }
            Kind::Print => {
                let mut node = Node::new(Kind::Print).with_loc(s.loc);
                for a in &s.children {
                    let (e, t) = self.expr(a)?;
                    if t.has_fn() {
                        return Err(type_err(a.loc, "functions cannot be printed"));
                    }
                    node.children.push(e);
                }
                out.push(node);
            }
            Kind::If => self.if_stmt(s, out)?,
            Kind::While => {
                let (cond, cty) = self.expr(&s.children[0])?;
                self.check_cond(&cty, s.children[0].loc)?;
                self.ctx.barriers.push(self.seq);
                let body = self.stmts(&s.children[1..]);
                self.ctx.barriers.pop();
                let mut node = Node::new(Kind::While).with_loc(s.loc).child(cond);
                node.children.extend(body?);
                out.push(node);
            }
            Kind::ForRange => self.for_stmt(s, out)?,
            Kind::FunctionDef => self.def_stmt(s, out)?,
            Kind::Return => self.return_stmt(s, out)?,
            Kind::Nonlocal => self.nonlocal_stmt(s, out)?,
            Kind::Declaration => {
                return Err(type_err(s.loc, "input is already typed"));
            }
            _ => return Err(type_err(s.loc, format!("`{}` is not a statement", s.kind.keyword()))),
        }
        Ok(())
    }

    fn check_cond(&mut self, t: &Ty, loc: Option<Loc>) -> R<()> {
        if matches!(t, Ty::Bool | Ty::Int) {
            Ok(())
        } else {
            let d = self.describe(t);
            Err(type_err(loc, format!("condition must be bool or int, found {d}")))
        }
    }

    fn if_stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        let (cond_src, then_src, else_src) = s.if_parts();
        let (cond, cty) = self.expr(cond_src)?;
        self.check_cond(&cty, cond_src.loc)?;
        let scope = self.ctx.scope;
        let before = self.scopes[scope].bindings.clone();

        self.ctx.created.push(Vec::new());
        let then = self.stmts(then_src);
        let created = self.ctx.created.pop().unwrap_or_default();
        let then = then?;
        let after_then = std::mem::replace(&mut self.scopes[scope].bindings, before.clone());

        self.ctx.pools.push(created);
        let els = self.stmts(else_src);
        self.ctx.pools.pop();
        let els = els?;
        let after_else = self.scopes[scope].bindings.clone();

        let mut merged = HashMap::new();
        let mut names: Vec<&String> = after_then.keys().chain(after_else.keys()).collect();
        names.sort();
        names.dedup();
        for name in names {
            let d = match (after_then.get(name), after_else.get(name)) {
                (Some(a), Some(b)) if a == b => *a,
                (Some(&a), Some(&b)) => {
                    let (ta, tb) = (self.decls[a].ty.clone(), self.decls[b].ty.clone());
                    let (ta, tb) = (self.describe(&ta), self.describe(&tb));
                    return Err(type_err(
                        s.loc,
                        format!("`{name}` has type {ta} after one branch of the if and {tb} after the other"),
                    ));
                }
                (Some(&a), None) | (None, Some(&a)) => a,
                (None, None) => unreachable!(),
            };
            merged.insert(name.clone(), d);
        }
        self.scopes[scope].bindings = merged;

        let mut node = Node::new(Kind::If)
            .with_loc(s.loc)
            .with_attr("then", Atom::Int(then.len() as i64))
            .child(cond);
        node.children.extend(then);
        node.children.extend(els);
        out.push(node);
        Ok(())
    }

    fn for_stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        let var = &s.children[0];
        let name = var.name_str();
        let mut bounds = Vec::new();
        for b in &s.children[1..4] {
            let (e, t) = self.expr(b)?;
            if t != Ty::Int {
                let d = self.describe(&t);
                return Err(type_err(b.loc, format!("range() arguments must be int, found {d}")));
            }
            bounds.push(e);
        }
        if self.cur().bindings.contains_key(name) || self.cur().nonlocals.contains_key(name) {
            return Err(type_err(
                var.loc,
                format!("loop variable `{name}` shadows an existing variable in this scope"),
            ));
        }
        let d = self.bind(name, &Ty::Int, var.loc, out)?.0;
        self.decls[d].loop_var = true;
        let ident = self.ident_node(d, 0, var.loc);
        self.ctx.barriers.push(self.seq);
        let body = self.stmts(&s.children[4..]);
        self.ctx.barriers.pop();
        let scope = self.ctx.scope;
        self.scopes[scope].bindings.remove(name);
        let mut node = Node::new(Kind::ForRange).with_loc(s.loc).child(ident);
        node.children.extend(bounds);
        node.children.extend(body?);
        out.push(node);
        Ok(())
    }

    fn register_def(&mut self, node: &Node) -> R<usize> {
        let sig = self.new_sig();
        let n = node.param_count();
        let anns: Vec<Option<Ty>> = node.children[..n]
            .iter()
            .map(|p| p.attr_str("ann").map(|a| Ty::from_annotation(a).ok_or(a)))
            .map(|r| r.transpose())
            .collect::<Result<_, _>>()
            .map_err(|a| type_err(node.loc, format!("unknown annotation `{a}`")))?;
        if anns.iter().all(Option::is_some) {
            self.sigs[sig].params = Some(anns.iter().flatten().cloned().collect());
        } else {
            self.sigs[sig].partial = anns;
        }
        if let Some(ret) = node.attr_str("ret") {
            let t =
                Ty::from_annotation(ret).ok_or_else(|| type_err(node.loc, format!("unknown annotation `{ret}`")))?;
            self.sigs[sig].result = Some(t);
        }
        let id = self.defs.len();
        self.sigs[sig].defs.push(id);
        self.defs.push(DefInfo {
            node: node.clone(),
            parent_scope: self.ctx.scope,
            sig,
            state: DefState::Pending,
            typed: None,
        });
        Ok(id)
    }

    fn def_stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        let def = self.register_def(s)?;
        let sig = self.defs[def].sig;
        let name = s.name_str();
        // A plain rebinding of a function name reuses the slot when the two
        // signatures are compatible, so closures see the latest definition.
        let scope = self.ctx.scope;
        let existing = self.scopes[scope].bindings.get(name).copied();
        let d = match existing {
            Some(d) if matches!(self.decls[d].ty, Ty::Fn(_)) && !self.cur().nonlocals.contains_key(name) => {
                let Ty::Fn(old) = self.decls[d].ty.clone() else {
                    unreachable!()
                };
                let saved = (self.find(old), self.find(sig));
                if self.sig_compatible(saved.0, saved.1) {
                    self.merge(old, sig, s.loc)?;
                    d
                } else {
                    self.bind(name, &Ty::Fn(sig), s.loc, out)?.0
                }
            }
            _ => self.bind(name, &Ty::Fn(sig), s.loc, out)?.0,
        };
        self.decls[d].defs.push(def);
        let mut placeholder = Node::new(Kind::FunctionDef).with_loc(s.loc).named(name);
        placeholder.set_attr("_def", Atom::Int(def as i64));
        placeholder.set_attr("_d", Atom::Int(d as i64));
        out.push(placeholder);
        Ok(())
    }

    fn sig_compatible(&self, a: usize, b: usize) -> bool {
        let (sa, sb) = (&self.sigs[a], &self.sigs[b]);
        let ok_params = match (&sa.params, &sb.params) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        };
        let ok_result = match (&sa.result, &sb.result) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        };
        ok_params && ok_result
    }

    fn return_stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        let Some(def) = self.ctx.def else {
            return Err(type_err(s.loc, "return outside a function"));
        };
        let sig = self.find(self.defs[def].sig);
        let value = s
            .children
            .first()
            .filter(|v| !(v.kind == Kind::Literal && matches!(v.lit, Some(Literal::None))));
        let mut node = Node::new(Kind::Return).with_loc(s.loc);
        let ty = match value {
            Some(v) => {
                let (e, t) = self.expr(v)?;
                if t.has_fn() {
                    return Err(type_err(
                        s.loc,
                        "functions cannot be returned (closures may not escape)",
                    ));
                }
                node.children.push(e);
                t
            }
            None => Ty::None,
        };
        match self.sigs[sig].result.clone() {
            None => self.sigs[sig].result = Some(ty.clone()),
            Some(r) => {
                if !self.assignable(&r, &ty, s.loc)? {
                    let (a, b) = (self.describe(&r), self.describe(&ty));
                    return Err(type_err(
                        s.loc,
                        format!("function returns {a} elsewhere but {b} here; annotate the return type with -> T"),
                    ));
                }
            }
        }
        out.push(node);
        Ok(())
    }

    fn nonlocal_stmt(&mut self, s: &Node, out: &mut Vec<Node>) -> R<()> {
        let name = s.name_str();
        let err = || InferError::Nonlocal {
            loc: s.loc.unwrap_or_default(),
            name: name.to_string(),
        };
        if self.cur().is_module {
            return Err(type_err(s.loc, format!("`nonlocal {name}` at module level")));
        }
        if self.cur().bindings.contains_key(name) {
            return Err(type_err(
                s.loc,
                format!("`{name}` is assigned before its nonlocal declaration"),
            ));
        }
        let mut p = self.cur().parent;
        let target = loop {
            let Some(i) = p else { return Err(err()) };
            let sc = &self.scopes[i];
            if sc.is_module {
                return Err(err());
            }
            if let Some(&t) = sc.nonlocals.get(name) {
                break t;
            }
            if sc.bindings.contains_key(name) {
                break i;
            }
            if sc.locals.contains(name) {
                return Err(err());
            }
            p = sc.parent;
        };
        let scope = self.ctx.scope;
        self.scopes[scope].nonlocals.insert(name.to_string(), target);
        if let Some(&d) = self.scopes[target].bindings.get(name) {
            if self.decls[d].ty.has_fn() {
                return Err(type_err(
                    s.loc,
                    format!("function-valued `{name}` cannot be declared nonlocal"),
                ));
            }
            self.decls[d].captured = true;
        }
        out.push(s.clone());
        Ok(())
    }

    // ---- functions ----

    fn instantiate(&mut self, def: usize) -> R<()> {
        self.defs[def].state = DefState::Active;
        let node = self.defs[def].node.clone();
        let sig = self.find(self.defs[def].sig);
        let params_ty = self.sigs[sig].params.clone().expect("instantiated with known params");
        let n = node.param_count();
        if params_ty.len() != n {
            return Err(type_err(
                node.loc,
                format!(
                    "`{}` takes {n} arguments but is called with {}",
                    display_name(&node),
                    params_ty.len()
                ),
            ));
        }
        let parent = self.defs[def].parent_scope;
        let is_lambda = node.kind == Kind::LambdaExpr;
        let (mut locals, nonlocals) = if is_lambda {
            (HashSet::new(), Vec::new())
        } else {
            assigned_names(&node.children[n..])
        };
        for p in &node.children[..n] {
            if nonlocals.iter().any(|(nl, _)| nl == p.name_str()) {
                return Err(type_err(
                    p.loc,
                    format!("parameter `{}` declared nonlocal", p.name_str()),
                ));
            }
            locals.insert(p.name_str().to_string());
        }
        for (nl, _) in &nonlocals {
            locals.remove(nl);
        }
        let scope = self.scopes.len();
        self.scopes.push(Scope {
            parent: Some(parent),
            depth: self.scopes[parent].depth + 1,
            is_module: false,
            decls: Vec::new(),
            bindings: HashMap::new(),
            locals,
            nonlocals: HashMap::new(),
            size: 0,
        });
        let saved = std::mem::replace(
            &mut self.ctx,
            Ctx {
                scope,
                def: Some(def),
                ..Ctx::default()
            },
        );
        let result = self.instantiate_body(def, &node, &params_ty, scope);
        self.ctx = saved;
        let typed = result?;
        self.defs[def].typed = Some(typed);
        self.defs[def].state = DefState::Done;
        Ok(())
    }

    fn instantiate_body(&mut self, def: usize, node: &Node, params_ty: &[Ty], scope: usize) -> R<Node> {
        let n = node.param_count();
        let mut params = Vec::new();
        for (p, t) in node.children[..n].iter().zip(params_ty) {
            let name = p.name_str();
            if self.scopes[scope].bindings.contains_key(name) {
                return Err(type_err(p.loc, format!("duplicate parameter `{name}`")));
            }
            let d = self.new_decl(name, t.clone(), scope);
            self.scopes[scope].bindings.insert(name.to_string(), d);
            let mut ident = self.ident_node(d, 0, p.loc);
            if let Some(a) = p.attr_str("ann") {
                ident.set_attr("ann", Atom::Str(a.to_string()));
            }
            params.push(ident);
        }
        let sig = self.defs[def].sig;
        let mut out = Node::new(node.kind).with_loc(node.loc);
        out.name = node.name.clone();
        out.set_attr("params", Atom::Int(n as i64));
        if let Some(r) = node.attr_str("ret") {
            out.set_attr("ret", Atom::Str(r.to_string()));
        }
        out.children = params;
        if node.kind == Kind::LambdaExpr {
            let (body, t) = self.expr(&node.children[n])?;
            if t.has_fn() {
                return Err(type_err(
                    node.loc,
                    "functions cannot be returned (closures may not escape)",
                ));
            }
            if t == Ty::None {
                return Err(type_err(node.loc, "lambda body has no value"));
            }
            let sig = self.find(sig);
            match self.sigs[sig].result.clone() {
                None => self.sigs[sig].result = Some(t),
                Some(r) => {
                    if !self.assignable(&r, &t, node.loc)? {
                        return Err(type_err(node.loc, "lambdas mixed here return different types"));
                    }
                }
            }
            out.children.push(body);
        } else {
            let body = self.stmts(&node.children[n..])?;
            let sig = self.find(sig);
            if self.sigs[sig].result.is_none() {
                self.sigs[sig].result = Some(Ty::None);
            }
            out.children.extend(body);
        }
        out.set_attr("_scope", Atom::Int(scope as i64));
        out.set_attr("_sig", Atom::Int(self.find(sig) as i64));
        Ok(out)
    }

    fn call(&mut self, e: &Node) -> R<(Node, Ty)> {
        let callee = &e.children[0];
        if callee.kind == Kind::Identifier && self.is_builtin(callee.name_str()) {
            return self.builtin_call(e, callee.name_str());
        }
        let (callee_node, cty) = self.expr(callee)?;
        let Ty::Fn(sig) = cty else {
            let d = self.describe(&cty);
            return Err(type_err(e.loc, format!("{d} value is not callable")));
        };
        let mut args = Vec::new();
        let mut arg_tys = Vec::new();
        for a in &e.children[1..] {
            let (n, t) = self.expr(a)?;
            if t == Ty::None {
                return Err(type_err(a.loc, "argument has no value"));
            }
            args.push(n);
            arg_tys.push(t);
        }
        let sig = self.find(sig);
        let params = match self.sigs[sig].params.clone() {
            Some(p) => p,
            None => {
                let partial = self.sigs[sig].partial.clone();
                let p: Vec<Ty> = arg_tys
                    .iter()
                    .enumerate()
                    .map(|(i, t)| partial.get(i).cloned().flatten().unwrap_or_else(|| t.clone()))
                    .collect();
                self.sigs[sig].params = Some(p.clone());
                p
            }
        };
        let fname = display_name(callee);
        if params.len() != arg_tys.len() {
            return Err(type_err(
                e.loc,
                format!(
                    "`{fname}` takes {} arguments but {} were given",
                    params.len(),
                    arg_tys.len()
                ),
            ));
        }
        for (i, (p, a)) in params.iter().zip(&arg_tys).enumerate() {
            if !self.assignable(p, a, e.loc)? {
                let (pd, ad) = (self.describe(p), self.describe(a));
                return Err(type_err(
                    e.children[i + 1].loc,
                    format!(
                        "argument {} of `{fname}` must be {pd}, found {ad} (one signature per function)",
                        i + 1
                    ),
                ));
            }
        }
        self.instantiate_pending(sig)?;
        let sig = self.find(sig);
        let result = match self.sigs[sig].result.clone() {
            Some(r) => r,
            None => return Err(type_err(
                e.loc,
                format!(
                    "cannot infer type of {fname}: recursive call before its return type is known; annotate with -> T"
                ),
            )),
        };
        let mut node = Node::new(Kind::Call).with_loc(e.loc).child(callee_node);
        node.children.extend(args);
        self.set_ty(&mut node, &result);
        Ok((node, result))
    }

    fn builtin_call(&mut self, e: &Node, name: &str) -> R<(Node, Ty)> {
        let args_src = &e.children[1..];
        let arity = match name {
            "input" => 0,
            "range" => return Err(type_err(e.loc, "range() is only allowed in a for statement")),
            "print" => return Err(type_err(e.loc, "print() has no value")),
            _ => 1,
        };
        if args_src.len() != arity {
            return Err(type_err(
                e.loc,
                format!("{name}() takes {arity} argument(s), {} given", args_src.len()),
            ));
        }
        let mut node = Node::new(Kind::Call)
            .with_loc(e.loc)
            .with_attr("builtin", Atom::Str(name.to_string()));
        let mut arg_ty = Ty::None;
        if name == "id" {
            node.children.push(self.ref_operand(&args_src[0])?);
        } else if let Some(a) = args_src.first() {
            let (n, t) = self.expr(a)?;
            node.children.push(n);
            arg_ty = t;
        }
        let bad = |me: &mut Self, t: &Ty| {
            let d = me.describe(t);
            Err(type_err(e.loc, format!("{name}() does not accept {d}")))
        };
        let result = match name {
            "len" => match arg_ty {
                Ty::Vector(_) | Ty::Str => Ty::Int,
                ref t => return bad(self, t),
            },
            "int" => match arg_ty {
                Ty::Int | Ty::Real | Ty::Str | Ty::Bool => Ty::Int,
                ref t => return bad(self, t),
            },
            "float" => match arg_ty {
                Ty::Int | Ty::Real | Ty::Str | Ty::Bool => Ty::Real,
                ref t => return bad(self, t),
            },
            "str" => match arg_ty {
                Ty::Int | Ty::Real | Ty::Str | Ty::Bool | Ty::Complex => Ty::Str,
                ref t => return bad(self, t),
            },
            "abs" => match arg_ty {
                Ty::Int => Ty::Int,
                Ty::Real | Ty::Complex => Ty::Real,
                ref t => return bad(self, t),
            },
            "input" => Ty::Str,
            "id" => Ty::Int,
            _ => unreachable!(),
        };
        self.set_ty(&mut node, &result);
        Ok((node, result))
    }

    fn ref_operand(&mut self, e: &Node) -> R<Node> {
        if e.kind != Kind::Identifier {
            return Err(type_err(e.loc, "references (& and id()) need a variable name"));
        }
        let (n, _) = self.expr(e)?;
        Ok(n)
    }

    // ---- expressions ----

    fn expr(&mut self, e: &Node) -> R<(Node, Ty)> {
        let (n, t) = self.expr_allow_none(e)?;
        if t == Ty::None {
            return Err(type_err(e.loc, format!("{} returns no value", display_name(e))));
        }
        Ok((n, t))
    }

    fn expr_allow_none(&mut self, e: &Node) -> R<(Node, Ty)> {
        match e.kind {
            Kind::Literal => {
                let t = match e.lit.as_ref().unwrap_or(&Literal::None) {
                    Literal::Int(_) => Ty::Int,
                    Literal::Real(_) => Ty::Real,
                    Literal::Str(_) => Ty::Str,
                    Literal::Bool(_) => Ty::Bool,
                    Literal::Imag(_) => Ty::Complex,
                    Literal::None => return Err(type_err(e.loc, "None is not a value in vPython")),
                };
                let mut n = e.clone();
                self.set_ty(&mut n, &t);
                Ok((n, t))
            }
            Kind::Identifier => {
                let name = e.name_str();
                match self.lookup(name, e.loc)? {
                    Some((d, level)) => {
                        let t = self.decls[d].ty.clone();
                        Ok((self.ident_node(d, level, e.loc), t))
                    }
                    None if BUILTINS.contains(&name) => {
                        Err(type_err(e.loc, format!("builtin `{name}` can only be called")))
                    }
                    None => Err(name_err(e.loc, name, format!("name '{name}' is not defined"))),
                }
            }
            Kind::ListLit => {
                if e.children.is_empty() {
                    return Err(type_err(
                        e.loc,
                        "cannot infer the element type of an empty list; use [x] * 0",
                    ));
                }
                let mut items = Vec::new();
                let mut tys = Vec::new();
                for c in &e.children {
                    let (n, t) = self.expr(c)?;
                    if t.has_fn() {
                        return Err(type_err(c.loc, "vectors of functions are not supported"));
                    }
                    items.push(n);
                    tys.push(t);
                }
                let elem = if tys.iter().all(Ty::numeric) && tys.contains(&Ty::Real) {
                    Ty::Real
                } else {
                    tys[0].clone()
                };
                for (c, t) in e.children.iter().zip(&tys) {
                    if !self.assignable(&elem, t, c.loc)? {
                        let (a, b) = (self.describe(&elem), self.describe(t));
                        return Err(type_err(
                            c.loc,
                            format!("list mixes {a} and {b}; vector elements share one type"),
                        ));
                    }
                }
                let t = Ty::Vector(Box::new(elem));
                let mut n = Node::new(Kind::ListLit).with_loc(e.loc).with_children(items);
                self.set_ty(&mut n, &t);
                Ok((n, t))
            }
            Kind::Index => {
                let (c, ct) = self.expr(&e.children[0])?;
                let (i, _) = self.expr(&e.children[1])?;
                let t = match ct {
                    Ty::Vector(elem) => *elem,
                    Ty::Str => Ty::Str,
                    other => {
                        let d = self.describe(&other);
                        return Err(type_err(e.loc, format!("{d} cannot be indexed")));
                    }
                };
                let mut n = Node::new(Kind::Index).with_loc(e.loc).with_children(vec![c, i]);
                self.set_ty(&mut n, &t);
                Ok((n, t))
            }
            Kind::Attr => {
                let (c, ct) = self.expr(&e.children[0])?;
                if ct != Ty::Complex {
                    let d = self.describe(&ct);
                    return Err(type_err(
                        e.loc,
                        format!("`.{}` needs a complex value, found {d}", e.name_str()),
                    ));
                }
                let mut n = Node::new(Kind::Attr).with_loc(e.loc).named(e.name_str()).child(c);
                self.set_ty(&mut n, &Ty::Real);
                Ok((n, Ty::Real))
            }
            Kind::Ref => {
                let inner = self.ref_operand(&e.children[0])?;
                let mut n = Node::new(Kind::Ref).with_loc(e.loc).child(inner);
                self.set_ty(&mut n, &Ty::Int);
                Ok((n, Ty::Int))
            }
            Kind::UnOp => {
                let (a, t) = self.expr(&e.children[0])?;
                let op = e.op.unwrap_or(Op::Neg);
                let rt = match (op, &t) {
                    (Op::Not, Ty::Bool | Ty::Int) => Ty::Bool,
                    (Op::Neg, Ty::Int | Ty::Real | Ty::Complex) => t.clone(),
                    _ => {
                        let d = self.describe(&t);
                        return Err(type_err(
                            e.loc,
                            format!("bad operand type for unary {}: {d}", op.symbol()),
                        ));
                    }
                };
                let mut n = Node::new(Kind::UnOp).with_loc(e.loc).with_op(op).child(a);
                self.set_ty(&mut n, &rt);
                Ok((n, rt))
            }
            Kind::BinOp => {
                let (a, ta) = self.expr(&e.children[0])?;
                let (b, tb) = self.expr(&e.children[1])?;
                let op = e.op.expect("binop operator");
                let Some(rt) = binop_type(op, &ta, &tb) else {
                    let (da, db) = (self.describe(&ta), self.describe(&tb));
                    return Err(type_err(
                        e.loc,
                        format!("unsupported operand types for {}: {da} and {db}", op.symbol()),
                    ));
                };
                if let (Ty::Vector(x), Ty::Vector(y)) = (&ta, &tb) {
                    if !self.unify(x, y, e.loc)? {
                        return Err(type_err(e.loc, "cannot concatenate vectors of different element types"));
                    }
                }
                let mut n = Node::new(Kind::BinOp)
                    .with_loc(e.loc)
                    .with_op(op)
                    .with_children(vec![a, b]);
                self.set_ty(&mut n, &rt);
                Ok((n, rt))
            }
            Kind::Compare => {
                let (a, ta) = self.expr(&e.children[0])?;
                let (b, tb) = self.expr(&e.children[1])?;
                let op = e.op.expect("comparison operator");
                let eq = matches!(op, Op::Eq | Op::Ne);
                let ok = (ta.numeric() && tb.numeric())
                    || (ta == Ty::Str && tb == Ty::Str)
                    || (eq && ta == Ty::Bool && tb == Ty::Bool)
                    || (eq
                        && matches!(
                            (&ta, &tb),
                            (Ty::Complex, Ty::Complex | Ty::Int | Ty::Real) | (Ty::Int | Ty::Real, Ty::Complex)
                        ));
                if !ok {
                    let (da, db) = (self.describe(&ta), self.describe(&tb));
                    return Err(type_err(e.loc, format!("cannot compare {da} {} {db}", op.symbol())));
                }
                let mut n = Node::new(Kind::Compare)
                    .with_loc(e.loc)
                    .with_op(op)
                    .with_children(vec![a, b]);
                self.set_ty(&mut n, &Ty::Bool);
                Ok((n, Ty::Bool))
            }
            Kind::BoolOp => {
                let (a, ta) = self.expr(&e.children[0])?;
                let (b, tb) = self.expr(&e.children[1])?;
                let op = e.op.expect("boolean operator");
                if ta != Ty::Bool || tb != Ty::Bool {
                    let (da, db) = (self.describe(&ta), self.describe(&tb));
                    return Err(type_err(
                        e.loc,
                        format!("`{}` needs bool operands, found {da} and {db}", op.symbol()),
                    ));
                }
                let mut n = Node::new(Kind::BoolOp)
                    .with_loc(e.loc)
                    .with_op(op)
                    .with_children(vec![a, b]);
                self.set_ty(&mut n, &Ty::Bool);
                Ok((n, Ty::Bool))
            }
            Kind::Call => self.call(e),
            Kind::LambdaExpr => {
                let def = self.register_def(e)?;
                let sig = self.defs[def].sig;
                let t = Ty::Fn(sig);
                let mut n = Node::new(Kind::LambdaExpr).with_loc(e.loc);
                n.set_attr("_def", Atom::Int(def as i64));
                self.set_ty(&mut n, &t);
                Ok((n, t))
            }
            _ => Err(type_err(e.loc, format!("`{}` is not an expression", e.kind.keyword()))),
        }
    }

    // ---- materialization ----

    fn finish(&mut self, module: &mut Node) -> R<()> {
        // A function-name declaration is dead when none of the functions
        // bound to it was ever instantiated.
        let mut dead = vec![false; self.decls.len()];
        for (i, d) in self.decls.iter().enumerate() {
            if !d.defs.is_empty() && d.defs.iter().all(|f| self.defs[*f].state == DefState::Pending) {
                if d.read {
                    let name = d.name.clone();
                    return Err(type_err(
                        self.defs[d.defs[0]].node.loc,
                        format!("cannot infer type of {name}; it is never called"),
                    ));
                }
                dead[i] = true;
            }
        }
        for s in 0..self.scopes.len() {
            let mut next = 0u32;
            for &d in &self.scopes[s].decls.clone() {
                if !dead[d] {
                    self.decls[d].offset = Some(next);
                    next += 1;
                }
            }
            self.scopes[s].size = next;
        }
        let mut fn_counter = 0i64;
        module.set_attr("fn", Atom::Int(0));
        module.set_attr("depth", Atom::Int(0));
        module.set_attr("int", Atom::Int(self.cfg.int_bits as i64));
        module.set_attr("real", Atom::Int(self.cfg.real_bits as i64));
        self.scope_attrs(module, 0)?;
        let mut children = std::mem::take(&mut module.children);
        self.fix_list(&mut children, &dead, &mut fn_counter)?;
        module.children = children;
        Ok(())
    }

    fn scope_attrs(&mut self, node: &mut Node, scope: usize) -> R<()> {
        node.set_attr("frame", Atom::Int(self.scopes[scope].size as i64));
        let mut layout = Vec::new();
        for &d in &self.scopes[scope].decls.clone() {
            if self.decls[d].offset.is_some() {
                let t = self.decls[d].ty.clone();
                layout.push(self.frozen(&t, None)?.to_string());
            }
        }
        node.set_attr("layout", Atom::Str(layout.join(";")));
        Ok(())
    }

    fn fix_list(&mut self, list: &mut Vec<Node>, dead: &[bool], fns: &mut i64) -> R<()> {
        let mut out = Vec::with_capacity(list.len());
        for mut n in std::mem::take(list) {
            if n.kind == Kind::Declaration {
                let d = n.attr_int("_d").unwrap_or(0) as usize;
                if dead[d] {
                    continue;
                }
            }
            if n.kind == Kind::FunctionDef {
                if let Some(def) = n.attr_int("_def") {
                    let def = def as usize;
                    if self.defs[def].state != DefState::Done {
                        continue;
                    }
                    let d = n.attr_int("_d").unwrap_or(0) as usize;
                    let mut typed = self.defs[def].typed.take().expect("typed def");
                    let mut target = self.ident_node(d, 0, n.loc);
                    target.set_attr("target", Atom::Int(1));
                    typed.children.insert(0, target);
                    n = typed;
                }
            }
            self.fix(&mut n, dead, fns)?;
            out.push(n);
        }
        *list = out;
        Ok(())
    }

    fn fix(&mut self, n: &mut Node, dead: &[bool], fns: &mut i64) -> R<()> {
        if n.kind == Kind::LambdaExpr {
            if let Some(def) = n.attr_int("_def") {
                let def = def as usize;
                if self.defs[def].state != DefState::Done {
                    return Err(type_err(n.loc, "cannot infer type of lambda; it is never called"));
                }
                let tmp = n.attr_int("_t");
                *n = self.defs[def].typed.take().expect("typed lambda");
                if let Some(t) = tmp {
                    n.set_attr("_t", Atom::Int(t));
                }
            }
        }
        if let Some(d) = n.attr_int("_d") {
            let d = d as usize;
            let offset = self.decls[d].offset.expect("live declaration");
            let level = n.slot.map(|s| s.level).unwrap_or(0);
            n.slot = Some(SlotRef::new(level, offset));
            if n.ty.is_none() {
                let t = self.decls[d].ty.clone();
                n.ty = Some(self.frozen(&t, n.loc)?);
            }
            n.remove_attr("_d");
        }
        if let Some(t) = n.attr_int("_t") {
            let t = self.tys[t as usize].clone();
            n.ty = Some(self.frozen(&t, n.loc)?);
            n.remove_attr("_t");
        }
        if matches!(n.kind, Kind::FunctionDef | Kind::LambdaExpr) {
            if let Some(scope) = n.attr_int("_scope") {
                *fns += 1;
                n.remove_attr("_scope");
                n.remove_attr("_sig");
                let scope = scope as usize;
                n.set_attr("fn", Atom::Int(*fns));
                n.set_attr("depth", Atom::Int(self.scopes[scope].depth as i64));
                self.scope_attrs(n, scope)?;
            }
        }
        let mut children = std::mem::take(&mut n.children);
        self.fix_list(&mut children, dead, fns)?;
        n.children = children;
        Ok(())
    }
}

fn display_name(e: &Node) -> String {
    match e.kind {
        Kind::Identifier | Kind::FunctionDef => e.name_str().to_string(),
        Kind::Call => match e.children.first() {
            Some(c) => display_name(c),
            None => "call".into(),
        },
        Kind::LambdaExpr => "lambda".into(),
        _ => "expression".into(),
    }
}

fn binop_type(op: Op, a: &Ty, b: &Ty) -> Option<Ty> {
    use Ty::*;
    let num = |a: &Ty, b: &Ty| {
        if *a == Int && *b == Int {
            Some(Int)
        } else if a.numeric() && b.numeric() {
            Some(Real)
        } else {
            Option::None
        }
    };
    let cplx = |a: &Ty, b: &Ty| {
        let ok = |t: &Ty| matches!(t, Int | Real | Complex);
        (ok(a) && ok(b) && (*a == Complex || *b == Complex)).then_some(Complex)
    };
    match op {
        Op::Add => match (a, b) {
            (Str, Str) => Some(Str),
            (Vector(x), Vector(_)) => Some(Vector(x.clone())),
            _ => num(a, b).or_else(|| cplx(a, b)),
        },
        Op::Sub => num(a, b).or_else(|| cplx(a, b)),
        Op::Mul => match (a, b) {
            (Str, Int) | (Int, Str) => Some(Str),
            (Vector(x), Int) | (Int, Vector(x)) => Some(Vector(x.clone())),
            _ => num(a, b).or_else(|| cplx(a, b)),
        },
        Op::Div => {
            if a.numeric() && b.numeric() {
                Some(Real)
            } else {
                cplx(a, b)
            }
        }
        Op::Mod | Op::Pow => num(a, b),
        _ => Option::None,
    }
}

#[cfg(test)]
mod tests;
