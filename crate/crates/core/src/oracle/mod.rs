//! Reference interpreter over typed trees. It fixes the observable semantics
//! that compiled units must reproduce: same slot stack and display (so `id`
//! agrees), same numeric widths, same traps, same printed forms.

mod value;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::ast::{FrozenType, Kind, Literal, Loc, Node, Op, SlotRef};
use crate::config::NumericConfig;
use crate::format::{format_bool, format_complex};

pub use value::{Closure, Value};

/// Machine limits, mirroring the runtime's build profile.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub stack_slots: usize,
    pub max_frames: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            stack_slots: 262_144,
            max_frames: 10_000,
            max_depth: 64,
        }
    }
}

impl Limits {
    /// Tables sized for a tiny heap.
    pub fn micro() -> Self {
        Limits {
            stack_slots: 1024,
            max_frames: 128,
            max_depth: 64,
        }
    }

    pub fn for_heap(heap_bytes: u64) -> Self {
        if heap_bytes <= 65_536 {
            Limits::micro()
        } else {
            Limits::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrapKind {
    DivByZero(&'static str),
    IndexOutOfRange { index: i64, len: i64 },
    HeapExhausted,
    StackOverflow,
    ZeroStep,
    UnboundCall,
    Value(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trap {
    pub loc: Option<Loc>,
    pub kind: TrapKind,
}

impl fmt::Display for Trap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = self.loc {
            write!(f, "{loc}: ")?;
        }
        match &self.kind {
            TrapKind::DivByZero(what) => write!(f, "{what}"),
            TrapKind::IndexOutOfRange { index, len } => write!(f, "index out of range ({index}, len {len})"),
            TrapKind::HeapExhausted => write!(f, "heap exhausted"),
            TrapKind::StackOverflow => write!(f, "stack overflow"),
            TrapKind::ZeroStep => write!(f, "range() step must not be zero"),
            TrapKind::UnboundCall => write!(f, "call of an unbound function"),
            TrapKind::Value(m) => write!(f, "{m}"),
        }
    }
}

/// Result of one program run. Exit status 2 means a trap.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub exit: i32,
    pub trap: Option<Trap>,
}

impl Outcome {
    pub fn stdout_text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

pub fn interpret(root: &Node, stdin: &str) -> Outcome {
    interpret_with(root, stdin, Limits::default())
}

/// Run on a thread with a large stack: the interpreter recurses once per
/// call and nesting level of the program.
pub fn interpret_with(root: &Node, stdin: &str, limits: Limits) -> Outcome {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || run(root, stdin, limits))
            .expect("spawn interpreter thread")
            .join()
            .expect("interpreter thread panicked")
    })
}

fn run(root: &Node, stdin: &str, limits: Limits) -> Outcome {
    let cfg = NumericConfig::new(
        root.attr_int("int").unwrap_or(32) as u32,
        root.attr_int("real").unwrap_or(64) as u32,
    );
    let mut funcs = HashMap::new();
    collect(root, &mut funcs);
    let mut m = Machine {
        cfg,
        limits,
        funcs,
        stack: Vec::new(),
        display: vec![0; limits.max_depth + 1],
        frames: 0,
        out: Vec::new(),
        input: stdin
            .split_inclusive('\n')
            .map(str::to_string)
            .collect::<Vec<_>>()
            .into_iter(),
    };
    let result = m.call_body(root, 0, &[]);
    let trap = result.err();
    Outcome {
        stdout: m.out,
        exit: if trap.is_some() { 2 } else { 0 },
        trap,
    }
}

fn collect<'a>(n: &'a Node, out: &mut HashMap<i64, &'a Node>) {
    if matches!(n.kind, Kind::FunctionDef | Kind::LambdaExpr) {
        if let Some(id) = n.attr_int("fn") {
            out.insert(id, n);
        }
    }
    for c in &n.children {
        collect(c, out);
    }
}

type R<T> = Result<T, Trap>;

enum Flow {
    Normal,
    Return(Value),
}

struct Machine<'a> {
    cfg: NumericConfig,
    limits: Limits,
    funcs: HashMap<i64, &'a Node>,
    stack: Vec<Value>,
    display: Vec<usize>,
    frames: usize,
    out: Vec<u8>,
    input: std::vec::IntoIter<String>,
}

/// Per-activation state.
struct Ctx<'a> {
    depth: usize,
    ret: FrozenType,
    natives: Vec<(&'a str, i64)>,
}

fn trap<T>(loc: Option<Loc>, kind: TrapKind) -> R<T> {
    Err(Trap { loc, kind })
}

fn value_err<T>(loc: Option<Loc>, msg: impl Into<String>) -> R<T> {
    trap(loc, TrapKind::Value(msg.into()))
}

fn ty(n: &Node) -> &FrozenType {
    n.ty.as_ref().unwrap_or(&FrozenType::None)
}

fn result_type(func: &Node) -> FrozenType {
    let t = match func.kind {
        Kind::FunctionDef => func.def_parts().0.and_then(|t| t.ty.clone()),
        Kind::LambdaExpr => func.ty.clone(),
        _ => None,
    };
    match t {
        Some(FrozenType::Lambda { result, .. }) => *result,
        _ => FrozenType::None,
    }
}

fn zero(t: &FrozenType) -> Value {
    match t {
        FrozenType::Int | FrozenType::Bool => Value::Int(0),
        FrozenType::Real => Value::Real(0.0),
        _ => Value::Null,
    }
}

impl<'a> Machine<'a> {
    fn r(&self, v: f64) -> f64 {
        self.cfg.real(v)
    }

    /// Convert for a store into a slot of type `t` the way C assignment does.
    fn coerce(&self, v: Value, t: &FrozenType) -> Value {
        match (v, t) {
            (Value::Int(i), FrozenType::Real) => Value::Real(self.cfg.int_to_real(i)),
            (v, _) => v,
        }
    }

    fn real_of(&self, v: &Value) -> f64 {
        match v {
            Value::Int(i) => self.cfg.int_to_real(*i),
            Value::Real(r) => *r,
            _ => 0.0,
        }
    }

    fn slot_index(&self, ctx: &Ctx, slot: SlotRef) -> usize {
        self.display[ctx.depth - slot.level as usize] + slot.offset as usize
    }

    /// Push a frame for `func` at `depth`, run it, pop it.
    fn call_body(&mut self, func: &'a Node, depth: usize, args: &[Value]) -> R<Value> {
        let loc = func.loc;
        if depth >= self.limits.max_depth {
            return value_err(loc, "nesting too deep");
        }
        let layout: Vec<FrozenType> = func
            .attr_str("layout")
            .unwrap_or("")
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| FrozenType::parse(s).unwrap_or(FrozenType::None))
            .collect();
        let base = self.stack.len();
        if self.frames >= self.limits.max_frames || base + layout.len() > self.limits.stack_slots {
            return trap(loc, TrapKind::StackOverflow);
        }
        self.stack.extend(layout.iter().map(zero));
        for (k, a) in args.iter().enumerate() {
            let t = layout.get(k).cloned().unwrap_or(FrozenType::None);
            self.stack[base + k] = self.coerce(a.clone(), &t);
        }
        self.frames += 1;
        self.display[depth] = base;
        let mut ctx = Ctx {
            depth,
            ret: result_type(func),
            natives: Vec::new(),
        };
        let result = match func.kind {
            Kind::Module => self.block(&func.children, &mut ctx).map(|_| Value::Null),
            Kind::FunctionDef => {
                let (_, _, body) = func.def_parts();
                self.block(body, &mut ctx).map(|f| match f {
                    Flow::Return(v) => v,
                    Flow::Normal => zero(&ctx.ret),
                })
            }
            _ => {
                let n = func.param_count();
                let ret = ctx.ret.clone();
                self.expr(&func.children[n], &mut ctx).map(|v| self.coerce(v, &ret))
            }
        };
        self.frames -= 1;
        self.stack.truncate(base);
        result
    }

    fn apply(&mut self, callee: Value, args: Vec<Value>, loc: Option<Loc>) -> R<Value> {
        let Value::Lambda(c) = callee else {
            return trap(loc, TrapKind::UnboundCall);
        };
        let func = *self.funcs.get(&c.fn_id).ok_or(Trap {
            loc,
            kind: TrapKind::UnboundCall,
        })?;
        let depth = c.env.len();
        if depth >= self.limits.max_depth {
            return value_err(loc, "nesting too deep");
        }
        let saved: Vec<usize> = self.display[..=depth].to_vec();
        self.display[..depth].copy_from_slice(&c.env);
        let r = self.call_body(func, depth, &args);
        self.display[..=depth].copy_from_slice(&saved);
        r
    }

    fn block(&mut self, stmts: &'a [Node], ctx: &mut Ctx<'a>) -> R<Flow> {
        for s in stmts {
            if let Flow::Return(v) = self.stmt(s, ctx)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn store(&mut self, target: &Node, v: Value, ctx: &Ctx) {
        if let Some(slot) = target.slot {
            let v = self.coerce(v, ty(target));
            let i = self.slot_index(ctx, slot);
            self.stack[i] = v;
        }
    }

    fn stmt(&mut self, n: &'a Node, ctx: &mut Ctx<'a>) -> R<Flow> {
        let loc = n.loc;
        match n.kind {
            Kind::Declaration => {
                if let Some(slot) = n.slot {
                    let i = self.slot_index(ctx, slot);
                    self.stack[i] = zero(ty(n));
                }
            }
            Kind::Assign => {
                let v = self.expr(&n.children[1], ctx)?;
                self.store(&n.children[0], v, ctx);
            }
            Kind::IndexAssign => {
                let container = self.expr(&n.children[0], ctx)?;
                let idx = self.expr(&n.children[1], ctx)?.int();
                let elem = ty(&n.children[0]).elem().cloned().unwrap_or(FrozenType::None);
                let v = self.expr(&n.children[2], ctx)?;
                let v = self.coerce(v, &elem);
                let Value::Vector(items) = container else {
                    return trap(loc, TrapKind::IndexOutOfRange { index: idx, len: 0 });
                };
                let len = items.borrow().len() as i64;
                if idx < 0 || idx >= len {
                    return trap(loc, TrapKind::IndexOutOfRange { index: idx, len });
                }
                items.borrow_mut()[idx as usize] = v;
            }
            Kind::AttrAssign => {
                let target = &n.children[0];
                let container = self.expr(target, ctx)?;
                let v = self.expr(&n.children[1], ctx)?;
                let v = self.real_of(&v);
                let cell = match container {
                    Value::Complex(c) => c,
                    _ => {
                        // An unset complex is created in place, as the runtime does.
                        let c = Rc::new(RefCell::new((0.0, 0.0)));
                        if target.kind == Kind::Identifier && !target.is_native() {
                            self.store(target, Value::Complex(c.clone()), ctx);
                        }
                        c
                    }
                };
                let mut z = cell.borrow_mut();
                if n.name_str() == "imag" {
                    z.1 = v;
                } else {
                    z.0 = v;
                }
            }
            Kind::If => {
                let (cond, then, els) = n.if_parts();
                let c = self.expr(cond, ctx)?.int() != 0;
                return self.block(if c { then } else { els }, ctx);
            }
            Kind::While => loop {
                if self.expr(&n.children[0], ctx)?.int() == 0 {
                    break;
                }
                if let Flow::Return(v) = self.block(&n.children[1..], ctx)? {
                    return Ok(Flow::Return(v));
                }
            },
            Kind::ForRange => return self.for_range(n, ctx),
            Kind::Return => {
                let v = match n.children.first() {
                    Some(e) => {
                        let v = self.expr(e, ctx)?;
                        let ret = ctx.ret.clone();
                        self.coerce(v, &ret)
                    }
                    None => Value::Null,
                };
                return Ok(Flow::Return(v));
            }
            Kind::Nonlocal | Kind::Pass => {}
            Kind::Print => {
                let last = n.children.len().saturating_sub(1);
                for (i, a) in n.children.iter().enumerate() {
                    let v = self.expr(a, ctx)?;
                    let text = self.show(&v, ty(a), false);
                    self.out.extend_from_slice(&text);
                    self.out.push(if i == last { b'\n' } else { b' ' });
                }
                if n.children.is_empty() {
                    self.out.push(b'\n');
                }
            }
            Kind::ExprStmt => {
                for c in &n.children {
                    self.expr(c, ctx)?;
                }
            }
            Kind::FunctionDef => {
                let lam = self.make_lambda(n)?;
                if let Some(target) = n.def_parts().0 {
                    self.store(target, lam, ctx);
                }
            }
            _ => return value_err(loc, format!("`{}` is not a statement", n.kind.keyword())),
        }
        Ok(Flow::Normal)
    }

    fn for_range(&mut self, n: &'a Node, ctx: &mut Ctx<'a>) -> R<Flow> {
        let var = &n.children[0];
        let mut v = self.expr(&n.children[1], ctx)?.int();
        let step = self.expr(&n.children[3], ctx)?.int();
        if step == 0 {
            return trap(n.children[3].loc.or(n.loc), TrapKind::ZeroStep);
        }
        let native = var.is_native();
        if native {
            ctx.natives.push((var.name_str(), v));
        }
        let result = loop {
            let end = match self.expr(&n.children[2], ctx) {
                Ok(e) => e.int(),
                Err(t) => break Err(t),
            };
            if !(if step > 0 { v < end } else { v > end }) {
                break Ok(Flow::Normal);
            }
            if native {
                ctx.natives.last_mut().expect("native loop variable").1 = v;
            } else {
                self.store(var, Value::Int(v), ctx);
            }
            match self.block(&n.children[4..], ctx) {
                Ok(Flow::Normal) => {}
                other => break other,
            }
            v = self.cfg.wrap(v.wrapping_add(step));
        };
        if native {
            ctx.natives.pop();
        }
        result
    }

    fn make_lambda(&self, func: &Node) -> R<Value> {
        let id = func.attr_int("fn").unwrap_or(0);
        let depth = func.attr_int("depth").unwrap_or(1) as usize;
        Ok(Value::Lambda(Rc::new(Closure {
            fn_id: id,
            env: self.display[..depth].to_vec(),
        })))
    }

    fn expr(&mut self, n: &'a Node, ctx: &mut Ctx<'a>) -> R<Value> {
        let loc = n.loc;
        Ok(match n.kind {
            Kind::Identifier => {
                if n.is_native() {
                    let name = n.name_str();
                    let v = ctx.natives.iter().rev().find(|(k, _)| *k == name).map(|(_, v)| *v);
                    return v.map(Value::Int).ok_or_else(|| Trap {
                        loc,
                        kind: TrapKind::Value(format!("native `{name}` outside its loop")),
                    });
                }
                match n.slot {
                    Some(slot) => self.stack[self.slot_index(ctx, slot)].clone(),
                    None => return value_err(loc, format!("unslotted `{}`", n.name_str())),
                }
            }
            Kind::Literal => match n.lit.as_ref() {
                Some(Literal::Int(v)) => Value::Int(self.cfg.wrap(*v)),
                Some(Literal::Real(v)) => Value::Real(self.cfg.real_literal(*v)),
                Some(Literal::Bool(b)) => Value::Int(i64::from(*b)),
                Some(Literal::Str(s)) => Value::Str(Rc::new(s.as_bytes().to_vec())),
                Some(Literal::Imag(v)) => Value::complex(0.0, self.cfg.real_literal(*v)),
                _ => return value_err(loc, "None has no value"),
            },
            Kind::ListLit => {
                let elem = ty(n).elem().cloned().unwrap_or(FrozenType::None);
                let mut items = Vec::with_capacity(n.children.len());
                for c in &n.children {
                    let v = self.expr(c, ctx)?;
                    items.push(self.coerce(v, &elem));
                }
                Value::Vector(Rc::new(RefCell::new(items)))
            }
            Kind::BinOp => self.binop(n, ctx)?,
            Kind::UnOp => {
                let a = self.expr(&n.children[0], ctx)?;
                match (n.op, a) {
                    (Some(Op::Not), a) => Value::Int(i64::from(a.int() == 0)),
                    (_, Value::Int(i)) => Value::Int(self.cfg.wrap(i.wrapping_neg())),
                    (_, Value::Real(r)) => Value::Real(-r),
                    (_, a) => {
                        let (re, im) = a.parts();
                        Value::complex(-re, -im)
                    }
                }
            }
            Kind::Compare => self.compare(n, ctx)?,
            Kind::BoolOp => {
                let a = self.expr(&n.children[0], ctx)?.int() != 0;
                let v = match n.op {
                    Some(Op::And) => a && self.expr(&n.children[1], ctx)?.int() != 0,
                    _ => a || self.expr(&n.children[1], ctx)?.int() != 0,
                };
                Value::Int(i64::from(v))
            }
            Kind::Call => match n.attr_str("builtin") {
                Some(b) => self.builtin(n, b, ctx)?,
                None => {
                    let callee = self.expr(&n.children[0], ctx)?;
                    let params = match ty(&n.children[0]) {
                        FrozenType::Lambda { params, .. } => params.clone(),
                        _ => Vec::new(),
                    };
                    let mut args = Vec::new();
                    for (i, a) in n.children[1..].iter().enumerate() {
                        let v = self.expr(a, ctx)?;
                        let t = params.get(i).cloned().unwrap_or(FrozenType::None);
                        args.push(self.coerce(v, &t));
                    }
                    self.apply(callee, args, loc)?
                }
            },
            Kind::Index => {
                let c = self.expr(&n.children[0], ctx)?;
                let i = self.expr(&n.children[1], ctx)?.int();
                match ty(&n.children[0]) {
                    FrozenType::Str => {
                        let b = c.bytes();
                        if i < 0 || i >= b.len() as i64 {
                            return trap(
                                loc,
                                TrapKind::IndexOutOfRange {
                                    index: i,
                                    len: b.len() as i64,
                                },
                            );
                        }
                        Value::Str(Rc::new(vec![b[i as usize]]))
                    }
                    _ => {
                        let len = c.len();
                        if i < 0 || i >= len {
                            return trap(loc, TrapKind::IndexOutOfRange { index: i, len });
                        }
                        match c {
                            Value::Vector(items) => items.borrow()[i as usize].clone(),
                            _ => unreachable!("non-empty vector"),
                        }
                    }
                }
            }
            Kind::Attr => {
                let (re, im) = self.expr(&n.children[0], ctx)?.parts();
                Value::Real(if n.name_str() == "imag" { im } else { re })
            }
            Kind::Ref => Value::Int(self.id_of(&n.children[0], ctx)?),
            Kind::LambdaExpr => self.make_lambda(n)?,
            _ => return value_err(loc, format!("`{}` is not an expression", n.kind.keyword())),
        })
    }

    fn id_of(&self, n: &Node, ctx: &Ctx) -> R<i64> {
        match n.slot {
            Some(slot) if !n.is_native() => Ok(self.slot_index(ctx, slot) as i64),
            _ => value_err(n.loc, "reference to something without a slot"),
        }
    }

    fn binop(&mut self, n: &'a Node, ctx: &mut Ctx<'a>) -> R<Value> {
        let loc = n.loc;
        let op = n.op.unwrap_or(Op::Add);
        let a = self.expr(&n.children[0], ctx)?;
        let b = self.expr(&n.children[1], ctx)?;
        let cfg = self.cfg;
        Ok(match ty(n) {
            FrozenType::Int => {
                let (x, y) = (a.int(), b.int());
                match op {
                    Op::Add => Value::Int(cfg.wrap(x.wrapping_add(y))),
                    Op::Sub => Value::Int(cfg.wrap(x.wrapping_sub(y))),
                    Op::Mul => Value::Int(cfg.wrap(x.wrapping_mul(y))),
                    Op::Mod => match cfg.mod_int(x, y) {
                        Some(v) => Value::Int(v),
                        None => return trap(loc, TrapKind::DivByZero("integer modulo by zero")),
                    },
                    Op::Pow => match cfg.pow_int(x, y) {
                        Some(v) => Value::Int(v),
                        None => return value_err(loc, "zero to a negative power"),
                    },
                    _ => return value_err(loc, "bad int operator"),
                }
            }
            FrozenType::Real => {
                let (x, y) = (self.real_of(&a), self.real_of(&b));
                Value::Real(match op {
                    Op::Add => self.r(x + y),
                    Op::Sub => self.r(x - y),
                    Op::Mul => self.r(x * y),
                    Op::Div => {
                        if y == 0.0 {
                            return trap(loc, TrapKind::DivByZero("division by zero"));
                        }
                        self.r(x / y)
                    }
                    Op::Mod => {
                        if y == 0.0 {
                            return trap(loc, TrapKind::DivByZero("float modulo by zero"));
                        }
                        value::mod_real(x, y, cfg.real32())
                    }
                    Op::Pow => {
                        if x == 0.0 && y < 0.0 {
                            return value_err(loc, "zero to a negative power");
                        }
                        if x < 0.0 && y.is_finite() && y != (y as i64) as f64 && y.abs() < 9.0e15 {
                            return value_err(loc, "negative number to a fractional power");
                        }
                        if cfg.real32() {
                            (x as f32).powf(y as f32) as f64
                        } else {
                            x.powf(y)
                        }
                    }
                    _ => return value_err(loc, "bad real operator"),
                })
            }
            FrozenType::Str => match op {
                Op::Add => {
                    let mut s = a.bytes().to_vec();
                    s.extend_from_slice(&b.bytes());
                    Value::Str(Rc::new(s))
                }
                _ => {
                    let (s, k) = if matches!(a, Value::Int(_)) {
                        (b, a.int())
                    } else {
                        (a, b.int())
                    };
                    let s = s.bytes();
                    let k = k.max(0) as usize;
                    if s.len().saturating_mul(k) > (1 << 31) {
                        return trap(loc, TrapKind::HeapExhausted);
                    }
                    Value::Str(Rc::new(s.repeat(k)))
                }
            },
            FrozenType::Vector(_) => match op {
                Op::Add => {
                    let mut items = a.items();
                    items.extend(b.items());
                    Value::Vector(Rc::new(RefCell::new(items)))
                }
                _ => {
                    let (v, k) = if matches!(a, Value::Int(_)) {
                        (b, a.int())
                    } else {
                        (a, b.int())
                    };
                    let items = v.items();
                    let k = k.max(0) as usize;
                    if items.len().saturating_mul(k) > (1 << 28) {
                        return trap(loc, TrapKind::HeapExhausted);
                    }
                    let mut out = Vec::with_capacity(items.len() * k);
                    for _ in 0..k {
                        out.extend(items.iter().cloned());
                    }
                    Value::Vector(Rc::new(RefCell::new(out)))
                }
            },
            FrozenType::Complex => {
                let (x, y) = (self.complex_of(&a), self.complex_of(&b));
                let (re, im) = match op {
                    Op::Add => (self.r(x.0 + y.0), self.r(x.1 + y.1)),
                    Op::Sub => (self.r(x.0 - y.0), self.r(x.1 - y.1)),
                    Op::Mul => (
                        self.r(self.r(x.0 * y.0) - self.r(x.1 * y.1)),
                        self.r(self.r(x.0 * y.1) + self.r(x.1 * y.0)),
                    ),
                    Op::Div => match value::cdiv(x, y, |v| self.r(v)) {
                        Some(z) => z,
                        None => return trap(loc, TrapKind::DivByZero("complex division by zero")),
                    },
                    _ => return value_err(loc, "bad complex operator"),
                };
                Value::complex(re, im)
            }
            t => return value_err(loc, format!("no arithmetic on {t}")),
        })
    }

    fn complex_of(&self, v: &Value) -> (f64, f64) {
        match v {
            Value::Int(_) | Value::Real(_) => (self.real_of(v), 0.0),
            v => v.parts(),
        }
    }

    fn compare(&mut self, n: &'a Node, ctx: &mut Ctx<'a>) -> R<Value> {
        let op = n.op.unwrap_or(Op::Eq);
        let (ta, tb) = (ty(&n.children[0]).clone(), ty(&n.children[1]).clone());
        let a = self.expr(&n.children[0], ctx)?;
        let b = self.expr(&n.children[1], ctx)?;
        use std::cmp::Ordering;
        let ord = |o: Option<Ordering>| -> bool {
            matches!(
                (op, o),
                (Op::Lt, Some(Ordering::Less))
                    | (Op::Le, Some(Ordering::Less | Ordering::Equal))
                    | (Op::Gt, Some(Ordering::Greater))
                    | (Op::Ge, Some(Ordering::Greater | Ordering::Equal))
                    | (Op::Eq, Some(Ordering::Equal))
                    | (Op::Ne, Some(Ordering::Less | Ordering::Greater) | None)
            )
        };
        let res = if ta == FrozenType::Str {
            ord(Some(a.bytes().as_slice().cmp(b.bytes().as_slice())))
        } else if ta == FrozenType::Complex || tb == FrozenType::Complex {
            let eq = self.complex_of(&a) == self.complex_of(&b);
            if op == Op::Eq {
                eq
            } else {
                !eq
            }
        } else if ta == FrozenType::Real || tb == FrozenType::Real {
            ord(self.real_of(&a).partial_cmp(&self.real_of(&b)))
        } else {
            ord(Some(a.int().cmp(&b.int())))
        };
        Ok(Value::Int(i64::from(res)))
    }

    fn builtin(&mut self, n: &'a Node, name: &str, ctx: &mut Ctx<'a>) -> R<Value> {
        let loc = n.loc;
        let cfg = self.cfg;
        if name == "input" {
            let line = self.input.next().unwrap_or_default();
            let line = line.strip_suffix('\n').unwrap_or(&line);
            let line = line.strip_suffix('\r').unwrap_or(line);
            return Ok(Value::Str(Rc::new(line.as_bytes().to_vec())));
        }
        let arg = &n.children[0];
        if name == "id" {
            return Ok(Value::Int(self.id_of(arg, ctx)?));
        }
        let t = ty(arg).clone();
        let v = self.expr(arg, ctx)?;
        use FrozenType as T;
        Ok(match (name, &t) {
            ("len", _) => Value::Int(v.len()),
            ("int", T::Real) => {
                let r = v.real();
                if !r.is_finite() {
                    let what = if r.is_nan() { "nan" } else { "infinity" };
                    return value_err(loc, format!("cannot convert {what} to int"));
                }
                let t = r.trunc();
                let (lo, hi) = (cfg.int_min() as f64, -(cfg.int_min() as f64));
                if t < lo || t >= hi {
                    return value_err(loc, "int() argument out of range");
                }
                Value::Int(t as i64)
            }
            ("int", T::Str) => match value::parse_int(&v.bytes()) {
                Some(i) => Value::Int(cfg.wrap(i)),
                None => {
                    let text = String::from_utf8_lossy(&v.bytes()).trim().to_string();
                    return value_err(loc, format!("invalid literal for int(): '{text}'"));
                }
            },
            ("int", _) => v,
            ("float", T::Str) => match value::parse_real(&v.bytes(), cfg.real32()) {
                Some(r) => Value::Real(r),
                None => {
                    let text = String::from_utf8_lossy(&v.bytes()).trim().to_string();
                    return value_err(loc, format!("could not convert string to float: '{text}'"));
                }
            },
            ("float", _) => Value::Real(self.real_of(&v)),
            ("str", T::Str) => v,
            ("str", _) => Value::Str(Rc::new(self.show(&v, &t, false))),
            ("abs", T::Int) => Value::Int(cfg.wrap(v.int().wrapping_abs())),
            ("abs", T::Real) => Value::Real(v.real().abs()),
            ("abs", _) => {
                let (re, im) = v.parts();
                Value::Real(if cfg.real32() {
                    (re as f32).hypot(im as f32) as f64
                } else {
                    re.hypot(im)
                })
            }
            _ => return value_err(loc, format!("unknown builtin {name}")),
        })
    }

    /// Printed form; `repr` selects the element style used inside vectors.
    fn show(&self, v: &Value, t: &FrozenType, repr: bool) -> Vec<u8> {
        let cfg = self.cfg;
        match t {
            FrozenType::Int => v.int().to_string().into_bytes(),
            FrozenType::Bool => format_bool(v.int() != 0).as_bytes().to_vec(),
            FrozenType::Real => cfg.format_real(v.real()).into_bytes(),
            FrozenType::Str if repr => crate::format::repr_bytes(&v.bytes()).into_bytes(),
            FrozenType::Str => v.bytes().to_vec(),
            FrozenType::Complex => {
                let (re, im) = v.parts();
                format_complex(re, im, cfg.real32()).into_bytes()
            }
            FrozenType::Vector(e) => {
                let mut out = vec![b'['];
                for (i, item) in v.items().iter().enumerate() {
                    if i > 0 {
                        out.extend_from_slice(b", ");
                    }
                    out.extend(self.show(item, e, true));
                }
                out.push(b']');
                out
            }
            _ => b"<function>".to_vec(),
        }
    }
}

#[cfg(test)]
mod tests;
