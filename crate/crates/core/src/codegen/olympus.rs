//! Olympus mnemonic backend: renders a slotted, lowered module as a C unit
//! built from the runtime header's mnemonics. Expressions nest, one
//! statement mnemonic per line.

use std::fmt::Write;

use super::CodegenError;
use crate::ast::{FrozenType, Kind, Literal, Node, Op, SlotRef};
use crate::config::NumericConfig;
use crate::format::format_real;

type R<T> = Result<T, CodegenError>;

fn internal(msg: impl Into<String>) -> CodegenError {
    CodegenError::Internal(msg.into())
}

/// `ADDRL(o)` for the local frame, `ADDRF(l,o)` further out.
pub fn emit_address(slot: SlotRef) -> String {
    if slot.level == 0 {
        format!("ADDRL({})", slot.offset)
    } else {
        format!("ADDRF({},{})", slot.level, slot.offset)
    }
}

/// Emit one statement with the default numeric configuration. `return`
/// takes its suffix from the returned value.
pub fn emit_statement(node: &Node) -> R<String> {
    let mut e = Emitter::new(NumericConfig::default(), None);
    e.stmt(node)?;
    Ok(e.finish())
}

/// Emit the C function for a `def` or `lambda`.
pub fn emit_function(func: &Node) -> R<String> {
    emit_function_with(func, NumericConfig::default())
}

fn emit_function_with(func: &Node, cfg: NumericConfig) -> R<String> {
    let fn_id = func.attr_int("fn").ok_or_else(|| internal("function without an id"))?;
    let result = result_type(func)?;
    let mut e = Emitter::new(cfg, Some(result.clone()));
    let header = if func.kind == Kind::Module {
        "oly_slot olympus_main(void) {".to_string()
    } else {
        format!("static oly_slot oly_fn_{fn_id}(void) {{")
    };
    e.line(header);
    e.line(format!("FRAME({},\"{}\");", frame_size(func)?, frame_map(func)?));
    match func.kind {
        Kind::Module => e.block(&func.children)?,
        Kind::FunctionDef => {
            let (_, params, body) = func.def_parts();
            check_params(params)?;
            e.block(body)?;
        }
        Kind::LambdaExpr => {
            let n = func.param_count();
            check_params(&func.children[..n])?;
            let body = func.children.get(n).ok_or_else(|| internal("lambda without body"))?;
            let v = e.expr(body)?;
            e.line(format!("RET_{}({v});", suffix(&result)));
        }
        _ => return Err(internal("not a function")),
    }
    e.line(default_return(&result, &cfg));
    e.line("}".to_string());
    Ok(e.finish())
}

/// The whole translation unit: configuration, prototypes, function table,
/// every function body and the `olympus_main` entry.
pub fn emit_module(program: &Node) -> R<String> {
    if program.kind != Kind::Module {
        return Err(internal("emit_module needs a module"));
    }
    let cfg = NumericConfig::new(
        program.attr_int("int").unwrap_or(32) as u32,
        program.attr_int("real").unwrap_or(64) as u32,
    );
    let mut funcs = Vec::new();
    collect_functions(program, &mut funcs);
    funcs.sort_by_key(|f| f.attr_int("fn").unwrap_or(0));

    let mut out = String::new();
    out.push_str("/* Olympus abstract machine unit generated by vpyc */\n");
    for (name, on) in [("OLYMPUS_INT64", cfg.int_bits == 64), ("OLYMPUS_REAL32", cfg.real32())] {
        let _ = writeln!(out, "#ifndef {name}\n#define {name} {}\n#endif", u8::from(on));
    }
    out.push_str("#ifndef OLYMPUS_HEAP_BYTES\n#define OLYMPUS_HEAP_BYTES 8388608\n#endif\n");
    out.push_str("#include \"olympus.h\"\n\n");
    for f in &funcs {
        let _ = writeln!(out, "static oly_slot oly_fn_{}(void);", f.attr_int("fn").unwrap_or(0));
    }
    let count = funcs.last().and_then(|f| f.attr_int("fn")).unwrap_or(0) + 1;
    out.push_str("const oly_function oly_functions[] = {\n{olympus_main, 0},\n");
    for id in 1..count {
        match funcs.iter().find(|f| f.attr_int("fn") == Some(id)) {
            Some(f) => {
                let _ = writeln!(out, "{{oly_fn_{id}, {}}},", f.attr_int("depth").unwrap_or(0));
            }
            None => out.push_str("{0, 0},\n"),
        }
    }
    out.push_str("};\n");
    let _ = writeln!(out, "const int oly_function_count = {count};");
    let _ = writeln!(out, "const long oly_heap_bytes = OLYMPUS_HEAP_BYTES;\n");
    for f in &funcs {
        out.push_str(&emit_function_with(f, cfg)?);
        out.push('\n');
    }
    out.push_str(&emit_function_with(program, cfg)?);
    Ok(out)
}

fn collect_functions<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    for c in &n.children {
        if matches!(c.kind, Kind::FunctionDef | Kind::LambdaExpr) {
            out.push(c);
        }
        collect_functions(c, out);
    }
}

fn result_type(func: &Node) -> R<FrozenType> {
    let ty = match func.kind {
        Kind::Module => return Ok(FrozenType::None),
        Kind::FunctionDef => func.def_parts().0.and_then(|t| t.ty.clone()),
        _ => func.ty.clone(),
    };
    match ty {
        Some(FrozenType::Lambda { result, .. }) => Ok(*result),
        _ => Err(internal(format!("untyped function at {:?}", func.loc))),
    }
}

fn frame_size(func: &Node) -> R<i64> {
    func.attr_int("frame")
        .ok_or_else(|| internal("function without frame size"))
}

/// One char per slot: `h` marks a heap handle the collector must trace.
fn frame_map(func: &Node) -> R<String> {
    let layout = func.attr_str("layout").unwrap_or("");
    let mut map = String::new();
    for t in layout.split(';').filter(|s| !s.is_empty()) {
        let ty = FrozenType::parse(t).ok_or_else(|| internal(format!("bad layout entry `{t}`")))?;
        map.push(match ty {
            FrozenType::Real => 'r',
            t if t.is_compound() => 'h',
            _ => 'i',
        });
    }
    if map.len() as i64 != frame_size(func)? {
        return Err(internal("layout does not match frame size"));
    }
    Ok(map)
}

fn check_params(params: &[Node]) -> R<()> {
    for (i, p) in params.iter().enumerate() {
        if p.slot != Some(SlotRef::new(0, i as u32)) {
            return Err(internal(format!("parameter `{}` is not at offset {i}", p.name_str())));
        }
    }
    Ok(())
}

fn default_return(result: &FrozenType, cfg: &NumericConfig) -> String {
    match result {
        FrozenType::None => "RET_N;".to_string(),
        FrozenType::Real => format!("RET_R({});", real_lit(0.0, cfg)),
        t => format!("RET_{}(0);", suffix(t)),
    }
}

/// Mnemonic type suffix; bools share the int forms.
fn suffix(t: &FrozenType) -> &'static str {
    match t {
        FrozenType::Int | FrozenType::Bool => "I",
        FrozenType::Real => "R",
        FrozenType::Str => "S",
        FrozenType::Complex => "C",
        FrozenType::Vector(_) => "V",
        FrozenType::Lambda { .. } => "L",
        FrozenType::None => "N",
    }
}

/// Print descriptor for vector printing: one letter per nesting level.
fn descriptor(t: &FrozenType) -> String {
    match t {
        FrozenType::Int => "i".into(),
        FrozenType::Bool => "b".into(),
        FrozenType::Real => "r".into(),
        FrozenType::Str => "s".into(),
        FrozenType::Complex => "c".into(),
        FrozenType::Vector(e) => format!("v{}", descriptor(e)),
        FrozenType::Lambda { .. } => "l".into(),
        FrozenType::None => "n".into(),
    }
}

fn int_lit(v: i64, cfg: &NumericConfig) -> String {
    let v = cfg.wrap(v);
    if v == cfg.int_min() {
        "OLY_INT_MIN".into()
    } else if v < 0 {
        format!("({v})")
    } else {
        v.to_string()
    }
}

fn real_lit(v: f64, cfg: &NumericConfig) -> String {
    let v = cfg.real_literal(v);
    if v.is_nan() {
        return "OLY_NAN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "OLY_INF".into() } else { "(-OLY_INF)".into() };
    }
    let mut text = if cfg.real32() {
        crate::format::format_real32(v as f32)
    } else {
        format_real(v)
    };
    if cfg.real32() {
        text.push('f');
    }
    if text.starts_with('-') {
        format!("({text})")
    } else {
        text
    }
}

fn c_string(s: &str) -> String {
    let mut out = String::from("\"");
    for b in s.bytes() {
        match b {
            b'"' => out.push_str("\\\""),
            b'\\' => out.push_str("\\\\"),
            0x20..=0x7e => out.push(b as char),
            _ => {
                let _ = write!(out, "\\{b:03o}");
            }
        }
    }
    out.push('"');
    out
}

struct Emitter {
    cfg: NumericConfig,
    /// Result type of the enclosing function, when known.
    ret: Option<FrozenType>,
    lines: Vec<String>,
}

impl Emitter {
    fn new(cfg: NumericConfig, ret: Option<FrozenType>) -> Self {
        Emitter {
            cfg,
            ret,
            lines: Vec::new(),
        }
    }

    fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    fn block(&mut self, stmts: &[Node]) -> R<()> {
        stmts.iter().try_for_each(|s| self.stmt(s))
    }

    fn ty<'a>(&self, n: &'a Node) -> R<&'a FrozenType> {
        n.ty.as_ref()
            .ok_or_else(|| internal(format!("untyped {} at {:?}", n.kind.keyword(), n.loc)))
    }

    fn slot(&self, n: &Node) -> R<SlotRef> {
        n.slot
            .ok_or_else(|| internal(format!("unslotted `{}` at {:?}", n.name_str(), n.loc)))
    }

    fn stmt(&mut self, n: &Node) -> R<()> {
        match n.kind {
            Kind::Declaration => {
                let slot = self.slot(n)?;
                let t = match self.ty(n)? {
                    FrozenType::Bool => "B",
                    t => suffix(t),
                };
                self.line(format!("DECL{t}({});", slot.offset));
            }
            Kind::Assign => {
                let target = &n.children[0];
                let addr = emit_address(self.slot(target)?);
                let v = self.expr(&n.children[1])?;
                let t = suffix(self.ty(target)?);
                self.line(format!("ST{t}({addr},{v});"));
            }
            Kind::IndexAssign => {
                let elem = self
                    .ty(&n.children[0])?
                    .elem()
                    .ok_or_else(|| internal("index store into a non-vector"))?;
                let t = suffix(elem);
                let addr = self.addr_of(&n.children[0])?;
                let i = self.expr(&n.children[1])?;
                let v = self.expr(&n.children[2])?;
                self.line(format!("STA{t}({addr},{i},{v});"));
            }
            Kind::AttrAssign => {
                let part = if n.name_str() == "imag" { "CI" } else { "CR" };
                let addr = self.addr_of(&n.children[0])?;
                let v = self.expr(&n.children[1])?;
                self.line(format!("ST{part}({addr},{v});"));
            }
            Kind::If => {
                let (cond, then, els) = n.if_parts();
                let c = self.expr(cond)?;
                self.line(format!("IF({c})"));
                self.block(then)?;
                if !els.is_empty() {
                    self.line("ELSE".into());
                    self.block(els)?;
                }
                self.line("END".into());
            }
            Kind::While => {
                let c = self.expr(&n.children[0])?;
                self.line(format!("WHILE({c})"));
                self.block(&n.children[1..])?;
                self.line("END".into());
            }
            Kind::ForRange => {
                let var = &n.children[0];
                if !var.is_native() {
                    return Err(internal("for loop reached the backend without lowering"));
                }
                let s = self.expr(&n.children[1])?;
                let e = self.expr(&n.children[2])?;
                let st = self.expr(&n.children[3])?;
                self.line(format!("FOR({},{s},{e},{st})", native_name(var.name_str())));
                self.block(&n.children[4..])?;
                self.line("END".into());
            }
            Kind::Return => match n.children.first() {
                None => self.line("RET_N;".into()),
                Some(v) => {
                    let t = match &self.ret {
                        Some(t) => suffix(t),
                        None => suffix(self.ty(v)?),
                    };
                    let v = self.expr(v)?;
                    self.line(format!("RET_{t}({v});"));
                }
            },
            Kind::Nonlocal | Kind::Pass => {}
            Kind::Print => {
                if n.children.is_empty() {
                    self.line("PRINT_NL();".into());
                }
                let last = n.children.len().saturating_sub(1);
                for (i, a) in n.children.iter().enumerate() {
                    let word = if i == last { "PRINT" } else { "PUT" };
                    let t = self.ty(a)?.clone();
                    let v = self.expr(a)?;
                    let call = match &t {
                        FrozenType::Bool => format!("{word}_B({v})"),
                        FrozenType::Vector(_) => format!("{word}_V({v},\"{}\")", descriptor(&t)),
                        FrozenType::Lambda { .. } | FrozenType::None => {
                            return Err(internal("unprintable value"));
                        }
                        t => format!("{word}_{}({v})", suffix(t)),
                    };
                    self.line(format!("{call};"));
                    if i != last {
                        self.line("PUT_SP();".into());
                    }
                }
            }
            Kind::ExprStmt => {
                for c in &n.children {
                    let v = self.expr(c)?;
                    self.line(format!("EVAL({v});"));
                }
            }
            Kind::FunctionDef => {
                let target = n.def_parts().0.ok_or_else(|| internal("def without binding target"))?;
                let addr = emit_address(self.slot(target)?);
                let id = n.attr_int("fn").ok_or_else(|| internal("def without id"))?;
                self.line(format!("STL({addr},MKLAMBDA({id}));"));
            }
            other => return Err(internal(format!("`{}` is not a statement", other.keyword()))),
        }
        Ok(())
    }

    /// Address of a slot holding a compound value; temporaries get a
    /// scratch slot.
    fn addr_of(&self, n: &Node) -> R<String> {
        if n.kind == Kind::Identifier && !n.is_native() {
            Ok(emit_address(self.slot(n)?))
        } else {
            Ok(format!("TMPA({})", self.expr(n)?))
        }
    }

    /// Promote a numeric operand to complex.
    fn complex(&self, n: &Node) -> R<String> {
        let v = self.expr(n)?;
        Ok(match self.ty(n)? {
            FrozenType::Complex => v,
            _ => format!("MKC({v},{})", real_lit(0.0, &self.cfg)),
        })
    }

    fn expr(&self, n: &Node) -> R<String> {
        let cfg = &self.cfg;
        Ok(match n.kind {
            Kind::Identifier => {
                if n.is_native() {
                    return Ok(native_name(n.name_str()));
                }
                let addr = emit_address(self.slot(n)?);
                format!("LD{}({addr})", suffix(self.ty(n)?))
            }
            Kind::Literal => match n.lit.as_ref().ok_or_else(|| internal("empty literal"))? {
                Literal::Int(v) => int_lit(*v, cfg),
                Literal::Real(v) => real_lit(*v, cfg),
                Literal::Bool(b) => if *b { "TRUE" } else { "FALSE" }.into(),
                Literal::Str(s) => format!("SLIT({},{})", c_string(s), s.len()),
                Literal::Imag(v) => format!("MKC({},{})", real_lit(0.0, cfg), real_lit(*v, cfg)),
                Literal::None => return Err(internal("None has no value")),
            },
            Kind::ListLit => {
                let elem = self.ty(n)?.elem().ok_or_else(|| internal("list literal type"))?;
                let t = suffix(elem);
                let items = n
                    .children
                    .iter()
                    .map(|c| Ok(format!("ARG_{t}({})", self.expr(c)?)))
                    .collect::<R<Vec<_>>>()?;
                format!("MKVEC_{t}(ARGS({}))", items.join(","))
            }
            Kind::BinOp => self.binop(n)?,
            Kind::UnOp => {
                let a = self.expr(&n.children[0])?;
                match (n.op, self.ty(&n.children[0])?) {
                    (Some(Op::Not), _) => format!("(!{a})"),
                    (_, FrozenType::Complex) => format!("CNEG({a})"),
                    _ => format!("(-{a})"),
                }
            }
            Kind::Compare => {
                let op = n.op.ok_or_else(|| internal("comparison without operator"))?;
                let (x, y) = (&n.children[0], &n.children[1]);
                let (tx, ty) = (self.ty(x)?, self.ty(y)?);
                let eq = op == Op::Eq;
                if *tx == FrozenType::Str {
                    let (a, b) = (self.expr(x)?, self.expr(y)?);
                    match op {
                        Op::Eq => format!("EQS({a},{b})"),
                        Op::Ne => format!("(!EQS({a},{b}))"),
                        _ => format!("(CMPS({a},{b}){}0)", op.symbol()),
                    }
                } else if *tx == FrozenType::Complex || *ty == FrozenType::Complex {
                    let c = format!("CEQ({},{})", self.complex(x)?, self.complex(y)?);
                    if eq {
                        c
                    } else {
                        format!("(!{c})")
                    }
                } else {
                    format!("({}{}{})", self.expr(x)?, op.symbol(), self.expr(y)?)
                }
            }
            Kind::BoolOp => {
                let sym = if n.op == Some(Op::And) { "&&" } else { "||" };
                format!("({}{sym}{})", self.expr(&n.children[0])?, self.expr(&n.children[1])?)
            }
            Kind::Call => match n.attr_str("builtin") {
                Some(b) => self.builtin(n, b)?,
                None => {
                    let callee = n.children.first().ok_or_else(|| internal("call without callee"))?;
                    let (params, result) = match self.ty(callee)? {
                        FrozenType::Lambda { params, result } => (params.clone(), (**result).clone()),
                        _ => return Err(internal("call of a non-lambda")),
                    };
                    let f = self.expr(callee)?;
                    let args = &n.children[1..];
                    if args.len() != params.len() {
                        return Err(internal("arity mismatch"));
                    }
                    let list = if args.is_empty() {
                        "NOARGS".to_string()
                    } else {
                        let items = args
                            .iter()
                            .zip(&params)
                            .map(|(a, p)| Ok(format!("ARG_{}({})", suffix(p), self.expr(a)?)))
                            .collect::<R<Vec<_>>>()?;
                        format!("ARGS({})", items.join(","))
                    };
                    format!("APPLY_{}({f},{list})", suffix(&result))
                }
            },
            Kind::Index => {
                let (c, i) = (&n.children[0], &n.children[1]);
                let idx = self.expr(i)?;
                match self.ty(c)? {
                    FrozenType::Str => format!("IDXS({},{idx})", self.expr(c)?),
                    FrozenType::Vector(e) => format!("LDA{}({},{idx})", suffix(e), self.addr_of(c)?),
                    _ => return Err(internal("index of a non-container")),
                }
            }
            Kind::Attr => {
                let part = if n.name_str() == "imag" { "CI" } else { "CR" };
                format!("LD{part}({})", self.addr_of(&n.children[0])?)
            }
            Kind::Ref => format!("ID({})", self.ref_addr(&n.children[0])?),
            Kind::LambdaExpr => {
                let id = n.attr_int("fn").ok_or_else(|| internal("lambda without id"))?;
                format!("MKLAMBDA({id})")
            }
            other => return Err(internal(format!("`{}` is not an expression", other.keyword()))),
        })
    }

    fn ref_addr(&self, n: &Node) -> R<String> {
        if n.kind != Kind::Identifier || n.is_native() {
            return Err(internal("reference to something without a slot"));
        }
        Ok(emit_address(self.slot(n)?))
    }

    fn binop(&self, n: &Node) -> R<String> {
        let op = n.op.ok_or_else(|| internal("binop without operator"))?;
        let (x, y) = (&n.children[0], &n.children[1]);
        let rt = self.ty(n)?;
        let infix = |me: &Self| -> R<String> { Ok(format!("({}{}{})", me.expr(x)?, op.symbol(), me.expr(y)?)) };
        let call = |me: &Self, name: &str| -> R<String> { Ok(format!("{name}({},{})", me.expr(x)?, me.expr(y)?)) };
        // Repetition takes (sequence, count) whichever side the count is on.
        let rep = |me: &Self, name: &str| -> R<String> {
            let (seq, count) = if *me.ty(x)? == FrozenType::Int { (y, x) } else { (x, y) };
            Ok(format!("{name}({},{})", me.expr(seq)?, me.expr(count)?))
        };
        match (rt, op) {
            (FrozenType::Int, Op::Add | Op::Sub | Op::Mul) => infix(self),
            (FrozenType::Int, Op::Mod) => call(self, "MODI"),
            (FrozenType::Int, Op::Pow) => call(self, "POWI"),
            (FrozenType::Real, Op::Add | Op::Sub | Op::Mul) => infix(self),
            (FrozenType::Real, Op::Div) => call(self, "DIVR"),
            (FrozenType::Real, Op::Mod) => call(self, "MODR"),
            (FrozenType::Real, Op::Pow) => call(self, "POWR"),
            (FrozenType::Str, Op::Add) => call(self, "CAT"),
            (FrozenType::Str, Op::Mul) => rep(self, "REPS"),
            (FrozenType::Vector(_), Op::Add) => call(self, "VCAT"),
            (FrozenType::Vector(_), Op::Mul) => rep(self, "VREP"),
            (FrozenType::Complex, Op::Add | Op::Sub | Op::Mul | Op::Div) => {
                let name = match op {
                    Op::Add => "CADD",
                    Op::Sub => "CSUB",
                    Op::Mul => "CMUL",
                    _ => "CDIV",
                };
                Ok(format!("{name}({},{})", self.complex(x)?, self.complex(y)?))
            }
            _ => Err(internal(format!("no mnemonic for {} on {rt}", op.symbol()))),
        }
    }

    fn builtin(&self, n: &Node, name: &str) -> R<String> {
        if name == "input" {
            return Ok("INPUT()".into());
        }
        let arg = n.children.first().ok_or_else(|| internal("builtin without argument"))?;
        if name == "id" {
            return Ok(format!("ID({})", self.ref_addr(arg)?));
        }
        let t = self.ty(arg)?;
        let a = self.expr(arg)?;
        use FrozenType as T;
        Ok(match (name, t) {
            ("len", T::Str) => format!("LENS({a})"),
            ("len", _) => format!("LEN({a})"),
            ("int", T::Real) => format!("INT_R({a})"),
            ("int", T::Str) => format!("INT_S({a})"),
            ("int", _) => a,
            ("float", T::Real) => a,
            ("float", T::Str) => format!("REAL_S({a})"),
            ("float", _) => format!("REAL_I({a})"),
            ("str", T::Str) => a,
            ("str", T::Int) => format!("STR_I({a})"),
            ("str", T::Real) => format!("STR_R({a})"),
            ("str", T::Bool) => format!("STR_B({a})"),
            ("str", T::Complex) => format!("STR_C({a})"),
            ("abs", T::Int) => format!("ABSI({a})"),
            ("abs", T::Real) => format!("ABSR({a})"),
            ("abs", T::Complex) => format!("ABSC({a})"),
            _ => return Err(internal(format!("no mnemonic for {name}() on {t}"))),
        })
    }
}

fn native_name(name: &str) -> String {
    format!("$iter_{name}$")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::lower_for_range;
    use crate::parser::parse_source;
    use crate::typeinfer::infer;

    fn unit(src: &str) -> String {
        let m = lower_for_range(&infer(&parse_source(src).unwrap()).unwrap()).unwrap();
        emit_module(&m).unwrap()
    }

    #[test]
    fn addresses() {
        assert_eq!(emit_address(SlotRef::new(0, 1)), "ADDRL(1)");
        assert_eq!(emit_address(SlotRef::new(1, 2)), "ADDRF(1,2)");
        assert_eq!(emit_address(SlotRef::new(4, 1)), "ADDRF(4,1)");
    }

    #[test]
    fn foreign_complex_store() {
        let u = unit(
            "def outer():\n    a = 1\n    b = 2\n    c = 1.0 + 2.0j\n    def inner():\n        c.real = 4.3\n    inner()\n    print(c)\nouter()\n",
        );
        assert!(u.contains("\nSTCR(ADDRF(1,2),4.3);\n"), "{u}");
    }

    #[test]
    fn element_store() {
        let u = unit("i = 3\nv = [0] * 5\nv[i] = 42\n");
        assert!(u.contains("\nSTAI(ADDRL(1),LDI(ADDRL(0)),42);\n"), "{u}");
    }

    #[test]
    fn smallest_function() {
        let m = infer(&parse_source("def f():\n    return 1\nprint(f())\n").unwrap()).unwrap();
        let def = m.children.iter().find(|c| c.kind == Kind::FunctionDef).unwrap();
        let text = emit_function(def).unwrap();
        assert!(
            text.starts_with("static oly_slot oly_fn_1(void) {\nFRAME(0,\"\");\nRET_I(1);\n"),
            "{text}"
        );
    }

    #[test]
    fn empty_module() {
        let u = unit("");
        assert!(
            u.contains("oly_slot olympus_main(void) {\nFRAME(0,\"\");\nRET_N;\n}"),
            "{u}"
        );
        assert!(super::super::isa::unknown_mnemonics(&u).is_empty());
    }

    #[test]
    fn references_are_bare_addresses() {
        let u = unit("a = 1\nx = &a\nprint(id(x))\n");
        assert!(u.contains("STI(ADDRL(1),ID(ADDRL(0)));"), "{u}");
        assert!(u.contains("PRINT_I(ID(ADDRL(1)));"), "{u}");
    }

    #[test]
    fn literals() {
        let cfg = NumericConfig::default();
        assert_eq!(int_lit(-5, &cfg), "(-5)");
        assert_eq!(int_lit(i32::MIN as i64, &cfg), "OLY_INT_MIN");
        assert_eq!(real_lit(10.0, &cfg), "10.0");
        assert_eq!(real_lit(f64::INFINITY, &cfg), "OLY_INF");
        assert_eq!(real_lit(0.1, &NumericConfig::new(32, 32)), "0.1f");
        assert_eq!(c_string("a\"\n"), "\"a\\\"\\012\"");
    }
}
