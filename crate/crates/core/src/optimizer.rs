//! Phase 3: loop lowering and constant folding.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ast::{Atom, FrozenType, Kind, Literal, Loc, Node, Op};
use crate::config::NumericConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptError {
    #[error("{loc}: iterator mutation: loop variable `{name}` is immutable inside its loop")]
    IteratorMutation { loc: Loc, name: String },
    #[error("{loc}: loop variable `{name}` has no address")]
    IteratorReference { loc: Loc, name: String },
    #[error("{loc}: range() step must not be zero")]
    ZeroStep { loc: Loc },
    #[error("{loc}: loop variable `{name}` is referenced outside its function")]
    IteratorCapture { loc: Loc, name: String },
}

/// Mark every for-range induction variable backend-native: it leaves the
/// frame layout and reads in the body become native identifiers.
pub fn lower_for_range(root: &Node) -> Result<Node, OptError> {
    let mut out = root.clone();
    lower_scope(&mut out)?;
    Ok(out)
}

fn is_scope(n: &Node) -> bool {
    matches!(n.kind, Kind::Module | Kind::FunctionDef | Kind::LambdaExpr)
}

fn lower_scope(scope: &mut Node) -> Result<(), OptError> {
    let mut removed = BTreeSet::new();
    let skip = usize::from(scope.def_has_target());
    for child in &mut scope.children[skip..] {
        lower_in(child, &mut removed)?;
    }
    if removed.is_empty() {
        return Ok(());
    }
    // Drop the induction variables' declarations and renumber densely.
    drop_decls(scope, &removed);
    let map = |o: u32| o - removed.range(..o).count() as u32;
    for child in &mut scope.children[skip..] {
        remap(child, 0, &map);
    }
    let frame = scope.attr_int("frame").unwrap_or(0) - removed.len() as i64;
    scope.set_attr("frame", Atom::Int(frame));
    if let Some(layout) = scope.attr_str("layout") {
        let kept: Vec<&str> = layout
            .split(';')
            .filter(|s| !s.is_empty())
            .enumerate()
            .filter(|(i, _)| !removed.contains(&(*i as u32)))
            .map(|(_, s)| s)
            .collect();
        let joined = kept.join(";");
        scope.set_attr("layout", Atom::Str(joined));
    }
    Ok(())
}

/// Lower loops in one node of the current scope; nested functions are
/// lowered as scopes of their own.
fn lower_in(n: &mut Node, removed: &mut BTreeSet<u32>) -> Result<(), OptError> {
    if is_scope(n) {
        return lower_scope(n);
    }
    if n.kind == Kind::ForRange && !n.is_native() {
        if let [.., step] = &n.children[1..4] {
            if step.kind == Kind::Literal && matches!(step.lit, Some(Literal::Int(0))) {
                return Err(OptError::ZeroStep {
                    loc: step.loc.or(n.loc).unwrap_or_default(),
                });
            }
        }
        let var = &mut n.children[0];
        if let Some(slot) = var.slot {
            let name = var.name_str().to_string();
            var.slot = None;
            var.set_attr("native", Atom::Int(1));
            n.set_attr("native", Atom::Int(1));
            removed.insert(slot.offset);
            for c in &mut n.children[1..] {
                nativize(c, &name, slot.offset, 0)?;
            }
        }
    }
    for c in &mut n.children {
        lower_in(c, removed)?;
    }
    Ok(())
}

/// Rewrite reads of the induction variable (`name` at `offset`, `depth`
/// function levels below its scope) to the native name.
fn nativize(n: &mut Node, name: &str, offset: u32, depth: u32) -> Result<(), OptError> {
    let hit = |x: &Node| {
        x.kind == Kind::Identifier
            && x.name_str() == name
            && x.slot.is_some_and(|s| s.offset == offset && s.level == depth)
    };
    let loc = n.loc.unwrap_or_default();
    match n.kind {
        Kind::Assign if hit(&n.children[0]) => {
            return Err(OptError::IteratorMutation {
                loc,
                name: name.to_string(),
            });
        }
        Kind::Ref if hit(&n.children[0]) => {
            return Err(OptError::IteratorReference {
                loc,
                name: name.to_string(),
            });
        }
        Kind::Call if n.attr_str("builtin") == Some("id") && n.children.first().is_some_and(hit) => {
            return Err(OptError::IteratorReference {
                loc,
                name: name.to_string(),
            });
        }
        Kind::Identifier if hit(n) => {
            if depth > 0 {
                return Err(OptError::IteratorCapture {
                    loc,
                    name: name.to_string(),
                });
            }
            n.slot = None;
            n.set_attr("native", Atom::Int(1));
            return Ok(());
        }
        _ => {}
    }
    let nested = matches!(n.kind, Kind::FunctionDef | Kind::LambdaExpr);
    let skip = usize::from(n.def_has_target());
    for (i, c) in n.children.iter_mut().enumerate() {
        let d = if nested && i >= skip { depth + 1 } else { depth };
        nativize(c, name, offset, d)?;
    }
    Ok(())
}

fn drop_decls(scope: &mut Node, removed: &BTreeSet<u32>) {
    let skip = usize::from(scope.def_has_target());
    let mut body = scope.children.split_off(skip);
    go_if_aware(&mut body, removed);
    scope.children.append(&mut body);
}

fn go_if_aware(list: &mut Vec<Node>, removed: &BTreeSet<u32>) {
    list.retain(|s| {
        !(s.kind == Kind::Declaration && s.slot.is_some_and(|sl| sl.level == 0 && removed.contains(&sl.offset)))
    });
    for s in list.iter_mut() {
        match s.kind {
            Kind::If => {
                let n = s.attr_int("then").unwrap_or(0) as usize;
                let mut rest = s.children.split_off(1);
                let mut els = rest.split_off(n);
                go_if_aware(&mut rest, removed);
                go_if_aware(&mut els, removed);
                s.set_attr("then", Atom::Int(rest.len() as i64));
                s.children.append(&mut rest);
                s.children.append(&mut els);
            }
            Kind::While => {
                let mut body = s.children.split_off(1);
                go_if_aware(&mut body, removed);
                s.children.append(&mut body);
            }
            Kind::ForRange => {
                let mut body = s.children.split_off(4);
                go_if_aware(&mut body, removed);
                s.children.append(&mut body);
            }
            _ => {}
        }
    }
}

/// Apply an offset map to every slot that addresses the scope `depth`
/// function levels out.
fn remap(n: &mut Node, depth: u32, map: &dyn Fn(u32) -> u32) {
    if matches!(n.kind, Kind::Identifier | Kind::Declaration) {
        if let Some(s) = n.slot.as_mut() {
            if s.level == depth {
                s.offset = map(s.offset);
            }
        }
    }
    let nested = matches!(n.kind, Kind::FunctionDef | Kind::LambdaExpr);
    let skip = usize::from(n.def_has_target());
    for (i, c) in n.children.iter_mut().enumerate() {
        let d = if nested && i >= skip { depth + 1 } else { depth };
        remap(c, d, map);
    }
}

/// Fold arithmetic whose operands are all literals, and `len` of literal
/// lists. Integer results wrap at the module's configured width.
pub fn fold_constants(root: &Node) -> Node {
    let cfg = NumericConfig::new(
        root.attr_int("int").unwrap_or(32) as u32,
        root.attr_int("real").unwrap_or(64) as u32,
    );
    let mut out = root.clone();
    fold(&mut out, &cfg);
    out
}

fn lit_node(lit: Literal, loc: Option<Loc>) -> Node {
    let ty = match lit {
        Literal::Int(_) => FrozenType::Int,
        Literal::Real(_) => FrozenType::Real,
        Literal::Bool(_) => FrozenType::Bool,
        _ => FrozenType::None,
    };
    let mut n = Node::literal(lit).with_loc(loc);
    n.ty = Some(ty);
    n
}

fn fold(n: &mut Node, cfg: &NumericConfig) {
    for c in &mut n.children {
        fold(c, cfg);
    }
    let folded = match n.kind {
        Kind::BinOp => fold_binop(n, cfg),
        Kind::UnOp => match (n.op, n.children[0].lit.as_ref()) {
            (Some(Op::Neg), Some(Literal::Int(v))) if n.children[0].kind == Kind::Literal => {
                Some(Literal::Int(cfg.wrap(v.wrapping_neg())))
            }
            (Some(Op::Neg), Some(Literal::Real(v))) if n.children[0].kind == Kind::Literal => {
                Some(Literal::Real(-cfg.real_literal(*v)))
            }
            _ => None,
        },
        Kind::Call if n.attr_str("builtin") == Some("len") => {
            let arg = &n.children[0];
            let pure = arg.kind == Kind::ListLit && arg.children.iter().all(|c| c.kind == Kind::Literal);
            pure.then_some(Literal::Int(arg.children.len() as i64))
        }
        _ => None,
    };
    if let Some(lit) = folded {
        *n = lit_node(lit, n.loc);
    }
}

fn fold_binop(n: &Node, cfg: &NumericConfig) -> Option<Literal> {
    let (a, b) = (&n.children[0], &n.children[1]);
    if a.kind != Kind::Literal || b.kind != Kind::Literal {
        return None;
    }
    let op = n.op?;
    match (a.lit.as_ref()?, b.lit.as_ref()?) {
        (Literal::Int(x), Literal::Int(y)) => {
            let (x, y) = (cfg.wrap(*x), cfg.wrap(*y));
            let v = match op {
                Op::Add => x.wrapping_add(y),
                Op::Sub => x.wrapping_sub(y),
                Op::Mul => x.wrapping_mul(y),
                Op::Mod => cfg.mod_int(x, y)?,
                Op::Pow => cfg.pow_int(x, y)?,
                Op::Div => {
                    if y == 0 {
                        return None;
                    }
                    return Some(Literal::Real(cfg.real(cfg.int_to_real(x) / cfg.int_to_real(y))));
                }
                _ => return None,
            };
            Some(Literal::Int(cfg.wrap(v)))
        }
        (x, y) => {
            let r = |l: &Literal| match l {
                Literal::Int(v) => Some(cfg.int_to_real(cfg.wrap(*v))),
                Literal::Real(v) => Some(cfg.real_literal(*v)),
                _ => None,
            };
            let (x, y) = (r(x)?, r(y)?);
            let v = match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
                Op::Div if y != 0.0 => x / y,
                _ => return None,
            };
            Some(Literal::Real(cfg.real(v)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::SlotRef;
    use crate::parser::parse_source;
    use crate::typeinfer::{check_frozen, infer, infer_with};

    fn typed(src: &str) -> Node {
        infer(&parse_source(src).unwrap()).unwrap()
    }

    fn first(n: &Node, k: Kind) -> Option<&Node> {
        if n.kind == k {
            return Some(n);
        }
        n.children.iter().find_map(|c| first(c, k))
    }

    #[test]
    fn loop_free_is_identity() {
        let m = typed("a = 1\nprint(a + 2)\n");
        assert!(lower_for_range(&m).unwrap().same(&m));
    }

    #[test]
    fn for_loop_goes_native() {
        let src = "n = 4\nfor i in range(0, n):\n    print(i)\nm = 2\nprint(m)\n";
        let low = lower_for_range(&typed(src)).unwrap();
        let f = first(&low, Kind::ForRange).unwrap();
        assert!(f.is_native() && f.children[0].is_native());
        let p = first(f, Kind::Print).unwrap();
        assert!(p.children[0].is_native());
        assert_eq!(low.attr_int("frame"), Some(2));
        assert_eq!(low.attr_str("layout"), Some("int;int"));
        let m_decl = low
            .children
            .iter()
            .find(|c| c.kind == Kind::Declaration && c.name_str() == "m")
            .unwrap();
        assert_eq!(m_decl.slot, Some(SlotRef::new(0, 1)));
        assert!(check_frozen(&low).is_empty());
        assert!(crate::typeinfer::resolve_scopes(&low).is_ok());
    }

    #[test]
    fn induction_write_is_rejected() {
        let m = typed("for i in range(3):\n    i = 0\n");
        assert!(matches!(lower_for_range(&m), Err(OptError::IteratorMutation { .. })));
    }

    #[test]
    fn zero_step_is_rejected() {
        let m = fold_constants(&typed("for i in range(0, 9, 1 - 1):\n    print(i)\n"));
        assert!(matches!(lower_for_range(&m), Err(OptError::ZeroStep { .. })));
    }

    #[test]
    fn folds_arithmetic() {
        let m = fold_constants(&typed(
            "print(2 + 3)\nprint(2 ** 31)\nprint(len([1, 2, 3]))\nprint(1 / 4)\n",
        ));
        let lits: Vec<Literal> = m.children.iter().map(|p| p.children[0].lit.clone().unwrap()).collect();
        assert!(lits[0].same(&Literal::Int(5)));
        assert!(lits[1].same(&Literal::Int(-2147483648)));
        assert!(lits[2].same(&Literal::Int(3)));
        assert!(lits[3].same(&Literal::Real(0.25)));
        let wide = infer_with(&parse_source("print(2 ** 31)\n").unwrap(), NumericConfig::new(64, 64)).unwrap();
        let f = fold_constants(&wide);
        assert!(f.children[0].children[0]
            .lit
            .as_ref()
            .unwrap()
            .same(&Literal::Int(1 << 31)));
    }

    #[test]
    fn leaves_traps_alone() {
        let m = fold_constants(&typed("print(1 % 0)\nprint(1.0 / 0.0)\n"));
        assert_eq!(m.children[0].children[0].kind, Kind::BinOp);
        assert_eq!(m.children[1].children[0].kind, Kind::BinOp);
    }
}
