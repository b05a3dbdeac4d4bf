use super::*;
use crate::parser::parse_source;
use crate::sexpr::serialize_ast;

fn typed(src: &str) -> Node {
    let m = parse_source(src).expect("parses");
    infer(&m).unwrap_or_else(|e| panic!("{e}"))
}

fn fails(src: &str) -> InferError {
    let m = parse_source(src).expect("parses");
    infer(&m).expect_err("should not type")
}

fn find<'a>(n: &'a Node, pred: &dyn Fn(&Node) -> bool) -> Vec<&'a Node> {
    let mut out = Vec::new();
    fn go<'a>(n: &'a Node, pred: &dyn Fn(&Node) -> bool, out: &mut Vec<&'a Node>) {
        if pred(n) {
            out.push(n);
        }
        for c in &n.children {
            go(c, pred, out);
        }
    }
    go(n, pred, &mut out);
    out
}

fn decls<'a>(n: &'a Node, name: &str) -> Vec<&'a Node> {
    find(n, &|x| x.kind == Kind::Declaration && x.name_str() == name)
}

#[test]
fn literal_assignment() {
    let m = typed("a = 3\n");
    let text = serialize_ast(&m);
    assert!(text.contains(r#"(ident "a" :loc 1:1 :type int :slot L0.0)"#), "{text}");
    assert!(!text.contains(":type ?"));
    assert_eq!(m.attr_int("frame"), Some(1));
}

#[test]
fn retype_creates_new_declaration() {
    let m = typed("a = 3\nprint(a)\na = [1, 2]\nprint(a)\n");
    let ds = decls(&m, "a");
    assert_eq!(ds.len(), 2);
    assert_eq!(ds[0].ty, Some(FrozenType::Int));
    assert_eq!(ds[0].slot, Some(SlotRef::new(0, 0)));
    assert_eq!(ds[1].ty, Some(FrozenType::vector(FrozenType::Int)));
    assert_eq!(ds[1].slot, Some(SlotRef::new(0, 1)));
    let prints: Vec<_> = find(&m, &|x| x.kind == Kind::Print);
    assert_eq!(prints[0].children[0].slot, Some(SlotRef::new(0, 0)));
    assert_eq!(prints[1].children[0].slot, Some(SlotRef::new(0, 1)));
}

#[test]
fn constructor_pins_type() {
    let m = typed("x = int(input())\n");
    assert_eq!(decls(&m, "x")[0].ty, Some(FrozenType::Int));
}

#[test]
fn real_promotion_retypes() {
    let m = typed("a = 3\na = a + 0.5\nprint(a)\n");
    let ds = decls(&m, "a");
    assert_eq!(ds.len(), 2);
    assert_eq!(ds[1].ty, Some(FrozenType::Real));
    assert!(check_frozen(&m).is_empty());
}

#[test]
fn foreign_complex_part() {
    let src = "def outer():\n    a = 1\n    b = 2\n    c = 1.0 + 2.0j\n    def inner():\n        c.real = 4.3\n    inner()\n    print(c)\nouter()\n";
    let m = typed(src);
    let store = find(&m, &|x| x.kind == Kind::AttrAssign)[0];
    assert_eq!(store.children[0].slot, Some(SlotRef::new(1, 2)));
}

#[test]
fn nonlocal_binds_enclosing_function() {
    let src = "def f():\n    n = 0\n    def g():\n        nonlocal n\n        n = n + 1\n    g()\n    g()\n    print(n)\nf()\n";
    let m = typed(src);
    let inner = find(&m, &|x| x.kind == Kind::Assign && x.children[0].name_str() == "n");
    let levels: Vec<u32> = inner.iter().map(|a| a.children[0].slot.unwrap().level).collect();
    assert_eq!(levels, vec![0, 1]);
}

#[test]
fn nonlocal_without_binding() {
    let e = fails("def f():\n    def g():\n        nonlocal q\n        q = 1\n    g()\nf()\n");
    assert!(matches!(e, InferError::Nonlocal { .. }), "{e}");
    let e = fails("x = 1\ndef g():\n    nonlocal x\n    x = 2\ng()\n");
    assert!(matches!(e, InferError::Nonlocal { .. }), "{e}");
}

#[test]
fn unbound_name() {
    let e = fails("print(y)\n");
    assert!(matches!(e, InferError::Name { .. }), "{e}");
    let e = fails("def f():\n    print(z)\n    z = 1\nf()\n");
    assert!(e.to_string().contains("referenced before assignment"), "{e}");
}

#[test]
fn loop_carried_retype_rejected() {
    let e = fails("a = 1\nwhile a < 3:\n    a = \"s\"\n");
    assert!(e.to_string().contains("inside a loop"), "{e}");
}

#[test]
fn branch_join_conflict() {
    let e = fails("a = 1\nif a > 0:\n    a = \"s\"\nelse:\n    a = 2\n");
    assert!(e.to_string().contains("one branch"), "{e}");
    let m = typed("a = 1\nif a > 0:\n    a = \"s\"\nelse:\n    a = \"t\"\nprint(a)\n");
    assert_eq!(decls(&m, "a").len(), 2);
}

#[test]
fn captured_retype_rejected() {
    let e = fails("x = 1\ndef f():\n    return x\nprint(f())\nx = \"s\"\n");
    assert!(e.to_string().contains("captured"), "{e}");
}

#[test]
fn string_times_string() {
    let e = fails("a = \"x\" * \"y\"\n");
    assert!(matches!(e, InferError::Type { .. }));
}

#[test]
fn recursion_after_base_case() {
    let m = typed("def fact(n):\n    if n <= 1:\n        return 1\n    return n * fact(n - 1)\nprint(fact(5))\n");
    let def = find(&m, &|x| x.kind == Kind::FunctionDef)[0];
    assert_eq!(def.attr_int("depth"), Some(1));
    assert_eq!(def.attr_int("fn"), Some(1));
    let e = fails("def f(n):\n    return f(n - 1)\nprint(f(3))\n");
    assert!(e.to_string().contains("annotate"), "{e}");
    typed("def f(n) -> int:\n    if n == 0:\n        return 0\n    return f(n - 1)\nprint(f(3))\n");
}

#[test]
fn uncalled_def_is_dropped() {
    let m = typed("def f():\n    return 1\nx = 2\n");
    assert!(find(&m, &|x| x.kind == Kind::FunctionDef).is_empty());
    assert_eq!(decls(&m, "x")[0].slot, Some(SlotRef::new(0, 0)));
    assert_eq!(m.attr_int("frame"), Some(1));
}

#[test]
fn never_called_lambda_is_an_error() {
    let e = fails("f = lambda x: x\n");
    assert!(e.to_string().contains("cannot infer type"), "{e}");
}

#[test]
fn lambda_and_higher_order() {
    let m = typed("def twice(f, x):\n    return f(f(x))\nprint(twice(lambda y: y * 2, 3))\n");
    let lam = find(&m, &|x| x.kind == Kind::LambdaExpr)[0];
    assert_eq!(lam.ty, Some(FrozenType::lambda(vec![FrozenType::Int], FrozenType::Int)));
    assert_eq!(lam.attr_int("depth"), Some(1));
}

#[test]
fn escaping_closure_rejected() {
    let e = fails("def mk():\n    return lambda x: x\nf = mk()\n");
    assert!(e.to_string().contains("escape"), "{e}");
}

#[test]
fn index_by_real_is_a_frozen_diagnostic() {
    let m = typed("v = [1, 2]\nprint(v[1.5])\n");
    let d = check_frozen(&m);
    assert_eq!(d.len(), 1, "{d:?}");
    assert_eq!(d[0].message, "index must be int");
}

#[test]
fn loop_variable_rules() {
    let e = fails("i = 0\nfor i in range(3):\n    pass\n");
    assert!(e.to_string().contains("shadows"), "{e}");
    let e = fails("for i in range(3):\n    def f():\n        return i\n    print(f())\n");
    assert!(e.to_string().contains("captured"), "{e}");
    typed("for i in range(3):\n    print(i)\nfor i in range(2):\n    print(i)\n");
}

#[test]
fn deterministic_and_dense() {
    let src = "a = 1\nb = 2.0\ndef f(x):\n    y = x + 1\n    y = y * 0.5\n    return y\nprint(f(a))\nc = \"s\"\n";
    let m1 = typed(src);
    let m2 = typed(src);
    assert_eq!(serialize_ast(&m1), serialize_ast(&m2));
    let def = find(&m1, &|x| x.kind == Kind::FunctionDef)[0];
    assert_eq!(def.attr_int("frame"), Some(3));
    assert_eq!(def.attr_str("layout"), Some("int;int;real"));
    assert_eq!(m1.attr_int("frame"), Some(4));
    assert!(resolve_scopes(&m1).is_ok());
}

#[test]
fn resolve_scopes_rejects_bad_slot() {
    let mut m = typed("a = 1\nprint(a)\n");
    m.children[2].children[0].slot = Some(SlotRef::new(0, 7));
    assert!(matches!(resolve_scopes(&m), Err(InferError::Name { .. })));
}
