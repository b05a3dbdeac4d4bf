use super::*;
use crate::config::NumericConfig;
use crate::optimizer::{fold_constants, lower_for_range};
use crate::parser::parse_source;
use crate::typeinfer::{infer, infer_with};

fn run_src(src: &str, stdin: &str) -> Outcome {
    let typed = infer(&parse_source(src).unwrap()).unwrap();
    interpret(&typed, stdin)
}

fn out(src: &str) -> String {
    let o = run_src(src, "");
    assert_eq!(o.exit, 0, "trap: {:?}", o.trap);
    o.stdout_text()
}

#[test]
fn basic_values() {
    let src = "x = 7\ny = 2.5\nprint(x % -3, -7 % 3, x / 2, y * 2, 2 ** 10, True, 'a' + 'b')\n";
    assert_eq!(out(src), "-2 2 3.5 5.0 1024 True ab\n");
}

#[test]
fn int32_wraps() {
    assert_eq!(out("x = 2147483647\nprint(x + 1)\n"), "-2147483648\n");
    let m = infer_with(
        &parse_source("x = 2147483647\nprint(x + 1)\n").unwrap(),
        NumericConfig::new(64, 64),
    )
    .unwrap();
    assert_eq!(interpret(&m, "").stdout_text(), "2147483648\n");
}

#[test]
fn vectors_alias() {
    let src = "a = [1, 2, 3]\nb = a\nb[0] = 9\nprint(a, len(a + b), [0] * 3)\n";
    assert_eq!(out(src), "[9, 2, 3] 6 [0, 0, 0]\n");
}

#[test]
fn nested_vector_repr() {
    assert_eq!(
        out("print([[1.5], [2.0]], ['a', \"it's\"])\n"),
        "[[1.5], [2.0]] ['a', \"it's\"]\n"
    );
}

#[test]
fn complex_values() {
    let src = "z = 1 + 2j\nw = z * z\nprint(w, w.real, abs(3 + 4j), z / 2j)\n";
    assert_eq!(out(src), "(-3+4j) -3.0 5.0 (1-0.5j)\n");
}

#[test]
fn complex_attribute_store_aliases() {
    let src = "z = 1 + 1j\nw = z\nw.imag = 5.0\nprint(z)\n";
    assert_eq!(out(src), "(1+5j)\n");
}

#[test]
fn closures_and_recursion() {
    let src = "\
def fact(n):
    if n <= 1:
        return 1
    return n * fact(n - 1)
def counter():
    c = 0
    def bump():
        nonlocal c
        c = c + 1
        return c
    bump()
    bump()
    return bump()
print(fact(10), counter(), (lambda y: y * 2)(21))
";
    assert_eq!(out(src), "3628800 3 42\n");
}

#[test]
fn loops_and_lowering_agree() {
    let src = "\
s = 0
for i in range(10, 0, -3):
    s = s + i
t = 0
k = 0
while k < 5:
    t = t + k * k
    k = k + 1
print(s, t)
";
    let typed = infer(&parse_source(src).unwrap()).unwrap();
    let before = interpret(&typed, "");
    let lowered = lower_for_range(&fold_constants(&typed)).unwrap();
    let after = interpret(&lowered, "");
    assert_eq!(before.stdout_text(), "22 30\n");
    assert_eq!(after.stdout, before.stdout);
}

#[test]
fn range_end_is_reevaluated() {
    let src = "n = 3\nc = 0\nfor i in range(0, n):\n    n = 5\n    c = c + 1\nprint(c)\n";
    assert_eq!(out(src), "5\n");
}

#[test]
fn input_lines() {
    let src = "a = input()\nb = input()\nc = input()\nprint(int(a) + 1, float(b), len(c))\n";
    let o = run_src(src, " 41 \r\n2.5\n");
    assert_eq!(o.stdout_text(), "42 2.5 0\n");
}

#[test]
fn traps_keep_prior_output() {
    let o = run_src("print(1)\nx = 0\nprint(1 % x)\n", "");
    assert_eq!(o.exit, 2);
    assert_eq!(o.stdout_text(), "1\n");
    assert!(matches!(o.trap.unwrap().kind, TrapKind::DivByZero(_)));

    let o = run_src("a = [1]\nprint(a[1])\n", "");
    assert_eq!(o.trap.unwrap().kind, TrapKind::IndexOutOfRange { index: 1, len: 1 });

    let o = run_src("print(int('x'))\n", "");
    assert!(matches!(o.trap.unwrap().kind, TrapKind::Value(_)));
}

#[test]
fn deep_recursion_overflows() {
    let src = "def f(n) -> int:\n    return f(n + 1)\nprint(f(0))\n";
    let o = run_src(src, "");
    assert_eq!(o.trap.unwrap().kind, TrapKind::StackOverflow);
}

#[test]
fn ids_follow_the_slot_stack() {
    let src = "a = 1\nb = 2\nprint(id(b) - id(a))\n";
    assert_eq!(out(src), "1\n");
}

#[test]
fn real_formatting() {
    assert_eq!(
        out("print(1 / 3, 1e20 * 10, 0.1 + 0.2)\n"),
        "0.3333333333333333 1e+21 0.30000000000000004\n"
    );
}
