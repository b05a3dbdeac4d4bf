//! AST vocabulary shared by every compiler phase.
//!
//! The tree is deliberately uniform: a node is a [`Kind`] plus a small set of
//! optional scalar fields, ordered children, and (after inference) a frozen type
//! and a frame slot. Child layout per kind:
//!
//! | kind        | children                                                        |
//! |-------------|-----------------------------------------------------------------|
//! | module      | statements                                                      |
//! | def         | target ident (typed only), `params` param nodes, body statements|
//! | lambda      | `params` param nodes, body expression                           |
//! | assign      | target ident, value                                             |
//! | indexassign | container expr, index expr, value                               |
//! | attrassign  | container expr, value (`name` is `real` or `imag`)              |
//! | if          | cond, `then` statements, remaining else statements              |
//! | while       | cond, body statements                                           |
//! | for         | induction ident/decl, start, end, step, body statements         |
//! | return      | optional value                                                  |
//! | print/expr  | expressions                                                     |
//! | binop etc.  | operands                                                        |
//! | call        | callee (user calls only), arguments                             |
//! | index       | container, index                                                |
//! | attr        | container                                                       |
//! | ref         | identifier                                                      |
//! | list        | elements                                                        |

use std::fmt;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc {
    pub line: u32,
    pub col: u32,
}

impl Loc {
    pub fn new(line: u32, col: u32) -> Self {
        Loc { line, col }
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Module,
    FunctionDef,
    LambdaExpr,
    Declaration,
    Identifier,
    Assign,
    IndexAssign,
    AttrAssign,
    If,
    While,
    ForRange,
    Return,
    Nonlocal,
    Pass,
    Print,
    ExprStmt,
    BinOp,
    UnOp,
    Compare,
    BoolOp,
    Call,
    Index,
    Attr,
    Ref,
    Literal,
    ListLit,
}

impl Kind {
    pub const ALL: [Kind; 26] = [
        Kind::Module,
        Kind::FunctionDef,
        Kind::LambdaExpr,
        Kind::Declaration,
        Kind::Identifier,
        Kind::Assign,
        Kind::IndexAssign,
        Kind::AttrAssign,
        Kind::If,
        Kind::While,
        Kind::ForRange,
        Kind::Return,
        Kind::Nonlocal,
        Kind::Pass,
        Kind::Print,
        Kind::ExprStmt,
        Kind::BinOp,
        Kind::UnOp,
        Kind::Compare,
        Kind::BoolOp,
        Kind::Call,
        Kind::Index,
        Kind::Attr,
        Kind::Ref,
        Kind::Literal,
        Kind::ListLit,
    ];

    /// Keyword used by the textual AST format.
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Module => "module",
            Kind::FunctionDef => "def",
            Kind::LambdaExpr => "lambda",
            Kind::Declaration => "decl",
            Kind::Identifier => "ident",
            Kind::Assign => "assign",
            Kind::IndexAssign => "indexassign",
            Kind::AttrAssign => "attrassign",
            Kind::If => "if",
            Kind::While => "while",
            Kind::ForRange => "for",
            Kind::Return => "return",
            Kind::Nonlocal => "nonlocal",
            Kind::Pass => "pass",
            Kind::Print => "print",
            Kind::ExprStmt => "expr",
            Kind::BinOp => "binop",
            Kind::UnOp => "unop",
            Kind::Compare => "compare",
            Kind::BoolOp => "boolop",
            Kind::Call => "call",
            Kind::Index => "index",
            Kind::Attr => "attr",
            Kind::Ref => "ref",
            Kind::Literal => "lit",
            Kind::ListLit => "list",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Kind> {
        Kind::ALL.iter().copied().find(|k| k.keyword() == word)
    }

    /// Kinds whose `name` field is written positionally.
    pub fn has_positional_name(self) -> bool {
        matches!(
            self,
            Kind::FunctionDef | Kind::Declaration | Kind::Identifier | Kind::Nonlocal
        )
    }

    pub fn is_statement(self) -> bool {
        matches!(
            self,
            Kind::FunctionDef
                | Kind::Declaration
                | Kind::Assign
                | Kind::IndexAssign
                | Kind::AttrAssign
                | Kind::If
                | Kind::While
                | Kind::ForRange
                | Kind::Return
                | Kind::Nonlocal
                | Kind::Pass
                | Kind::Print
                | Kind::ExprStmt
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Neg,
    Not,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl Op {
    pub const ALL: [Op; 16] = [
        Op::Add,
        Op::Sub,
        Op::Mul,
        Op::Div,
        Op::Mod,
        Op::Pow,
        Op::Neg,
        Op::Not,
        Op::Lt,
        Op::Le,
        Op::Gt,
        Op::Ge,
        Op::Eq,
        Op::Ne,
        Op::And,
        Op::Or,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Mod => "mod",
            Op::Pow => "pow",
            Op::Neg => "neg",
            Op::Not => "not",
            Op::Lt => "lt",
            Op::Le => "le",
            Op::Gt => "gt",
            Op::Ge => "ge",
            Op::Eq => "eq",
            Op::Ne => "ne",
            Op::And => "and",
            Op::Or => "or",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Op> {
        Op::ALL.iter().copied().find(|o| o.keyword() == word)
    }

    /// Source-level spelling.
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub | Op::Neg => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Mod => "%",
            Op::Pow => "**",
            Op::Not => "not",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::And => "and",
            Op::Or => "or",
        }
    }
}

/// Literal payload. Reals keep their value; imaginary literals carry the
/// coefficient of `j`.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Real(f64),
    Str(String),
    Bool(bool),
    Imag(f64),
    None,
}

impl Literal {
    pub fn tag(&self) -> &'static str {
        match self {
            Literal::Int(_) => "int",
            Literal::Real(_) => "real",
            Literal::Str(_) => "string",
            Literal::Bool(_) => "bool",
            Literal::Imag(_) => "imag",
            Literal::None => "none",
        }
    }

    /// Structural equality that treats reals bitwise, so NaN payloads and
    /// signed zeros compare the way serialization preserves them.
    pub fn same(&self, other: &Literal) -> bool {
        match (self, other) {
            (Literal::Real(a), Literal::Real(b)) | (Literal::Imag(a), Literal::Imag(b)) => a.to_bits() == b.to_bits(),
            _ => self == other,
        }
    }
}

/// Statically frozen type of a declaration, access, or expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FrozenType {
    Int,
    Real,
    Bool,
    Str,
    Complex,
    Vector(Box<FrozenType>),
    Lambda {
        params: Vec<FrozenType>,
        result: Box<FrozenType>,
    },
    None,
}

impl FrozenType {
    pub fn vector(elem: FrozenType) -> FrozenType {
        FrozenType::Vector(Box::new(elem))
    }

    pub fn lambda(params: Vec<FrozenType>, result: FrozenType) -> FrozenType {
        FrozenType::Lambda {
            params,
            result: Box::new(result),
        }
    }

    /// Heap-resident values: the frame slot holds a handle.
    pub fn is_compound(&self) -> bool {
        matches!(
            self,
            FrozenType::Vector(_) | FrozenType::Complex | FrozenType::Str | FrozenType::Lambda { .. }
        )
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, FrozenType::Int | FrozenType::Real | FrozenType::Complex)
    }

    pub fn elem(&self) -> Option<&FrozenType> {
        match self {
            FrozenType::Vector(e) => Some(e),
            _ => None,
        }
    }

    /// Parse the textual form produced by `Display`.
    pub fn parse(text: &str) -> Option<FrozenType> {
        let (ty, rest) = parse_type_prefix(text)?;
        rest.is_empty().then_some(ty)
    }
}

fn parse_type_prefix(text: &str) -> Option<(FrozenType, &str)> {
    for (word, ty) in [
        ("int", FrozenType::Int),
        ("real", FrozenType::Real),
        ("bool", FrozenType::Bool),
        ("string", FrozenType::Str),
        ("complex", FrozenType::Complex),
        ("none", FrozenType::None),
    ] {
        if let Some(rest) = text.strip_prefix(word) {
            return Some((ty, rest));
        }
    }
    if let Some(rest) = text.strip_prefix("vector[") {
        let (elem, rest) = parse_type_prefix(rest)?;
        let rest = rest.strip_prefix(']')?;
        return Some((FrozenType::vector(elem), rest));
    }
    if let Some(mut rest) = text.strip_prefix("lambda[") {
        let mut params = Vec::new();
        if let Some(r) = rest.strip_prefix("->") {
            rest = r;
        } else {
            loop {
                let (p, r) = parse_type_prefix(rest)?;
                params.push(p);
                if let Some(r) = r.strip_prefix(',') {
                    rest = r;
                } else {
                    rest = r.strip_prefix("->")?;
                    break;
                }
            }
        }
        let (result, rest) = parse_type_prefix(rest)?;
        let rest = rest.strip_prefix(']')?;
        return Some((FrozenType::lambda(params, result), rest));
    }
    None
}

impl fmt::Display for FrozenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrozenType::Int => f.write_str("int"),
            FrozenType::Real => f.write_str("real"),
            FrozenType::Bool => f.write_str("bool"),
            FrozenType::Str => f.write_str("string"),
            FrozenType::Complex => f.write_str("complex"),
            FrozenType::None => f.write_str("none"),
            FrozenType::Vector(e) => write!(f, "vector[{e}]"),
            FrozenType::Lambda { params, result } => {
                f.write_str("lambda[")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "->{result}]")
            }
        }
    }
}

/// Addressing coordinate: static scope distance (0 = local) and frame offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotRef {
    pub level: u32,
    pub offset: u32,
}

impl SlotRef {
    pub fn new(level: u32, offset: u32) -> Self {
        SlotRef { level, offset }
    }

    pub fn parse(text: &str) -> Option<SlotRef> {
        let rest = text.strip_prefix('L')?;
        let (l, o) = rest.split_once('.')?;
        Some(SlotRef::new(l.parse().ok()?, o.parse().ok()?))
    }
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}.{}", self.level, self.offset)
    }
}

/// Scalar attribute value attached by a phase (function ids, frame sizes,
/// annotation names and similar).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: Kind,
    pub loc: Option<Loc>,
    pub name: Option<String>,
    pub lit: Option<Literal>,
    pub op: Option<Op>,
    pub attrs: Vec<(String, Atom)>,
    pub ty: Option<FrozenType>,
    pub slot: Option<SlotRef>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn new(kind: Kind) -> Self {
        Node {
            kind,
            loc: None,
            name: None,
            lit: None,
            op: None,
            attrs: Vec::new(),
            ty: None,
            slot: None,
            children: Vec::new(),
        }
    }

    pub fn at(mut self, loc: Loc) -> Self {
        self.loc = Some(loc);
        self
    }

    pub fn with_loc(mut self, loc: Option<Loc>) -> Self {
        self.loc = loc;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_op(mut self, op: Op) -> Self {
        self.op = Some(op);
        self
    }

    pub fn with_children(mut self, children: Vec<Node>) -> Self {
        self.children = children;
        self
    }

    pub fn child(mut self, child: Node) -> Self {
        self.children.push(child);
        self
    }

    pub fn typed(mut self, ty: FrozenType) -> Self {
        self.ty = Some(ty);
        self
    }

    pub fn slotted(mut self, slot: SlotRef) -> Self {
        self.slot = Some(slot);
        self
    }

    pub fn module(stmts: Vec<Node>) -> Self {
        Node::new(Kind::Module).with_children(stmts)
    }

    pub fn ident(name: impl Into<String>) -> Self {
        Node::new(Kind::Identifier).named(name)
    }

    pub fn literal(lit: Literal) -> Self {
        let mut n = Node::new(Kind::Literal);
        n.lit = Some(lit);
        n
    }

    pub fn attr(&self, key: &str) -> Option<&Atom> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn attr_int(&self, key: &str) -> Option<i64> {
        match self.attr(key) {
            Some(Atom::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn attr_str(&self, key: &str) -> Option<&str> {
        match self.attr(key) {
            Some(Atom::Str(v)) => Some(v),
            _ => None,
        }
    }

    pub fn set_attr(&mut self, key: &str, value: Atom) {
        if let Some(slot) = self.attrs.iter_mut().find(|(k, _)| k == key) {
            slot.1 = value;
        } else {
            self.attrs.push((key.to_string(), value));
        }
    }

    pub fn remove_attr(&mut self, key: &str) {
        self.attrs.retain(|(k, _)| k != key);
    }

    pub fn with_attr(mut self, key: &str, value: Atom) -> Self {
        self.set_attr(key, value);
        self
    }

    pub fn name_str(&self) -> &str {
        self.name.as_deref().unwrap_or("")
    }

    /// Induction variable marked backend-native by the loop optimizer.
    pub fn is_native(&self) -> bool {
        self.attr_int("native") == Some(1)
    }

    /// Total node count of the subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    pub fn walk(&self, f: &mut dyn FnMut(&Node)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Number of leading parameter children for `def`/`lambda`.
    pub fn param_count(&self) -> usize {
        self.attr_int("params").unwrap_or(0) as usize
    }

    /// For a typed `def`, the first child is the binding target.
    pub fn def_has_target(&self) -> bool {
        self.kind == Kind::FunctionDef && self.children.first().is_some_and(|c| c.attr_int("target") == Some(1))
    }

    /// Split a `def` into (target, params, body).
    pub fn def_parts(&self) -> (Option<&Node>, &[Node], &[Node]) {
        let start = usize::from(self.def_has_target());
        let n = self.param_count();
        let target = if start == 1 { self.children.first() } else { None };
        let params = &self.children[start..start + n];
        let body = &self.children[start + n..];
        (target, params, body)
    }

    /// Split an `if` into (cond, then, else).
    pub fn if_parts(&self) -> (&Node, &[Node], &[Node]) {
        let n = self.attr_int("then").unwrap_or(0) as usize;
        (&self.children[0], &self.children[1..1 + n], &self.children[1 + n..])
    }

    /// Structural equality including locations, types and slots.
    pub fn same(&self, other: &Node) -> bool {
        self.kind == other.kind
            && self.loc == other.loc
            && self.name == other.name
            && match (&self.lit, &other.lit) {
                (Some(a), Some(b)) => a.same(b),
                (None, None) => true,
                _ => false,
            }
            && self.op == other.op
            && self.attrs == other.attrs
            && self.ty == other.ty
            && self.slot == other.slot
            && self.children.len() == other.children.len()
            && self.children.iter().zip(&other.children).all(|(a, b)| a.same(b))
    }

    /// Structural equality ignoring source locations.
    pub fn same_shape(&self, other: &Node) -> bool {
        self.kind == other.kind
            && self.name == other.name
            && match (&self.lit, &other.lit) {
                (Some(a), Some(b)) => a.same(b),
                (None, None) => true,
                _ => false,
            }
            && self.op == other.op
            && self.attrs == other.attrs
            && self.ty == other.ty
            && self.slot == other.slot
            && self.children.len() == other.children.len()
            && self.children.iter().zip(&other.children).all(|(a, b)| a.same_shape(b))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_text_round_trips() {
        let types = [
            FrozenType::Int,
            FrozenType::vector(FrozenType::vector(FrozenType::Real)),
            FrozenType::lambda(vec![], FrozenType::None),
            FrozenType::lambda(
                vec![
                    FrozenType::Int,
                    FrozenType::lambda(vec![FrozenType::Str], FrozenType::Bool),
                ],
                FrozenType::Complex,
            ),
        ];
        for ty in types {
            assert_eq!(FrozenType::parse(&ty.to_string()), Some(ty));
        }
        assert_eq!(FrozenType::parse("vector[int"), None);
    }

    #[test]
    fn slot_text() {
        assert_eq!(SlotRef::new(1, 2).to_string(), "L1.2");
        assert_eq!(SlotRef::parse("L4.1"), Some(SlotRef::new(4, 1)));
        assert_eq!(SlotRef::parse("4.1"), None);
    }

    #[test]
    fn compound_tags() {
        assert!(FrozenType::Complex.is_compound());
        assert!(FrozenType::vector(FrozenType::Int).is_compound());
        assert!(!FrozenType::Bool.is_compound());
    }
}
