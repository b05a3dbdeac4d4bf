//! The Olympus mnemonic set: the contract between emitted units and the
//! runtime header. Type suffixes: I int/bool, R real, S string, C complex,
//! V vector, L lambda, N none; CR/CI address complex parts; LDA/STA address
//! vector elements.

pub const ISA: &[&str] = &[
    // addressing
    "ADDRL",
    "ADDRF",
    "TMPA",
    "ID",
    // frames and declarations
    "FRAME",
    "DECLI",
    "DECLR",
    "DECLB",
    "DECLS",
    "DECLC",
    "DECLV",
    "DECLL",
    // scalar and handle loads/stores
    "LDI",
    "LDR",
    "LDS",
    "LDC",
    "LDV",
    "LDL",
    "STI",
    "STR",
    "STS",
    "STC",
    "STV",
    "STL",
    "LDCR",
    "LDCI",
    "STCR",
    "STCI",
    "LDAI",
    "LDAR",
    "LDAS",
    "LDAC",
    "LDAV",
    "STAI",
    "STAR",
    "STAS",
    "STAC",
    "STAV",
    // control
    "FOR",
    "WHILE",
    "IF",
    "ELSE",
    "END",
    "EVAL",
    // closures and calls
    "MKLAMBDA",
    "APPLY_I",
    "APPLY_R",
    "APPLY_S",
    "APPLY_C",
    "APPLY_V",
    "APPLY_N",
    "ARGS",
    "NOARGS",
    "ARG_I",
    "ARG_R",
    "ARG_S",
    "ARG_C",
    "ARG_V",
    "ARG_L",
    "RET_I",
    "RET_R",
    "RET_S",
    "RET_C",
    "RET_V",
    "RET_N",
    // constants and constructors
    "TRUE",
    "FALSE",
    "SLIT",
    "MKC",
    "MKVEC_I",
    "MKVEC_R",
    "MKVEC_S",
    "MKVEC_C",
    "MKVEC_V",
    // arithmetic needing more than a C operator
    "DIVR",
    "MODI",
    "MODR",
    "POWI",
    "POWR",
    "CADD",
    "CSUB",
    "CMUL",
    "CDIV",
    "CNEG",
    "CEQ",
    // strings and vectors
    "CAT",
    "REPS",
    "EQS",
    "CMPS",
    "IDXS",
    "LENS",
    "LEN",
    "VCAT",
    "VREP",
    // conversions and builtins
    "INT_R",
    "INT_S",
    "REAL_I",
    "REAL_S",
    "STR_I",
    "STR_R",
    "STR_B",
    "STR_C",
    "ABSI",
    "ABSR",
    "ABSC",
    "INPUT",
    // output
    "PUT_I",
    "PUT_R",
    "PUT_B",
    "PUT_S",
    "PUT_C",
    "PUT_V",
    "PUT_SP",
    "PRINT_I",
    "PRINT_R",
    "PRINT_B",
    "PRINT_S",
    "PRINT_C",
    "PRINT_V",
    "PRINT_NL",
    // special values
    "OLY_INF",
    "OLY_NAN",
    "OLY_INT_MIN",
];

/// Constructs that would mean the unit inspects a runtime type tag.
pub const DISPATCH_WORDS: &[&str] = &["switch", "_Generic", "typeof", "__typeof__", "tag", "kind"];

pub fn is_mnemonic(word: &str) -> bool {
    ISA.contains(&word)
}

/// All-caps words of the unit, outside preprocessor lines, comments and
/// string literals, in order of appearance. `OLYMPUS_*` build settings are
/// configuration, not instructions.
pub fn scan_words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for word in code_words(line) {
            let caps = word.starts_with(|c: char| c.is_ascii_uppercase())
                && word.len() > 1
                && word
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_');
            if caps && !word.starts_with("OLYMPUS_") {
                out.push(word);
            }
        }
    }
    out
}

/// Words that look like mnemonics but are not in the set.
pub fn unknown_mnemonics(text: &str) -> Vec<String> {
    let mut bad: Vec<String> = scan_words(text).into_iter().filter(|w| !is_mnemonic(w)).collect();
    bad.dedup();
    bad
}

/// Any type-dispatch construct outside string literals.
pub fn has_type_dispatch(text: &str) -> bool {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(code_words)
        .any(|w| DISPATCH_WORDS.contains(&w.as_str()))
}

fn code_words(line: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut in_str = false;
    while let Some(c) = chars.next() {
        if in_str {
            match c {
                '\\' => {
                    chars.next();
                }
                '"' => in_str = false,
                _ => {}
            }
            continue;
        }
        if c == '/' && chars.peek() == Some(&'*') {
            break;
        }
        if c == '"' {
            in_str = true;
        }
        if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
            cur.push(c);
        } else if !cur.is_empty() {
            words.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}
