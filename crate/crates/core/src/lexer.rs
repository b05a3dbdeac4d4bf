//! Indentation-aware tokenizer for the vPython subset.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Name,
    IntLit,
    RealLit,
    StrLit,
    ImagLit,
    Keyword,
    Operator,
    Newline,
    Indent,
    Dedent,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text for names, keywords, operators and numbers; the decoded
    /// contents for string literals.
    pub lexeme: String,
    pub line: u32,
    pub col: u32,
}

impl Token {
    fn new(kind: TokenKind, lexeme: impl Into<String>, line: u32, col: u32) -> Self {
        Token {
            kind,
            lexeme: lexeme.into(),
            line,
            col,
        }
    }

    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Operator && self.lexeme == op
    }

    pub fn is_kw(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == kw
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Newline => f.write_str("newline"),
            TokenKind::Indent => f.write_str("indent"),
            TokenKind::Dedent => f.write_str("dedent"),
            TokenKind::Eof => f.write_str("end of input"),
            TokenKind::StrLit => write!(f, "string {:?}", self.lexeme),
            _ => write!(f, "`{}`", self.lexeme),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: lex error: {message}")]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

pub const KEYWORDS: &[&str] = &[
    "and", "def", "elif", "else", "for", "if", "in", "lambda", "nonlocal", "not", "or", "pass", "return", "while",
    "True", "False", "None", // Recognized so the parser can reject them with a subset error.
    "class", "import", "from", "try", "except", "finally", "raise", "with", "yield", "global", "del", "assert", "break",
    "continue", "async", "await", "is",
];

const OPERATORS: &[&str] = &[
    "**", "==", "!=", "<=", ">=", "+=", "-=", "->", "+", "-", "*", "/", "%", "<", ">", "=", "(", ")", "[", "]", "{",
    "}", ",", ":", ".", "&", "@",
];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
    indents: Vec<usize>,
    depth: usize,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer {
        src: source.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
        tokens: Vec::new(),
        indents: vec![0],
        depth: 0,
    };
    lx.run()?;
    Ok(lx.tokens)
}

impl<'a> Lexer<'a> {
    fn err(&self, message: impl Into<String>) -> LexError {
        LexError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<u8> {
        self.src.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else if c & 0xC0 != 0x80 {
            self.col += 1;
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, lexeme: impl Into<String>, line: u32, col: u32) {
        self.tokens.push(Token::new(kind, lexeme, line, col));
    }

    fn run(&mut self) -> Result<(), LexError> {
        let mut at_line_start = true;
        while self.pos < self.src.len() {
            if at_line_start {
                at_line_start = false;
                if self.handle_indent()? {
                    at_line_start = true;
                    continue;
                }
            }
            let c = self.peek().unwrap();
            match c {
                b'\n' => {
                    let (l, cl) = (self.line, self.col);
                    self.bump();
                    if self.depth == 0 {
                        self.push_newline(l, cl);
                        at_line_start = true;
                    }
                }
                b' ' | b'\r' => {
                    self.bump();
                }
                b'\t' => return Err(self.err("tab characters are not allowed")),
                b'#' => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                b'\\' if self.peek_at(1) == Some(b'\n') => {
                    self.bump();
                    self.bump();
                }
                b'"' | b'\'' => self.string(c)?,
                b'0'..=b'9' => self.number()?,
                b'.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => self.number()?,
                c if c == b'_' || c.is_ascii_alphabetic() => self.word(),
                c if c >= 0x80 => return Err(self.err("non-ASCII character outside a comment")),
                _ => self.operator()?,
            }
        }
        let (l, c) = (self.line, self.col);
        // Unbalanced brackets are left for the parser to report at EOF.
        if self.depth == 0
            && self
                .tokens
                .last()
                .is_some_and(|t| !matches!(t.kind, TokenKind::Newline | TokenKind::Dedent))
        {
            self.push_newline(l, c);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.push(TokenKind::Dedent, "", l, c);
        }
        self.push(TokenKind::Eof, "", l, c);
        Ok(())
    }

    fn push_newline(&mut self, line: u32, col: u32) {
        // Blank logical lines produce no NEWLINE.
        if self
            .tokens
            .last()
            .is_some_and(|t| !matches!(t.kind, TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent))
        {
            self.push(TokenKind::Newline, "", line, col);
        }
    }

    /// Measures leading spaces of a physical line. Returns true when the line
    /// is blank or a comment and was consumed entirely.
    fn handle_indent(&mut self) -> Result<bool, LexError> {
        let mut width = 0;
        while let Some(c) = self.peek() {
            match c {
                b' ' => {
                    width += 1;
                    self.bump();
                }
                b'\t' => return Err(self.err("tab characters are not allowed")),
                _ => break,
            }
        }
        match self.peek() {
            None => return Ok(true),
            Some(b'\n') => {
                self.bump();
                return Ok(true);
            }
            Some(b'\r') if self.peek_at(1) == Some(b'\n') => {
                self.bump();
                self.bump();
                return Ok(true);
            }
            Some(b'#') => {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
                if self.peek() == Some(b'\n') {
                    self.bump();
                }
                return Ok(true);
            }
            _ => {}
        }
        let current = *self.indents.last().unwrap();
        let (line, col) = (self.line, self.col);
        if width > current {
            self.indents.push(width);
            self.push(TokenKind::Indent, "", line, col);
        } else {
            while width < *self.indents.last().unwrap() {
                self.indents.pop();
                self.push(TokenKind::Dedent, "", line, col);
            }
            if width != *self.indents.last().unwrap() {
                return Err(LexError {
                    line,
                    col,
                    message: "inconsistent dedent".into(),
                });
            }
        }
        Ok(false)
    }

    fn string(&mut self, quote: u8) -> Result<(), LexError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(LexError {
                    line,
                    col,
                    message: "unterminated string".into(),
                });
            };
            match c {
                b'\n' => {
                    return Err(LexError {
                        line,
                        col,
                        message: "unterminated string".into(),
                    })
                }
                c if c == quote => {
                    self.bump();
                    break;
                }
                b'\\' => {
                    self.bump();
                    let e = self.peek().ok_or_else(|| self.err("unterminated string"))?;
                    let decoded = match e {
                        b'n' => '\n',
                        b't' => '\t',
                        b'r' => '\r',
                        b'0' => '\0',
                        b'\\' => '\\',
                        b'"' => '"',
                        b'\'' => '\'',
                        _ => return Err(self.err(format!("unknown escape `\\{}`", e as char))),
                    };
                    self.bump();
                    out.push(decoded);
                }
                c if c >= 0x80 => return Err(self.err("non-ASCII character in string literal")),
                c => {
                    self.bump();
                    out.push(c as char);
                }
            }
        }
        self.push(TokenKind::StrLit, out, line, col);
        Ok(())
    }

    fn number(&mut self) -> Result<(), LexError> {
        let (line, col) = (self.line, self.col);
        let start = self.pos;
        let mut is_real = false;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'_') {
            self.bump();
        }
        if self.peek() == Some(b'.') && !self.peek_at(1).is_some_and(|c| c.is_ascii_alphabetic()) {
            is_real = true;
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let sign = matches!(self.peek_at(1), Some(b'+' | b'-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                is_real = true;
                self.bump();
                if sign {
                    self.bump();
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
        let text: String = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .chars()
            .filter(|&c| c != '_')
            .collect();
        if matches!(self.peek(), Some(b'j' | b'J')) {
            self.bump();
            self.push(TokenKind::ImagLit, text, line, col);
        } else if is_real {
            self.push(TokenKind::RealLit, text, line, col);
        } else {
            self.push(TokenKind::IntLit, text, line, col);
        }
        if self.peek().is_some_and(|c| c == b'_' || c.is_ascii_alphanumeric()) {
            return Err(self.err("invalid numeric literal"));
        }
        Ok(())
    }

    fn word(&mut self) {
        let (line, col) = (self.line, self.col);
        let start = self.pos;
        while self.peek().is_some_and(|c| c == b'_' || c.is_ascii_alphanumeric()) {
            self.bump();
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let kind = if KEYWORDS.contains(&text) {
            TokenKind::Keyword
        } else {
            TokenKind::Name
        };
        self.push(kind, text, line, col);
    }

    fn operator(&mut self) -> Result<(), LexError> {
        let (line, col) = (self.line, self.col);
        let rest = &self.src[self.pos..];
        for op in OPERATORS {
            if rest.starts_with(op.as_bytes()) {
                for _ in 0..op.len() {
                    self.bump();
                }
                match *op {
                    "(" | "[" => self.depth += 1,
                    ")" | "]" => self.depth = self.depth.saturating_sub(1),
                    _ => {}
                }
                self.push(TokenKind::Operator, *op, line, col);
                return Ok(());
            }
        }
        Err(self.err(format!(
            "unexpected character `{}`",
            self.peek().map(|c| c as char).unwrap_or('?')
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src).unwrap().into_iter().map(|t| (t.kind, t.lexeme)).collect()
    }

    #[test]
    fn empty_input_is_eof() {
        assert_eq!(kinds(""), vec![(TokenKind::Eof, String::new())]);
    }

    #[test]
    fn minimal_assignment() {
        use TokenKind::*;
        let got = kinds("a = 3\n");
        let want = vec![(Name, "a"), (Operator, "="), (IntLit, "3"), (Newline, ""), (Eof, "")];
        assert_eq!(
            got,
            want.into_iter().map(|(k, s)| (k, s.to_string())).collect::<Vec<_>>()
        );
    }

    #[test]
    fn for_range_header() {
        use TokenKind::*;
        let got = kinds("for i in range(0,len(arr)):\n");
        let want: Vec<(TokenKind, &str)> = vec![
            (Keyword, "for"),
            (Name, "i"),
            (Keyword, "in"),
            (Name, "range"),
            (Operator, "("),
            (IntLit, "0"),
            (Operator, ","),
            (Name, "len"),
            (Operator, "("),
            (Name, "arr"),
            (Operator, ")"),
            (Operator, ")"),
            (Operator, ":"),
            (Newline, ""),
            (Eof, ""),
        ];
        assert_eq!(
            got,
            want.into_iter().map(|(k, s)| (k, s.to_string())).collect::<Vec<_>>()
        );
    }

    #[test]
    fn indentation_blocks() {
        let toks = tokenize("if x:\n    y = 1\n    if z:\n      w = 2\nv = 3\n").unwrap();
        let indents = toks.iter().filter(|t| t.kind == TokenKind::Indent).count();
        let dedents = toks.iter().filter(|t| t.kind == TokenKind::Dedent).count();
        assert_eq!(indents, 2);
        assert_eq!(dedents, 2);
    }

    #[test]
    fn unclosed_block_dedents_at_eof() {
        let toks = tokenize("def f():\n  return 1").unwrap();
        let n = toks.len();
        assert_eq!(toks[n - 1].kind, TokenKind::Eof);
        assert_eq!(toks[n - 2].kind, TokenKind::Dedent);
        assert_eq!(toks[n - 3].kind, TokenKind::Newline);
    }

    #[test]
    fn tabs_rejected() {
        let e = tokenize("if x:\n\ty = 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        assert!(e.message.contains("tab"));
    }

    #[test]
    fn inconsistent_dedent() {
        let e = tokenize("if x:\n    y = 1\n  z = 2\n").unwrap_err();
        assert!(e.message.contains("dedent"));
        assert_eq!(e.line, 3);
    }

    #[test]
    fn unterminated_string() {
        let e = tokenize("s = \"abc\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.message.contains("unterminated"));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("a = 3 $ 4\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
    }

    #[test]
    fn numbers() {
        use TokenKind::*;
        let got = kinds("1 2.5 1e3 4j 0.5j 3.\n");
        let k: Vec<_> = got.iter().map(|(k, s)| (*k, s.as_str())).collect();
        assert_eq!(
            &k[..6],
            &[
                (IntLit, "1"),
                (RealLit, "2.5"),
                (RealLit, "1e3"),
                (ImagLit, "4"),
                (ImagLit, "0.5"),
                (RealLit, "3.")
            ]
        );
    }

    #[test]
    fn brackets_join_lines() {
        let toks = tokenize("x = [1,\n     2]\n").unwrap();
        let newlines = toks.iter().filter(|t| t.kind == TokenKind::Newline).count();
        assert_eq!(newlines, 1);
        assert!(toks.iter().all(|t| t.kind != TokenKind::Indent));
    }

    #[test]
    fn string_escapes() {
        let toks = tokenize(r#"s = "a\"b\n""#).unwrap();
        assert_eq!(toks[2].lexeme, "a\"b\n");
    }
}
