//! Tokenizer shared by the Turtle, N-Triples, rule and query parsers.

use std::fmt;

use thiserror::Error;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Var(String),
    Str(String),
    /// `@tag`; directives such as `@prefix` also lex as this.
    LangTag(String),
    DatatypeMarker,
    Integer(String),
    Decimal(String),
    Double(String),
    /// Bare identifier: keywords, `a`, function names.
    Word(String),
    Punct(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::Blank(l) => write!(f, "_:{l}"),
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::LangTag(t) => write!(f, "@{t}"),
            Tok::DatatypeMarker => f.write_str("^^"),
            Tok::Integer(s) | Tok::Decimal(s) | Tok::Double(s) | Tok::Word(s) => f.write_str(s),
            Tok::Punct(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const PUNCTS: &[&str] = &[
    "=>", "&&", "||", "!=", "<=", ">=", "^^", ".", ";", ",", "{", "}", "(", ")", "[", "]", "=", "<",
    ">", "!", "&", "*", "+", "-", "/",
];

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn is_local_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '%'
}

struct Lexer<'a> {
    src: &'a str,
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self, off: usize) -> Option<char> {
        self.src[self.i..].chars().nth(off)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src[self.i..].chars().next()?;
        self.i += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn err<T>(&self, pos: Pos, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(pos, msg))
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// True when `<` at the cursor opens an IRI reference rather than an
    /// operator: the text up to the next `>` has no whitespace or reserved
    /// characters.
    fn iri_ahead(&self) -> bool {
        let rest = &self.src[self.i + 1..];
        for (k, b) in rest.bytes().enumerate() {
            match b {
                b'>' => return true,
                b'<' | b'"' | b'{' | b'}' | b'|' | b'^' | b'`' | b'\\' | 9..=13 | b' ' => return false,
                0xC0.. if rest[k..].chars().next().is_some_and(char::is_whitespace) => return false,
                _ => {}
            }
        }
        false
    }

    /// Consumes the longest prefix of bytes satisfying `f`, which must
    /// reject `\n`, and returns it.
    fn take_run(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let src = self.src;
        let n = src.as_bytes()[self.i..].iter().position(|&b| !f(b)).unwrap_or(src.len() - self.i);
        let run = &src[self.i..self.i + n];
        self.i += n;
        self.col += run.chars().count();
        run
    }

    fn read_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0) {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn read_hex(&mut self, n: usize, start: Pos) -> Result<char, SyntaxError> {
        let mut code = 0u32;
        for _ in 0..n {
            let Some(c) = self.bump() else {
                return self.err(start, "truncated unicode escape");
            };
            let Some(d) = c.to_digit(16) else {
                return self.err(start, format!("invalid hex digit {c:?} in escape"));
            };
            code = code * 16 + d;
        }
        char::from_u32(code).map_or_else(|| self.err(start, "invalid unicode scalar in escape"), Ok)
    }

    fn read_string(&mut self, quote: char) -> Result<String, SyntaxError> {
        let start = self.pos();
        self.bump();
        let q = quote as u8;
        let mut s = String::from(self.take_run(|b| b != q && b != b'\\' && b != b'\n' && b != b'\r'));
        loop {
            let here = self.pos();
            match self.bump() {
                None => return self.err(start, "unterminated string literal"),
                Some('\n') | Some('\r') => return self.err(here, "newline in string literal"),
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.read_hex(4, here)?,
                        Some('U') => self.read_hex(8, here)?,
                        other => {
                            return self.err(here, format!("invalid escape sequence \\{}", other.unwrap_or(' ')));
                        }
                    };
                    s.push(c);
                }
                Some(c) if c == quote => return Ok(s),
                Some(c) => s.push(c),
            }
        }
    }

    fn read_iri(&mut self) -> Result<String, SyntaxError> {
        let start = self.pos();
        self.bump();
        let mut s = String::from(self.take_run(|b| b.is_ascii_graphic() && b != b'>' && b != b'\\'));
        loop {
            let here = self.pos();
            match self.bump() {
                None => return self.err(start, "unterminated IRI"),
                Some('>') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('u') => s.push(self.read_hex(4, here)?),
                    Some('U') => s.push(self.read_hex(8, here)?),
                    _ => return self.err(here, "invalid escape in IRI"),
                },
                Some(c) if c.is_whitespace() => return self.err(here, "whitespace in IRI"),
                Some(c) => s.push(c),
            }
        }
    }

    fn read_number(&mut self) -> Tok {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek(0) {
            s.push(c);
            self.bump();
        }
        s.push_str(&self.read_while(|c| c.is_ascii_digit()));
        let mut kind = 0;
        if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push('.');
            self.bump();
            s.push_str(&self.read_while(|c| c.is_ascii_digit()));
            kind = 1;
        }
        if matches!(self.peek(0), Some('e' | 'E')) {
            let sign = matches!(self.peek(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                for _ in 0..digit_at {
                    s.push(self.bump().unwrap_or('e'));
                }
                s.push_str(&self.read_while(|c| c.is_ascii_digit()));
                kind = 2;
            }
        }
        match kind {
            0 => Tok::Integer(s),
            1 => Tok::Decimal(s),
            _ => Tok::Double(s),
        }
    }

    fn read_local(&mut self) -> String {
        let mut local = String::new();
        while let Some(c) = self.peek(0) {
            if c == '\\' && self.peek(1).is_some_and(|n| !n.is_whitespace()) {
                self.bump();
                if let Some(n) = self.bump() {
                    local.push(n);
                }
            } else if is_local_char(c) || (c == ':' && !local.is_empty()) {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A trailing dot terminates the statement, it is not part of the name.
        while local.ends_with('.') {
            local.pop();
            self.i -= 1;
            self.col -= 1;
        }
        local
    }

    fn next_token(&mut self) -> Result<Option<Token>, SyntaxError> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(c) = self.peek(0) else {
            return Ok(None);
        };
        let tok = match c {
            '<' if self.iri_ahead() => Tok::IriRef(self.read_iri()?),
            '"' | '\'' => Tok::Str(self.read_string(c)?),
            '?' | '$' if self.peek(1).is_some_and(is_name_char) => {
                self.bump();
                Tok::Var(self.read_while(|c| c.is_alphanumeric() || c == '_'))
            }
            '@' if self.peek(1).is_some_and(|c| c.is_ascii_alphabetic()) => {
                self.bump();
                Tok::LangTag(self.read_while(|c| c.is_ascii_alphanumeric() || c == '-'))
            }
            '_' if self.peek(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.read_local();
                if label.is_empty() {
                    return self.err(pos, "empty blank node label");
                }
                Tok::Blank(label)
            }
            c if c.is_ascii_digit()
                || ((c == '+' || c == '-' || c == '.')
                    && self.peek(1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                if c == '.' {
                    // `.5` style decimal
                    self.bump();
                    let digits = self.read_while(|c| c.is_ascii_digit());
                    Tok::Decimal(format!(".{digits}"))
                } else {
                    self.read_number()
                }
            }
            ':' => {
                self.bump();
                Tok::PName {
                    prefix: String::new(),
                    local: self.read_local(),
                }
            }
            c if is_name_start(c) => {
                let word = self.read_while(is_name_char);
                if self.peek(0) == Some(':') {
                    self.bump();
                    Tok::PName {
                        prefix: word,
                        local: self.read_local(),
                    }
                } else {
                    Tok::Word(word)
                }
            }
            _ => {
                let rest = &self.src[self.i..];
                let Some(p) = PUNCTS.iter().find(|p| rest.starts_with(**p)) else {
                    return self.err(pos, format!("unexpected character {c:?}"));
                };
                for _ in 0..p.chars().count() {
                    self.bump();
                }
                if *p == "^^" {
                    Tok::DatatypeMarker
                } else {
                    Tok::Punct(p)
                }
            }
        };
        Ok(Some(Token { tok, pos }))
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    while let Some(t) = lx.next_token()? {
        out.push(t);
    }
    Ok(out)
}

const LOOKAHEAD: usize = 3;

/// Lazily lexed token cursor with a small lookahead window and
/// position-aware errors.
pub struct TokenStream<'a> {
    lexer: Lexer<'a>,
    buf: std::collections::VecDeque<Token>,
    error: Option<SyntaxError>,
    end: Pos,
}

impl<'a> TokenStream<'a> {
    pub fn new(src: &'a str) -> Self {
        let mut ts = TokenStream {
            lexer: Lexer::new(src),
            buf: std::collections::VecDeque::with_capacity(LOOKAHEAD),
            error: None,
            end: Pos::default(),
        };
        ts.fill();
        ts
    }

    fn fill(&mut self) {
        while self.buf.len() < LOOKAHEAD && self.error.is_none() {
            match self.lexer.next_token() {
                Ok(Some(t)) => self.buf.push_back(t),
                Ok(None) => {
                    self.end = self.lexer.pos();
                    break;
                }
                Err(e) => self.error = Some(e),
            }
        }
    }

    /// The deferred lexical error, if lexing stopped on one.
    pub fn lex_error(&self) -> Option<&SyntaxError> {
        if self.buf.is_empty() {
            self.error.as_ref()
        } else {
            None
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.buf.front().map(|t| &t.tok)
    }

    /// Lookahead of up to two tokens past the current one.
    pub fn peek_at(&self, off: usize) -> Option<&Tok> {
        self.buf.get(off).map(|t| &t.tok)
    }

    pub fn pos(&self) -> Pos {
        match (self.buf.front(), &self.error) {
            (Some(t), _) => t.pos,
            (None, Some(e)) => e.pos,
            (None, None) => self.end,
        }
    }


    /// True only at a clean end of input (no pending lexical error).
    pub fn at_end(&self) -> bool {
        self.buf.is_empty() && self.error.is_none()
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), SyntaxError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{p}'")))
        }
    }

    /// Case-insensitive keyword test.
    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    pub fn unexpected(&self, expected: &str) -> SyntaxError {
        match (self.buf.front(), &self.error) {
            (Some(t), _) => SyntaxError::new(t.pos, format!("expected {expected}, found {}", t.tok)),
            (None, Some(e)) => e.clone(),
            (None, None) => SyntaxError::new(self.end, format!("expected {expected}, found end of input")),
        }
    }
}

impl Iterator for TokenStream<'_> {
    type Item = Token;

    fn next(&mut self) -> Option<Token> {
        let t = self.buf.pop_front();
        self.fill();
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn turtle_statement() {
        assert_eq!(
            toks("more:Handgrip a more:TestItem ."),
            vec![
                Tok::PName { prefix: "more".into(), local: "Handgrip".into() },
                Tok::Word("a".into()),
                Tok::PName { prefix: "more".into(), local: "TestItem".into() },
                Tok::Punct("."),
            ]
        );
    }

    #[test]
    fn trailing_dot_not_in_local_name() {
        assert_eq!(
            toks("ex:a ex:b ex:c."),
            vec![
                Tok::PName { prefix: "ex".into(), local: "a".into() },
                Tok::PName { prefix: "ex".into(), local: "b".into() },
                Tok::PName { prefix: "ex".into(), local: "c".into() },
                Tok::Punct("."),
            ]
        );
    }

    #[test]
    fn numbers_and_dots() {
        assert_eq!(
            toks("5 . 1.5 -2 3e2 ."),
            vec![
                Tok::Integer("5".into()),
                Tok::Punct("."),
                Tok::Decimal("1.5".into()),
                Tok::Integer("-2".into()),
                Tok::Double("3e2".into()),
                Tok::Punct("."),
            ]
        );
    }

    #[test]
    fn comparison_versus_iri() {
        assert_eq!(
            toks("?y <= 2020 && ?y < ?z"),
            vec![
                Tok::Var("y".into()),
                Tok::Punct("<="),
                Tok::Integer("2020".into()),
                Tok::Punct("&&"),
                Tok::Var("y".into()),
                Tok::Punct("<"),
                Tok::Var("z".into()),
            ]
        );
        assert_eq!(toks("<http://a/b>"), vec![Tok::IriRef("http://a/b".into())]);
    }

    #[test]
    fn string_escapes() {
        assert_eq!(
            toks(r#""a\"b\né""#),
            vec![Tok::Str("a\"b\né".into())]
        );
        let err = tokenize("\"abc").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 1 });
    }

    #[test]
    fn typed_and_tagged_literals() {
        assert_eq!(
            toks("\"1\"^^xsd:decimal \"x\"@en-GB"),
            vec![
                Tok::Str("1".into()),
                Tok::DatatypeMarker,
                Tok::PName { prefix: "xsd".into(), local: "decimal".into() },
                Tok::Str("x".into()),
                Tok::LangTag("en-GB".into()),
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!(t[1].pos, Pos { line: 2, col: 3 });
        let err = tokenize("a\n  `").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn comments_skipped() {
        assert_eq!(toks("# hi\n?x # there"), vec![Tok::Var("x".into())]);
    }
}
