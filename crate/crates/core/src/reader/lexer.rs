//! Tokenizer for the supported Prolog subset.

use std::fmt;

use super::ReadError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Unquoted name: letter-digit atom, symbol-char atom or solo char.
    Atom,
    QuotedAtom,
    Var,
    /// `~Name`; the token text excludes the tilde.
    EVar,
    Int,
    Punct,
    /// Clause terminator.
    End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub col: usize,
    /// Whitespace or a comment immediately precedes this token.
    pub layout_before: bool,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::End => f.write_str("end of clause"),
            TokenKind::EVar => write!(f, "`~{}`", self.text),
            _ => write!(f, "`{}`", self.text),
        }
    }
}

pub fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=:.?@#&$".contains(c)
}

fn is_alnum(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    allow_evars: bool,
}

impl Lexer {
    pub fn new(src: &str, allow_evars: bool) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, col: 1, allow_evars }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, col: usize, message: impl Into<String>) -> ReadError {
        ReadError::Lexical { line, col, message: message.into() }
    }

    /// Skips whitespace and comments; returns whether anything was skipped.
    fn skip_layout(&mut self) -> Result<bool, ReadError> {
        let start = self.pos;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(self.error(line, col, "unterminated block comment")),
                        }
                    }
                }
                _ => return Ok(self.pos != start),
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, ReadError> {
        let mut out = Vec::new();
        loop {
            let layout_before = self.skip_layout()?;
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = |kind, text: String| Token { kind, text, line, col, layout_before };
            let token = if c.is_ascii_digit() {
                tok(TokenKind::Int, self.take_while(|c| c.is_ascii_digit()))
            } else if c == '_' || c.is_uppercase() {
                tok(TokenKind::Var, self.take_while(is_alnum))
            } else if c.is_alphabetic() {
                tok(TokenKind::Atom, self.take_while(is_alnum))
            } else if c == '~' {
                if !self.allow_evars {
                    return Err(self.error(line, col, "interclausal variables are disabled"));
                }
                match self.peek_at(1) {
                    Some(n) if n == '_' || n.is_uppercase() => {
                        self.bump();
                        tok(TokenKind::EVar, self.take_while(is_alnum))
                    }
                    _ => return Err(self.error(line, col, "`~` must be followed by an uppercase letter or `_`")),
                }
            } else if c == '\'' {
                tok(TokenKind::QuotedAtom, self.quoted(line, col)?)
            } else if c == '.' && self.peek_at(1).is_none_or(|n| n.is_whitespace() || n == '%') {
                self.bump();
                tok(TokenKind::End, ".".into())
            } else if is_symbol_char(c) {
                tok(TokenKind::Atom, self.take_while(is_symbol_char))
            } else if c == '!' || c == ';' {
                self.bump();
                tok(TokenKind::Atom, c.to_string())
            } else if "()[]{},|".contains(c) {
                self.bump();
                tok(TokenKind::Punct, c.to_string())
            } else {
                return Err(self.error(line, col, format!("illegal character `{c}`")));
            };
            out.push(token);
        }
        Ok(out)
    }

    fn quoted(&mut self, line: usize, col: usize) -> Result<String, ReadError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error(line, col, "unterminated quoted atom")),
                Some('\'') => {
                    if self.peek() == Some('\'') {
                        self.bump();
                        s.push('\'');
                    } else {
                        return Ok(s);
                    }
                }
                Some('\\') => {
                    let esc = match self.bump() {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('\\') => '\\',
                        Some('\'') => '\'',
                        Some('"') => '"',
                        Some('`') => '`',
                        Some('\n') => continue,
                        _ => return Err(self.error(self.line, self.col, "unknown escape in quoted atom")),
                    };
                    s.push(esc);
                }
                Some(c) => s.push(c),
            }
        }
    }
}

pub fn tokenize(src: &str, allow_evars: bool) -> Result<Vec<Token>, ReadError> {
    Lexer::new(src, allow_evars).tokenize()
}
