//! Operator-precedence term parser.

use crate::store::Store;
use crate::term::Term;

use super::lexer::{Token, TokenKind};
use super::ops::OpTable;
use super::ReadError;

/// One term read from source, with its named variables in order of first
/// occurrence.
#[derive(Clone, Debug)]
pub struct ReadTerm {
    pub term: Term,
    pub vars: Vec<(String, Term)>,
    pub line: usize,
}

pub struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ops: &'a OpTable,
    pub(crate) store: &'a mut Store,
    vars: Vec<(String, Term)>,
}

impl<'a> Parser<'a> {
    pub fn new(tokens: Vec<Token>, ops: &'a OpTable, store: &'a mut Store) -> Self {
        Parser { tokens, pos: 0, ops, store, vars: Vec::new() }
    }

    pub fn at_eof(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// Reads the next clause-terminated term. Variable names are scoped to it.
    pub fn next_term(&mut self) -> Result<Option<ReadTerm>, ReadError> {
        if self.at_eof() {
            return Ok(None);
        }
        self.vars.clear();
        let line = self.tokens[self.pos].line;
        let term = self.parse(1200)?;
        match self.tokens.get(self.pos) {
            Some(t) if t.kind == TokenKind::End => self.pos += 1,
            Some(t) => return Err(syntax(t, format!("operator expected, found {t}"))),
            None => return Err(self.eof_error("missing `.` at end of clause")),
        }
        Ok(Some(ReadTerm { term, vars: std::mem::take(&mut self.vars), line }))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn next(&mut self) -> Result<Token, ReadError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eof_error(&self, message: &str) -> ReadError {
        let (line, col) = self.tokens.last().map_or((1, 1), |t| (t.line, t.col + t.text.len()));
        ReadError::Syntax { line, col, message: message.into() }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ReadError> {
        let t = self.next()?;
        if t.kind == TokenKind::Punct && t.text == p {
            Ok(())
        } else {
            Err(syntax(&t, format!("expected `{p}`, found {t}")))
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Punct && t.text == p)
    }

    pub fn parse(&mut self, max: u16) -> Result<Term, ReadError> {
        let (left, left_p) = self.parse_primary(max)?;
        self.parse_infix(left, left_p, max)
    }

    fn parse_infix(&mut self, mut left: Term, mut left_p: u16, max: u16) -> Result<Term, ReadError> {
        while let Some(tok) = self.peek() {
            let name = match tok.kind {
                TokenKind::Atom => tok.text.as_str(),
                TokenKind::Punct if tok.text == "," => ",",
                _ => break,
            };
            let Some(op) = self.ops.infix(name) else { break };
            let (la, ra) = op.infix_arg_priorities();
            if op.priority > max || left_p > la {
                break;
            }
            let name = name.to_string();
            self.pos += 1;
            let right = self.parse(ra)?;
            left = Term::compound(name.as_str(), vec![left, right]);
            left_p = op.priority;
        }
        Ok(left)
    }

    /// True when the upcoming token cannot begin an operand.
    fn at_operand_end(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => match t.kind {
                TokenKind::End => true,
                TokenKind::Punct => matches!(t.text.as_str(), ")" | "]" | "}" | "," | "|"),
                TokenKind::Atom => {
                    let functional = matches!(self.peek_at(1), Some(n) if n.kind == TokenKind::Punct && n.text == "(" && !n.layout_before);
                    self.ops.infix(&t.text).is_some() && self.ops.prefix(&t.text).is_none() && !functional
                }
                _ => false,
            },
        }
    }

    fn parse_primary(&mut self, max: u16) -> Result<(Term, u16), ReadError> {
        let tok = self.next()?;
        match tok.kind {
            TokenKind::Int => {
                let v = tok.text.parse::<i64>().map_err(|_| syntax(&tok, "integer out of range"))?;
                Ok((Term::Int(v), 0))
            }
            TokenKind::Var => Ok((self.variable(&tok.text), 0)),
            TokenKind::EVar => Ok((self.store.intern_evar(&tok.text), 0)),
            TokenKind::End => Err(syntax(&tok, "unexpected end of clause")),
            TokenKind::Punct => match tok.text.as_str() {
                "(" => {
                    let t = self.parse(1200)?;
                    self.expect_punct(")")?;
                    Ok((t, 0))
                }
                "[" => {
                    if self.is_punct("]") {
                        self.pos += 1;
                        return self.name_term("[]");
                    }
                    Ok((self.list()?, 0))
                }
                "{" => {
                    if self.is_punct("}") {
                        self.pos += 1;
                        return self.name_term("{}");
                    }
                    let t = self.parse(1200)?;
                    self.expect_punct("}")?;
                    Ok((Term::compound("{}", vec![t]), 0))
                }
                _ => Err(syntax(&tok, format!("unexpected {tok}"))),
            },
            TokenKind::QuotedAtom => self.name_term(&tok.text),
            TokenKind::Atom => {
                let name = tok.text.clone();
                if name == "-" {
                    if let Some(n) = self.peek() {
                        if n.kind == TokenKind::Int && !n.layout_before {
                            let n = self.next()?;
                            let v = format!("-{}", n.text)
                                .parse::<i64>()
                                .map_err(|_| syntax(&n, "integer out of range"))?;
                            return Ok((Term::Int(v), 0));
                        }
                    }
                }
                if let Some(op) = self.ops.prefix(&name) {
                    if !self.is_functional() && !self.at_operand_end() {
                        if op.priority > max {
                            return Err(syntax(&tok, format!("operator priority clash at `{name}`")));
                        }
                        let arg = self.parse(op.prefix_arg_priority())?;
                        return Ok((Term::compound(name.as_str(), vec![arg]), op.priority));
                    }
                }
                self.name_term(&name)
            }
        }
    }

    fn is_functional(&self) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Punct && t.text == "(" && !t.layout_before)
    }

    /// An atom, or a compound in functional notation when `(` follows directly.
    fn name_term(&mut self, name: &str) -> Result<(Term, u16), ReadError> {
        if !self.is_functional() {
            return Ok((Term::atom(name), 0));
        }
        self.pos += 1;
        let mut args = vec![self.parse(999)?];
        loop {
            let t = self.next()?;
            match (&t.kind, t.text.as_str()) {
                (TokenKind::Punct, ",") => args.push(self.parse(999)?),
                (TokenKind::Punct, ")") => break,
                _ => return Err(syntax(&t, format!("expected `,` or `)` in arguments of `{name}`, found {t}"))),
            }
        }
        Ok((Term::compound(name, args), 0))
    }

    fn list(&mut self) -> Result<Term, ReadError> {
        let mut items = vec![self.parse(999)?];
        loop {
            let t = self.next()?;
            match (&t.kind, t.text.as_str()) {
                (TokenKind::Punct, ",") => items.push(self.parse(999)?),
                (TokenKind::Punct, "|") => {
                    let tail = self.parse(999)?;
                    self.expect_punct("]")?;
                    return Ok(Term::list_with_tail(items, tail));
                }
                (TokenKind::Punct, "]") => return Ok(Term::list(items)),
                _ => return Err(syntax(&t, format!("expected `,`, `|` or `]` in list, found {t}"))),
            }
        }
    }

    fn variable(&mut self, name: &str) -> Term {
        if name == "_" {
            return self.store.fresh_var();
        }
        if let Some((_, t)) = self.vars.iter().find(|(n, _)| n == name) {
            return t.clone();
        }
        let t = self.store.named_var(name);
        self.vars.push((name.to_string(), t.clone()));
        t
    }
}

fn syntax(tok: &Token, message: impl Into<String>) -> ReadError {
    ReadError::Syntax { line: tok.line, col: tok.col, message: message.into() }
}
