//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") IDENT "." formula
//! iff     := imp { "<->" imp }
//! imp     := or { "->" or }
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "!" unary | "(" formula ")" | atom
//! atom    := term ("=" | "!=") term
//! term    := factor { "*" factor }
//! factor  := ( IDENT | "1" | "(" term ")" ) { "'" }
//! ```
//!
//! A leading `(` in `unary` is ambiguous between a parenthesised formula and
//! a parenthesised term; the atom reading is tried first and the parser
//! backtracks on failure, reporting whichever attempt got further.

use super::ast::{Formula, GroupTerm};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub position: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: found {}, expected one of {}",
            self.position,
            self.found,
            self.expected.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    One,
    Forall,
    Exists,
    Dot,
    Star,
    Prime,
    Eq,
    Neq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::One => "`1`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Star => "`*`".into(),
            Tok::Prime => "`'`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_alphabetic() {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..len];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("!=") {
            (Tok::Neq, 2)
        } else {
            let tok = match c {
                '1' if !rest[1..].starts_with(|ch: char| ch.is_ascii_alphanumeric()) => Tok::One,
                '.' => Tok::Dot,
                '*' => Tok::Star,
                '\'' => Tok::Prime,
                '=' => Tok::Eq,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(SyntaxError {
                        position: start,
                        found: format!("character `{}`", rest.chars().next().unwrap_or(c)),
                        expected: vec!["a token"],
                    })
                }
            };
            (tok, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, expected: &[&'static str]) -> SyntaxError {
        let (tok, position) = &self.toks[self.pos];
        SyntaxError {
            position: *position,
            found: tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let universal = *self.peek() == Tok::Forall;
                self.pos += 1;
                let var = match self.peek().clone() {
                    Tok::Ident(v) => {
                        self.pos += 1;
                        v
                    }
                    _ => return Err(self.error(&["identifier"])),
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            _ => self.iff(),
        }
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::DArrow) {
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let mut lhs = self.or()?;
        while self.eat(&Tok::Arrow) {
            lhs = Formula::implies(lhs, self.or()?);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Pipe) {
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                let start = self.pos;
                let as_atom = self.atom();
                let atom_err = match as_atom {
                    Ok(f) => return Ok(f),
                    Err(e) => e,
                };
                self.pos = start + 1;
                let grouped = self.formula().and_then(|f| {
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(f)
                });
                grouped.map_err(|e| furthest(atom_err, e))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            Ok(Formula::eq(lhs, self.term()?))
        } else if self.eat(&Tok::Neq) {
            Ok(Formula::neq(lhs, self.term()?))
        } else {
            Err(self.error(&["`*`", "`'`", "`=`", "`!=`"]))
        }
    }

    fn term(&mut self) -> PResult<GroupTerm> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Star) {
            lhs = GroupTerm::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<GroupTerm> {
        let mut base = match self.peek().clone() {
            Tok::Ident(v) => {
                self.pos += 1;
                GroupTerm::Var(v)
            }
            Tok::One => {
                self.pos += 1;
                GroupTerm::One
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.error(&["identifier", "`1`", "`(`"])),
        };
        while self.eat(&Tok::Prime) {
            base = GroupTerm::inv(base);
        }
        Ok(base)
    }
}

fn furthest(a: SyntaxError, b: SyntaxError) -> SyntaxError {
    use std::cmp::Ordering::*;
    match a.position.cmp(&b.position) {
        Greater => a,
        Less => b,
        Equal => {
            let mut expected = a.expected;
            for e in b.expected {
                if !expected.contains(&e) {
                    expected.push(e);
                }
            }
            SyntaxError { expected, ..a }
        }
    }
}

/// Parses a formula.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "`&`", "`|`", "`->`", "`<->`"]));
    }
    Ok(f)
}

/// Parses a group term on its own.
pub fn parse_term(text: &str) -> Result<GroupTerm, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "`*`"]));
    }
    Ok(t)
}
