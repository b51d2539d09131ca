//! Recursive-descent parser for coefficient expressions.
//!
//! Grammar (standard infix arithmetic):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := '-' term | product
//! product := factor (('*' | '/') factor)*
//! factor  := '-' factor | power
//! power   := atom ('^' factor)?          right associative
//! atom    := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Precedence is `^` > `*` `/` > `+` `-`, with `+ - * /` left associative
//! and `^` right associative. A minus that opens a term negates the whole
//! following product (`-x*y` is `-(x*y)`, `-x^2` is `-(x^2)`); a minus after
//! `*`, `/`, or `^` negates the single following factor (`2*-x`, `x^-2`).
//! The two readings of a product never differ in value, since negation
//! commutes exactly with `*` and `/`.
//!
//! Numbers accept decimal and exponent notation (`2`, `0.5`, `.5`, `1e-3`).
//! Error offsets are byte positions into the input.

use super::{Axis, Expr, Func};
use std::fmt;

/// Grammar recursion limit; inputs nested deeper than this are rejected
/// rather than risking an evaluation-time stack overflow.
const MAX_DEPTH: usize = 500;

#[derive(Clone, Debug, PartialEq)]
pub enum ParseError {
    Syntax { offset: usize, message: String },
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    /// Byte offset into the source text where the error was detected.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } => *offset,
            ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, message } => {
                write!(f, "syntax error at offset {offset}: {message}")
            }
            ParseError::UnknownIdentifier { offset, name } => {
                write!(f, "unknown identifier `{name}` at offset {offset}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok<'_>, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => toks.push((Tok::Plus, start)),
            b'-' => toks.push((Tok::Minus, start)),
            b'*' => toks.push((Tok::Star, start)),
            b'/' => toks.push((Tok::Slash, start)),
            b'^' => toks.push((Tok::Caret, start)),
            b'(' => toks.push((Tok::LParen, start)),
            b')' => toks.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent part is only consumed when it is complete, so
                // "2e" lexes as the number 2 followed by an identifier
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
                if !value.is_finite() {
                    return Err(syntax(
                        start,
                        format!("numeric literal `{text}` out of range"),
                    ));
                }
                toks.push((Tok::Num(value), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(&src[start..i]), start));
                continue;
            }
            _ => {
                let c = src[start..].chars().next().unwrap();
                return Err(syntax(start, format!("unexpected character `{c}`")));
            }
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    /// Offset of the current token, or one past the end of input.
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.bump();
                Ok(())
            }
            _ => Err(syntax(self.offset(), "expected `)`")),
        }
    }

    fn check_depth(&self, depth: usize) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            Err(syntax(self.offset(), "expression too deeply nested"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        let mut lhs = self.term(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term(depth + 1)?;
                    lhs = Expr::Add(lhs.into(), rhs.into());
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term(depth + 1)?;
                    lhs = Expr::Sub(lhs.into(), rhs.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.term(depth + 1)?;
            Ok(Expr::Neg(inner.into()))
        } else {
            self.product(depth + 1)
        }
    }

    fn product(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        let mut lhs = self.factor(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor(depth + 1)?;
                    lhs = Expr::Mul(lhs.into(), rhs.into());
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor(depth + 1)?;
                    lhs = Expr::Div(lhs.into(), rhs.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.factor(depth + 1)?;
            Ok(Expr::Neg(inner.into()))
        } else {
            self.power(depth + 1)
        }
    }

    fn power(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        let base = self.atom(depth + 1)?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            // exponent may itself be negated or another power (right assoc)
            let exponent = self.factor(depth + 1)?;
            Ok(Expr::Pow(base.into(), exponent.into()))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self, depth: usize) -> Result<Expr, ParseError> {
        self.check_depth(depth)?;
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr(depth + 1)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                match name {
                    "x" => Ok(Expr::Var(Axis::X)),
                    "y" => Ok(Expr::Var(Axis::Y)),
                    _ => {
                        let func = Func::from_name(name).ok_or(ParseError::UnknownIdentifier {
                            offset,
                            name: name.to_string(),
                        })?;
                        match self.peek() {
                            Some(Tok::LParen) => self.bump(),
                            _ => {
                                return Err(syntax(
                                    self.offset(),
                                    format!("expected `(` after function name `{name}`"),
                                ))
                            }
                        }
                        let arg = self.expr(depth + 1)?;
                        self.expect_rparen()?;
                        Ok(Expr::Call(func, arg.into()))
                    }
                }
            }
            Some(_) => Err(syntax(
                offset,
                "expected a number, variable, function, or `(`",
            )),
            None => Err(syntax(offset, "unexpected end of input")),
        }
    }
}

/// Parses an expression in the variables x and y.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.expr(0)?;
    if parser.pos < parser.toks.len() {
        return Err(syntax(parser.offset(), "unexpected trailing input"));
    }
    Ok(expr)
}
