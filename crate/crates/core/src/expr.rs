//! A small expression language for rational streams.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | number '/' number | 'X' | '(' expr ')' | 'inv' '(' expr ')'
//! ```
//!
//! A `/` written directly between two integers, with no whitespace, is part
//! of a single scalar literal: `1/2*X` is half of `X`, while `1 / 2*X` is the
//! quotient of `1` by `2X`. Numbers denote constant streams.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result, SyntaxError};
use crate::poly::RationalStream;
use crate::scalar::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamExpr {
    Scalar(FieldElement),
    X,
    Neg(Box<StreamExpr>),
    Add(Box<StreamExpr>, Box<StreamExpr>),
    Sub(Box<StreamExpr>, Box<StreamExpr>),
    Mul(Box<StreamExpr>, Box<StreamExpr>),
    Div(Box<StreamExpr>, Box<StreamExpr>),
    Pow(Box<StreamExpr>, u32),
    Inv(Box<StreamExpr>),
}

impl StreamExpr {
    pub fn parse(text: &str, field: &Field) -> Result<Self> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            field,
        };
        let e = parser.expr()?;
        parser.expect_end()?;
        Ok(e)
    }

    /// Evaluates to a normalized rational stream.
    pub fn eval(&self, field: &Field) -> Result<RationalStream> {
        Ok(match self {
            StreamExpr::Scalar(c) => {
                if c.field() != *field {
                    return Err(Error::FieldMismatch(field.clone(), c.field()));
                }
                RationalStream::constant(c.clone())
            }
            StreamExpr::X => RationalStream::x(field),
            StreamExpr::Neg(e) => e.eval(field)?.neg(),
            StreamExpr::Add(a, b) => a.eval(field)?.add(&b.eval(field)?),
            StreamExpr::Sub(a, b) => a.eval(field)?.sub(&b.eval(field)?),
            StreamExpr::Mul(a, b) => a.eval(field)?.mul(&b.eval(field)?),
            StreamExpr::Div(a, b) => a.eval(field)?.div(&b.eval(field)?)?,
            StreamExpr::Pow(e, k) => e.eval(field)?.pow(*k),
            StreamExpr::Inv(e) => e.eval(field)?.inverse()?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            StreamExpr::Add(..) | StreamExpr::Sub(..) => 1,
            StreamExpr::Mul(..) | StreamExpr::Div(..) => 2,
            StreamExpr::Neg(_) => 3,
            StreamExpr::Scalar(c) if c.is_negative() => 3,
            StreamExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_bare(f)?;
            f.write_str(")")
        } else {
            self.fmt_bare(f)
        }
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary =
            |f: &mut fmt::Formatter<'_>, a: &StreamExpr, op: &str, b: &StreamExpr, level: u8| {
                a.fmt_at(f, level)?;
                write!(f, " {op} ")?;
                b.fmt_at(f, level + 1)
            };
        match self {
            StreamExpr::Scalar(c) => write!(f, "{c}"),
            StreamExpr::X => f.write_str("X"),
            StreamExpr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_at(f, 3)
            }
            StreamExpr::Add(a, b) => binary(f, a, "+", b, 1),
            StreamExpr::Sub(a, b) => binary(f, a, "-", b, 1),
            StreamExpr::Mul(a, b) => binary(f, a, "*", b, 2),
            StreamExpr::Div(a, b) => binary(f, a, "/", b, 2),
            StreamExpr::Pow(e, k) => {
                e.fmt_at(f, 5)?;
                write!(f, "^{k}")
            }
            StreamExpr::Inv(e) => {
                f.write_str("inv(")?;
                e.fmt_bare(f)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for StreamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_bare(f)
    }
}

/// Parses and evaluates in one step.
pub fn parse_stream(text: &str, field: &Field) -> Result<RationalStream> {
    StreamExpr::parse(text, field)?.eval(field)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ratio(String, String),
    X,
    Inv,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => s.clone(),
            Tok::Ratio(a, b) => format!("{a}/{b}"),
            Tok::X => "X".into(),
            Tok::Inv => "inv".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, expected: &[&'static str], found: impl Into<String>) -> Error {
    Error::Syntax(SyntaxError {
        offset,
        expected: expected.to_vec(),
        found: found.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let digits_from = |start: usize| {
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        end
    };
    let mut out: Vec<(usize, Tok)> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let end = digits_from(i);
                let after_caret = matches!(out.last(), Some((_, Tok::Caret)));
                let ratio = !after_caret
                    && end + 1 < bytes.len()
                    && bytes[end] == b'/'
                    && bytes[end + 1].is_ascii_digit();
                if ratio {
                    let den_end = digits_from(end + 1);
                    i = den_end;
                    Tok::Ratio(
                        text[start..end].to_string(),
                        text[end + 1..den_end].to_string(),
                    )
                } else {
                    i = end;
                    Tok::Int(text[start..end].to_string())
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = i;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                i = end;
                match &text[start..end] {
                    "X" | "x" => Tok::X,
                    "inv" => Tok::Inv,
                    word => return Err(syntax(start, &["X", "inv", "number"], word)),
                }
            }
            _ => {
                i += 1;
                match b {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = text[start..].chars().next().unwrap_or('?');
                        return Err(syntax(
                            start,
                            &["number", "X", "operator", "("],
                            ch.to_string(),
                        ));
                    }
                }
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> Error {
        syntax(self.offset(), expected, self.peek().describe())
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<StreamExpr> {
        let mut lhs = self.term()?;
        loop {
            let make = match self.peek() {
                Tok::Plus => StreamExpr::Add,
                Tok::Minus => StreamExpr::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<StreamExpr> {
        let mut lhs = self.unary()?;
        loop {
            let make = match self.peek() {
                Tok::Star => StreamExpr::Mul,
                Tok::Slash => StreamExpr::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<StreamExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(StreamExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<StreamExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Tok::Int(digits) => {
                let k: u32 = digits
                    .parse()
                    .map_err(|_| syntax(at, &["exponent below 2^32"], digits.clone()))?;
                Ok(StreamExpr::Pow(Box::new(base), k))
            }
            other => Err(syntax(at, &["non-negative integer"], other.describe())),
        }
    }

    fn scalar(&self, at: usize, text: &str) -> Result<StreamExpr> {
        self.field
            .parse_scalar(text)
            .map(StreamExpr::Scalar)
            .map_err(|e| match e {
                Error::InvalidScalar(_) => syntax(at, &["number"], text),
                other => other,
            })
    }

    fn atom(&mut self) -> Result<StreamExpr> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.bump();
                self.scalar(at, &digits)
            }
            Tok::Ratio(num, den) => {
                self.bump();
                self.scalar(at, &format!("{num}/{den}"))
            }
            Tok::X => {
                self.bump();
                Ok(StreamExpr::X)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Inv => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.error(&["("]));
                }
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(StreamExpr::Inv(Box::new(e)))
            }
            _ => Err(self.error(&["number", "X", "(", "inv", "-"])),
        }
    }

    fn close(&mut self) -> Result<()> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[")", "operator"]))
        }
    }
}
