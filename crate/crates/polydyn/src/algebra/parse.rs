//! Text syntax for polynomials and scalars.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*      division by constants only
//! unary   := '-' unary | primary ('^' UINT)?
//! primary := UINT | 'z' | 'i' | 'zeta' UINT | '(' expr ')'
//! ```
//!
//! The unicode minus sign is accepted as '-'.

use num::bigint::BigInt;
use num::rational::BigRational;

use super::poly::Poly;
use super::scalar::Scalar;
use crate::{Error, Result};

pub fn parse_poly(src: &str) -> Result<Poly> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let p = parse_poly(src)?;
    match p.degree() {
        None => Ok(Scalar::zero()),
        Some(0) => Ok(p.coeff(0)),
        Some(d) => Err(Error::Parse(format!(
            "expected a constant, found a degree-{d} polynomial"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    I,
    Zeta(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    toks.push(Tok::Plus);
                    i += 1;
                }
                '-' | '\u{2212}' => {
                    toks.push(Tok::Minus);
                    i += 1;
                }
                '*' => {
                    toks.push(Tok::Star);
                    i += 1;
                }
                '/' => {
                    toks.push(Tok::Slash);
                    i += 1;
                }
                '^' => {
                    toks.push(Tok::Caret);
                    i += 1;
                }
                '(' => {
                    toks.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::RParen);
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    let n = text
                        .parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("bad integer {text}: {e}")))?;
                    toks.push(Tok::Int(n));
                }
                'a'..='z' | 'A'..='Z' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    match word.as_str() {
                        "z" => toks.push(Tok::Z),
                        "i" => toks.push(Tok::I),
                        w if w.starts_with("zeta") => {
                            let m = w[4..].parse::<u64>().map_err(|_| {
                                Error::Parse(format!("bad root-of-unity order in {w}"))
                            })?;
                            toks.push(Tok::Zeta(m));
                        }
                        w => return Err(Error::Parse(format!("unknown name {w}"))),
                    }
                }
                other => {
                    return Err(Error::Parse(format!("unexpected character {other:?}")));
                }
            }
        }
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "trailing input from token {}",
                self.pos + 1
            )))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    let prod_deg = acc.degree().unwrap_or(0) + rhs.degree().unwrap_or(0);
                    let cap = super::poly::degree_cap();
                    if prod_deg > cap {
                        return Err(Error::Resource(format!(
                            "degree {prod_deg} exceeds cap {cap}"
                        )));
                    }
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    match rhs.degree() {
                        None => return Err(Error::Parse("division by zero".into())),
                        Some(0) => {
                            let inv = rhs.coeff(0).recip()?;
                            acc = acc.scale(&inv);
                        }
                        Some(_) => {
                            return Err(Error::Parse(
                                "division is only allowed by constants".into(),
                            ));
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        let base = self.primary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let k = u32::try_from(&n)
                        .map_err(|_| Error::Parse(format!("exponent {n} too large")))?;
                    return base.pow(k);
                }
                other => {
                    return Err(Error::Parse(format!(
                        "expected an integer exponent, found {other:?}"
                    )));
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Poly::constant(Scalar::from_ratio(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Z) => Ok(Poly::z()),
            Some(Tok::I) => Ok(Poly::constant(Scalar::i_unit())),
            Some(Tok::Zeta(m)) => Ok(Poly::constant(Scalar::root_of_unity(m, 1)?)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    other => Err(Error::Parse(format!(
                        "expected ')', found {other:?}"
                    ))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
