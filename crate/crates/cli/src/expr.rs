//! Parser for rational functions in the single variable `e`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | 'e' | '(' expr ')'
//! ```

use casimir_core::scalar_poly::{Rational, RationalFunction};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num(usize, usize),
    E,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, String> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(start, i)));
                continue;
            }
            b'e' => Tok::E,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => return Err(format!("unexpected character `{}` at offset {i}", src[i..].chars().next().unwrap())),
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunction, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(format!("division by zero at offset {at}"));
                    }
                    acc = acc / d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, String> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, String> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek() == Some(Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let Some(Tok::Num(s, t)) = self.bump() else {
            return Err(format!("expected an integer exponent at offset {at}"));
        };
        let k: u32 = self.src[s..t]
            .parse()
            .map_err(|_| format!("exponent too large at offset {at}"))?;
        if negative && base.is_zero() {
            return Err(format!("zero raised to a negative power at offset {at}"));
        }
        let mut out = RationalFunction::one();
        for _ in 0..k {
            out = out * base.clone();
        }
        Ok(if negative { out.recip() } else { out })
    }

    fn atom(&mut self) -> Result<RationalFunction, String> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(s, t)) => {
                let n: num_bigint::BigInt = self.src[s..t].parse().expect("digits");
                Ok(RationalFunction::constant(Rational::from_integer(n)))
            }
            Some(Tok::E) => Ok(RationalFunction::epsilon()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(format!("expected `)` at offset {close}")),
                }
            }
            Some(_) => Err(format!("unexpected token at offset {at}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

/// Parses an expression such as `"e^2"`, `"1 + 3*e"` or `"(e+1)/e"`.
pub fn parse_ratfunc(src: &str) -> Result<RationalFunction, String> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { src, toks, pos: 0 };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(format!("trailing input at offset {}", p.offset()));
    }
    Ok(value)
}
