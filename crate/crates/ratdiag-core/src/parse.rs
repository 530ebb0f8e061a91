//! Recursive-descent parser for rational-function expressions.
//!
//! Grammar:
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' natural)?
//! base   := natural | identifier | '(' expr ')'
//! ```
//! Identifiers match `[a-zA-Z][a-zA-Z0-9_]*` and must come from the declared
//! variable list. Division builds rational functions; exponents are
//! nonnegative integers. Errors carry the byte offset of the offending token.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::multipoly::{MultiPoly, RationalFunction};
use crate::rational::BigRat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = core::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                let n: BigInt = text.parse().unwrap();
                return Ok(Some((start, Tok::Int(n))));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = core::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                return Ok(Some((start, Tok::Ident(text.to_string()))));
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    message: alloc::format!("unexpected character {:?}", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((start, tok)))
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        match self.toks.get(self.idx) {
            Some((p, _)) => *p,
            None => self.toks.last().map(|(p, _)| *p).unwrap_or(self.end),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError { pos, message: alloc::format!("expected {what}") }),
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).ok_or(ParseError {
                        pos,
                        message: "division by zero".to_string(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError {
                        pos,
                        message: "exponent too large".to_string(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    return Err(ParseError {
                        pos,
                        message: "expected a nonnegative integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalFunction, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let c = BigRat::new(n, BigInt::one());
                Ok(RationalFunction::from_poly(MultiPoly::constant(self.vars, c)))
            }
            Some(Tok::Ident(name)) => {
                if self.vars.contains(&name.as_str()) {
                    Ok(RationalFunction::from_poly(MultiPoly::variable(self.vars, &name)))
                } else {
                    Err(ParseError {
                        pos,
                        message: alloc::format!("unknown variable {name}"),
                    })
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(_) | None => Err(ParseError {
                pos,
                message: "expected a number, variable or parenthesized expression".to_string(),
            }),
        }
    }
}

/// Parse an expression over the declared variables into a rational function.
pub fn parse_expression(src: &str, vars: &[&str]) -> Result<RationalFunction, ParseError> {
    let mut lex = Lexer::new(src);
    let mut toks = Vec::new();
    while let Some(t) = lex.next()? {
        toks.push(t);
    }
    let end = src.len();
    let mut p = Parser { toks, idx: 0, vars, end };
    let r = p.expr()?;
    if p.idx < p.toks.len() {
        return Err(ParseError { pos: p.pos(), message: "trailing input".to_string() });
    }
    Ok(r)
}

/// Parse an expression that must reduce to a polynomial (denominator one up
/// to a constant); convenient for curve input.
pub fn parse_polynomial(src: &str, vars: &[&str]) -> Result<MultiPoly, ParseError> {
    let rf = parse_expression(src, vars)?;
    let den = &rf.den;
    if den.total_degree() != Some(0) {
        return Err(ParseError {
            pos: 0,
            message: "expression is not a polynomial".to_string(),
        });
    }
    let c = den.terms.values().next().unwrap().clone();
    Ok(rf.num.scale(&c.recip()))
}

/// Parse a univariate rational function in the single declared variable.
pub fn parse_unirat(src: &str, var: &str) -> Result<crate::unirat::UniRat, ParseError> {
    let rf = parse_expression(src, &[var])?;
    let to_unipoly = |p: &MultiPoly| {
        let deg = p.terms.keys().map(|m| m.0[0] as usize).max().unwrap_or(0);
        let mut coeffs = alloc::vec![BigRat::zero(); deg + 1];
        for (m, c) in &p.terms {
            coeffs[m.0[0] as usize] = c.clone();
        }
        crate::poly::UniPoly::new(var, coeffs)
    };
    crate::unirat::unirat_normalize(&to_unipoly(&rf.num), &to_unipoly(&rf.den)).map_err(|_| {
        ParseError { pos: 0, message: "zero denominator".to_string() }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_display() {
        let vars = ["x", "y", "z"];
        for src in [
            "1 + 2*x + 3*y*z + x^2*y^2",
            "-x + y - 1",
            "(1+x)*(1-x) - y^3",
            "x^2*y^2*z^2 - 2*x*y*z + 1",
        ] {
            let p = parse_polynomial(src, &vars).unwrap();
            let again = parse_polynomial(&p.to_string(), &vars).unwrap();
            assert_eq!(p, again, "{src}");
        }
    }

    #[test]
    fn division_builds_rational_functions() {
        let vars = ["x", "y"];
        let r = parse_expression("x/(1 - y) + 1", &vars).unwrap();
        let expect = parse_expression("(x + 1 - y)/(1 - y)", &vars).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn nested_fractions_clear() {
        let vars = ["x", "y"];
        let r = parse_expression("1/(1 + 1/(1 + x))", &vars).unwrap();
        let expect = parse_expression("(1 + x)/(2 + x)", &vars).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn errors_carry_positions() {
        let vars = ["x"];
        let e = parse_expression("x + ", &vars).unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse_expression("x + w", &vars).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(e.message.contains('w'));
        let e = parse_expression("x ^ -2", &vars).unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_expression("x + $", &vars).unwrap_err();
        assert_eq!(e.pos, 4);
    }

    #[test]
    fn unirat_parsing() {
        let r = parse_unirat("(1 - x^2)/(2 - 2*x)", "x").unwrap();
        let expect = parse_unirat("(1 + x)/2", "x").unwrap();
        assert!(crate::unirat::unirat_equal(&r, &expect));
    }
}
