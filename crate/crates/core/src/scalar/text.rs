//! Parser for the canonical expression grammar:
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := number ["i"] | "i" | "(" expr ")" | name ["^" int] | "Tr[" gen+ "]" ["^" int]
//! ```
//!
//! Whitespace is insignificant except as a separator between generators
//! inside `Tr[...]`.

use std::str::FromStr;

use super::{GaussianRational, Monomial, ParseError, Param, ScalarExpr, TraceSymbol};
use crate::endo::FGenerator;

impl FromStr for ScalarExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(ParseError::new(format!("trailing input at byte {} in `{s}`", p.pos)));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> ParseError {
        ParseError::new(format!("{what} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = ScalarExpr::zero();
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc.add_assign(&if sign < 0 { t.neg() } else { t });
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<i128, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected integer"))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            i32::try_from(e).map_err(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.int()?;
                let q = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.int()?
                } else {
                    1
                };
                if q == 0 {
                    return Err(self.err("zero denominator"));
                }
                let mut c = GaussianRational::frac(p, q);
                // `5/4 i` or `5/4*i` attaches the unit to the literal
                let save = self.pos;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
                if self.peek() == Some(b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    c = &c * &GaussianRational::i();
                } else {
                    self.pos = save;
                }
                Ok(ScalarExpr::constant(c))
            }
            Some(_) => {
                let name = self.ident();
                if name.is_empty() {
                    return Err(self.err("expected factor"));
                }
                if name == "i" {
                    return Ok(ScalarExpr::i());
                }
                if name == "Tr" {
                    return self.trace();
                }
                let p = Param::from_name(&name).ok_or_else(|| self.err(&format!("unknown name `{name}`")))?;
                let e = self.exponent()?;
                if e < 0 && p != Param::F {
                    return Err(self.err("negative exponent on a parameter other than f"));
                }
                Ok(ScalarExpr::param_pow(p, e))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.src.get(at).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
    }

    fn trace(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.peek() != Some(b'[') {
            return Err(self.err("expected `[` after Tr"));
        }
        self.pos += 1;
        let mut word = Vec::new();
        while self.peek() != Some(b']') {
            let name = self.ident();
            let g: FGenerator = name.parse().map_err(|_| self.err(&format!("unknown generator `{name}`")))?;
            word.push(g);
            if self.peek().is_none() {
                return Err(self.err("unterminated Tr["));
            }
        }
        self.pos += 1;
        let t = TraceSymbol::normalize(&word).ok_or_else(|| self.err("empty trace word"))?;
        let e = self.exponent()?;
        if e < 1 {
            return Err(self.err("trace symbols take positive exponents"));
        }
        let m = Monomial::from_parts(vec![], vec![(t, e as u32)]);
        Ok(ScalarExpr::term(GaussianRational::one(), m))
    }
}
