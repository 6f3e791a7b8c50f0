//! Parser for the canonical polynomial text produced by `Display`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT] | IDENT ['^' INT] | '(' expr ')'
//! ```
//! The identifier `zeta` denotes the primitive root ζ_M of the field.

use num_bigint::BigInt;
use thiserror::Error;

use super::{MultiPoly, Vars};
use crate::numeric::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at byte {pos}: {msg}")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse_poly(text: &str, vars: &Vars, field: &Field) -> Result<MultiPoly, ParsePolyError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        vars,
        field,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    field: &'a Field,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParsePolyError {
        ParsePolyError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = MultiPoly::zero(self.vars, self.field);
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
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

    fn term(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }

    fn factor(&mut self) -> Result<MultiPoly, ParsePolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from_integer(d);
                }
                Ok(MultiPoly::constant(self.vars, self.field.from_rational(q)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii ident");
                let base = if name == "zeta" {
                    MultiPoly::constant(self.vars, self.field.zeta())
                } else {
                    let i = self
                        .vars
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| self.err(&format!("unknown variable '{name}'")))?;
                    MultiPoly::var(self.vars, self.field, i)
                };
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.integer()?;
                    let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
            _ => Err(self.err("expected factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;

    #[test]
    fn parses_canonical_output() {
        let v = vars(&["x", "y", "z"]);
        let k = Field::new(12).unwrap();
        let text = "-3/2*x^2*y + (1 - zeta^3)*z - 7";
        let p = parse_poly(text, &v, &k).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &v, &k).unwrap(), p);
    }

    #[test]
    fn reports_unknown_variable() {
        let v = vars(&["x", "y"]);
        let k = Field::new(4).unwrap();
        let e = parse_poly("x + w", &v, &k).unwrap_err();
        assert!(e.msg.contains("unknown variable"));
    }
}
