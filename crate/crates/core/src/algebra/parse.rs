//! Parser for jet-function expressions such as `1/24*log(v1) - 3/4*s*v^2`.
//!
//! Identifiers made of a jet base letter followed by digits (`v`, `v1`,
//! `w12`) denote jet variables; any other identifier is a parameter. The
//! only function is `log`, applied to `w_0` or `w_1`.

use super::jetfn::JetFunction;
use super::param::Param;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Jet base letters accepted by [`parse_jet_function`].
pub const DEFAULT_BASES: &[char] = &['v', 'w', 'u'];

pub fn parse_jet_function(src: &str) -> Result<JetFunction> {
    parse_with_bases(src, DEFAULT_BASES)
}

pub fn parse_with_bases(src: &str, bases: &[char]) -> Result<JetFunction> {
    let mut p = Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, bases };
    let f = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    bases: &'a [char],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at position {} in `{text}`", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<JetFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<JetFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<JetFunction> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<JetFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let paren = self.eat('(');
        let neg = neg || (paren && self.eat('-'));
        let e = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.error("expected `)`"));
        }
        let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
        let p = base.pow(e)?;
        if neg {
            JetFunction::int(1).div(&p)
        } else {
            Ok(p)
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer overflow"))
    }

    fn atom(&mut self) -> Result<JetFunction> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let f = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let r: Rational = s.parse().map_err(|_| self.error("bad number"))?;
                Ok(JetFunction::constant(r))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name == "log" {
                    if !self.eat('(') {
                        return Err(self.error("expected `(` after log"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.error("expected `)`"));
                    }
                    return if arg == JetFunction::jet(1) {
                        Ok(JetFunction::log_w1(Rational::ONE))
                    } else if arg == JetFunction::jet(0) {
                        Ok(JetFunction::log_w0(Rational::ONE))
                    } else {
                        Err(self.error("log is only supported for w_0 and w_1"))
                    };
                }
                if let Some(k) = self.jet_index(&name) {
                    return Ok(JetFunction::jet(k));
                }
                Ok(JetFunction::param(Param::new(&name)?))
            }
            _ => Err(self.error("unexpected token")),
        }
    }

    fn jet_index(&self, name: &str) -> Option<usize> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !self.bases.contains(&first) {
            return None;
        }
        let rest = chars.as_str().trim_start_matches('_');
        if rest.is_empty() {
            return Some(0);
        }
        let k: usize = rest.parse().ok()?;
        (k <= super::jet::MAX_JET).then_some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::calculus::monomial;

    #[test]
    fn parses_genus_one_example() {
        let f = parse_jet_function("1/24*log(v1) - 3/4*s*v^2").unwrap();
        let s = JetFunction::param(Param::named("s"));
        let expected =
            JetFunction::log_w1(Rational::new(1, 24)).add(&s.mul(&monomial(&[(0, 2)], Rational::new(-3, 4))).unwrap());
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_rational_functions() {
        let f = parse_jet_function("3*w1^4/(160*(1+w)^4)").unwrap();
        assert_eq!(f.den().degree(), Some(4));
        let g = parse_jet_function("v2^3/(360*v1^4)").unwrap();
        assert_eq!(g, monomial(&[(2, 3), (1, -4)], Rational::new(1, 360)));
        assert!(parse_jet_function("1/(v2)").is_err());
    }
}
