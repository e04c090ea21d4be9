//! Recursive-descent reader for polynomial expressions.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' UINT)?
//! atom   := INT | VAR | '(' expr ')'
//! VAR    := ('x'|'y') UINT
//! ```

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;

use super::field::Field;
use super::poly::{MultiPoly, Vars};
use crate::error::{Error, Result};

/// Parses `text` into a polynomial over `Q` in the declared variables.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(poly)
}

/// Parses and reduces into `field` in one step.
pub fn parse_poly_in(text: &str, vars: &Vars, field: Field) -> Result<MultiPoly> {
    parse_poly(text, vars)?.to_field(field)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn error(&self, message: String) -> Error {
        Error::Syntax {
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let exp = self
                .digits()
                .ok_or_else(|| self.error("expected an exponent".to_string()))?;
            let exp: u32 = exp.parse().map_err(|_| Error::Syntax {
                position: at,
                message: format!("exponent `{exp}` is too large"),
            })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let start = match self.peek() {
            None => return Err(self.error("unexpected end of input".to_string())),
            Some(_) => self.pos,
        };
        match self.src[start] {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`".to_string()));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'0'..=b'9' => {
                let text = self.digits().unwrap_or_default();
                let n = BigInt::parse_bytes(text.as_bytes(), 10)
                    .ok_or_else(|| self.error("malformed integer".to_string()))?;
                Ok(MultiPoly::constant(
                    self.vars,
                    Field::Rationals.from_bigint(&n),
                ))
            }
            b'x' | b'y' => {
                self.pos += 1;
                if self.digits().is_none() {
                    return Err(Error::Syntax {
                        position: start + 1,
                        message: "expected a variable index".to_string(),
                    });
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(MultiPoly::variable(self.vars, Field::Rationals, i)),
                    None => Err(Error::UndeclaredVariable {
                        name: name.to_string(),
                        position: start,
                    }),
                }
            }
            c => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }
}
