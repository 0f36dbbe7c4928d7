//! Recursive-descent parser for field elements written as expressions,
//! e.g. `"t^-1 + 1 + 2*t"` or `"u + t"`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ['^' ['-'] int]
//! atom   := int | name | '(' expr ')'
//! ```

use super::ValuedField;
use crate::error::{Error, Result};

struct Parser<'a, F: ValuedField> {
    field: &'a F,
    src: &'a [u8],
    pos: usize,
}

pub fn parse_expr<F: ValuedField>(field: &F, s: &str) -> Result<F::Elem> {
    let mut p = Parser { field, src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl<F: ValuedField> Parser<'_, F> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn expr(&mut self) -> Result<F::Elem> {
        let k = self.field;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                k.neg(&self.term()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { k.add(&acc, &t) } else { k.sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F::Elem> {
        let k = self.field;
        let mut acc = self.power()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let f = self.power()?;
            acc = if c == b'*' { k.mul(&acc, &f) } else { k.div(&acc, &f)? };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<F::Elem> {
        let k = self.field;
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.int()?;
        let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
        let r = k.pow(&base, e);
        if neg {
            k.inv(&r)
        } else {
            Ok(r)
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<F::Elem> {
        let k = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let n: i64 = n.try_into().map_err(|_| self.err("integer out of range"))?;
                Ok(k.of_i64(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                k.variable(name).ok_or_else(|| self.err(&format!("unknown variable {name:?}")))
            }
            _ => Err(self.err("expected a number, a variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{LaurentField, Qp, QpElem, ValuedField};

    #[test]
    fn parses_rationals_and_series() {
        let q = Qp::new(2);
        assert_eq!(q.parse_elem("-(3 + 1)/8").unwrap(), QpElem::from_ratio(-1, 2));
        assert_eq!(q.parse_elem("2^-3").unwrap(), QpElem::from_ratio(1, 8));
        assert!(q.parse_elem("t").is_err());
        let k = LaurentField::new(5, true, 16);
        let a = k.parse_elem("u*t^-2 - 3").unwrap();
        assert_eq!(k.val(&a).unwrap(), Some(-2));
        assert!(k.parse_elem("1 +").is_err());
        assert!(k.parse_elem("(1").is_err());
    }
}
