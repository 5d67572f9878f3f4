//! Polynomial text format.
//!
//! ```text
//! term := coeff | coeff "*" var "^" exp | var "^" exp | coeff "*" var | var
//! poly := term (("+" | "-") term)*
//! var  := "t" | "U"
//! ```
//!
//! Coefficients are nonnegative decimals reduced into the prime subfield, or
//! `(c_{k-1},…,c_0)` coordinate tuples for extension fields. Blanks between
//! tokens are ignored. The canonical form lists exponents in descending order,
//! omits zero terms and unit coefficients, and folds signs into coefficients.

use super::{Poly, PolyError};
use crate::ffield::{Field, FieldElem};

/// Exponents beyond this are rejected rather than allocated.
const MAX_EXPONENT: usize = 1 << 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Var {
    T,
    U,
}

impl Var {
    fn symbol(self) -> char {
        match self {
            Var::T => 't',
            Var::U => 'U',
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    field: &'a Field,
    var: Option<u8>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax<T>(&self, offset: usize, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { offset, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<&'a str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax(start, "expected a decimal number");
        }
        Ok(&self.src[start..self.pos])
    }

    /// Decimal string reduced mod p without overflow.
    fn reduce_decimal(&self, s: &str) -> u64 {
        let p = self.field.p() as u64;
        s.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p)
    }

    fn coeff(&mut self) -> Result<FieldElem, PolyError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut coords = Vec::new();
            loop {
                let d = self.digits()?;
                coords.push(self.reduce_decimal(d));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.syntax(self.pos, "expected ',' or ')' in coefficient tuple"),
                }
            }
            // Written high coordinate first.
            coords.reverse();
            return self.field.from_coords(&coords).map_err(|_| PolyError::Coefficient {
                offset: start,
                text: self.src[start..self.pos].to_string(),
                field: self.field.label().to_string(),
            });
        }
        let d = self.digits()?;
        Ok(self.field.from_int(self.reduce_decimal(d)))
    }

    fn var(&mut self) -> Result<bool, PolyError> {
        match self.peek() {
            Some(c @ (b't' | b'U')) => {
                if let Some(v) = self.var {
                    if v != c {
                        return self.syntax(self.pos, "mixed variables in one polynomial");
                    }
                }
                self.var = Some(c);
                self.pos += 1;
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn exponent(&mut self) -> Result<usize, PolyError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        if !matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            return self.syntax(self.pos, "expected exponent after '^'");
        }
        let start = self.pos;
        let d = self.digits()?;
        match d.parse::<usize>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => self.syntax(start, "exponent too large"),
        }
    }

    fn term(&mut self) -> Result<(FieldElem, usize), PolyError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.var()? {
            let e = self.exponent()?;
            return Ok((FieldElem::ONE, e));
        }
        match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'(' => {}
            Some(_) => return self.syntax(start, "expected a term"),
            None => return self.syntax(start, "unexpected end of input"),
        }
        let c = self.coeff()?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            if !self.var()? {
                return self.syntax(self.pos, "expected variable after '*'");
            }
            let e = self.exponent()?;
            return Ok((c, e));
        }
        Ok((c, 0))
    }
}

impl Poly {
    /// Parses the polynomial text format over `field`.
    pub fn parse(s: &str, field: &Field) -> Result<Poly, PolyError> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0, field, var: None };
        let mut coeffs: Vec<FieldElem> = Vec::new();
        let mut negate = false;
        if p.peek() == Some(b'-') {
            p.pos += 1;
            negate = true;
        }
        loop {
            let (mut c, e) = p.term()?;
            if negate {
                c = field.neg(c);
            }
            if coeffs.len() <= e {
                coeffs.resize(e + 1, FieldElem::ZERO);
            }
            coeffs[e] = field.add(coeffs[e], c);
            match p.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return p.syntax(p.pos, "expected '+', '-' or end of input"),
            }
            p.pos += 1;
        }
        Ok(Poly::new(field, coeffs))
    }

    /// Canonical text with the given variable name.
    pub fn format_with(&self, var: Var) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let v = var.symbol();
        let mut terms = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = self.format_coeff(c);
            let mono = match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            terms.push(match (e, c == FieldElem::ONE) {
                (0, _) => coeff,
                (_, true) => mono,
                (_, false) => format!("{coeff}*{mono}"),
            });
        }
        terms.join("+")
    }

    fn format_coeff(&self, c: FieldElem) -> String {
        if self.field.k() == 1 {
            return c.code().to_string();
        }
        let coords: Vec<String> =
            self.field.coords(c).iter().rev().map(|x| x.to_string()).collect();
        format!("({})", coords.join(","))
    }
}
