//! Polynomial literals in `x, y, z`: `+ - * ^`, parentheses, integer and `p/q` coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := integer ('/' integer)? | 'x' | 'y' | 'z' | '(' expr ')'
//! ```

use thiserror::Error;

use crate::algebra::{HomogeneousForm, MPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// `column` is 1-based.
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is zero")]
    Zero,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { column: self.pos + 1, message: message.into() })
    }

    fn skip_space(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_space();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, ParseError> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<MPoly<Rational>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<Rational>, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly<Rational>, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly<Rational>, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.integer()?;
        match u32::try_from(e) {
            Ok(e) if e <= 1000 => Ok(base.pow(e)),
            _ => self.error("exponent too large"),
        }
    }

    fn atom(&mut self) -> Result<MPoly<Rational>, ParseError> {
        match self.peek() {
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                Ok(MPoly::var((c - b'x') as usize))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den == 0.into() {
                        return self.error("zero denominator");
                    }
                    q /= Rational::from_integer(den);
                }
                Ok(MPoly::constant(q))
            }
            Some(_) => self.error("expected a number, a variable, or '('"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in `x, y, z` with rational coefficients.
pub fn parse_polynomial(text: &str) -> Result<MPoly<Rational>, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.error("unexpected character");
    }
    Ok(out)
}

/// Parses a nonzero homogeneous form.
pub fn parse_form(text: &str) -> Result<HomogeneousForm<Rational>, ParseError> {
    let poly = parse_polynomial(text)?;
    if poly.is_zero() {
        return Err(ParseError::Zero);
    }
    HomogeneousForm::from_poly(poly).ok_or(ParseError::NotHomogeneous)
}
