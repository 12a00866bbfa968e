use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraError, Monomial, Polynomial, Rational, VarTable};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse {
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        Ok(digits.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32, AlgebraError> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("exponent out of range"))
    }
}

/// Parses `coeff*var^exp*... +/- ...` over `table`.
pub(crate) fn parse_polynomial(
    table: Arc<VarTable>,
    text: &str,
) -> Result<Polynomial, AlgebraError> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let n = table.len();
    let mut poly = Polynomial::zero(table.clone());
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        match cur.peek() {
            None if first => return Err(cur.err("empty polynomial")),
            None => break,
            Some(b'+') => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("expected `+` or `-`, found `{}`", c as char))),
        }
        first = false;

        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        loop {
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = cur.integer()?;
                    let mut value = Rational::from_integer(num);
                    if cur.peek() == Some(b'/') {
                        cur.pos += 1;
                        let den = cur.integer()?;
                        if den == BigInt::from(0) {
                            return Err(cur.err("zero denominator"));
                        }
                        value /= Rational::from_integer(den);
                    }
                    coeff *= value;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let col = cur.pos;
                    let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                    let var = table.index_of(name).ok_or(AlgebraError::Parse {
                        col: col + 1,
                        msg: format!("unknown variable `{name}`"),
                    })?;
                    let e = if cur.peek() == Some(b'^') {
                        cur.pos += 1;
                        cur.exponent()?
                    } else {
                        1
                    };
                    exps[var] += e;
                }
                _ => return Err(cur.err("expected a number or a variable")),
            }
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
            } else {
                break;
            }
        }
        poly.add_term(Monomial::from_exponents(exps), coeff);
    }
    Ok(poly)
}
