//! Plain-text polynomials: signed sums of products of integer literals and `var^exp` factors.

use thiserror::Error;

/// One parsed term: integer coefficient and a list of `(variable, exponent)` factors.
pub type ParsedTerm = (i64, Vec<(String, u32)>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {offset}")]
    UnexpectedChar { offset: usize, found: char },
    #[error("expected {expected} at offset {offset}")]
    Expected { offset: usize, expected: &'static str },
    #[error("integer literal at offset {offset} does not fit in 64 bits")]
    Overflow { offset: usize },
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::Expected { offset: start, expected: "integer" });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ParseError::Overflow { offset: start })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

/// Parse `"T1*T5 - 2*T0^2*T6 + 3"` into its terms.
pub fn parse_polynomial(src: &str) -> Result<Vec<ParsedTerm>, ParseError> {
    let mut cur = Cursor { src: src.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match cur.peek() {
            None if !first => break,
            None => return Err(ParseError::Expected { offset: cur.pos, expected: "term" }),
            Some(b'+') if !first => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                sign = -1;
            }
            Some(_) if first => {}
            Some(c) => {
                return Err(ParseError::UnexpectedChar { offset: cur.pos, found: c as char })
            }
        }
        first = false;
        let mut coeff = sign;
        let mut factors = Vec::new();
        loop {
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = cur.integer()?;
                    coeff = coeff.checked_mul(v).ok_or(ParseError::Overflow { offset: cur.pos })?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = cur.ident();
                    let mut exp = 1u32;
                    if cur.peek() == Some(b'^') {
                        cur.pos += 1;
                        let e = cur.integer()?;
                        exp = u32::try_from(e).map_err(|_| ParseError::Overflow { offset: cur.pos })?;
                    }
                    factors.push((name, exp));
                }
                Some(c) => {
                    return Err(ParseError::UnexpectedChar { offset: cur.pos, found: c as char })
                }
                None => return Err(ParseError::Expected { offset: cur.pos, expected: "factor" }),
            }
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
            } else {
                break;
            }
        }
        terms.push((coeff, factors));
    }
    Ok(terms)
}
