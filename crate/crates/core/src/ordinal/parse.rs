//! Parser for the `w^..*..+..` ordinal syntax.
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! ordinal := term ("+" term)*
//! term    := "w" ("^" factor)? ("*" nat)? | nat
//! factor  := nat | "w" | "(" ordinal ")"
//! ```
//!
//! Input need not be in normal form; terms are combined by natural sum.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Ordinal;

/// Syntax error with the byte position where parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", b as char))),
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError { position: self.pos, message }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {}
            _ => return Err(self.error("expected a number".into())),
        }
        let mut value: u64 = 0;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or_else(|| self.error("number too large".into()))?;
            self.pos += 1;
        }
        Ok(value)
    }

    fn factor(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ordinal()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(self.error("expected a number, 'w', or '('".into())),
        }
    }

    fn term(&mut self) -> Result<(Ordinal, u64), ParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.factor()?
                } else {
                    Ordinal::one()
                };
                let coefficient = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.nat()?
                } else {
                    1
                };
                Ok((exponent, coefficient))
            }
            Some(b) if b.is_ascii_digit() => Ok((Ordinal::zero(), self.nat()?)),
            _ => Err(self.error("expected a term".into())),
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseError> {
        let mut pairs: Vec<(Ordinal, u64)> = alloc::vec![self.term()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            pairs.push(self.term()?);
        }
        Ok(Ordinal::from_terms(pairs))
    }
}

pub fn parse_ordinal(s: &str) -> Result<Ordinal, ParseError> {
    let mut cur = Cursor::new(s);
    let x = cur.ordinal()?;
    match cur.bump() {
        None => Ok(x),
        Some(b) => Err(ParseError {
            position: cur.pos - 1,
            message: format!("unexpected '{}'", b as char),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn basic_forms() {
        assert_eq!(ok("0"), Ordinal::zero());
        assert_eq!(ok("17"), Ordinal::from_nat(17));
        assert_eq!(ok("w"), Ordinal::omega());
        assert_eq!(ok("w^3"), Ordinal::omega_pow(Ordinal::from_nat(3)));
        assert_eq!(
            ok("w^w*2"),
            Ordinal::omega_pow_times(Ordinal::omega(), 2)
        );
    }

    #[test]
    fn nested_and_spaced() {
        assert_eq!(ok(" w^(w+1) * 3 + w * 2 + 5 "), ok("w^(w+1)*3+w*2+5"));
        assert_eq!(ok("w^(w^(w^w))"), ok("w^(w^(w^w))"));
    }

    #[test]
    fn non_normal_input_is_normalized() {
        assert_eq!(ok("w+w"), ok("w*2"));
        assert_eq!(ok("1+w"), ok("w+1"));
        assert_eq!(ok("w^2+w^2+w+w^2"), ok("w^2*3+w"));
        assert_eq!(ok("w*0+4"), ok("4"));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_ordinal("w^").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_ordinal("w^(w").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_ordinal("3+*").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_ordinal("w)").unwrap_err();
        assert_eq!(e.position, 1);
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("omega").is_err());
    }
}
