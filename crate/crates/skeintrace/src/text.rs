//! Parsing of the textual scalar grammar produced by `Display`.
//!
//! Grammar (whitespace-insensitive between tokens):
//! `scalar := ['-'] term ((' + '|' - ') term)*`
//! `term   := factor ('*' factor)*`
//! `factor := INT | 'z' | 'A^(' p['/4'] ')' | 'CT^(' k ')' | 'CB^(' k ')'
//!          | 'Q[' [rat '*'|'-'] name ']'`

use num_rational::Rational64;

use crate::scalar::{AngleId, Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub at: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.at, self.message)
    }
}
impl std::error::Error for ParseError {}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
        }
    }
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }
    fn eat_str(&mut self, t: &str) -> bool {
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            at: self.pos,
            message: message.to_string(),
        }
    }
    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer overflow"))?;
        Ok(if neg { -v } else { v })
    }
    fn rat(&mut self) -> Result<Rat, ParseError> {
        let n = self.int()?;
        if self.eat(b'/') {
            let d = self.int()?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational64::new(n, d))
        } else {
            Ok(Rat::from_integer(n))
        }
    }
    fn ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .to_string())
    }
}

fn angle_id_of(name: &str) -> AngleId {
    if let Some(rest) = name.strip_prefix("th") {
        let (digits, slot) = if let Some(d) = rest.strip_suffix("pp") {
            (d, 2u8)
        } else if let Some(d) = rest.strip_suffix('p') {
            (d, 1u8)
        } else {
            (rest, 0u8)
        };
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            return AngleId::Tet {
                tet: digits.parse().unwrap(),
                slot,
            };
        }
    }
    AngleId::named(name)
}

fn parse_factor(c: &mut Cursor) -> Result<Scalar, ParseError> {
    c.skip_ws();
    match c.peek() {
        Some(b'z') => {
            c.pos += 1;
            Ok(Scalar::zeta_pow(1))
        }
        Some(b'A') => {
            c.pos += 1;
            c.expect(b'^')?;
            c.expect(b'(')?;
            let r = c.rat()?;
            c.expect(b')')?;
            let quarters = r * Rat::from_integer(4);
            if !quarters.is_integer() {
                return Err(c.err("A-exponent must have denominator dividing 4"));
            }
            Ok(Scalar::a_quarters(quarters.to_integer()))
        }
        Some(b'C') => {
            if c.eat_str("CT^(") {
                let k = c.int()?;
                c.expect(b')')?;
                Ok(Scalar::ct_pow(k))
            } else if c.eat_str("CB^(") {
                let k = c.int()?;
                c.expect(b')')?;
                Ok(Scalar::cb_pow(k))
            } else {
                Err(c.err("expected CT^(..) or CB^(..)"))
            }
        }
        Some(b'Q') => {
            c.pos += 1;
            c.expect(b'[')?;
            // optional rational coefficient with '*', or bare '-'
            let save = c.pos;
            let coeff = if c.peek() == Some(b'-')
                && !c.s[c.pos + 1..].first().is_some_and(|b| b.is_ascii_digit())
            {
                c.pos += 1;
                -Rat::from_integer(1)
            } else if c.peek().is_some_and(|b| b.is_ascii_digit() || b == b'-') {
                let r = c.rat()?;
                if c.eat(b'*') {
                    r
                } else {
                    c.pos = save;
                    Rat::from_integer(1)
                }
            } else {
                Rat::from_integer(1)
            };
            let name = c.ident()?;
            c.expect(b']')?;
            Ok(Scalar::q_angle(angle_id_of(&name), coeff))
        }
        Some(b) if b.is_ascii_digit() => {
            let n = c.int()?;
            Ok(Scalar::int(n))
        }
        _ => Err(c.err("expected factor")),
    }
}

fn parse_term(c: &mut Cursor) -> Result<Scalar, ParseError> {
    let mut acc = parse_factor(c)?;
    loop {
        c.skip_ws();
        let save = c.pos;
        if c.eat(b'*') {
            let f = parse_factor(c)?;
            acc = acc.mul(&f);
        } else {
            c.pos = save;
            break;
        }
    }
    Ok(acc)
}

/// Parses the scalar grammar emitted by `Scalar`'s `Display`.
pub fn parse_scalar(input: &str) -> Result<Scalar, ParseError> {
    let mut c = Cursor::new(input);
    c.skip_ws();
    if c.eat(b'0') && {
        c.skip_ws();
        c.peek().is_none()
    } {
        return Ok(Scalar::zero());
    }
    c.pos = 0;
    c.skip_ws();
    let neg = c.eat(b'-');
    let mut acc = parse_term(&mut c)?;
    if neg {
        acc = acc.neg();
    }
    loop {
        c.skip_ws();
        match c.peek() {
            Some(b'+') => {
                c.pos += 1;
                let t = parse_term(&mut c)?;
                acc = acc.add(&t);
            }
            Some(b'-') => {
                c.pos += 1;
                let t = parse_term(&mut c)?;
                acc = acc.sub(&t);
            }
            None => break,
            _ => return Err(c.err("expected '+', '-' or end")),
        }
    }
    Ok(acc)
}
