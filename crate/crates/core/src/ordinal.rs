//! Ordinal notations below epsilon_0 in Cantor normal form.
//!
//! Text grammar (whitespace ignored):
//!
//! ```text
//! ord   := "0" | term ("+" term)*
//! term  := NUM | "w" ["^" atom] ["*" NUM]
//! atom  := NUM | "w" | "(" ord ")"
//! ```
//!
//! Terms must be written with strictly decreasing exponents, coefficients
//! and exponents of `w^...` must be at least 1 and 2 respectively when
//! numeric, so every ordinal has exactly one spelling and `Display` inverts
//! `FromStr`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordinal `w^e1*c1 + ... + w^ek*ck` with `e1 > ... > ek` and `ci >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: vec![] }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::nat(1))
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds from terms; rejects anything that is not in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        for (i, (_, c)) in terms.iter().enumerate() {
            if *c == 0 {
                return Err(Error::Malformed("zero coefficient in normal form".into()));
            }
            if i > 0 && terms[i - 1].0 <= terms[i].0 {
                return Err(Error::Malformed("exponents must strictly decrease".into()));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => *c += 1,
            _ => terms.push((Self::zero(), 1)),
        }
        Ordinal { terms }
    }

    /// `beta` for `self = beta + 1`.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let (_, c) = terms.last_mut().unwrap();
        if *c == 1 {
            terms.pop();
        } else {
            *c -= 1;
        }
        Some(Ordinal { terms })
    }

    /// The n-th term of the fundamental sequence.
    ///
    /// Successors step down to their predecessor for every `n`. For a limit
    /// whose last term is `w^b*c`, one copy of `w^b` is replaced by
    /// `w^b'*(n+1)` when `b = b'+1`, and by `w^(b[n])` when `b` is a limit.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal> {
        if self.is_zero() {
            return Err(Error::Precondition("the ordinal 0 has no fundamental sequence".into()));
        }
        if let Some(p) = self.pred() {
            return Ok(p);
        }
        let mut terms = self.terms.clone();
        let (b, c) = terms.pop().unwrap();
        if c > 1 {
            terms.push((b.clone(), c - 1));
        }
        match b.pred() {
            Some(b1) => terms.push((b1, n + 1)),
            None => terms.push((b.fund_seq(n)?, 1)),
        }
        Ok(Ordinal { terms })
    }

    /// `gamma(alpha, s)`: follow the fundamental sequences along `s`.
    pub fn path(&self, s: &[u64]) -> Result<Ordinal> {
        let mut g = self.clone();
        for (i, &n) in s.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::Precondition(format!(
                    "path ordinal reaches 0 after {i} steps with {} entries left",
                    s.len() - i
                )));
            }
            g = g.fund_seq(n)?;
        }
        Ok(g)
    }
}

/// `gamma(alpha, s)`.
pub fn path_ordinal(alpha: &Ordinal, s: &[u64]) -> Result<Ordinal> {
    alpha.path(s)
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            match e.as_nat() {
                Some(1) => {}
                Some(k) => write!(f, "^{k}")?,
                None if *e == Ordinal::omega() => write!(f, "^w")?,
                None => write!(f, "^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("column {}", self.pos + 1), msg)
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn ord(&mut self) -> Result<Ordinal> {
        if self.peek() == Some(b'0') {
            let at = self.pos;
            let n = self.number()?;
            if n == 0 {
                return Ok(Ordinal::zero());
            }
            self.pos = at;
        }
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            let t = self.term()?;
            let prev = &terms.last().unwrap().0;
            if *prev <= t.0 {
                return Err(self.err("terms are not in Cantor normal form (exponents must strictly decrease)"));
            }
            terms.push(t);
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> Result<(Ordinal, u64)> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.atom()? } else { Ordinal::nat(1) };
                let c = if self.eat(b'*') { self.number()? } else { 1 };
                if c == 0 {
                    return Err(self.err("coefficient must be at least 1"));
                }
                Ok((e, c))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                if n == 0 {
                    return Err(self.err("0 may only appear alone"));
                }
                Ok((Ordinal::zero(), n))
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let o = self.ord()?;
                if o.is_zero() || o.as_nat() == Some(1) {
                    return Err(self.err("write w^0 and w^1 without the exponent"));
                }
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(o)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                if n < 2 {
                    return Err(self.err("write w^0 and w^1 without the exponent"));
                }
                Ok(Ordinal::nat(n))
            }
            _ => Err(self.err("expected an exponent")),
        }
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let o = p.ord()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Nat(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Nat(n) => Ok(Ordinal::nat(n)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
