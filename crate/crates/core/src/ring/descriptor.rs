//! Ring descriptors and their textual grammar.
//!
//! ```text
//! GF(p)  GF(p^k) or GF(q)  Z/(p^k)  Trunc(GF(q),k)  Q  Quat  Quad(GF(q))  Quad(Q,d)
//! Prod(R,R)  Prod(R,R,frob)  Mat(n,R)  SplitQuat(R)  GF(q)[t]  GF(q)(t)
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, is_squarefree, prime_power};

/// Which anti-automorphism a product ring `R x R` carries on top of the flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `(x, y)* = (y, x)`.
    Identity,
    /// `(x, y)* = (F^-1(y), F(x))` with `F` the absolute Frobenius of the component field.
    Frobenius,
}

/// Constructor tree naming a concrete involutive ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    PrimeField { p: u64 },
    FiniteField { p: u64, k: u32 },
    Residue { p: u64, k: u32 },
    Truncated { base: Box<RingDescriptor>, k: u32 },
    Rationals,
    Quaternions,
    /// Quadratic extension `F_{q^2}` of `GF(q)` with the Frobenius `x -> x^q`.
    Quadratic { base: Box<RingDescriptor> },
    /// `Q(sqrt d)` with `sqrt d -> -sqrt d`.
    QuadraticRational { d: i64 },
    Product { base: Box<RingDescriptor>, twist: Twist },
    Matrix { n: usize, base: Box<RingDescriptor> },
    SplitQuaternion { base: Box<RingDescriptor> },
    PolynomialRing { base: Box<RingDescriptor> },
    FunctionField { base: Box<RingDescriptor> },
}

/// Involution carried by a descriptor (outermost constructor).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionTag {
    Trivial,
    Galois,
    Flip,
    StarTranspose,
    JConjugation,
    QuaternionConjugation,
}

impl fmt::Display for InvolutionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvolutionTag::Trivial => "trivial",
            InvolutionTag::Galois => "galois",
            InvolutionTag::Flip => "flip",
            InvolutionTag::StarTranspose => "star-transpose",
            InvolutionTag::JConjugation => "J-conjugation",
            InvolutionTag::QuaternionConjugation => "quaternion-conjugation",
        };
        f.write_str(s)
    }
}

impl RingDescriptor {
    pub fn involution_tag(&self) -> InvolutionTag {
        match self {
            RingDescriptor::PrimeField { .. }
            | RingDescriptor::FiniteField { .. }
            | RingDescriptor::Residue { .. }
            | RingDescriptor::Truncated { .. }
            | RingDescriptor::Rationals
            | RingDescriptor::PolynomialRing { .. }
            | RingDescriptor::FunctionField { .. } => InvolutionTag::Trivial,
            RingDescriptor::Quaternions => InvolutionTag::QuaternionConjugation,
            RingDescriptor::Quadratic { .. } | RingDescriptor::QuadraticRational { .. } => {
                InvolutionTag::Galois
            }
            RingDescriptor::Product { .. } => InvolutionTag::Flip,
            RingDescriptor::Matrix { .. } => InvolutionTag::StarTranspose,
            RingDescriptor::SplitQuaternion { .. } => InvolutionTag::JConjugation,
        }
    }

    pub fn parse(text: &str) -> Result<RingDescriptor> {
        let mut p = DescParser { src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let d = p.descriptor()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        d.validate()?;
        Ok(d)
    }

    /// Checks primality, positivity and the per-constructor restrictions.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        match self {
            RingDescriptor::PrimeField { p } => {
                if !is_prime(*p) {
                    return bad(format!("{p} is not prime"));
                }
            }
            RingDescriptor::FiniteField { p, k } | RingDescriptor::Residue { p, k } => {
                if !is_prime(*p) {
                    return bad(format!("{p} is not prime"));
                }
                if *k == 0 {
                    return bad("exponent must be at least 1".into());
                }
                match p.checked_pow(*k) {
                    Some(q) if q <= 1 << 24 => {}
                    _ => return bad(format!("{p}^{k} is too large")),
                }
            }
            RingDescriptor::Truncated { base, k } => {
                if !base.is_finite_field() {
                    return bad("Trunc needs a finite field base".into());
                }
                if *k == 0 {
                    return bad("truncation degree must be at least 1".into());
                }
                base.validate()?;
                match base.size().and_then(|q| q.checked_pow(*k)) {
                    Some(sz) if sz <= 1 << 24 => {}
                    _ => return bad("truncated ring is too large".into()),
                }
            }
            RingDescriptor::Rationals | RingDescriptor::Quaternions => {}
            RingDescriptor::Quadratic { base } => {
                if !base.is_finite_field() {
                    return bad("Quad needs GF(q) or Q as its base".into());
                }
                base.validate()?;
                match base.size().and_then(|q| q.checked_mul(q)) {
                    Some(sz) if sz <= 1 << 24 => {}
                    _ => return bad("quadratic extension is too large".into()),
                }
            }
            RingDescriptor::QuadraticRational { d } => {
                if *d == 1 || !is_squarefree(*d) {
                    return bad(format!("d = {d} must be square-free and different from 1"));
                }
            }
            RingDescriptor::Product { base, twist } => {
                base.validate()?;
                if !base.is_commutative_scalar() {
                    return bad("Prod components must be commutative scalar rings".into());
                }
                if *twist == Twist::Frobenius
                    && !matches!(**base, RingDescriptor::FiniteField { .. } | RingDescriptor::PrimeField { .. })
                {
                    return bad("the Frobenius twist needs a finite field component".into());
                }
            }
            RingDescriptor::Matrix { n, base } => {
                if *n == 0 {
                    return bad("matrix size must be at least 1".into());
                }
                base.validate()?;
            }
            RingDescriptor::SplitQuaternion { base } => {
                base.validate()?;
                if !base.is_commutative_scalar() {
                    return bad("SplitQuat needs a commutative base".into());
                }
            }
            RingDescriptor::PolynomialRing { base } | RingDescriptor::FunctionField { base } => {
                if !base.is_finite_field() {
                    return bad("polynomial rings need a finite field base".into());
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    pub fn is_finite_field(&self) -> bool {
        matches!(self, RingDescriptor::PrimeField { .. } | RingDescriptor::FiniteField { .. })
    }

    /// Commutative rings that are not matrix-like.
    pub fn is_commutative_scalar(&self) -> bool {
        !matches!(
            self,
            RingDescriptor::Quaternions | RingDescriptor::Matrix { .. } | RingDescriptor::SplitQuaternion { .. }
        ) && match self {
            RingDescriptor::Product { base, .. } => base.is_commutative_scalar(),
            _ => true,
        }
    }

    /// Cardinality, `None` for infinite rings or on overflow.
    pub fn size(&self) -> Option<u64> {
        match self {
            RingDescriptor::PrimeField { p } => Some(*p),
            RingDescriptor::FiniteField { p, k } | RingDescriptor::Residue { p, k } => p.checked_pow(*k),
            RingDescriptor::Truncated { base, k } => base.size()?.checked_pow(*k),
            RingDescriptor::Quadratic { base } => base.size()?.checked_pow(2),
            RingDescriptor::Product { base, .. } => base.size()?.checked_pow(2),
            RingDescriptor::Matrix { n, base } => base.size()?.checked_pow((*n * *n) as u32),
            RingDescriptor::SplitQuaternion { base } => base.size()?.checked_pow(4),
            RingDescriptor::Rationals
            | RingDescriptor::Quaternions
            | RingDescriptor::QuadraticRational { .. }
            | RingDescriptor::PolynomialRing { .. }
            | RingDescriptor::FunctionField { .. } => None,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::PrimeField { p } => write!(f, "GF({p})"),
            RingDescriptor::FiniteField { p, k } => write!(f, "GF({})", p.pow(*k)),
            RingDescriptor::Residue { p, k } => write!(f, "Z/({})", p.pow(*k)),
            RingDescriptor::Truncated { base, k } => write!(f, "Trunc({base},{k})"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::Quaternions => write!(f, "Quat"),
            RingDescriptor::Quadratic { base } => write!(f, "Quad({base})"),
            RingDescriptor::QuadraticRational { d } => write!(f, "Quad(Q,{d})"),
            RingDescriptor::Product { base, twist: Twist::Identity } => write!(f, "Prod({base},{base})"),
            RingDescriptor::Product { base, twist: Twist::Frobenius } => {
                write!(f, "Prod({base},{base},frob)")
            }
            RingDescriptor::Matrix { n, base } => write!(f, "Mat({n},{base})"),
            RingDescriptor::SplitQuaternion { base } => write!(f, "SplitQuat({base})"),
            RingDescriptor::PolynomialRing { base } => write!(f, "{base}[t]"),
            RingDescriptor::FunctionField { base } => write!(f, "{base}(t)"),
        }
    }
}

struct DescParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> DescParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { position: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if end <= self.src.len() && &self.src[self.pos..end] == kw.as_bytes() {
            let next_is_ident = self.src.get(end).is_some_and(|c| c.is_ascii_alphanumeric());
            if !next_is_ident {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { position: start, message: "integer out of range".into() })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn descriptor(&mut self) -> Result<RingDescriptor> {
        let mut d = self.atom()?;
        // postfix polynomial / function-field constructors
        loop {
            self.skip_ws();
            if self.src[self.pos..].starts_with(b"[t]") {
                self.pos += 3;
                d = RingDescriptor::PolynomialRing { base: Box::new(d) };
            } else if self.src[self.pos..].starts_with(b"(t)") {
                self.pos += 3;
                d = RingDescriptor::FunctionField { base: Box::new(d) };
            } else {
                break;
            }
        }
        Ok(d)
    }

    fn atom(&mut self) -> Result<RingDescriptor> {
        if self.keyword("GF") {
            self.expect(b'(')?;
            let at = self.pos;
            let base = self.uint()?;
            let (p, k) = if self.eat(b'^') {
                (base, self.uint()? as u32)
            } else {
                prime_power(base).ok_or(Error::Parse {
                    position: at,
                    message: format!("{base} is not a prime power"),
                })?
            };
            self.expect(b')')?;
            return Ok(if k == 1 {
                RingDescriptor::PrimeField { p }
            } else {
                RingDescriptor::FiniteField { p, k }
            });
        }
        if self.keyword("Z") {
            self.expect(b'/')?;
            self.expect(b'(')?;
            let at = self.pos;
            let base = self.uint()?;
            let (p, k) = if self.eat(b'^') {
                (base, self.uint()? as u32)
            } else {
                prime_power(base).ok_or(Error::Parse {
                    position: at,
                    message: format!("{base} is not a prime power"),
                })?
            };
            self.expect(b')')?;
            return Ok(RingDescriptor::Residue { p, k });
        }
        if self.keyword("Trunc") {
            self.expect(b'(')?;
            let base = self.descriptor()?;
            self.expect(b',')?;
            let k = self.uint()? as u32;
            self.expect(b')')?;
            return Ok(RingDescriptor::Truncated { base: Box::new(base), k });
        }
        if self.keyword("Quat") {
            return Ok(RingDescriptor::Quaternions);
        }
        if self.keyword("Quad") {
            self.expect(b'(')?;
            if self.keyword("Q") {
                self.expect(b',')?;
                let d = self.int()?;
                self.expect(b')')?;
                return Ok(RingDescriptor::QuadraticRational { d });
            }
            let base = self.descriptor()?;
            if self.eat(b',') {
                if !self.keyword("k") {
                    return Err(self.err("expected k=2"));
                }
                self.expect(b'=')?;
                if self.uint()? != 2 {
                    return Err(self.err("only quadratic extensions (k=2) are supported"));
                }
            }
            self.expect(b')')?;
            return Ok(RingDescriptor::Quadratic { base: Box::new(base) });
        }
        if self.keyword("Q") {
            return Ok(RingDescriptor::Rationals);
        }
        if self.keyword("Prod") {
            self.expect(b'(')?;
            let left = self.descriptor()?;
            self.expect(b',')?;
            let at = self.pos;
            let right = self.descriptor()?;
            if left != right {
                return Err(Error::Parse {
                    position: at,
                    message: "Prod components must be the same ring".into(),
                });
            }
            let twist = if self.eat(b',') {
                if !self.keyword("frob") {
                    return Err(self.err("expected 'frob'"));
                }
                Twist::Frobenius
            } else {
                Twist::Identity
            };
            if self.eat(b',') {
                return Err(self.err("Prod takes exactly two components"));
            }
            self.expect(b')')?;
            return Ok(RingDescriptor::Product { base: Box::new(left), twist });
        }
        if self.keyword("Mat") {
            self.expect(b'(')?;
            let n = self.uint()? as usize;
            self.expect(b',')?;
            let base = self.descriptor()?;
            self.expect(b')')?;
            return Ok(RingDescriptor::Matrix { n, base: Box::new(base) });
        }
        if self.keyword("SplitQuat") {
            self.expect(b'(')?;
            let base = self.descriptor()?;
            self.expect(b')')?;
            return Ok(RingDescriptor::SplitQuaternion { base: Box::new(base) });
        }
        Err(self.err("unknown ring constructor"))
    }
}
