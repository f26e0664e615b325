//! Element literals.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | symbol | '(' expr ')' | '(' expr '|' expr ')' | '[' row (',' row)* ']'
//! row    := '[' expr (',' expr)* ']'
//! ```
//!
//! Symbols are `x` (generator of `GF(p^k)`), `t` (truncated, polynomial and
//! rational-function variable), `s` (quadratic generator) and `i`, `j`, `k`.
//! Symbols of an inner ring are embedded into the outer one.

use num_bigint::BigInt;

use super::scalar::Structure;
use super::{Elem, Kind, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Node {
    Int(BigInt),
    Sym(String, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize),
    Pow(Box<Node>, i64, usize),
    Pair(Box<Node>, Box<Node>, usize),
    Matrix(Vec<Vec<Node>>, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(Node::Pow(Box::new(atom), if neg { -e } else { e }, at));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Node::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                Ok(Node::Sym(name, start))
            }
            Some(b'(') => {
                let at = self.pos;
                self.pos += 1;
                let first = self.expr()?;
                if self.peek() == Some(b'|') {
                    self.pos += 1;
                    let second = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Node::Pair(Box::new(first), Box::new(second), at));
                }
                self.expect(b')')?;
                Ok(first)
            }
            Some(b'[') => {
                let at = self.pos;
                self.pos += 1;
                let mut rows = Vec::new();
                loop {
                    self.expect(b'[')?;
                    let mut row = vec![self.expr()?];
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        row.push(self.expr()?);
                    }
                    self.expect(b']')?;
                    rows.push(row);
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(b']')?;
                Ok(Node::Matrix(rows, at))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub(crate) fn parse(ring: &Ring, text: &str) -> Result<Elem> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let node = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    eval(ring, &node)
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn eval(ring: &Ring, node: &Node) -> Result<Elem> {
    Ok(match node {
        Node::Int(v) => ring.from_bigint(v),
        Node::Sym(name, at) => ring
            .generator(name)
            .ok_or_else(|| perr(*at, format!("unknown symbol '{name}' in {ring}")))?,
        Node::Neg(a) => ring.neg(&eval(ring, a)?),
        Node::Add(a, b) => ring.add(&eval(ring, a)?, &eval(ring, b)?),
        Node::Sub(a, b) => ring.sub(&eval(ring, a)?, &eval(ring, b)?),
        Node::Mul(a, b) => ring.mul(&eval(ring, a)?, &eval(ring, b)?),
        Node::Div(a, b, at) => {
            let d = ring.try_invert(&eval(ring, b)?).map_err(|_| perr(*at, "division by a non-unit"))?;
            ring.mul(&eval(ring, a)?, &d)
        }
        Node::Pow(a, e, at) => {
            let base = eval(ring, a)?;
            if *e >= 0 {
                ring.pow(&base, *e as u64)
            } else {
                let inv = ring.try_invert(&base).map_err(|_| perr(*at, "negative power of a non-unit"))?;
                ring.pow(&inv, e.unsigned_abs())
            }
        }
        Node::Pair(a, b, at) => {
            if ring.is_product() {
                let comp = ring.child().unwrap();
                ring.join(&eval(comp, a)?, &eval(comp, b)?)
            } else if let (Kind::Matrix { n }, Some(base)) = (ring.kind(), ring.child()) {
                // a pair of matrices over a product base, combined entrywise
                if !base.is_product() {
                    return Err(perr(*at, format!("pair literal in {ring}")));
                }
                let comp_mat = Ring::new(&super::RingDescriptor::Matrix {
                    n: *n,
                    base: Box::new(base.child().unwrap().descriptor().clone()),
                })?;
                let (x, y) = (eval(&comp_mat, a)?, eval(&comp_mat, b)?);
                Elem::from_vec(x.as_slice().iter().zip(y.as_slice()).map(|(u, v)| base.join(u, v)).collect())
            } else {
                return Err(perr(*at, format!("pair literal in {ring}")));
            }
        }
        Node::Matrix(rows, at) => {
            let n = ring.matrix_size().ok_or_else(|| perr(*at, format!("matrix literal in {ring}")))?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(perr(*at, format!("expected a {n}x{n} matrix")));
            }
            let base = ring.child().unwrap();
            let entries = rows.iter().flatten().map(|e| eval(base, e)).collect::<Result<Vec<_>>>()?;
            ring.from_entries(entries)
        }
    })
}

// ---- printing -----------------------------------------------------------------

pub(crate) fn format(ring: &Ring, x: &Elem) -> String {
    match ring.kind() {
        Kind::Scalar(s) => match &s.structure {
            Structure::Zmod { .. } => x.as_int().to_string(),
            Structure::Gf { p, k, .. } => {
                let ds = super::scalar::digits(x.as_int(), *p, *k as usize);
                combine(ds.iter().enumerate().map(|(i, d)| (d.to_string(), mono("x", i))).collect())
            }
            Structure::Trunc { coeff, k } => {
                let base = ring.child().unwrap();
                let ds = super::scalar::digits(x.as_int(), coeff.size, *k as usize);
                combine(ds.iter().enumerate().map(|(i, d)| (format(base, &Elem::Int(*d)), mono("t", i))).collect())
            }
            Structure::Quad { base: b, .. } => {
                let base = ring.child().unwrap();
                let (a, c) = (x.as_int() % b.size, x.as_int() / b.size);
                combine(vec![(format(base, &Elem::Int(a)), String::new()), (format(base, &Elem::Int(c)), "s".into())])
            }
            Structure::Prod { .. } => {
                let comp = ring.child().unwrap();
                let (a, b) = ring.split(x);
                format!("({}|{})", format(comp, &a), format(comp, &b))
            }
        },
        Kind::Rationals => x.as_rat().to_string(),
        Kind::QuadRational { .. } => {
            let v = x.as_slice();
            combine(vec![(v[0].as_rat().to_string(), String::new()), (v[1].as_rat().to_string(), "s".into())])
        }
        Kind::Quaternions => {
            let v = x.as_slice();
            combine(
                ["", "i", "j", "k"].iter().zip(v.iter()).map(|(m, c)| (c.as_rat().to_string(), m.to_string())).collect(),
            )
        }
        Kind::ProdInf => {
            let comp = ring.child().unwrap();
            let v = x.as_slice();
            format!("({}|{})", format(comp, &v[0]), format(comp, &v[1]))
        }
        Kind::Poly(_) => poly_string(ring, &ring.poly_codes(x)),
        Kind::RatFunc(_) => {
            let (num, den) = ring.ratfunc_parts(x);
            if den.len() == 1 {
                poly_string(ring, &num)
            } else {
                format!("({})/({})", poly_string(ring, &num), poly_string(ring, &den))
            }
        }
        Kind::Matrix { .. } | Kind::SplitQuat => {
            let n = ring.matrix_size().unwrap();
            let base = ring.child().unwrap();
            let v = x.as_slice();
            let rows: Vec<String> = (0..n)
                .map(|i| format!("[{}]", (0..n).map(|j| format(base, &v[i * n + j])).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", rows.join(","))
        }
    }
}

fn poly_string(ring: &Ring, codes: &[u64]) -> String {
    let base = ring.child().unwrap();
    combine(codes.iter().enumerate().map(|(i, c)| (format(base, &Elem::Int(*c)), mono("t", i))).collect())
}

fn mono(var: &str, deg: usize) -> String {
    match deg {
        0 => String::new(),
        1 => var.to_string(),
        d => format!("{var}^{d}"),
    }
}

fn is_simple(c: &str) -> bool {
    let body = c.strip_prefix('-').unwrap_or(c);
    !body.contains(['+', '-'])
}

/// Joins `coefficient * monomial` terms, skipping zeros.
fn combine(terms: Vec<(String, String)>) -> String {
    let mut out = String::new();
    for (c, m) in terms {
        if c == "0" {
            continue;
        }
        let t = if m.is_empty() {
            c
        } else if c == "1" {
            m
        } else if c == "-1" {
            format!("-{m}")
        } else if is_simple(&c) {
            format!("{c}*{m}")
        } else {
            format!("({c})*{m}")
        };
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
