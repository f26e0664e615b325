//! Finite commutative rings whose elements are encoded as a single integer code.
//!
//! Codes are canonical by construction: residues in `[0, p^k)`, base-`p`
//! digit vectors for `GF(p^k)`, base-`q` digit vectors for truncated
//! polynomials, `a + q*b` for `a + b*s` and `x + q*y` for pairs `(x|y)`.

use super::descriptor::Twist;
use crate::numtheory::{mul_mod, pow_mod};

/// Rings with at most this many elements get precomputed operation tables.
const TABLE_LIMIT: u64 = 512;

#[derive(Debug, Clone)]
pub(crate) enum Structure {
    /// `Z/(p^k)`; `GF(p)` is the case `k = 1`.
    Zmod { p: u64, k: u32, m: u64 },
    /// `GF(p)[x]/(modulus)`, `modulus` monic of degree `k`, coefficients low to high.
    Gf { p: u64, k: u32, modulus: Vec<u64> },
    /// `GF(q)[t]/(t^k)`.
    Trunc { coeff: Box<Scalar>, k: u32 },
    /// `GF(q)[s]/(s^2 - alpha*s - beta)` with conjugation `s -> alpha - s`.
    Quad { base: Box<Scalar>, alpha: u64, beta: u64 },
    /// `R x R` with the (twisted) flip.
    Prod { comp: Box<Scalar>, twist: Twist },
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    invol: Vec<u32>,
}

const NO_INVERSE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct Scalar {
    pub size: u64,
    pub characteristic: u64,
    pub structure: Structure,
    tables: Option<Box<Tables>>,
}

impl Scalar {
    pub fn zmod(p: u64, k: u32) -> Scalar {
        let m = p.pow(k);
        Scalar::finish(m, m, Structure::Zmod { p, k, m })
    }

    pub fn gf(p: u64, k: u32) -> Scalar {
        if k == 1 {
            return Scalar::zmod(p, 1);
        }
        let modulus = conway_or_search(p, k);
        Scalar::finish(p.pow(k), p, Structure::Gf { p, k, modulus })
    }

    pub fn trunc(coeff: Scalar, k: u32) -> Scalar {
        let size = coeff.size.pow(k);
        let ch = coeff.characteristic;
        Scalar::finish(size, ch, Structure::Trunc { coeff: Box::new(coeff), k })
    }

    pub fn quad(base: Scalar) -> Scalar {
        let q = base.size;
        // smallest (alpha, beta) in code order with s^2 - alpha s - beta irreducible
        let mut found = None;
        'search: for alpha in 0..q {
            for beta in 1..q {
                let has_root = (0..q).any(|x| {
                    let x2 = base.mul(x, x);
                    let rhs = base.add(base.mul(alpha, x), beta);
                    x2 == rhs
                });
                if !has_root {
                    found = Some((alpha, beta));
                    break 'search;
                }
            }
        }
        let (alpha, beta) = found.expect("every finite field has a quadratic extension");
        let ch = base.characteristic;
        Scalar::finish(q * q, ch, Structure::Quad { base: Box::new(base), alpha, beta })
    }

    pub fn prod(comp: Scalar, twist: Twist) -> Scalar {
        let size = comp.size * comp.size;
        let ch = comp.characteristic;
        Scalar::finish(size, ch, Structure::Prod { comp: Box::new(comp), twist })
    }

    fn finish(size: u64, characteristic: u64, structure: Structure) -> Scalar {
        let mut s = Scalar { size, characteristic, structure, tables: None };
        if size <= TABLE_LIMIT {
            let n = size as usize;
            let mut t = Tables {
                add: vec![0; n * n],
                mul: vec![0; n * n],
                neg: vec![0; n],
                inv: vec![NO_INVERSE; n],
                invol: vec![0; n],
            };
            for x in 0..size {
                for y in 0..size {
                    t.add[x as usize * n + y as usize] = s.add_raw(x, y) as u32;
                    t.mul[x as usize * n + y as usize] = s.mul_raw(x, y) as u32;
                }
                t.neg[x as usize] = s.neg_raw(x) as u32;
                t.invol[x as usize] = s.involute_raw(x) as u32;
                if let Some(i) = s.inv_raw(x) {
                    t.inv[x as usize] = i as u32;
                }
            }
            s.tables = Some(Box::new(t));
        }
        s
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        match &self.tables {
            Some(t) => t.add[(x * self.size + y) as usize] as u64,
            None => self.add_raw(x, y),
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match &self.tables {
            Some(t) => t.mul[(x * self.size + y) as usize] as u64,
            None => self.mul_raw(x, y),
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        match &self.tables {
            Some(t) => t.neg[x as usize] as u64,
            None => self.neg_raw(x),
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn inv(&self, x: u64) -> Option<u64> {
        match &self.tables {
            Some(t) => {
                let v = t.inv[x as usize];
                (v != NO_INVERSE).then_some(v as u64)
            }
            None => self.inv_raw(x),
        }
    }

    #[inline]
    pub fn involute(&self, x: u64) -> u64 {
        match &self.tables {
            Some(t) => t.invol[x as usize] as u64,
            None => self.involute_raw(x),
        }
    }

    pub fn one(&self) -> u64 {
        match &self.structure {
            Structure::Zmod { m, .. } => 1 % m,
            Structure::Gf { .. } | Structure::Trunc { .. } | Structure::Quad { .. } => 1,
            Structure::Prod { comp, .. } => {
                let o = comp.one();
                o + comp.size * o
            }
        }
    }

    pub fn reduce_int(&self, v: i64) -> u64 {
        match &self.structure {
            Structure::Zmod { m, .. } => v.rem_euclid(*m as i64) as u64,
            Structure::Gf { p, .. } => v.rem_euclid(*p as i64) as u64,
            Structure::Trunc { coeff, .. } => coeff.reduce_int(v),
            Structure::Quad { base, .. } => base.reduce_int(v),
            Structure::Prod { comp, .. } => {
                let c = comp.reduce_int(v);
                c + comp.size * c
            }
        }
    }

    /// Whether `x` lies in a field (every nonzero element is a unit).
    pub fn is_field(&self) -> bool {
        match &self.structure {
            Structure::Zmod { k, .. } => *k == 1,
            Structure::Gf { .. } | Structure::Quad { .. } => true,
            Structure::Trunc { k, .. } => *k == 1,
            Structure::Prod { .. } => false,
        }
    }

    pub fn split(&self, x: u64) -> (u64, u64) {
        match &self.structure {
            Structure::Prod { comp, .. } => (x % comp.size, x / comp.size),
            _ => panic!("split on a non-product scalar"),
        }
    }

    pub fn join(&self, x: u64, y: u64) -> u64 {
        match &self.structure {
            Structure::Prod { comp, .. } => x + comp.size * y,
            _ => panic!("join on a non-product scalar"),
        }
    }

    /// Frobenius `x -> x^p` for finite fields, identity on other structures.
    pub fn frobenius(&self, x: u64) -> u64 {
        match &self.structure {
            Structure::Gf { p, .. } => self.pow(x, *p),
            _ => x,
        }
    }

    pub fn frobenius_inverse(&self, x: u64) -> u64 {
        match &self.structure {
            Structure::Gf { p, k, .. } => self.pow(x, p.pow(*k - 1)),
            _ => x,
        }
    }

    pub fn pow(&self, mut x: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    fn add_raw(&self, x: u64, y: u64) -> u64 {
        match &self.structure {
            Structure::Zmod { m, .. } => (x + y) % m,
            Structure::Gf { p, k, .. } => {
                let (a, b) = (digits(x, *p, *k as usize), digits(y, *p, *k as usize));
                undigits(&a.iter().zip(&b).map(|(u, v)| (u + v) % p).collect::<Vec<_>>(), *p)
            }
            Structure::Trunc { coeff, k } => {
                let q = coeff.size;
                let (a, b) = (digits(x, q, *k as usize), digits(y, q, *k as usize));
                undigits(&a.iter().zip(&b).map(|(u, v)| coeff.add(*u, *v)).collect::<Vec<_>>(), q)
            }
            Structure::Quad { base, .. } => {
                let q = base.size;
                base.add(x % q, y % q) + q * base.add(x / q, y / q)
            }
            Structure::Prod { comp, .. } => {
                let q = comp.size;
                comp.add(x % q, y % q) + q * comp.add(x / q, y / q)
            }
        }
    }

    fn neg_raw(&self, x: u64) -> u64 {
        match &self.structure {
            Structure::Zmod { m, .. } => (m - x) % m,
            Structure::Gf { p, k, .. } => {
                undigits(&digits(x, *p, *k as usize).iter().map(|u| (p - u) % p).collect::<Vec<_>>(), *p)
            }
            Structure::Trunc { coeff, k } => {
                let q = coeff.size;
                undigits(&digits(x, q, *k as usize).iter().map(|u| coeff.neg(*u)).collect::<Vec<_>>(), q)
            }
            Structure::Quad { base, .. } => {
                let q = base.size;
                base.neg(x % q) + q * base.neg(x / q)
            }
            Structure::Prod { comp, .. } => {
                let q = comp.size;
                comp.neg(x % q) + q * comp.neg(x / q)
            }
        }
    }

    fn mul_raw(&self, x: u64, y: u64) -> u64 {
        match &self.structure {
            Structure::Zmod { m, .. } => mul_mod(x, y, *m),
            Structure::Gf { p, k, modulus } => {
                let k = *k as usize;
                let (a, b) = (digits(x, *p, k), digits(y, *p, k));
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, u) in a.iter().enumerate() {
                    for (j, v) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u * v) % p;
                    }
                }
                // reduce modulo the monic modulus
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, mc) in modulus.iter().enumerate().take(k) {
                            let idx = deg - k + i;
                            prod[idx] = (prod[idx] + (p - c) * mc) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                prod.truncate(k);
                undigits(&prod, *p)
            }
            Structure::Trunc { coeff, k } => {
                let q = coeff.size;
                let k = *k as usize;
                let (a, b) = (digits(x, q, k), digits(y, q, k));
                let mut out = vec![0u64; k];
                for i in 0..k {
                    for j in 0..(k - i) {
                        out[i + j] = coeff.add(out[i + j], coeff.mul(a[i], b[j]));
                    }
                }
                undigits(&out, q)
            }
            Structure::Quad { base, alpha, beta } => {
                let q = base.size;
                let (a, b, c, d) = (x % q, x / q, y % q, y / q);
                let bd = base.mul(b, d);
                let re = base.add(base.mul(a, c), base.mul(bd, *beta));
                let im = base.add(base.add(base.mul(a, d), base.mul(b, c)), base.mul(bd, *alpha));
                re + q * im
            }
            Structure::Prod { comp, .. } => {
                let q = comp.size;
                comp.mul(x % q, y % q) + q * comp.mul(x / q, y / q)
            }
        }
    }

    fn inv_raw(&self, x: u64) -> Option<u64> {
        match &self.structure {
            Structure::Zmod { p, k, m } => {
                if x.is_multiple_of(*p) {
                    return None;
                }
                let phi = p.pow(k - 1) * (p - 1);
                Some(pow_mod(x, phi - 1, *m))
            }
            Structure::Gf { .. } => (x != 0).then(|| self.pow(x, self.size - 2)),
            Structure::Trunc { coeff, k } => {
                let q = coeff.size;
                let k = *k as usize;
                let a = digits(x, q, k);
                let c0inv = coeff.inv(a[0])?;
                let mut b = vec![0u64; k];
                b[0] = c0inv;
                for j in 1..k {
                    let mut acc = 0;
                    for i in 1..=j {
                        acc = coeff.add(acc, coeff.mul(a[i], b[j - i]));
                    }
                    b[j] = coeff.neg(coeff.mul(c0inv, acc));
                }
                Some(undigits(&b, q))
            }
            Structure::Quad { base, .. } => {
                if x == 0 {
                    return None;
                }
                let conj = self.involute_raw(x);
                let norm = self.mul_raw(x, conj);
                // the norm lies in the base field
                let ninv = base.inv(norm % base.size)?;
                Some(self.mul_raw(conj, ninv))
            }
            Structure::Prod { comp, .. } => {
                let q = comp.size;
                Some(comp.inv(x % q)? + q * comp.inv(x / q)?)
            }
        }
    }

    fn involute_raw(&self, x: u64) -> u64 {
        match &self.structure {
            Structure::Zmod { .. } | Structure::Gf { .. } | Structure::Trunc { .. } => x,
            Structure::Quad { base, alpha, .. } => {
                let q = base.size;
                let (a, b) = (x % q, x / q);
                base.add(a, base.mul(b, *alpha)) + q * base.neg(b)
            }
            Structure::Prod { comp, twist } => {
                let q = comp.size;
                let (a, b) = (x % q, x / q);
                match twist {
                    Twist::Identity => b + q * a,
                    Twist::Frobenius => comp.frobenius_inverse(b) + q * comp.frobenius(a),
                }
            }
        }
    }
}

pub(crate) fn digits(mut x: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % base);
        x /= base;
    }
    out
}

pub(crate) fn undigits(ds: &[u64], base: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, d| acc * base + d)
}

/// Fixed irreducible moduli (Conway polynomials) for the small fields, low to high.
fn conway_or_search(p: u64, k: u32) -> Vec<u64> {
    let table: &[(u64, u32, &[u64])] = &[
        (2, 2, &[1, 1, 1]),
        (2, 3, &[1, 1, 0, 1]),
        (2, 4, &[1, 1, 0, 0, 1]),
        (2, 5, &[1, 0, 1, 0, 0, 1]),
        (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
        (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
        (3, 2, &[2, 2, 1]),
        (3, 3, &[1, 2, 0, 1]),
        (3, 4, &[2, 0, 0, 2, 1]),
        (5, 2, &[2, 4, 1]),
        (5, 3, &[3, 3, 0, 1]),
        (7, 2, &[3, 6, 1]),
        (7, 3, &[4, 0, 6, 1]),
    ];
    if let Some((_, _, m)) = table.iter().find(|(pp, kk, _)| *pp == p && *kk == k) {
        return m.to_vec();
    }
    // smallest monic irreducible in base-p code order
    let k = k as usize;
    for code in 0..p.pow(k as u32) {
        let mut m = digits(code, p, k);
        m.push(1);
        if is_irreducible_mod_p(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Irreducibility over `GF(p)` by trial division with all monic polynomials of degree <= deg/2.
pub(crate) fn is_irreducible_mod_p(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = digits(code, p, d);
            f.push(1);
            if poly_rem_mod_p(m, &f, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_mod_p(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        if c != 0 {
            for (i, fc) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * fc % p) % p;
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conway_table_is_irreducible() {
        for (p, k) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 8), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (7, 3)] {
            let m = conway_or_search(p, k);
            assert_eq!(m.len(), k as usize + 1);
            assert!(is_irreducible_mod_p(&m, p), "GF({p}^{k})");
        }
    }

    #[test]
    fn field_axioms_gf9_and_gf8() {
        for (p, k) in [(3u64, 2u32), (2, 3)] {
            let f = Scalar::gf(p, k);
            for x in 0..f.size {
                if x != 0 {
                    let i = f.inv(x).unwrap();
                    assert_eq!(f.mul(x, i), 1);
                }
                assert_eq!(f.add(x, f.neg(x)), 0);
            }
            // multiplicative group is cyclic of order q-1: x^(q-1) = 1
            for x in 1..f.size {
                assert_eq!(f.pow(x, f.size - 1), 1);
            }
        }
    }

    #[test]
    fn truncated_inverse() {
        let r = Scalar::trunc(Scalar::gf(2, 1), 3);
        for x in 0..r.size {
            match r.inv(x) {
                Some(i) => assert_eq!(r.mul(x, i), 1),
                None => assert_eq!(x % 2, 0),
            }
        }
    }

    #[test]
    fn quadratic_conjugation_is_frobenius() {
        for q in [2u64, 3, 5] {
            let f = Scalar::quad(Scalar::gf(q, 1));
            for x in 0..f.size {
                assert_eq!(f.involute(x), f.pow(x, q));
            }
        }
        let f = Scalar::quad(Scalar::gf(2, 2));
        for x in 0..f.size {
            assert_eq!(f.involute(x), f.pow(x, 4));
        }
    }

    #[test]
    fn frobenius_twisted_flip_is_involutive() {
        let r = Scalar::prod(Scalar::gf(2, 2), Twist::Frobenius);
        for x in 0..r.size {
            assert_eq!(r.involute(r.involute(x)), x);
        }
    }
}
