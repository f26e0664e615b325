//! Dense polynomials over a finite field, coefficients as scalar codes, low degree first.
//!
//! A polynomial is canonical when it has no trailing zero coefficients; the
//! zero polynomial is the empty vector.

use crate::ring::scalar::Scalar;

pub(crate) fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    (!v.is_empty()).then(|| v.len() - 1)
}

pub(crate) fn add(f: &Scalar, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub(crate) fn neg(f: &Scalar, a: &[u64]) -> Vec<u64> {
    a.iter().map(|c| f.neg(*c)).collect()
}

pub(crate) fn mul(f: &Scalar, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    trim(out)
}

pub(crate) fn scale(f: &Scalar, a: &[u64], c: u64) -> Vec<u64> {
    trim(a.iter().map(|x| f.mul(*x, c)).collect())
}

/// Euclidean division; `b` must be nonzero.
pub(crate) fn divrem(f: &Scalar, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("field coefficients");
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        q[shift] = c;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, *bc));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn monic(f: &Scalar, a: &[u64]) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, f.inv(*l).expect("field coefficients")),
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub(crate) fn gcd(f: &Scalar, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub(crate) fn is_irreducible(f: &Scalar, p: &[u64]) -> bool {
    let Some(d) = degree(p) else { return false };
    if d == 0 {
        return false;
    }
    let q = f.size;
    for dd in 1..=d / 2 {
        let count = q.pow(dd as u32);
        for code in 0..count {
            let mut g = crate::ring::scalar::digits(code, q, dd);
            g.push(f.one());
            if divrem(f, p, &g).1.is_empty() {
                return false;
            }
        }
    }
    true
}
