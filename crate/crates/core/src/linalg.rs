//! Row reduction over the scalar rings of the flat matrix model.
//!
//! Matrices are row-major slices. Row operations multiply on the left, so
//! everything here is valid over noncommutative division rings.

use num_traits::Zero;

use crate::ring::{Elem, Kind, Ring, RingDescriptor};

/// Inverse of an `n x n` matrix, if it exists.
///
/// Products are inverted componentwise, polynomial rings through their
/// fraction field, everything else (fields, division rings, local rings) by
/// Gauss-Jordan elimination with unit pivots.
pub fn inverse(s: &Ring, m: &[Elem], n: usize) -> Option<Vec<Elem>> {
    if s.is_product() {
        let comp = s.child().unwrap();
        let (left, right): (Vec<Elem>, Vec<Elem>) = m.iter().map(|e| s.split(e)).unzip();
        let li = inverse(comp, &left, n)?;
        let ri = inverse(comp, &right, n)?;
        return Some(li.iter().zip(&ri).map(|(a, b)| s.join(a, b)).collect());
    }
    if let Kind::Poly(_) = s.kind() {
        let base = s.child().unwrap().descriptor().clone();
        let field = Ring::new(&RingDescriptor::FunctionField { base: Box::new(base) }).ok()?;
        let lifted: Vec<Elem> = m.iter().map(|e| field.ratfunc_from(s.poly_codes(e), vec![1])).collect();
        let inv = inverse(&field, &lifted, n)?;
        return inv
            .iter()
            .map(|e| {
                let (num, den) = field.ratfunc_parts(e);
                (den.len() == 1).then(|| s.poly_from_codes(num))
            })
            .collect();
    }
    gauss_jordan(s, m, n)
}

fn gauss_jordan(s: &Ring, m: &[Elem], n: usize) -> Option<Vec<Elem>> {
    let mut a = m.to_vec();
    let mut inv: Vec<Elem> = (0..n * n).map(|i| if i % (n + 1) == 0 { s.one() } else { s.zero() }).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| s.is_unit(&a[r * n + col]))?;
        swap_rows(&mut a, n, col, pivot);
        swap_rows(&mut inv, n, col, pivot);
        let pinv = s.try_invert(&a[col * n + col]).ok()?;
        scale_row(s, &mut a, n, col, &pinv);
        scale_row(s, &mut inv, n, col, &pinv);
        for r in 0..n {
            if r != col && !s.is_zero(&a[r * n + col]) {
                let f = a[r * n + col].clone();
                add_row_multiple(s, &mut a, n, r, col, &f);
                add_row_multiple(s, &mut inv, n, r, col, &f);
            }
        }
    }
    Some(inv)
}

fn swap_rows(a: &mut [Elem], cols: usize, r1: usize, r2: usize) {
    if r1 != r2 {
        for c in 0..cols {
            a.swap(r1 * cols + c, r2 * cols + c);
        }
    }
}

/// row r <- f * row r
fn scale_row(s: &Ring, a: &mut [Elem], cols: usize, r: usize, f: &Elem) {
    for c in 0..cols {
        a[r * cols + c] = s.mul(f, &a[r * cols + c]);
    }
}

/// row r <- row r - f * row src
fn add_row_multiple(s: &Ring, a: &mut [Elem], cols: usize, r: usize, src: usize, f: &Elem) {
    for c in 0..cols {
        let t = s.mul(f, &a[src * cols + c]);
        a[r * cols + c] = s.sub(&a[r * cols + c], &t);
    }
}

/// Reduced row echelon form over a division ring.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// `rows x rows` invertible transform with `transform * m = reduced`.
    pub transform: Vec<Elem>,
    pub reduced: Vec<Elem>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Left row reduction of a `rows x cols` matrix over a division ring.
pub fn echelon(s: &Ring, m: &[Elem], rows: usize, cols: usize) -> Echelon {
    let mut a = m.to_vec();
    let mut t: Vec<Elem> = (0..rows * rows).map(|i| if i % (rows + 1) == 0 { s.one() } else { s.zero() }).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !s.is_zero(&a[r * cols + col])) else { continue };
        swap_rows(&mut a, cols, row, p);
        swap_rows(&mut t, rows, row, p);
        let pinv = s.try_invert(&a[row * cols + col]).expect("division ring");
        scale_row(s, &mut a, cols, row, &pinv);
        scale_row(s, &mut t, rows, row, &pinv);
        for r in 0..rows {
            if r != row && !s.is_zero(&a[r * cols + col]) {
                let f = a[r * cols + col].clone();
                add_row_multiple(s, &mut a, cols, r, row, &f);
                add_row_multiple(s, &mut t, rows, r, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { transform: t, reduced: a, pivots }
}

pub fn rank(s: &Ring, m: &[Elem], rows: usize, cols: usize) -> usize {
    echelon(s, m, rows, cols).rank()
}

/// Determinant over a commutative ring: elimination over fields, cofactor
/// expansion otherwise.
pub fn det(s: &Ring, m: &[Elem], n: usize) -> Elem {
    if s.is_division_ring() && s.is_commutative() {
        let mut a = m.to_vec();
        let mut acc = s.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !s.is_zero(&a[r * n + col])) else { return s.zero() };
            if p != col {
                swap_rows(&mut a, n, col, p);
                acc = s.neg(&acc);
            }
            let piv = a[col * n + col].clone();
            acc = s.mul(&acc, &piv);
            let pinv = s.try_invert(&piv).expect("field");
            for r in col + 1..n {
                if !s.is_zero(&a[r * n + col]) {
                    let f = s.mul(&a[r * n + col], &pinv);
                    add_row_multiple(s, &mut a, n, r, col, &f);
                }
            }
        }
        return acc;
    }
    laplace(s, m, n)
}

fn laplace(s: &Ring, m: &[Elem], n: usize) -> Elem {
    match n {
        1 => m[0].clone(),
        2 => s.sub(&s.mul(&m[0], &m[3]), &s.mul(&m[1], &m[2])),
        _ => {
            let mut acc = s.zero();
            for j in 0..n {
                if s.is_zero(&m[j]) {
                    continue;
                }
                let minor: Vec<Elem> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
                    .map(|(r, c)| m[r * n + c].clone())
                    .collect();
                let term = s.mul(&m[j], &laplace(s, &minor, n - 1));
                acc = if j % 2 == 0 { s.add(&acc, &term) } else { s.sub(&acc, &term) };
            }
            acc
        }
    }
}

/// Integer determinant of a rational matrix, used for integrality checks.
pub fn det_is_plus_minus_one(s: &Ring, m: &[Elem], n: usize) -> bool {
    let d = det(s, m, n);
    match &d {
        Elem::Rat(r) => r.is_integer() && (r.numer().magnitude() == &1u32.into()) && !r.is_zero(),
        _ => s.is_unit(&d),
    }
}

pub fn identity(s: &Ring, n: usize) -> Vec<Elem> {
    (0..n * n).map(|i| if i % (n + 1) == 0 { s.one() } else { s.zero() }).collect()
}

pub fn mat_mul(s: &Ring, x: &[Elem], y: &[Elem], rows: usize, inner: usize, cols: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = s.zero();
            for k in 0..inner {
                acc = s.add(&acc, &s.mul(&x[i * inner + k], &y[k * cols + j]));
            }
            out.push(acc);
        }
    }
    out
}

pub fn transpose(x: &[Elem], rows: usize, cols: usize) -> Vec<Elem> {
    (0..rows * cols).map(|idx| x[(idx % rows) * cols + idx / rows].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_over_gf3() {
        let s = Ring::parse("GF(3)").unwrap();
        let m: Vec<Elem> = [1, 2, 0, 1].iter().map(|v| s.from_int(*v)).collect();
        let inv = inverse(&s, &m, 2).unwrap();
        assert_eq!(mat_mul(&s, &m, &inv, 2, 2, 2), identity(&s, 2));
    }

    #[test]
    fn polynomial_matrix_without_unit_pivot() {
        // [[t, t+1], [t+1, t]] has determinant 1 over GF(2)[t]
        let s = Ring::parse("GF(2)[t]").unwrap();
        let m: Vec<Elem> = ["t", "t+1", "t+1", "t"].iter().map(|v| s.parse_elem(v).unwrap()).collect();
        let inv = inverse(&s, &m, 2).unwrap();
        assert_eq!(mat_mul(&s, &m, &inv, 2, 2, 2), identity(&s, 2));
        let sing: Vec<Elem> = ["t", "0", "0", "1"].iter().map(|v| s.parse_elem(v).unwrap()).collect();
        assert!(inverse(&s, &sing, 2).is_none());
    }

    #[test]
    fn echelon_rank_and_transform() {
        let s = Ring::parse("GF(2)").unwrap();
        let m: Vec<Elem> = [1, 0, 1, 0, 0, 1, 0, 1].iter().map(|v| s.from_int(*v)).collect();
        let e = echelon(&s, &m, 4, 2);
        assert_eq!(e.rank(), 2);
        assert_eq!(mat_mul(&s, &e.transform, &m, 4, 4, 2), e.reduced);
    }

    #[test]
    fn determinant_matches_laplace() {
        let s = Ring::parse("GF(7)").unwrap();
        let m: Vec<Elem> = [3, 1, 4, 1, 5, 2, 6, 5, 3].iter().map(|v| s.from_int(*v)).collect();
        assert_eq!(det(&s, &m, 3), laplace(&s, &m, 3));
    }
}
