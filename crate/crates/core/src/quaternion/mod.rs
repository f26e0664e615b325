//! Dieudonne determinants over fields and the rational quaternions, the
//! invertibility criterion over *-local rings and the `D_H . SL(2, F)`
//! decomposition of `SL_*(2, H)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::local::{classify_star_local, LocalKind, LocalStructure};
use crate::ring::{Elem, Kind, Ring};
use crate::sl_star::{bruhat_h, BlockMatrix};

/// Reduced norm `x^2 + y^2 + z^2 + w^2` of a rational quaternion.
pub fn nrd(q: &Elem) -> BigRational {
    q.as_slice().iter().map(|c| c.as_rat() * c.as_rat()).fold(BigRational::zero(), |a, b| a + b)
}

/// Whether a rational quaternion has zero `i`, `j`, `k` coordinates.
pub fn is_rational(q: &Elem) -> bool {
    q.as_slice()[1..].iter().all(|c| c.as_rat().is_zero())
}

/// Image of the Dieudonne determinant: the value itself over a field, the
/// reduced norm over the quaternions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneClass {
    pub zero: bool,
    pub value: Elem,
}

impl DieudonneClass {
    pub fn is_identity(&self, d: &Ring) -> bool {
        !self.zero && class_ring(d).map(|r| r.is_one(&self.value)).unwrap_or(false)
    }

    pub fn mul(&self, d: &Ring, o: &DieudonneClass) -> Result<DieudonneClass> {
        let r = class_ring(d)?;
        Ok(DieudonneClass { zero: self.zero || o.zero, value: r.mul(&self.value, &o.value) })
    }
}

impl fmt::Display for DieudonneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            f.write_str("0")
        } else {
            write!(f, "{:?}", self.value)
        }
    }
}

/// Ring holding class values: `D` for commutative fields, `Q` for the quaternions.
fn class_ring(d: &Ring) -> Result<Ring> {
    match d.kind() {
        Kind::Quaternions => Ok(d.child().unwrap().clone()),
        _ if d.is_division_ring() && d.is_commutative() => Ok(d.clone()),
        _ => Err(Error::Unsupported(format!("Dieudonne determinant over {d}"))),
    }
}

/// The class of a single element.
pub fn class_of(d: &Ring, x: &Elem) -> Result<DieudonneClass> {
    let r = class_ring(d)?;
    if d.is_zero(x) {
        return Ok(DieudonneClass { zero: true, value: r.zero() });
    }
    let value = match d.kind() {
        Kind::Quaternions => Elem::rat(nrd(x)),
        _ => x.clone(),
    };
    Ok(DieudonneClass { zero: false, value })
}

/// `alpha delta` if `gamma = 0`, else `gamma alpha gamma^{-1} delta - gamma beta`,
/// from `m = [[1, alpha gamma^{-1}], [0, 1]] [[0, beta - alpha gamma^{-1} delta], [gamma, delta]]`.
pub fn dieudonne_det_2x2_value(d: &Ring, m: &[Elem]) -> Result<Elem> {
    class_ring(d)?;
    let (al, be, ga, de) = (&m[0], &m[1], &m[2], &m[3]);
    if d.is_zero(ga) {
        return Ok(d.mul(al, de));
    }
    let gi = d.try_invert(ga)?;
    let t = d.mul(&d.mul(&d.mul(ga, al), &gi), de);
    Ok(d.sub(&t, &d.mul(ga, be)))
}

pub fn dieudonne_det_2x2(d: &Ring, m: &[Elem]) -> Result<DieudonneClass> {
    class_of(d, &dieudonne_det_2x2_value(d, m)?)
}

/// Row reduction with left multiplications; the class is the signed product
/// of the pivot classes.
pub fn dieudonne_det_n(d: &Ring, m: &[Elem], n: usize) -> Result<DieudonneClass> {
    let r = class_ring(d)?;
    let mut a = m.to_vec();
    let mut acc = DieudonneClass { zero: false, value: r.one() };
    for col in 0..n {
        let Some(p) = (col..n).find(|&row| !d.is_zero(&a[row * n + col])) else {
            return Ok(DieudonneClass { zero: true, value: r.zero() });
        };
        if p != col {
            for k in 0..n {
                a.swap(col * n + k, p * n + k);
            }
            acc = acc.mul(d, &class_of(d, &d.neg(&d.one()))?)?;
        }
        let piv = a[col * n + col].clone();
        acc = acc.mul(d, &class_of(d, &piv)?)?;
        let pinv = d.try_invert(&piv)?;
        for row in col + 1..n {
            if d.is_zero(&a[row * n + col]) {
                continue;
            }
            let f = d.mul(&a[row * n + col], &pinv);
            for k in col..n {
                let t = d.mul(&f, &a[col * n + k]);
                a[row * n + k] = d.sub(&a[row * n + k], &t);
            }
        }
    }
    Ok(acc)
}

/// Whether `m` lies in the kernel of the Dieudonne determinant.
pub fn sl2_membership_dieudonne(d: &Ring, m: &[Elem], n: usize) -> Result<bool> {
    Ok(dieudonne_det_n(d, m, n)?.is_identity(d))
}

/// The three conditions of the invertibility criterion, computed separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlCriterion {
    /// `a` is invertible.
    pub invertible: bool,
    /// Some `b` has `b a` in the principal congruence subgroup.
    pub congruence: bool,
    /// The residue determinants are nonzero.
    pub residue_dets: bool,
}

impl GlCriterion {
    pub fn agree(&self) -> bool {
        self.invertible == self.congruence && self.congruence == self.residue_dets
    }
}

/// Evaluates the criterion for `a` in `M(n, R)` (or `R` itself), `R` *-local.
pub fn gl_criterion(ring: &Ring, a: &Elem) -> Result<GlCriterion> {
    let (n, base) = ring.flat_shape();
    let class = classify_star_local(&base)?;
    if class.kind == LocalKind::NotStarLocal {
        return Err(Error::Unsupported(format!("{base} is not *-local")));
    }
    let ls = LocalStructure::new(ring)?;
    let residue = ls.residue();
    let (_, rbase) = residue.flat_shape();

    let invertible = ring.is_unit(a);

    let abar = ls.project(a);
    let flat = residue.flatten(&abar);
    let congruence = match linalg::inverse(&rbase, &flat, n) {
        Some(binv) => {
            let b = ls.section(&residue.unflatten(&binv));
            residue.is_one(&ls.project(&ring.mul(&b, a)))
        }
        None => false,
    };

    let comps: Vec<(Ring, Vec<Elem>)> = if rbase.is_product() {
        let k = rbase.child().unwrap().clone();
        let (l, r): (Vec<Elem>, Vec<Elem>) = flat.iter().map(|x| rbase.split(x)).unzip();
        vec![(k.clone(), l), (k, r)]
    } else {
        vec![(rbase.clone(), flat)]
    };
    let mut residue_dets = true;
    for (k, m) in &comps {
        if dieudonne_det_n(k, m, n)?.zero {
            residue_dets = false;
        }
    }
    Ok(GlCriterion { invertible, congruence, residue_dets })
}

/// `g = h_q m` with `m` in `SL(2, Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhDecomposition {
    pub q: Elem,
    /// Row-major rational entries.
    pub m: [BigRational; 4],
}

impl DhDecomposition {
    /// `m` as a block matrix over the quaternions.
    pub fn m_block(&self, ring: &Ring) -> BlockMatrix {
        let e = |r: &BigRational| ring.embed_child(&Elem::rat(r.clone()));
        BlockMatrix::new(e(&self.m[0]), e(&self.m[1]), e(&self.m[2]), e(&self.m[3]))
    }
}

/// Splits `g` in `SL_*(2, H)` as `h_q m`; the pivot is `q = c^{-1}` when
/// `c != 0` (so `m_21 = 1`), else `q = a*` (so `m_11 = 1`).
pub fn decompose_dh_sl2f(ring: &Ring, g: &BlockMatrix) -> Result<DhDecomposition> {
    if !matches!(ring.kind(), Kind::Quaternions) {
        return Err(Error::Unsupported(format!("{ring} is not the rational quaternions")));
    }
    let fail = |m: &str| Error::DecompositionFailed(m.into());
    let q = if !ring.is_zero(&g.c) {
        ring.try_invert(&g.c)?
    } else if !ring.is_zero(&g.a) {
        ring.involute(&g.a)
    } else {
        return Err(fail("a and c both zero"));
    };
    let qs_inv = ring.try_invert(&ring.involute(&q))?;
    let blocks = [
        ring.mul(&qs_inv, &g.a),
        ring.mul(&qs_inv, &g.b),
        ring.mul(&q, &g.c),
        ring.mul(&q, &g.d),
    ];
    if !blocks.iter().all(is_rational) {
        return Err(fail("m has non-central entries"));
    }
    let m = blocks.map(|x| x.as_slice()[0].as_rat().clone());
    if &m[0] * &m[3] - &m[1] * &m[2] != BigRational::one() {
        return Err(fail("det m != 1"));
    }
    let out = DhDecomposition { q, m };
    if bruhat_h(ring, &out.q)?.mul(ring, &out.m_block(ring)) != *g {
        return Err(fail("h_q m != g"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
