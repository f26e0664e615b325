//! Involutive rings and their elements.
//!
//! A [`Ring`] is built from a [`RingDescriptor`] and carries all arithmetic;
//! an [`Elem`] is a plain canonical value that only makes sense together with
//! the ring that produced it. [`Element`] pairs the two for checked use.

pub mod descriptor;
mod element;
pub mod literal;
pub(crate) mod scalar;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use descriptor::{InvolutionTag, RingDescriptor, Twist};
pub use element::Element;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly;
use scalar::{Scalar, Structure};

/// Canonical element value.
///
/// * `Int` - finite commutative rings (residues, field codes, pairs, ...).
/// * `Rat` - rationals.
/// * `Vec` - tuples: `Q(sqrt d)` as `[a, b]`, quaternions as `[x, y, z, w]`,
///   infinite products as `[x, y]`, polynomials as coefficient codes,
///   rational functions as `[num, den]`, matrices row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(u64),
    Rat(Box<BigRational>),
    Vec(Box<[Elem]>),
}

impl Elem {
    pub fn rat(r: BigRational) -> Elem {
        Elem::Rat(Box::new(r))
    }

    pub fn from_vec(v: Vec<Elem>) -> Elem {
        Elem::Vec(v.into_boxed_slice())
    }

    #[inline]
    pub fn as_int(&self) -> u64 {
        match self {
            Elem::Int(x) => *x,
            _ => panic!("expected an integer-coded element, got {self:?}"),
        }
    }

    #[inline]
    pub fn as_rat(&self) -> &BigRational {
        match self {
            Elem::Rat(r) => r,
            _ => panic!("expected a rational element, got {self:?}"),
        }
    }

    #[inline]
    pub fn as_slice(&self) -> &[Elem] {
        match self {
            Elem::Vec(v) => v,
            _ => panic!("expected a tuple element, got {self:?}"),
        }
    }

    fn codes(&self) -> Vec<u64> {
        self.as_slice().iter().map(Elem::as_int).collect()
    }

    fn from_codes(v: Vec<u64>) -> Elem {
        Elem::from_vec(v.into_iter().map(Elem::Int).collect())
    }
}

pub(crate) enum Kind {
    Scalar(Scalar),
    Rationals,
    QuadRational { d: i64 },
    Quaternions,
    /// `R x R` with the flip, for infinite `R`.
    ProdInf,
    Poly(Scalar),
    RatFunc(Scalar),
    Matrix { n: usize },
    SplitQuat,
}

struct Inner {
    desc: RingDescriptor,
    kind: Kind,
    /// Component, coefficient or entry ring, when there is one.
    child: Option<Ring>,
}

/// A concrete ring with involution. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.desc)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.desc)
    }
}

fn scalar_of(desc: &RingDescriptor) -> Scalar {
    match Ring::build(desc).0.kind {
        Kind::Scalar(ref s) => s.clone(),
        _ => unreachable!("validated descriptor has a finite scalar base"),
    }
}

impl Ring {
    pub fn new(desc: &RingDescriptor) -> Result<Ring> {
        desc.validate()?;
        Ok(Ring::build(desc))
    }

    pub fn parse(text: &str) -> Result<Ring> {
        Ring::new(&RingDescriptor::parse(text)?)
    }

    fn build(desc: &RingDescriptor) -> Ring {
        use RingDescriptor as D;
        let (kind, child) = match desc {
            D::PrimeField { p } => (Kind::Scalar(Scalar::zmod(*p, 1)), None),
            D::FiniteField { p, k } => (Kind::Scalar(Scalar::gf(*p, *k)), None),
            D::Residue { p, k } => (Kind::Scalar(Scalar::zmod(*p, *k)), None),
            D::Truncated { base, k } => (Kind::Scalar(Scalar::trunc(scalar_of(base), *k)), Some(Ring::build(base))),
            D::Rationals => (Kind::Rationals, None),
            D::Quaternions => (Kind::Quaternions, Some(Ring::build(&D::Rationals))),
            D::Quadratic { base } => (Kind::Scalar(Scalar::quad(scalar_of(base))), Some(Ring::build(base))),
            D::QuadraticRational { d } => (Kind::QuadRational { d: *d }, Some(Ring::build(&D::Rationals))),
            D::Product { base, twist } => {
                let comp = Ring::build(base);
                let kind = match &comp.0.kind {
                    Kind::Scalar(s) => Kind::Scalar(Scalar::prod(s.clone(), *twist)),
                    _ => Kind::ProdInf,
                };
                (kind, Some(comp))
            }
            D::Matrix { n, base } => (Kind::Matrix { n: *n }, Some(Ring::build(base))),
            D::SplitQuaternion { base } => (Kind::SplitQuat, Some(Ring::build(base))),
            D::PolynomialRing { base } => (Kind::Poly(scalar_of(base)), Some(Ring::build(base))),
            D::FunctionField { base } => (Kind::RatFunc(scalar_of(base)), Some(Ring::build(base))),
        };
        Ring(Arc::new(Inner { desc: desc.clone(), kind, child }))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Component ring of a product, coefficient ring of a polynomial kind,
    /// entry ring of a matrix kind, base field of a finite extension.
    pub fn child(&self) -> Option<&Ring> {
        self.0.child.as_ref()
    }

    fn child_ref(&self) -> &Ring {
        self.0.child.as_ref().expect("ring has a child")
    }

    pub(crate) fn scalar(&self) -> Option<&Scalar> {
        match &self.0.kind {
            Kind::Scalar(s) => Some(s),
            _ => None,
        }
    }

    pub fn involution_tag(&self) -> InvolutionTag {
        self.0.desc.involution_tag()
    }

    pub fn size(&self) -> Option<u64> {
        self.0.desc.size()
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Scalar(s) => s.characteristic,
            Kind::Rationals | Kind::QuadRational { .. } | Kind::Quaternions => 0,
            Kind::Poly(s) | Kind::RatFunc(s) => s.characteristic,
            Kind::ProdInf | Kind::Matrix { .. } | Kind::SplitQuat => self.child_ref().characteristic(),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match &self.0.kind {
            Kind::Quaternions | Kind::SplitQuat => false,
            Kind::Matrix { n } => *n == 1 && self.child_ref().is_commutative(),
            _ => true,
        }
    }

    /// Whether every nonzero element is a unit.
    pub fn is_division_ring(&self) -> bool {
        match &self.0.kind {
            Kind::Scalar(s) => s.is_field(),
            Kind::Rationals | Kind::QuadRational { .. } | Kind::Quaternions | Kind::RatFunc(_) => true,
            Kind::Matrix { n } => *n == 1 && self.child_ref().is_division_ring(),
            _ => false,
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.0.kind, Kind::Matrix { .. } | Kind::SplitQuat)
    }

    pub fn is_product(&self) -> bool {
        matches!(self.0.desc, RingDescriptor::Product { .. })
    }

    /// Side length of the matrix kinds (2 for split quaternions).
    pub fn matrix_size(&self) -> Option<usize> {
        match &self.0.kind {
            Kind::Matrix { n } => Some(*n),
            Kind::SplitQuat => Some(2),
            _ => None,
        }
    }

    // ---- constants ------------------------------------------------------

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            Kind::Scalar(_) => Elem::Int(0),
            Kind::Rationals => Elem::rat(BigRational::zero()),
            Kind::QuadRational { .. } => rat_vec(2, 0),
            Kind::Quaternions => rat_vec(4, 0),
            Kind::ProdInf => Elem::from_vec(vec![self.child_ref().zero(); 2]),
            Kind::Poly(_) => Elem::from_vec(Vec::new()),
            Kind::RatFunc(s) => Elem::from_vec(vec![Elem::from_vec(Vec::new()), Elem::from_codes(vec![s.one()])]),
            Kind::Matrix { n } => Elem::from_vec(vec![self.child_ref().zero(); n * n]),
            Kind::SplitQuat => Elem::from_vec(vec![self.child_ref().zero(); 4]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => {
                let m = BigInt::from(s.characteristic);
                let r = ((v % &m) + &m) % &m;
                let r: i64 = r.try_into().expect("residue fits");
                Elem::Int(s.reduce_int(r))
            }
            Kind::Rationals => Elem::rat(BigRational::from_integer(v.clone())),
            Kind::QuadRational { .. } => Elem::from_vec(vec![
                Elem::rat(BigRational::from_integer(v.clone())),
                Elem::rat(BigRational::zero()),
            ]),
            Kind::Quaternions => {
                let mut out = vec![Elem::rat(BigRational::from_integer(v.clone()))];
                out.extend((0..3).map(|_| Elem::rat(BigRational::zero())));
                Elem::from_vec(out)
            }
            Kind::Poly(s) | Kind::RatFunc(s) => {
                let m = BigInt::from(s.characteristic);
                let r: i64 = (((v % &m) + &m) % &m).try_into().expect("residue fits");
                self.embed_child(&Elem::Int(s.reduce_int(r)))
            }
            Kind::ProdInf | Kind::Matrix { .. } | Kind::SplitQuat => {
                self.embed_child(&self.child_ref().from_bigint(v))
            }
        }
    }

    /// Embeds an element of the child ring: diagonally into products and
    /// matrices, as a constant into polynomial kinds and extensions.
    pub fn embed_child(&self, c: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => match &s.structure {
                Structure::Prod { comp, .. } => Elem::Int(c.as_int() + comp.size * c.as_int()),
                Structure::Trunc { .. } | Structure::Quad { .. } => Elem::Int(c.as_int()),
                _ => panic!("{} has no child ring", self),
            },
            Kind::QuadRational { .. } => Elem::from_vec(vec![c.clone(), Elem::rat(BigRational::zero())]),
            Kind::Quaternions => {
                let mut v = vec![c.clone()];
                v.extend((0..3).map(|_| Elem::rat(BigRational::zero())));
                Elem::from_vec(v)
            }
            Kind::ProdInf => Elem::from_vec(vec![c.clone(), c.clone()]),
            Kind::Poly(_) => Elem::from_codes(poly::trim(vec![c.as_int()])),
            Kind::RatFunc(s) => Elem::from_vec(vec![
                Elem::from_codes(poly::trim(vec![c.as_int()])),
                Elem::from_codes(vec![s.one()]),
            ]),
            Kind::Matrix { n } => {
                let base = self.child_ref();
                let n = *n;
                Elem::from_vec((0..n * n).map(|i| if i % (n + 1) == 0 { c.clone() } else { base.zero() }).collect())
            }
            Kind::SplitQuat => {
                let z = self.child_ref().zero();
                Elem::from_vec(vec![c.clone(), z.clone(), z, c.clone()])
            }
            Kind::Rationals => panic!("Q has no child ring"),
        }
    }

    /// The named generator (`x`, `t`, `s`, `i`, `j`, `k`), resolved through child rings.
    pub fn generator(&self, name: &str) -> Option<Elem> {
        let own = match (&self.0.kind, name) {
            (Kind::Scalar(s), _) => match (&s.structure, name) {
                (Structure::Gf { p, .. }, "x") => Some(Elem::Int(*p)),
                (Structure::Trunc { coeff, .. }, "t") => Some(Elem::Int(coeff.size)),
                (Structure::Quad { base, .. }, "s") => Some(Elem::Int(base.size)),
                _ => None,
            },
            (Kind::QuadRational { .. }, "s") => Some(Elem::from_vec(vec![
                Elem::rat(BigRational::zero()),
                Elem::rat(BigRational::one()),
            ])),
            (Kind::Quaternions, "i" | "j" | "k") => {
                let idx = match name {
                    "i" => 1,
                    "j" => 2,
                    _ => 3,
                };
                Some(Elem::from_vec(
                    (0..4).map(|m| Elem::rat(if m == idx { BigRational::one() } else { BigRational::zero() })).collect(),
                ))
            }
            (Kind::Poly(s), "t") => Some(Elem::from_codes(vec![0, s.one()])),
            (Kind::RatFunc(s), "t") => Some(Elem::from_vec(vec![
                Elem::from_codes(vec![0, s.one()]),
                Elem::from_codes(vec![s.one()]),
            ])),
            _ => None,
        };
        if own.is_some() {
            return own;
        }
        let child = self.child()?;
        if matches!(self.0.kind, Kind::Quaternions | Kind::QuadRational { .. }) {
            return None;
        }
        child.generator(name).map(|c| self.embed_child(&c))
    }

    // ---- arithmetic -------------------------------------------------------

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.add(x.as_int(), y.as_int())),
            Kind::Rationals => Elem::rat(x.as_rat() + y.as_rat()),
            Kind::QuadRational { .. } | Kind::Quaternions => zip_rat(x, y, |a, b| a + b),
            Kind::ProdInf | Kind::Matrix { .. } | Kind::SplitQuat => {
                let c = self.child_ref();
                Elem::from_vec(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| c.add(a, b)).collect())
            }
            Kind::Poly(s) => Elem::from_codes(poly::add(s, &x.codes(), &y.codes())),
            Kind::RatFunc(s) => {
                let (a, b) = ratfunc_parts(x);
                let (c, d) = ratfunc_parts(y);
                let num = poly::add(s, &poly::mul(s, &a, &d), &poly::mul(s, &c, &b));
                ratfunc_make(s, num, poly::mul(s, &b, &d))
            }
        }
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.neg(x.as_int())),
            Kind::Rationals => Elem::rat(-x.as_rat()),
            Kind::QuadRational { .. } | Kind::Quaternions => {
                Elem::from_vec(x.as_slice().iter().map(|a| Elem::rat(-a.as_rat())).collect())
            }
            Kind::ProdInf | Kind::Matrix { .. } | Kind::SplitQuat => {
                let c = self.child_ref();
                Elem::from_vec(x.as_slice().iter().map(|a| c.neg(a)).collect())
            }
            Kind::Poly(s) => Elem::from_codes(poly::neg(s, &x.codes())),
            Kind::RatFunc(s) => {
                let (a, b) = ratfunc_parts(x);
                Elem::from_vec(vec![Elem::from_codes(poly::neg(s, &a)), Elem::from_codes(b)])
            }
        }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.sub(x.as_int(), y.as_int())),
            _ => self.add(x, &self.neg(y)),
        }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.mul(x.as_int(), y.as_int())),
            Kind::Rationals => Elem::rat(x.as_rat() * y.as_rat()),
            Kind::QuadRational { d } => {
                let (a, b) = (x.as_slice()[0].as_rat(), x.as_slice()[1].as_rat());
                let (c, e) = (y.as_slice()[0].as_rat(), y.as_slice()[1].as_rat());
                let dd = BigRational::from_integer(BigInt::from(*d));
                Elem::from_vec(vec![Elem::rat(a * c + b * e * dd), Elem::rat(a * e + b * c)])
            }
            Kind::Quaternions => {
                let p: Vec<&BigRational> = x.as_slice().iter().map(Elem::as_rat).collect();
                let q: Vec<&BigRational> = y.as_slice().iter().map(Elem::as_rat).collect();
                let (a1, b1, c1, d1) = (p[0], p[1], p[2], p[3]);
                let (a2, b2, c2, d2) = (q[0], q[1], q[2], q[3]);
                Elem::from_vec(vec![
                    Elem::rat(a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2),
                    Elem::rat(a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2),
                    Elem::rat(a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2),
                    Elem::rat(a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2),
                ])
            }
            Kind::ProdInf => {
                let c = self.child_ref();
                Elem::from_vec(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| c.mul(a, b)).collect())
            }
            Kind::Poly(s) => Elem::from_codes(poly::mul(s, &x.codes(), &y.codes())),
            Kind::RatFunc(s) => {
                let (a, b) = ratfunc_parts(x);
                let (c, d) = ratfunc_parts(y);
                ratfunc_make(s, poly::mul(s, &a, &c), poly::mul(s, &b, &d))
            }
            Kind::Matrix { n } => Elem::from_vec(matmul(self.child_ref(), x.as_slice(), y.as_slice(), *n)),
            Kind::SplitQuat => Elem::from_vec(matmul(self.child_ref(), x.as_slice(), y.as_slice(), 2)),
        }
    }

    pub fn involute(&self, x: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.involute(x.as_int())),
            Kind::Rationals | Kind::Poly(_) | Kind::RatFunc(_) => x.clone(),
            Kind::QuadRational { .. } => {
                let v = x.as_slice();
                Elem::from_vec(vec![v[0].clone(), Elem::rat(-v[1].as_rat())])
            }
            Kind::Quaternions => {
                let v = x.as_slice();
                let mut out = vec![v[0].clone()];
                out.extend(v[1..].iter().map(|a| Elem::rat(-a.as_rat())));
                Elem::from_vec(out)
            }
            Kind::ProdInf => {
                let v = x.as_slice();
                Elem::from_vec(vec![v[1].clone(), v[0].clone()])
            }
            Kind::Matrix { n } => {
                let n = *n;
                let base = self.child_ref();
                let v = x.as_slice();
                Elem::from_vec((0..n * n).map(|idx| base.involute(&v[(idx % n) * n + idx / n])).collect())
            }
            Kind::SplitQuat => {
                // J h^t J^-1 with J = [[0,1],[-1,0]]: [[a,b],[c,d]] -> [[d*,-b*],[-c*,a*]]
                let base = self.child_ref();
                let v = x.as_slice();
                Elem::from_vec(vec![
                    base.involute(&v[3]),
                    base.neg(&base.involute(&v[1])),
                    base.neg(&base.involute(&v[2])),
                    base.involute(&v[0]),
                ])
            }
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    pub fn is_symmetric(&self, x: &Elem) -> bool {
        self.involute(x) == *x
    }

    pub fn pow(&self, x: &Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Two-sided inverse, or `NotUnit`.
    pub fn try_invert(&self, x: &Elem) -> Result<Elem> {
        self.inverse(x).ok_or(Error::NotUnit)
    }

    pub fn is_unit(&self, x: &Elem) -> bool {
        match &self.0.kind {
            Kind::Scalar(s) => s.inv(x.as_int()).is_some(),
            _ => self.inverse(x).is_some(),
        }
    }

    fn inverse(&self, x: &Elem) -> Option<Elem> {
        match &self.0.kind {
            Kind::Scalar(s) => s.inv(x.as_int()).map(Elem::Int),
            Kind::Rationals => (!x.as_rat().is_zero()).then(|| Elem::rat(x.as_rat().recip())),
            Kind::QuadRational { .. } | Kind::Quaternions => {
                let conj = self.involute(x);
                let norm = self.mul(x, &conj).as_slice()[0].as_rat().clone();
                if norm.is_zero() {
                    return None;
                }
                let ninv = norm.recip();
                Some(Elem::from_vec(conj.as_slice().iter().map(|a| Elem::rat(a.as_rat() * &ninv)).collect()))
            }
            Kind::ProdInf => {
                let c = self.child_ref();
                let v = x.as_slice();
                Some(Elem::from_vec(vec![c.inverse(&v[0])?, c.inverse(&v[1])?]))
            }
            Kind::Poly(s) => {
                let cs = x.codes();
                if cs.len() != 1 {
                    return None;
                }
                Some(Elem::from_codes(vec![s.inv(cs[0])?]))
            }
            Kind::RatFunc(s) => {
                let (a, b) = ratfunc_parts(x);
                if a.is_empty() {
                    return None;
                }
                Some(ratfunc_make(s, b, a))
            }
            Kind::Matrix { .. } | Kind::SplitQuat => {
                let (n, scal) = self.flat_shape();
                let inv = linalg::inverse(&scal, &self.flatten(x), n)?;
                Some(self.unflatten(&inv))
            }
        }
    }

    // ---- flat matrix model ------------------------------------------------

    /// `(N, S)` with this ring isomorphic (as a ring) to `M(N, S)` for a scalar or
    /// division ring `S`; `(1, self)` for non-matrix kinds.
    pub fn flat_shape(&self) -> (usize, Ring) {
        match &self.0.kind {
            Kind::Matrix { n } => {
                let (m, s) = self.child_ref().flat_shape();
                (n * m, s)
            }
            Kind::SplitQuat => (2, self.child_ref().clone()),
            _ => (1, self.clone()),
        }
    }

    /// Row-major `N x N` entries of the flat model.
    pub fn flatten(&self, x: &Elem) -> Vec<Elem> {
        match &self.0.kind {
            Kind::Matrix { n } => {
                let n = *n;
                let base = self.child_ref();
                let (m, _) = base.flat_shape();
                if m == 1 {
                    return x.as_slice().to_vec();
                }
                let big = n * m;
                let mut out = vec![Elem::Int(0); big * big];
                for (idx, e) in x.as_slice().iter().enumerate() {
                    let (bi, bj) = (idx / n, idx % n);
                    for (k, v) in base.flatten(e).into_iter().enumerate() {
                        let (r, c) = (k / m, k % m);
                        out[(bi * m + r) * big + bj * m + c] = v;
                    }
                }
                out
            }
            Kind::SplitQuat => x.as_slice().to_vec(),
            _ => vec![x.clone()],
        }
    }

    pub fn unflatten(&self, flat: &[Elem]) -> Elem {
        match &self.0.kind {
            Kind::Matrix { n } => {
                let n = *n;
                let base = self.child_ref();
                let (m, _) = base.flat_shape();
                if m == 1 {
                    return Elem::from_vec(flat.to_vec());
                }
                let big = n * m;
                let mut out = Vec::with_capacity(n * n);
                for idx in 0..n * n {
                    let (bi, bj) = (idx / n, idx % n);
                    let block: Vec<Elem> =
                        (0..m * m).map(|k| flat[(bi * m + k / m) * big + bj * m + k % m].clone()).collect();
                    out.push(base.unflatten(&block));
                }
                Elem::from_vec(out)
            }
            Kind::SplitQuat => Elem::from_vec(flat.to_vec()),
            _ => flat[0].clone(),
        }
    }

    /// Matrix entries `(i, j)` of the matrix kinds.
    pub fn entry<'a>(&self, x: &'a Elem, i: usize, j: usize) -> &'a Elem {
        let n = self.matrix_size().expect("matrix kind");
        &x.as_slice()[i * n + j]
    }

    pub fn from_entries(&self, entries: Vec<Elem>) -> Elem {
        let n = self.matrix_size().expect("matrix kind");
        assert_eq!(entries.len(), n * n);
        Elem::from_vec(entries)
    }

    // ---- products -----------------------------------------------------------

    /// Components of an element of `R x R`.
    pub fn split(&self, x: &Elem) -> (Elem, Elem) {
        match &self.0.kind {
            Kind::Scalar(s) => {
                let (a, b) = s.split(x.as_int());
                (Elem::Int(a), Elem::Int(b))
            }
            Kind::ProdInf => (x.as_slice()[0].clone(), x.as_slice()[1].clone()),
            _ => panic!("{} is not a product", self),
        }
    }

    pub fn join(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Scalar(s) => Elem::Int(s.join(a.as_int(), b.as_int())),
            Kind::ProdInf => Elem::from_vec(vec![a.clone(), b.clone()]),
            _ => panic!("{} is not a product", self),
        }
    }

    pub fn twist(&self) -> Option<Twist> {
        match &self.0.desc {
            RingDescriptor::Product { twist, .. } => Some(*twist),
            _ => None,
        }
    }

    /// The field automorphism `phi` of a product's component (Frobenius or identity).
    pub fn twist_map(&self, x: &Elem) -> Elem {
        match (self.twist(), self.child_ref().scalar()) {
            (Some(Twist::Frobenius), Some(s)) => Elem::Int(s.frobenius(x.as_int())),
            _ => x.clone(),
        }
    }

    pub fn twist_map_inverse(&self, x: &Elem) -> Elem {
        match (self.twist(), self.child_ref().scalar()) {
            (Some(Twist::Frobenius), Some(s)) => Elem::Int(s.frobenius_inverse(x.as_int())),
            _ => x.clone(),
        }
    }

    // ---- polynomial kinds ---------------------------------------------------

    pub(crate) fn poly_codes(&self, x: &Elem) -> Vec<u64> {
        x.codes()
    }

    pub(crate) fn poly_from_codes(&self, v: Vec<u64>) -> Elem {
        Elem::from_codes(poly::trim(v))
    }

    /// Numerator and denominator codes of a rational function.
    pub(crate) fn ratfunc_parts(&self, x: &Elem) -> (Vec<u64>, Vec<u64>) {
        ratfunc_parts(x)
    }

    pub(crate) fn ratfunc_from(&self, num: Vec<u64>, den: Vec<u64>) -> Elem {
        match &self.0.kind {
            Kind::RatFunc(s) => ratfunc_make(s, num, den),
            _ => panic!("{} is not a function field", self),
        }
    }

    // ---- enumeration --------------------------------------------------------

    /// The element with the given index in the fixed enumeration order.
    pub fn element_at(&self, index: u64) -> Elem {
        match &self.0.kind {
            Kind::Scalar(_) => Elem::Int(index),
            Kind::Matrix { .. } | Kind::SplitQuat => {
                let base = self.child_ref();
                let bs = base.size().expect("finite");
                let len = self.matrix_size().map(|n| n * n).unwrap();
                let mut out = vec![Elem::Int(0); len];
                let mut rest = index;
                for slot in out.iter_mut().rev() {
                    *slot = base.element_at(rest % bs);
                    rest /= bs;
                }
                Elem::from_vec(out)
            }
            _ => panic!("{} is infinite", self),
        }
    }

    /// Inverse of [`Ring::element_at`].
    pub fn index_of(&self, x: &Elem) -> u64 {
        match &self.0.kind {
            Kind::Scalar(_) => x.as_int(),
            Kind::Matrix { .. } | Kind::SplitQuat => {
                let base = self.child_ref();
                let bs = base.size().expect("finite");
                x.as_slice().iter().fold(0, |acc, e| acc * bs + base.index_of(e))
            }
            _ => panic!("{} is infinite", self),
        }
    }

    /// All elements, each exactly once, in a fixed order.
    pub fn enumerate(&self) -> Result<Vec<Elem>> {
        let size = self.size().ok_or_else(|| Error::InfiniteRing(self.to_string()))?;
        Ok((0..size).map(|i| self.element_at(i)).collect())
    }

    pub fn symmetric_elements(&self) -> Result<Vec<Elem>> {
        Ok(self.enumerate()?.into_iter().filter(|x| self.is_symmetric(x)).collect())
    }

    pub fn units(&self) -> Result<Vec<Elem>> {
        Ok(self.enumerate()?.into_iter().filter(|x| self.is_unit(x)).collect())
    }

    /// Central, invertible and symmetric. Centrality is tested against a
    /// generating set: matrix units and scalar generators for matrix kinds,
    /// `i, j` for quaternions; commutative kinds are central outright.
    pub fn is_central_invertible_symmetric(&self, x: &Elem) -> bool {
        self.is_symmetric(x) && self.is_unit(x) && self.generating_set().iter().all(|g| self.mul(g, x) == self.mul(x, g))
    }

    /// A set of ring generators, used for centrality tests.
    pub fn generating_set(&self) -> Vec<Elem> {
        match &self.0.kind {
            Kind::Quaternions => vec![self.generator("i").unwrap(), self.generator("j").unwrap()],
            Kind::Matrix { n } => {
                let base = self.child_ref();
                let n = *n;
                let mut gens = Vec::new();
                for idx in 0..n * n {
                    let mut v = vec![base.zero(); n * n];
                    v[idx] = base.one();
                    gens.push(Elem::from_vec(v));
                }
                for g in base.generating_set() {
                    gens.push(self.embed_child(&g));
                }
                gens
            }
            Kind::SplitQuat => {
                let base = self.child_ref();
                let mut gens = Vec::new();
                for idx in 0..4 {
                    let mut v = vec![base.zero(); 4];
                    v[idx] = base.one();
                    gens.push(Elem::from_vec(v));
                }
                gens
            }
            _ => Vec::new(),
        }
    }

    /// Whether `x` is a well-formed canonical value of this ring.
    pub fn is_canonical(&self, x: &Elem) -> bool {
        match (&self.0.kind, x) {
            (Kind::Scalar(s), Elem::Int(v)) => *v < s.size,
            (Kind::Rationals, Elem::Rat(_)) => true,
            (Kind::QuadRational { .. }, Elem::Vec(v)) => v.len() == 2 && v.iter().all(|e| matches!(e, Elem::Rat(_))),
            (Kind::Quaternions, Elem::Vec(v)) => v.len() == 4 && v.iter().all(|e| matches!(e, Elem::Rat(_))),
            (Kind::ProdInf, Elem::Vec(v)) => v.len() == 2 && v.iter().all(|e| self.child_ref().is_canonical(e)),
            (Kind::Poly(s), Elem::Vec(v)) => {
                v.iter().all(|e| matches!(e, Elem::Int(c) if *c < s.size)) && v.last() != Some(&Elem::Int(0))
            }
            (Kind::RatFunc(s), Elem::Vec(v)) => {
                if v.len() != 2 {
                    return false;
                }
                let ok_poly = |e: &Elem| match e {
                    Elem::Vec(cs) => {
                        cs.iter().all(|c| matches!(c, Elem::Int(c) if *c < s.size)) && cs.last() != Some(&Elem::Int(0))
                    }
                    _ => false,
                };
                if !ok_poly(&v[0]) || !ok_poly(&v[1]) {
                    return false;
                }
                let (num, den) = ratfunc_parts(x);
                !den.is_empty() && *den.last().unwrap() == s.one() && poly::gcd(s, &num, &den) == vec![s.one()]
                    || (num.is_empty() && den == vec![s.one()])
            }
            (Kind::Matrix { .. } | Kind::SplitQuat, Elem::Vec(v)) => {
                let n = self.matrix_size().unwrap();
                v.len() == n * n && v.iter().all(|e| self.child_ref().is_canonical(e))
            }
            _ => false,
        }
    }

    /// A pseudo-random element; uniform for finite rings, small coordinates otherwise.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        if let Some(size) = self.size() {
            return self.element_at(rng.gen_range(0..size));
        }
        let small = |rng: &mut R| {
            let num = rng.gen_range(-6i64..=6);
            let den = rng.gen_range(1i64..=4);
            Elem::rat(BigRational::new(num.into(), den.into()))
        };
        match &self.0.kind {
            Kind::Rationals => small(rng),
            Kind::QuadRational { .. } => Elem::from_vec(vec![small(rng), small(rng)]),
            Kind::Quaternions => Elem::from_vec((0..4).map(|_| small(rng)).collect()),
            Kind::ProdInf => {
                let c = self.child_ref();
                Elem::from_vec(vec![c.random(rng), c.random(rng)])
            }
            Kind::Poly(s) => {
                let deg = rng.gen_range(0..4);
                Elem::from_codes(poly::trim((0..=deg).map(|_| rng.gen_range(0..s.size)).collect()))
            }
            Kind::RatFunc(s) => {
                let dn = rng.gen_range(0..3);
                let num: Vec<u64> = (0..=dn).map(|_| rng.gen_range(0..s.size)).collect();
                let dd = rng.gen_range(0..3);
                let mut den: Vec<u64> = (0..dd).map(|_| rng.gen_range(0..s.size)).collect();
                den.push(s.one());
                ratfunc_make(s, poly::trim(num), den)
            }
            Kind::Matrix { .. } | Kind::SplitQuat => {
                let n = self.matrix_size().unwrap();
                let c = self.child_ref();
                Elem::from_vec((0..n * n).map(|_| c.random(rng)).collect())
            }
            Kind::Scalar(_) => unreachable!(),
        }
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        literal::parse(self, text)
    }

    pub fn format(&self, x: &Elem) -> String {
        literal::format(self, x)
    }

    /// Integrality for the global fields: integer rationals, `Z[s]`-coordinates
    /// of `Q(sqrt d)` that lie in its ring of integers, polynomials in `F_q(t)`.
    pub fn is_integral(&self, x: &Elem) -> bool {
        match &self.0.kind {
            Kind::Rationals => x.as_rat().is_integer(),
            Kind::QuadRational { d } => {
                let v = x.as_slice();
                let (a, b) = (v[0].as_rat(), v[1].as_rat());
                if a.is_integer() && b.is_integer() {
                    return true;
                }
                // (u + v sqrt d)/2 with u, v odd when d = 1 mod 4
                let two = BigRational::from_integer(2.into());
                let (ua, ub) = (a * &two, b * &two);
                d.rem_euclid(4) == 1
                    && ua.is_integer()
                    && ub.is_integer()
                    && (ua.to_integer() - ub.to_integer()).is_even_int()
            }
            Kind::Quaternions => x.as_slice().iter().all(|c| c.as_rat().is_integer()),
            Kind::RatFunc(_) => ratfunc_parts(x).1.len() == 1,
            Kind::Poly(_) | Kind::Scalar(_) => true,
            Kind::ProdInf | Kind::Matrix { .. } | Kind::SplitQuat => {
                x.as_slice().iter().all(|e| self.child_ref().is_integral(e))
            }
        }
    }
}

trait EvenInt {
    fn is_even_int(&self) -> bool;
}

impl EvenInt for BigInt {
    fn is_even_int(&self) -> bool {
        (self % BigInt::from(2)).is_zero()
    }
}

fn rat_vec(len: usize, first: i64) -> Elem {
    let mut v = vec![Elem::rat(BigRational::from_integer(first.into()))];
    v.extend((1..len).map(|_| Elem::rat(BigRational::zero())));
    Elem::from_vec(v)
}

fn zip_rat(x: &Elem, y: &Elem, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Elem {
    Elem::from_vec(x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| Elem::rat(f(a.as_rat(), b.as_rat()))).collect())
}

fn ratfunc_parts(x: &Elem) -> (Vec<u64>, Vec<u64>) {
    let v = x.as_slice();
    (v[0].codes(), v[1].codes())
}

fn ratfunc_make(s: &Scalar, num: Vec<u64>, den: Vec<u64>) -> Elem {
    let num = poly::trim(num);
    let den = poly::trim(den);
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return Elem::from_vec(vec![Elem::from_codes(Vec::new()), Elem::from_codes(vec![s.one()])]);
    }
    let g = poly::gcd(s, &num, &den);
    let (num, _) = poly::divrem(s, &num, &g);
    let (den, _) = poly::divrem(s, &den, &g);
    let lead = s.inv(*den.last().unwrap()).expect("field coefficients");
    Elem::from_vec(vec![Elem::from_codes(poly::scale(s, &num, lead)), Elem::from_codes(poly::scale(s, &den, lead))])
}

pub(crate) fn matmul(base: &Ring, x: &[Elem], y: &[Elem], n: usize) -> Vec<Elem> {
    if let Kind::Scalar(s) = base.kind() {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = s.add(acc, s.mul(x[i * n + k].as_int(), y[k * n + j].as_int()));
                }
                out.push(Elem::Int(acc));
            }
        }
        return out;
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = base.mul(&x[i * n], &y[j]);
            for k in 1..n {
                acc = base.add(&acc, &base.mul(&x[i * n + k], &y[k * n + j]));
            }
            out.push(acc);
        }
    }
    out
}

#[cfg(test)]
mod tests;
