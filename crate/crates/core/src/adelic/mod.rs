//! Restricted-product matrices in the rational model: global-field components
//! on a finite place set `S` and one integral tail standing for every place
//! outside `S`. Division is assembled place by place plus one tail solve.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::euclid::{self, ExhaustionCertificate, Method};
use crate::linalg;
use crate::numtheory;
use crate::poly;
use crate::ring::{Elem, Kind, Ring, RingDescriptor};
use crate::sl_star::{bruhat_h, bruhat_u, bruhat_w, BlockMatrix};

mod literal;

pub use literal::{format_adelic, parse_adelic, parse_place};

/// Largest number of tail candidates tried exhaustively per bound; above it
/// the same number is sampled.
pub const TAIL_CANDIDATES: usize = 200_000;

/// Largest coordinate bound of the integral tail search.
pub const TAIL_BOUND: i64 = 8;

// ---- places ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Prime(u64),
    /// Monic irreducible polynomial, coefficient codes from the constant term up.
    Poly(Vec<u64>),
    Infinity,
}

impl Place {
    fn rank(&self) -> u8 {
        match self {
            Place::Prime(_) => 0,
            Place::Poly(_) => 1,
            Place::Infinity => 2,
        }
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Place) -> Ordering {
        match (self, o) {
            (Place::Prime(a), Place::Prime(b)) => a.cmp(b),
            (Place::Poly(a), Place::Poly(b)) => a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())),
            _ => self.rank().cmp(&o.rank()),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Place) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingType {
    Inert,
    Split,
    Ramified,
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingType::Inert => "inert",
            SplittingType::Split => "split",
            SplittingType::Ramified => "ramified",
        })
    }
}

/// Behaviour of the prime `p` in `Q(sqrt d)`, `d` square-free.
pub fn quad_splitting(d: i64, p: u64) -> SplittingType {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 => SplittingType::Split,
            5 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        };
    }
    if d.rem_euclid(p as i64) == 0 {
        SplittingType::Ramified
    } else if numtheory::is_nonzero_square_mod(d, p) {
        SplittingType::Split
    } else {
        SplittingType::Inert
    }
}

// ---- bases ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdelicBase {
    Rational,
    Quadratic(i64),
    FunctionField(u64),
    /// Split quaternions over `F_2(t)`.
    QuaternionChar2,
    /// Split quaternions over `Q`.
    QuaternionRational,
}

impl fmt::Display for AdelicBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdelicBase::Rational => f.write_str("Q"),
            AdelicBase::Quadratic(d) => write!(f, "Quad(Q,{d})"),
            AdelicBase::FunctionField(q) => write!(f, "GF({q})(t)"),
            AdelicBase::QuaternionChar2 => f.write_str("SplitQuat(GF(2)(t))"),
            AdelicBase::QuaternionRational => f.write_str("SplitQuat(Q)"),
        }
    }
}

impl AdelicBase {
    /// Accepts `Q`, `Quad(Q,d)`, `GF(q)(t)` for `q` in 2, 3, 4, `SplitQuat(GF(2)(t))`
    /// and `SplitQuat(Q)`.
    pub fn parse(text: &str) -> Result<AdelicBase> {
        let desc = RingDescriptor::parse(text)?;
        let bad = || Error::InvalidParameters(format!("unsupported adelic base {text}"));
        Ok(match desc {
            RingDescriptor::Rationals => AdelicBase::Rational,
            RingDescriptor::QuadraticRational { d } => AdelicBase::Quadratic(d),
            RingDescriptor::FunctionField { ref base } => {
                let q = base.size().ok_or_else(bad)?;
                if !matches!(q, 2..=4) {
                    return Err(bad());
                }
                AdelicBase::FunctionField(q)
            }
            RingDescriptor::SplitQuaternion { ref base } => match base.as_ref() {
                RingDescriptor::Rationals => AdelicBase::QuaternionRational,
                RingDescriptor::FunctionField { base } if base.size() == Some(2) => AdelicBase::QuaternionChar2,
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        })
    }

    /// The global field (or quaternion algebra over it).
    pub fn field_ring(&self) -> Ring {
        Ring::parse(&self.to_string()).expect("base descriptor")
    }

    /// `M(n, K)`, or `K` itself for `n = 1`.
    pub fn global_ring(&self, n: usize) -> Ring {
        matrix_ring(&self.field_ring(), n)
    }

    fn coefficient_field(&self) -> Option<Ring> {
        match self {
            AdelicBase::FunctionField(q) => Some(Ring::parse(&format!("GF({q})[t]")).unwrap()),
            AdelicBase::QuaternionChar2 => Some(Ring::parse("GF(2)[t]").unwrap()),
            _ => None,
        }
    }

    pub fn is_function_field(&self) -> bool {
        matches!(self, AdelicBase::FunctionField(_) | AdelicBase::QuaternionChar2)
    }

    /// Checks primality or monic irreducibility.
    pub fn check_place(&self, place: &Place) -> Result<()> {
        let bad = |m: String| Error::InvalidParameters(m);
        match (place, self.coefficient_field()) {
            (Place::Infinity, _) => Ok(()),
            (Place::Prime(p), None) => {
                if numtheory::is_prime(*p) {
                    Ok(())
                } else {
                    Err(bad(format!("{p} is not prime")))
                }
            }
            (Place::Poly(codes), Some(pr)) => {
                let Kind::Poly(s) = pr.kind() else { unreachable!() };
                let monic = codes.last() == Some(&1);
                if monic && poly::is_irreducible(s, codes) {
                    Ok(())
                } else {
                    Err(bad(format!("{} is not monic irreducible", pr.format(&pr.poly_from_codes(codes.clone())))))
                }
            }
            _ => Err(bad(format!("place {place:?} does not belong to {self}"))),
        }
    }

    pub fn splitting(&self, place: &Place) -> Option<SplittingType> {
        match (self, place) {
            (AdelicBase::Quadratic(d), Place::Prime(p)) => Some(quad_splitting(*d, *p)),
            (AdelicBase::Quadratic(d), Place::Infinity) => {
                Some(if *d > 0 { SplittingType::Split } else { SplittingType::Inert })
            }
            _ => None,
        }
    }

    /// Ring holding the component at `place`: flip pairs of rational
    /// matrices at split places of a quadratic base, the global ring elsewhere.
    pub fn place_ring(&self, place: &Place, n: usize) -> Ring {
        if self.splitting(place) == Some(SplittingType::Split) {
            matrix_ring(&Ring::parse("Prod(Q,Q)").unwrap(), n)
        } else {
            self.global_ring(n)
        }
    }

    /// Image of a global matrix at `place`; at split places only rational
    /// matrices embed exactly.
    pub fn embed(&self, place: &Place, n: usize, x: &Elem) -> Result<Elem> {
        if self.splitting(place) != Some(SplittingType::Split) {
            return Ok(x.clone());
        }
        let g = self.global_ring(n);
        let pr = self.place_ring(place, n);
        let (_, s) = pr.flat_shape();
        let entries: Vec<Elem> = g
            .flatten(x)
            .iter()
            .map(|e| {
                let v = e.as_slice();
                if !v[1].as_rat().is_zero() {
                    return Err(Error::Unsupported("irrational matrix at a split place".into()));
                }
                Ok(s.join(&v[0], &v[0]))
            })
            .collect::<Result<_>>()?;
        Ok(pr.unflatten(&entries))
    }
}

fn matrix_ring(k: &Ring, n: usize) -> Ring {
    if n == 1 {
        k.clone()
    } else {
        Ring::new(&RingDescriptor::Matrix { n, base: Box::new(k.descriptor().clone()) }).expect("matrix ring")
    }
}

// ---- adelic matrices -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicMatrix {
    pub base: AdelicBase,
    pub n: usize,
    pub components: BTreeMap<Place, Elem>,
    pub tail: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdelicOp {
    Add,
    Mul,
}

impl AdelicMatrix {
    /// Validates places and tail integrality, then normalizes.
    pub fn new(base: AdelicBase, n: usize, components: BTreeMap<Place, Elem>, tail: Elem) -> Result<AdelicMatrix> {
        let g = base.global_ring(n);
        if !g.is_integral(&tail) {
            return Err(Error::InvalidParameters("tail is not integral".into()));
        }
        for (p, x) in &components {
            base.check_place(p)?;
            if !base.place_ring(p, n).is_canonical(x) {
                return Err(Error::InvalidParameters(format!("malformed component at {}", place_text(&base, p))));
            }
        }
        let mut m = AdelicMatrix { base, n, components, tail };
        m.normalize()?;
        Ok(m)
    }

    pub fn from_tail(base: AdelicBase, n: usize, tail: Elem) -> Result<AdelicMatrix> {
        AdelicMatrix::new(base, n, BTreeMap::new(), tail)
    }

    pub fn identity(base: AdelicBase, n: usize) -> AdelicMatrix {
        let tail = base.global_ring(n).one();
        AdelicMatrix { base, n, components: BTreeMap::new(), tail }
    }

    pub fn global_ring(&self) -> Ring {
        self.base.global_ring(self.n)
    }

    pub fn place_ring(&self, place: &Place) -> Ring {
        self.base.place_ring(place, self.n)
    }

    /// Places with an explicit component.
    pub fn support(&self) -> BTreeSet<Place> {
        self.components.keys().cloned().collect()
    }

    /// The component at `place`, the embedded tail if none is explicit.
    pub fn value_at(&self, place: &Place) -> Result<Elem> {
        match self.components.get(place) {
            Some(x) => Ok(x.clone()),
            None => self.base.embed(place, self.n, &self.tail),
        }
    }

    fn normalize(&mut self) -> Result<()> {
        let mut keep = BTreeMap::new();
        for (p, x) in std::mem::take(&mut self.components) {
            if self.base.embed(&p, self.n, &self.tail).ok().as_ref() != Some(&x) {
                keep.insert(p, x);
            }
        }
        self.components = keep;
        Ok(())
    }

    fn compatible(&self, o: &AdelicMatrix) -> Result<()> {
        if self.base != o.base || self.n != o.n {
            return Err(Error::DescriptorMismatch { left: format!("{} n={}", self.base, self.n), right: format!("{} n={}", o.base, o.n) });
        }
        Ok(())
    }

    pub fn op(&self, o: &AdelicMatrix, op: AdelicOp) -> Result<AdelicMatrix> {
        self.compatible(o)?;
        let apply = |r: &Ring, x: &Elem, y: &Elem| match op {
            AdelicOp::Add => r.add(x, y),
            AdelicOp::Mul => r.mul(x, y),
        };
        let places: BTreeSet<Place> = self.support().union(&o.support()).cloned().collect();
        let mut components = BTreeMap::new();
        for p in places {
            let r = self.place_ring(&p);
            components.insert(p.clone(), apply(&r, &self.value_at(&p)?, &o.value_at(&p)?));
        }
        let tail = apply(&self.global_ring(), &self.tail, &o.tail);
        let mut out = AdelicMatrix { base: self.base.clone(), n: self.n, components, tail };
        out.normalize()?;
        Ok(out)
    }

    pub fn add(&self, o: &AdelicMatrix) -> Result<AdelicMatrix> {
        self.op(o, AdelicOp::Add)
    }

    pub fn mul(&self, o: &AdelicMatrix) -> Result<AdelicMatrix> {
        self.op(o, AdelicOp::Mul)
    }

    /// Componentwise involution of each place ring and of the tail.
    pub fn involute(&self) -> AdelicMatrix {
        let components = self.components.iter().map(|(p, x)| (p.clone(), self.place_ring(p).involute(x))).collect();
        let tail = self.global_ring().involute(&self.tail);
        let mut out = AdelicMatrix { base: self.base.clone(), n: self.n, components, tail };
        out.normalize().expect("normalize");
        out
    }

    /// `(a_S, a^S)`: the components on `places` with identity elsewhere, and
    /// identity on `places` with the tail elsewhere.
    pub fn support_split(&self, places: &BTreeSet<Place>) -> Result<(AdelicMatrix, AdelicMatrix)> {
        if !self.support().is_subset(places) {
            return Err(Error::InvalidParameters("place set does not cover the support".into()));
        }
        let g = self.global_ring();
        let mut a_s = AdelicMatrix::identity(self.base.clone(), self.n);
        let mut a_tail = AdelicMatrix { base: self.base.clone(), n: self.n, components: BTreeMap::new(), tail: self.tail.clone() };
        for p in places {
            self.base.check_place(p)?;
            a_s.components.insert(p.clone(), self.value_at(p)?);
            a_tail.components.insert(p.clone(), self.base.embed(p, self.n, &g.one())?);
        }
        a_s.normalize()?;
        a_tail.normalize()?;
        Ok((a_s, a_tail))
    }
}

// ---- integral tails ----------------------------------------------------------------

/// Units of the global integer ring inside its fraction field.
fn integral_unit(f: &Ring, x: &Elem) -> bool {
    if f.is_zero(x) || !f.is_integral(x) {
        return false;
    }
    match f.kind() {
        Kind::Rationals => x.as_rat().abs().is_one(),
        Kind::QuadRational { d } => {
            let v = x.as_slice();
            let (a, b) = (v[0].as_rat(), v[1].as_rat());
            let norm = a * a - b * b * BigRational::from_integer(BigInt::from(*d));
            norm.abs().is_one()
        }
        Kind::RatFunc(_) => {
            let (num, den) = f.ratfunc_parts(x);
            num.len() == 1 && den.len() == 1
        }
        _ => f.is_unit(x),
    }
}

/// Whether `x` is integral with a unit determinant in the global integer ring.
pub fn is_tail_unit(g: &Ring, x: &Elem) -> bool {
    if !g.is_integral(x) {
        return false;
    }
    let (n, f) = g.flat_shape();
    integral_unit(&f, &linalg::det(&f, &g.flatten(x), n))
}

/// `1` in `Z a + Z c` (or over `F_q[t]`), from the gcd of the maximal minors of
/// the stacked flat matrix.
fn tail_coprime(g: &Ring, a: &Elem, c: &Elem) -> Option<bool> {
    let (n, f) = g.flat_shape();
    let mut stacked = g.flatten(a);
    stacked.extend(g.flatten(c));
    let rows = 2 * n;
    let mut gcd: Option<Elem> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let minor: Vec<Elem> = pick.iter().flat_map(|&r| stacked[r * n..(r + 1) * n].iter().cloned()).collect();
        let d = linalg::det(&f, &minor, n);
        gcd = Some(match (gcd, f.kind()) {
            (None, _) => d,
            (Some(x), Kind::Rationals) => {
                Elem::rat(BigRational::from_integer(x.as_rat().to_integer().gcd(&d.as_rat().to_integer())))
            }
            (Some(x), Kind::RatFunc(s)) => {
                let (xn, _) = f.ratfunc_parts(&x);
                let (dn, _) = f.ratfunc_parts(&d);
                f.ratfunc_from(poly::gcd(s, &xn, &dn), vec![1])
            }
            _ => return None,
        });
        // next n-subset of rows
        let mut i = n;
        loop {
            if i == 0 {
                return Some(integral_unit(&f, gcd.as_ref().unwrap()));
            }
            i -= 1;
            if pick[i] < rows - n + i {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Integral values of the base field with coordinates bounded by `bound`:
/// integers (and `Z[sqrt d]` points) for number fields, polynomials of
/// degree below `log2(bound) + 1` for function fields.
fn integral_pool(k: &Ring, bound: i64, symmetric: bool) -> Vec<Elem> {
    let ints = || (-bound..=bound).map(|i| Elem::rat(BigRational::from_integer(BigInt::from(i))));
    match k.kind() {
        Kind::Rationals => ints().collect(),
        Kind::QuadRational { .. } => {
            let zero = Elem::rat(BigRational::zero());
            if symmetric {
                ints().map(|x| Elem::from_vec(vec![x, zero.clone()])).collect()
            } else {
                ints().flat_map(|x| ints().map(move |y| Elem::from_vec(vec![x.clone(), y]))).collect()
            }
        }
        Kind::RatFunc(s) => {
            let deg = (64 - (bound as u64).leading_zeros()) as usize;
            let q = s.size;
            let count = q.pow(deg as u32);
            (0..count)
                .map(|mut code| {
                    let mut v = Vec::with_capacity(deg);
                    for _ in 0..deg {
                        v.push(code % q);
                        code /= q;
                    }
                    k.ratfunc_from(poly::trim(v), vec![1])
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Slot pools and an assembler for the bounded symmetric integral elements
/// of `g = M(n, K)` or `K`.
type Assembler = Box<dyn Fn(&[Elem]) -> Elem>;

struct SymmetricGrid {
    pools: Vec<Vec<Elem>>,
    build: Assembler,
}

fn symmetric_grid(g: &Ring, bound: i64) -> SymmetricGrid {
    let (n, k) = match g.kind() {
        Kind::Matrix { n } => (*n, g.child().unwrap().clone()),
        _ => (1, g.clone()),
    };
    let quat = matches!(k.kind(), Kind::SplitQuat);
    let f = if quat { k.child().unwrap().clone() } else { k.clone() };
    let full = integral_pool(&f, bound, false);
    let sym = integral_pool(&f, bound, true);
    // a split quaternion [x, y, z, x*] is symmetric when y, z are antisymmetric;
    // over F_2(t) every element is
    let (diag_slots, off_slots) = if quat { (3, 4) } else { (1, 1) };
    let mut pools = Vec::new();
    for _ in 0..n {
        if quat {
            pools.extend([full.clone(), sym.clone(), sym.clone()]);
        } else {
            pools.push(sym.clone());
        }
    }
    for _ in 0..n * (n - 1) / 2 {
        for _ in 0..off_slots {
            pools.push(full.clone());
        }
    }
    let kk = k.clone();
    let ff = f.clone();
    let build = move |vals: &[Elem]| {
        let entry = |v: &[Elem]| {
            if quat {
                Elem::from_vec(v.to_vec())
            } else {
                v[0].clone()
            }
        };
        let mut m = vec![kk.zero(); n * n];
        let mut pos = 0;
        for i in 0..n {
            m[i * n + i] = if quat {
                let x = &vals[pos];
                Elem::from_vec(vec![x.clone(), vals[pos + 1].clone(), vals[pos + 2].clone(), ff.involute(x)])
            } else {
                vals[pos].clone()
            };
            pos += diag_slots;
        }
        for i in 0..n {
            for j in i + 1..n {
                let e = entry(&vals[pos..pos + off_slots]);
                m[j * n + i] = kk.involute(&e);
                m[i * n + j] = e;
                pos += off_slots;
            }
        }
        if n == 1 {
            m.pop().unwrap()
        } else {
            Elem::from_vec(m)
        }
    };
    SymmetricGrid { pools, build: Box::new(build) }
}

/// How the tail step was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// `a_t` is a unit: `s_t = 0`.
    UnitCorner,
    /// `a_t = 0`, `c_t` a unit: `s_t = 1`.
    ZeroCorner,
    /// Bounded search over symmetric integral matrices.
    Search { bound: i64, tried: usize },
}

/// Uniform integral `s_t` symmetric with `a_t - s_t c_t` a unit.
/// Without `search` only the closed forms are tried.
pub fn tail_divide(g: &Ring, a: &Elem, c: &Elem, search: bool, seed: u64) -> Result<(Elem, Elem, TailMethod)> {
    if !g.is_integral(a) || !g.is_integral(c) {
        return Err(Error::InvalidParameters("tail is not integral".into()));
    }
    if !euclid::derive_symmetry(g, a, c) {
        return Err(Error::SymmetryViolation);
    }
    if is_tail_unit(g, a) {
        return Ok((g.zero(), a.clone(), TailMethod::UnitCorner));
    }
    if g.is_zero(a) && is_tail_unit(g, c) {
        return Ok((g.one(), g.sub(a, c), TailMethod::ZeroCorner));
    }
    if tail_coprime(g, a, c) == Some(false) {
        return Err(Error::NotCoprime);
    }
    if !search {
        return Err(Error::TailUnsolved("tail pair has no closed-form step".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0usize;
    let mut bound = 1;
    while bound <= TAIL_BOUND {
        let grid = symmetric_grid(g, bound);
        let total = grid.pools.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()));
        let exhaustive = total.is_some_and(|t| t <= TAIL_CANDIDATES);
        let count = if exhaustive { total.unwrap() } else { TAIL_CANDIDATES };
        let mut idx = vec![0usize; grid.pools.len()];
        for _ in 0..count {
            if !exhaustive {
                for (i, p) in grid.pools.iter().enumerate() {
                    idx[i] = rng.gen_range(0..p.len());
                }
            }
            let vals: Vec<Elem> = idx.iter().zip(&grid.pools).map(|(&i, p)| p[i].clone()).collect();
            let s = (grid.build)(&vals);
            tried += 1;
            let r = g.sub(a, &g.mul(&s, c));
            if is_tail_unit(g, &r) {
                return Ok((s, r, TailMethod::Search { bound, tried }));
            }
            if exhaustive {
                for i in (0..idx.len()).rev() {
                    idx[i] += 1;
                    if idx[i] < grid.pools[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        bound *= 2;
    }
    Err(Error::TailUnsolved(format!("no symmetric integral tail step with coordinates up to {TAIL_BOUND} ({tried} candidates)")))
}

// ---- division assembly ----------------------------------------------------------------

/// Assembled division with per-place provenance.
#[derive(Debug, Clone)]
pub struct AdelicDivision {
    pub s: AdelicMatrix,
    pub r: AdelicMatrix,
    pub places: Vec<(Place, Method)>,
    pub tail: TailMethod,
}

impl AdelicDivision {
    /// `a = s c + r` at every explicit place and on the tail, `r` invertible
    /// at the places and a unit tail, `s` symmetric everywhere.
    pub fn verify(&self, a: &AdelicMatrix, c: &AdelicMatrix) -> Result<()> {
        let fail = |m: String| Error::PostconditionViolation(m);
        let mut places = a.support();
        for x in [c, &self.s, &self.r] {
            places.extend(x.support());
        }
        for p in &places {
            let ring = a.place_ring(p);
            let (av, cv, sv, rv) = (a.value_at(p)?, c.value_at(p)?, self.s.value_at(p)?, self.r.value_at(p)?);
            if ring.add(&ring.mul(&sv, &cv), &rv) != av {
                return Err(fail(format!("a != s c + r at {p:?}")));
            }
            if !ring.is_symmetric(&sv) || !ring.is_unit(&rv) {
                return Err(fail(format!("bad step at {p:?}")));
            }
        }
        let g = a.global_ring();
        if g.add(&g.mul(&self.s.tail, &c.tail), &self.r.tail) != a.tail {
            return Err(fail("a != s c + r on the tail".into()));
        }
        if !g.is_symmetric(&self.s.tail) || !g.is_integral(&self.s.tail) || !is_tail_unit(&g, &self.r.tail) {
            return Err(fail("bad tail step".into()));
        }
        Ok(())
    }
}

fn assemble(a: &AdelicMatrix, c: &AdelicMatrix, seed: u64) -> Result<AdelicDivision> {
    a.compatible(c)?;
    let places: BTreeSet<Place> = a.support().union(&c.support()).cloned().collect();
    let mut s_comp = BTreeMap::new();
    let mut r_comp = BTreeMap::new();
    let mut provenance = Vec::new();
    for p in &places {
        let ring = a.place_ring(p);
        let (av, cv) = (a.value_at(p)?, c.value_at(p)?);
        let step = euclid::divide_step(&ring, &av, &cv)?;
        provenance.push((p.clone(), euclid::method(&ring)?));
        s_comp.insert(p.clone(), step.s);
        r_comp.insert(p.clone(), step.r);
    }
    let g = a.global_ring();
    let (st, rt, tail) = tail_divide(&g, &a.tail, &c.tail, !matches!(a.base, AdelicBase::Quadratic(_)), seed)?;
    let mut s = AdelicMatrix { base: a.base.clone(), n: a.n, components: s_comp, tail: st };
    let mut r = AdelicMatrix { base: a.base.clone(), n: a.n, components: r_comp, tail: rt };
    s.normalize()?;
    r.normalize()?;
    let out = AdelicDivision { s, r, places: provenance, tail };
    out.verify(a, c)?;
    Ok(out)
}

/// Default seed of the tail search.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Division over the adeles of `Q` (trivial involution).
pub fn adelic_divide(a: &AdelicMatrix, c: &AdelicMatrix) -> Result<AdelicDivision> {
    adelic_divide_seeded(a, c, DEFAULT_SEED)
}

pub fn adelic_divide_seeded(a: &AdelicMatrix, c: &AdelicMatrix, seed: u64) -> Result<AdelicDivision> {
    match a.base {
        AdelicBase::Rational | AdelicBase::FunctionField(_) => assemble(a, c, seed),
        _ => Err(Error::Unsupported(format!("adelic_divide over {}", a.base))),
    }
}

/// Division over the adeles of `Q(sqrt d)`: two-local solves at split
/// places, field solves at inert and ramified ones.
pub fn quad_adelic_divide(a: &AdelicMatrix, c: &AdelicMatrix) -> Result<AdelicDivision> {
    match a.base {
        AdelicBase::Quadratic(_) => assemble(a, c, DEFAULT_SEED),
        _ => Err(Error::Unsupported(format!("quad_adelic_divide over {}", a.base))),
    }
}

/// Division over the split-quaternion adeles; refused outside characteristic 2.
pub fn quat_adelic_divide(a: &AdelicMatrix, c: &AdelicMatrix) -> Result<AdelicDivision> {
    match a.base {
        AdelicBase::QuaternionChar2 => assemble(a, c, DEFAULT_SEED),
        AdelicBase::QuaternionRational => {
            let w = quat_char0_witness()?;
            Err(Error::NotStarEuclidean(format!(
                "split quaternion adeles in characteristic 0; witness a = {}, c = {} at place {}, \
                 certificate over {}: {} symmetric s, {} unit remainders",
                format_adelic(&w.a),
                format_adelic(&w.c),
                place_text(&w.a.base, &w.place),
                w.certificate.ring,
                w.certificate.symmetric_count,
                w.certificate.unit_remainders
            )))
        }
        _ => Err(Error::Unsupported(format!("quat_adelic_divide over {}", a.base))),
    }
}

/// The non-divisible quaternion pair placed at a split place of `Q`.
#[derive(Debug, Clone)]
pub struct QuatWitness {
    pub a: AdelicMatrix,
    pub c: AdelicMatrix,
    pub place: Place,
    /// Exhaustion over the truncation `SplitQuat(Z/(9))` of the place.
    pub certificate: ExhaustionCertificate,
}

pub fn quat_char0_witness() -> Result<QuatWitness> {
    let base = AdelicBase::QuaternionRational;
    let g = base.global_ring(1);
    let place = Place::Prime(3);
    let pa = g.parse_elem("[[1,0],[1,0]]")?;
    let pc = g.parse_elem("[[0,1],[0,1]]")?;
    let a = AdelicMatrix::new(base.clone(), 1, BTreeMap::from([(place.clone(), pa)]), g.one())?;
    let c = AdelicMatrix::new(base, 1, BTreeMap::from([(place.clone(), pc)]), g.zero())?;
    let trunc = Ring::parse("SplitQuat(Z/(9))")?;
    let certificate = euclid::certify_not_star_euclidean(
        &trunc,
        &trunc.parse_elem("[[1,0],[1,0]]")?,
        &trunc.parse_elem("[[0,1],[0,1]]")?,
    )?;
    Ok(QuatWitness { a, c, place, certificate })
}

/// Text of a place: the prime, the polynomial or `inf`.
pub fn place_text(base: &AdelicBase, place: &Place) -> String {
    match place {
        Place::Prime(p) => p.to_string(),
        Place::Infinity => "inf".into(),
        Place::Poly(codes) => match base.coefficient_field() {
            Some(pr) => {
                let k = pr.child().expect("coefficient field");
                let terms: Vec<String> = codes
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &c)| c != 0)
                    .map(|(deg, &c)| {
                        let coef = k.format(&Elem::Int(c));
                        let coef = if coef.contains(['+', '-']) { format!("({coef})") } else { coef };
                        match (deg, c == 1) {
                            (0, _) => coef,
                            (_, true) if deg == 1 => "t".into(),
                            (_, true) => format!("t^{deg}"),
                            (1, false) => format!("{coef}*t"),
                            _ => format!("{coef}*t^{deg}"),
                        }
                    })
                    .collect();
                terms.join("+")
            }
            None => format!("{codes:?}"),
        },
    }
}

// ---- random instances ------------------------------------------------------------------

fn random_unit<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> Elem {
    loop {
        let u = euclid::random_bounded(ring, rng, 3);
        if ring.is_unit(&u) {
            return u;
        }
    }
}

/// First column of a random product of Bruhat elements: a pair meeting the
/// division hypotheses.
pub fn random_hypothesis_pair<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, steps: usize) -> (Elem, Elem) {
    let mut g = BlockMatrix::identity(ring);
    for _ in 0..steps {
        let x = match rng.gen_range(0..3) {
            0 => bruhat_u(ring, &euclid::random_symmetric(ring, rng, 3)).expect("symmetric"),
            1 => bruhat_w(ring),
            _ => bruhat_h(ring, &random_unit(ring, rng)).expect("unit"),
        };
        g = g.mul(ring, &x);
    }
    (g.a, g.c)
}

/// A random pair with hypothesis-satisfying components on `places` and the
/// canonical tails `a_t = 0`, `c_t = 1`.
pub fn random_adelic_pair<R: Rng + ?Sized>(
    base: &AdelicBase,
    n: usize,
    places: &[Place],
    rng: &mut R,
) -> Result<(AdelicMatrix, AdelicMatrix)> {
    let g = base.global_ring(n);
    let mut ac = BTreeMap::new();
    let mut cc = BTreeMap::new();
    for p in places {
        let ring = base.place_ring(p, n);
        let (a, c) = random_hypothesis_pair(&ring, rng, 4);
        ac.insert(p.clone(), a);
        cc.insert(p.clone(), c);
    }
    Ok((AdelicMatrix::new(base.clone(), n, ac, g.zero())?, AdelicMatrix::new(base.clone(), n, cc, g.one())?))
}
