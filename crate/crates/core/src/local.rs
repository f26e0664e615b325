//! Jacobson radical, reduction and section maps for *-local rings and matrix
//! rings over them.
//!
//! Built-in kinds are handled structurally:
//!
//! | ring                  | class      | `p`             | residue        |
//! |-----------------------|------------|-----------------|----------------|
//! | fields, `Quat`        | one-local  | `0`             | itself         |
//! | `Z/(p^k)`             | one-local  | `(p)`           | `GF(p)`        |
//! | `Trunc(GF(q),k)`      | one-local  | `(t)`           | `GF(q)`        |
//! | `Prod(R,R)`, R local  | two-local  | `m x R`         | `Prod(k,k)`    |
//! | `Mat(n,R)`, n > 1     | not *-local (not l-maximal); radical `M(n, J_R)` |
//!
//! Tiny finite rings can also be classified by brute force over left ideals.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::scalar::Structure;
use crate::ring::{Elem, Kind, Ring, RingDescriptor};

/// Largest ring handled by the brute-force routines.
pub const BRUTE_FORCE_LIMIT: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalKind {
    OneLocal,
    TwoLocal,
    NotStarLocal,
}

impl fmt::Display for LocalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalKind::OneLocal => "one-local",
            LocalKind::TwoLocal => "two-local",
            LocalKind::NotStarLocal => "not-star-local",
        })
    }
}

/// Result of [`classify_star_local`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: LocalKind,
    /// Generator description of `p` (and `p*`); empty for not-star-local rings.
    pub p: String,
    pub p_star: String,
    /// Description of the Jacobson radical.
    pub radical: String,
    /// Residue ring `A/J`, when the module can reduce this ring.
    pub residue: Option<RingDescriptor>,
}

pub fn classify_star_local(ring: &Ring) -> Result<Classification> {
    let residue = LocalStructure::new(ring).ok().map(|l| l.residue().descriptor().clone());
    let mk = |kind, p: &str, ps: &str, rad: &str| Classification {
        kind,
        p: p.into(),
        p_star: ps.into(),
        radical: rad.into(),
        residue: residue.clone(),
    };
    match ring.kind() {
        Kind::Scalar(s) => Ok(match &s.structure {
            Structure::Zmod { p, k, .. } => {
                if *k == 1 {
                    mk(LocalKind::OneLocal, "0", "0", "0")
                } else {
                    let g = format!("({p})");
                    mk(LocalKind::OneLocal, &g, &g, &g)
                }
            }
            Structure::Gf { .. } | Structure::Quad { .. } => mk(LocalKind::OneLocal, "0", "0", "0"),
            Structure::Trunc { k, .. } => {
                if *k == 1 {
                    mk(LocalKind::OneLocal, "0", "0", "0")
                } else {
                    mk(LocalKind::OneLocal, "(t)", "(t)", "(t)")
                }
            }
            Structure::Prod { .. } => {
                let comp = classify_star_local(ring.child().unwrap())?;
                if comp.kind != LocalKind::OneLocal {
                    return Ok(mk(LocalKind::NotStarLocal, "", "", ""));
                }
                let c = ring.child().unwrap();
                let m = &comp.p;
                let p = format!("{m}x{c}");
                let ps = format!("{c}x{m}");
                let rad = format!("{m}x{m}");
                mk(LocalKind::TwoLocal, &p, &ps, &rad)
            }
        }),
        Kind::Rationals | Kind::QuadRational { .. } | Kind::Quaternions | Kind::RatFunc(_) => {
            Ok(mk(LocalKind::OneLocal, "0", "0", "0"))
        }
        Kind::ProdInf => {
            let comp = classify_star_local(ring.child().unwrap())?;
            if comp.kind != LocalKind::OneLocal || comp.p != "0" {
                return Err(Error::Unsupported(format!("classification of {ring}")));
            }
            let c = ring.child().unwrap();
            Ok(mk(LocalKind::TwoLocal, &format!("0x{c}"), &format!("{c}x0"), "0"))
        }
        Kind::Poly(_) => Err(Error::Unsupported(format!("{ring} is infinite and not local"))),
        Kind::Matrix { n } if *n == 1 => {
            let mut c = classify_star_local(ring.child().unwrap())?;
            c.residue = residue;
            Ok(c)
        }
        Kind::Matrix { .. } | Kind::SplitQuat => {
            // left maximal ideals of M(n, R), n > 1, are not two-sided
            let rad = match LocalStructure::new(ring) {
                Ok(_) => {
                    let (n, s) = ring.flat_shape();
                    let inner = classify_star_local(&s)?;
                    format!("M({n},{})", inner.radical)
                }
                Err(_) => String::new(),
            };
            Ok(mk(LocalKind::NotStarLocal, "", "", &rad))
        }
    }
}

#[derive(Clone)]
enum Reduction {
    /// `J = 0`.
    Identity,
    /// `Z/(p^k) -> GF(p)`.
    Residue { p: u64 },
    /// `GF(q)[t]/(t^k) -> GF(q)`.
    Constant { q: u64 },
    Product(Box<LocalStructure>),
    Entrywise(Box<LocalStructure>),
}

/// Projection `pi: A -> A/J` and the section `sigma` for a *-local ring or a
/// matrix ring over one.
#[derive(Clone)]
pub struct LocalStructure {
    ring: Ring,
    residue: Ring,
    reduction: Reduction,
}

impl LocalStructure {
    pub fn new(ring: &Ring) -> Result<LocalStructure> {
        let unsupported = || Error::Unsupported(format!("no reduction modulo the radical for {ring}"));
        let (residue, reduction) = match ring.kind() {
            Kind::Scalar(s) => match &s.structure {
                Structure::Zmod { p, k, .. } if *k > 1 => (
                    Ring::new(&RingDescriptor::PrimeField { p: *p })?,
                    Reduction::Residue { p: *p },
                ),
                Structure::Trunc { coeff, k } if *k > 1 => {
                    (ring.child().unwrap().clone(), Reduction::Constant { q: coeff.size })
                }
                Structure::Prod { .. } => {
                    let comp = LocalStructure::new(ring.child().unwrap())?;
                    let desc = RingDescriptor::Product {
                        base: Box::new(comp.residue.descriptor().clone()),
                        twist: ring.twist().unwrap(),
                    };
                    (Ring::new(&desc)?, Reduction::Product(Box::new(comp)))
                }
                _ => (ring.clone(), Reduction::Identity),
            },
            Kind::Rationals | Kind::QuadRational { .. } | Kind::Quaternions | Kind::RatFunc(_) | Kind::ProdInf => {
                (ring.clone(), Reduction::Identity)
            }
            Kind::Poly(_) => return Err(unsupported()),
            Kind::Matrix { n } => {
                let inner = LocalStructure::new(ring.child().unwrap())?;
                let desc = RingDescriptor::Matrix { n: *n, base: Box::new(inner.residue.descriptor().clone()) };
                (Ring::new(&desc)?, Reduction::Entrywise(Box::new(inner)))
            }
            Kind::SplitQuat => {
                let inner = LocalStructure::new(ring.child().unwrap())?;
                let desc = RingDescriptor::SplitQuaternion { base: Box::new(inner.residue.descriptor().clone()) };
                (Ring::new(&desc)?, Reduction::Entrywise(Box::new(inner)))
            }
        };
        Ok(LocalStructure { ring: ring.clone(), residue, reduction })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn residue(&self) -> &Ring {
        &self.residue
    }

    /// Whether reduction is the identity (`J = 0`).
    pub fn is_trivial(&self) -> bool {
        match &self.reduction {
            Reduction::Identity => true,
            Reduction::Product(c) | Reduction::Entrywise(c) => c.is_trivial(),
            _ => false,
        }
    }

    pub fn project(&self, x: &Elem) -> Elem {
        match &self.reduction {
            Reduction::Identity => x.clone(),
            Reduction::Residue { p } => Elem::Int(x.as_int() % p),
            Reduction::Constant { q } => Elem::Int(x.as_int() % q),
            Reduction::Product(c) => {
                let (a, b) = self.ring.split(x);
                self.residue.join(&c.project(&a), &c.project(&b))
            }
            Reduction::Entrywise(c) => Elem::from_vec(x.as_slice().iter().map(|e| c.project(e)).collect()),
        }
    }

    pub fn section(&self, x: &Elem) -> Elem {
        match &self.reduction {
            Reduction::Identity | Reduction::Residue { .. } | Reduction::Constant { .. } => x.clone(),
            Reduction::Product(c) => {
                let (a, b) = self.residue.split(x);
                self.ring.join(&c.section(&a), &c.section(&b))
            }
            Reduction::Entrywise(c) => Elem::from_vec(x.as_slice().iter().map(|e| c.section(e)).collect()),
        }
    }

    pub fn in_radical(&self, x: &Elem) -> bool {
        self.residue.is_zero(&self.project(x))
    }

    /// `a = a_sigma + a_J` with `a_sigma = sigma(pi(a))`.
    pub fn decompose(&self, a: &Elem) -> (Elem, Elem) {
        let s = self.section(&self.project(a));
        let j = self.ring.sub(a, &s);
        (s, j)
    }

    pub fn is_unit_via_reduction(&self, a: &Elem) -> bool {
        self.residue.is_unit(&self.project(a))
    }

    /// Membership in `p` and `p*` for two-local products; both equal the
    /// radical for one-local rings.
    pub fn in_p(&self, x: &Elem) -> bool {
        match &self.reduction {
            Reduction::Product(c) => c.in_radical(&self.ring.split(x).0),
            _ if self.ring.is_product() => self.ring.child().unwrap().is_zero(&self.ring.split(x).0),
            _ => self.in_radical(x),
        }
    }

    pub fn in_p_star(&self, x: &Elem) -> bool {
        match &self.reduction {
            Reduction::Product(c) => c.in_radical(&self.ring.split(x).1),
            _ if self.ring.is_product() => self.ring.child().unwrap().is_zero(&self.ring.split(x).1),
            _ => self.in_radical(x),
        }
    }
}

// ---- brute force ------------------------------------------------------------------

/// Dense index tables of a small finite ring.
struct Tables {
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    invol: Vec<u16>,
    one: usize,
}

impl Tables {
    fn new(ring: &Ring) -> Result<Tables> {
        let size = ring.size().filter(|s| *s <= BRUTE_FORCE_LIMIT).ok_or_else(|| {
            Error::Unsupported(format!("brute force needs a finite ring of size at most {BRUTE_FORCE_LIMIT}"))
        })? as usize;
        let els = ring.enumerate()?;
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for (i, x) in els.iter().enumerate() {
            for (j, y) in els.iter().enumerate() {
                add[i * size + j] = ring.index_of(&ring.add(x, y)) as u16;
                mul[i * size + j] = ring.index_of(&ring.mul(x, y)) as u16;
            }
        }
        let invol = els.iter().map(|x| ring.index_of(&ring.involute(x)) as u16).collect();
        Ok(Tables { size, add, mul, invol, one: ring.index_of(&ring.one()) as usize })
    }
}

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// `x` lies in the radical iff `1 + a x b` is a unit for all `a, b`.
pub fn in_radical_brute_force(ring: &Ring, x: &Elem) -> Result<bool> {
    let t = Tables::new(ring)?;
    let n = t.size;
    let units: Vec<bool> = (0..n).map(|u| (0..n).any(|v| t.mul[u * n + v] as usize == t.one)).collect();
    let xi = ring.index_of(x) as usize;
    for a in 0..n {
        let ax = t.mul[a * n + xi] as usize;
        for b in 0..n {
            let axb = t.mul[ax * n + b] as usize;
            if !units[t.add[t.one * n + axb] as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Summary of the brute-force left-ideal computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceReport {
    pub left_ideals: usize,
    pub maximal_left_ideals: usize,
    pub l_maximal: bool,
    pub stable_maximal_ideals: usize,
    pub kind: LocalKind,
    /// Radical as a membership table in enumeration order.
    pub radical: Vec<bool>,
}

/// Classifies a finite ring of size at most [`BRUTE_FORCE_LIMIT`] by enumerating
/// its left ideals.
pub fn classify_brute_force(ring: &Ring) -> Result<BruteForceReport> {
    let t = Tables::new(ring)?;
    let n = t.size;
    let words = n.div_ceil(64);
    let principal = |x: usize| {
        let mut b = vec![0u64; words];
        for r in 0..n {
            set(&mut b, t.mul[r * n + x] as usize);
        }
        b
    };
    let sum = |a: &Bits, b: &Bits| {
        let mut out = vec![0u64; words];
        for i in (0..n).filter(|i| bit(a, *i)) {
            for j in (0..n).filter(|j| bit(b, *j)) {
                set(&mut out, t.add[i * n + j] as usize);
            }
        }
        out
    };
    let principals: Vec<Bits> = (0..n).map(principal).collect();
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut queue = VecDeque::new();
    let zero = principal(ring.index_of(&ring.zero()) as usize);
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(id) = queue.pop_front() {
        for (y, py) in principals.iter().enumerate() {
            if bit(&id, y) {
                continue;
            }
            let next = sum(&id, py);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let ideals: Vec<Bits> = seen.into_iter().collect();
    let proper: Vec<&Bits> = ideals.iter().filter(|i| !bit(i, t.one)).collect();
    let maximal: Vec<&Bits> =
        proper.iter().copied().filter(|i| !proper.iter().any(|j| *j != *i && subset(i, j))).collect();
    let two_sided = |id: &Bits| (0..n).filter(|i| bit(id, *i)).all(|i| (0..n).all(|r| bit(id, t.mul[i * n + r] as usize)));
    let stable = |id: &Bits| (0..n).filter(|i| bit(id, *i)).all(|i| bit(id, t.invol[i] as usize));
    let l_maximal = maximal.iter().all(|m| two_sided(m));
    let stable_ideals: Vec<&Bits> = proper.iter().copied().filter(|i| two_sided(i) && stable(i)).collect();
    let stable_maximal = stable_ideals
        .iter()
        .filter(|i| !stable_ideals.iter().any(|j| *j != **i && subset(i, j)))
        .count();
    let mut radical = vec![u64::MAX; words];
    for m in &maximal {
        for (r, w) in radical.iter_mut().zip(m.iter()) {
            *r &= w;
        }
    }
    let kind = if l_maximal && stable_maximal == 1 {
        match maximal.len() {
            1 => LocalKind::OneLocal,
            2 => LocalKind::TwoLocal,
            _ => LocalKind::NotStarLocal,
        }
    } else {
        LocalKind::NotStarLocal
    };
    Ok(BruteForceReport {
        left_ideals: ideals.len(),
        maximal_left_ideals: maximal.len(),
        l_maximal,
        stable_maximal_ideals: stable_maximal,
        kind,
        radical: (0..n).map(|i| bit(&radical, i)).collect(),
    })
}
