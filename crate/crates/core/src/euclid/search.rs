//! Symmetric elements: exact enumeration for finite rings, bounded random
//! sampling for infinite ones.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{Elem, Kind, Ring};

/// Largest symmetric set that is materialized.
pub const MATERIALIZE_LIMIT: u64 = 1 << 22;

type Cache = Mutex<HashMap<String, Arc<Vec<Elem>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_antisymmetric(ring: &Ring, x: &Elem) -> bool {
    ring.involute(x) == ring.neg(x)
}

/// `|A^sym|` for a finite ring, computed without listing the set.
pub fn symmetric_count(ring: &Ring) -> Option<u64> {
    ring.size()?;
    match ring.kind() {
        Kind::Matrix { n } => {
            let base = ring.child().unwrap();
            let diag = symmetric_count(base)?.checked_pow(*n as u32)?;
            let off = base.size()?.checked_pow((n * (n - 1) / 2) as u32)?;
            diag.checked_mul(off)
        }
        Kind::SplitQuat => {
            let base = ring.child().unwrap();
            let anti = base.enumerate().ok()?.iter().filter(|x| is_antisymmetric(base, x)).count() as u64;
            base.size()?.checked_mul(anti * anti)
        }
        _ => Some(ring.enumerate().ok()?.iter().filter(|x| ring.is_symmetric(x)).count() as u64),
    }
}

/// Number of nonzero entries of the flat matrix model.
pub fn support(ring: &Ring, x: &Elem) -> usize {
    let (_, s) = ring.flat_shape();
    ring.flatten(x).iter().filter(|e| !s.is_zero(e)).count()
}

/// All symmetric elements of a finite ring, ordered by support size and then
/// by generation order. Cached per descriptor.
pub fn symmetric_elements(ring: &Ring) -> Result<Arc<Vec<Elem>>> {
    let key = ring.to_string();
    if let Some(v) = cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let count = symmetric_count(ring).ok_or_else(|| Error::InfiniteRing(key.clone()))?;
    if count > MATERIALIZE_LIMIT {
        return Err(Error::Unsupported(format!("{count} symmetric elements in {ring}")));
    }
    let mut all = generate(ring)?;
    debug_assert_eq!(all.len() as u64, count);
    let mut keyed: Vec<(usize, Elem)> = all.drain(..).map(|x| (support(ring, &x), x)).collect();
    keyed.sort_by_key(|(k, _)| *k);
    let sorted = Arc::new(keyed.into_iter().map(|(_, x)| x).collect::<Vec<_>>());
    cache().lock().unwrap().insert(key, sorted.clone());
    Ok(sorted)
}

fn generate(ring: &Ring) -> Result<Vec<Elem>> {
    match ring.kind() {
        Kind::Matrix { n } => {
            let n = *n;
            let base = ring.child().unwrap();
            let diag = symmetric_elements(base)?;
            let all = base.enumerate()?;
            let mut slots: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    slots.push((i, j));
                }
            }
            let mut out = Vec::new();
            let mut idx = vec![0usize; slots.len()];
            loop {
                let mut m = vec![base.zero(); n * n];
                for (slot, &(i, j)) in slots.iter().enumerate() {
                    if i == j {
                        m[i * n + i] = diag[idx[slot]].clone();
                    } else {
                        let e = &all[idx[slot]];
                        m[j * n + i] = base.involute(e);
                        m[i * n + j] = e.clone();
                    }
                }
                out.push(Elem::from_vec(m));
                let mut pos = slots.len();
                loop {
                    if pos == 0 {
                        return Ok(out);
                    }
                    pos -= 1;
                    let lim = if slots[pos].0 == slots[pos].1 { diag.len() } else { all.len() };
                    idx[pos] += 1;
                    if idx[pos] < lim {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        Kind::SplitQuat => {
            let base = ring.child().unwrap();
            let all = base.enumerate()?;
            let anti: Vec<&Elem> = all.iter().filter(|x| is_antisymmetric(base, x)).collect();
            let mut out = Vec::with_capacity(all.len() * anti.len() * anti.len());
            for a in &all {
                let d = base.involute(a);
                for b in &anti {
                    for c in &anti {
                        out.push(Elem::from_vec(vec![a.clone(), (*b).clone(), (*c).clone(), d.clone()]));
                    }
                }
            }
            Ok(out)
        }
        _ => ring.symmetric_elements(),
    }
}

fn small_int<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}

fn random_poly_codes<R: Rng + ?Sized>(rng: &mut R, q: u64, bound: i64) -> Vec<u64> {
    let deg = (64 - (bound.max(1) as u64).leading_zeros()).min(8) as usize;
    (0..=deg).map(|_| rng.gen_range(0..q)).collect()
}

/// A random element whose integer coordinates lie in `[-bound, bound]`;
/// uniform on finite rings.
pub fn random_bounded<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, bound: i64) -> Elem {
    if ring.is_finite() && !ring.is_matrix() {
        return ring.random(rng);
    }
    match ring.kind() {
        Kind::Rationals => Elem::rat(small_int(rng, bound)),
        Kind::QuadRational { .. } => Elem::from_vec(vec![Elem::rat(small_int(rng, bound)), Elem::rat(small_int(rng, bound))]),
        Kind::Quaternions => Elem::from_vec((0..4).map(|_| Elem::rat(small_int(rng, bound))).collect()),
        Kind::ProdInf => {
            let c = ring.child().unwrap();
            ring.join(&random_bounded(c, rng, bound), &random_bounded(c, rng, bound))
        }
        Kind::Poly(s) => ring.poly_from_codes(random_poly_codes(rng, s.size, bound)),
        Kind::RatFunc(s) => ring.ratfunc_from(crate::poly::trim(random_poly_codes(rng, s.size, bound)), vec![s.one()]),
        Kind::Matrix { .. } | Kind::SplitQuat => {
            let n = ring.matrix_size().unwrap();
            let c = ring.child().unwrap();
            Elem::from_vec((0..n * n).map(|_| random_bounded(c, rng, bound)).collect())
        }
        Kind::Scalar(_) => ring.random(rng),
    }
}

/// A random symmetric element with coordinates bounded as in
/// [`random_bounded`]; uniform on finite scalar rings.
pub fn random_symmetric<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, bound: i64) -> Elem {
    match ring.kind() {
        Kind::Matrix { n } => {
            let n = *n;
            let base = ring.child().unwrap();
            let mut m = vec![base.zero(); n * n];
            for i in 0..n {
                m[i * n + i] = random_symmetric(base, rng, bound);
                for j in i + 1..n {
                    let e = random_bounded(base, rng, bound);
                    m[j * n + i] = base.involute(&e);
                    m[i * n + j] = e;
                }
            }
            Elem::from_vec(m)
        }
        Kind::SplitQuat => {
            let base = ring.child().unwrap();
            let a = random_bounded(base, rng, bound);
            let d = base.involute(&a);
            let mut anti = || {
                if base.characteristic() == 2 {
                    random_symmetric(base, rng, bound)
                } else {
                    let y = random_bounded(base, rng, bound);
                    base.sub(&y, &base.involute(&y))
                }
            };
            let b = anti();
            let c = anti();
            Elem::from_vec(vec![a, b, c, d])
        }
        Kind::Scalar(_) => {
            let syms = symmetric_elements(ring).expect("finite scalar ring");
            syms[rng.gen_range(0..syms.len())].clone()
        }
        Kind::QuadRational { .. } | Kind::Quaternions => {
            ring.from_bigint(&BigInt::from(rng.gen_range(-bound..=bound)))
        }
        Kind::ProdInf => {
            let x = random_bounded(ring.child().unwrap(), rng, bound);
            ring.join(&x, &ring.twist_map(&x))
        }
        Kind::Rationals | Kind::Poly(_) | Kind::RatFunc(_) => random_bounded(ring, rng, bound),
    }
}
