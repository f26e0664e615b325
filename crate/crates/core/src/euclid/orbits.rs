//! Hypothesis pairs up to the right action of the unit group.
//!
//! `(a, c) -> (a g, c g)` preserves coprimality, the symmetry of `a* c` and
//! every division step (`a g = s (c g) + r g`), and acts freely on coprime
//! pairs. In the flat model `M(N, S)` a pair is a left-invertible `2N x N`
//! matrix and an orbit is its column space, so one representative per
//! column space covers every pair.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

use super::derive_symmetry;

/// Largest number of echelon candidates generated per local factor.
pub const ORBIT_CANDIDATE_LIMIT: u64 = 5_000_000;

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.clone());
        let Some(i) = (0..k).rev().find(|&i| pick[i] < m - k + i) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Calls `f` on every assignment of `slots` values from `elems`.
fn for_each_assignment(elems: &[Elem], slots: usize, mut f: impl FnMut(&[Elem])) {
    let mut idx = vec![0usize; slots];
    let mut vals: Vec<Elem> = vec![elems[0].clone(); slots];
    loop {
        f(&vals);
        let mut i = 0;
        loop {
            if i == slots {
                return;
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                vals[i] = elems[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            vals[i] = elems[0].clone();
            i += 1;
        }
    }
}

fn check_budget(k: &Ring, n: usize, free: usize) -> Result<()> {
    let q = k.size().ok_or_else(|| Error::InfiniteRing(k.to_string()))?;
    let per = q.checked_pow(free as u32).unwrap_or(u64::MAX);
    let total = per.saturating_mul(combinations(2 * n, n).len() as u64);
    if total > ORBIT_CANDIDATE_LIMIT {
        return Err(Error::CapExceeded(ORBIT_CANDIDATE_LIMIT as usize));
    }
    Ok(())
}

/// Reduced column echelon forms over a finite field: one per `n`-dimensional
/// subspace of `k^{2n}`.
fn field_reps(k: &Ring, n: usize) -> Result<Vec<Vec<Elem>>> {
    let elems = k.enumerate()?;
    let mut out = Vec::new();
    for piv in combinations(2 * n, n) {
        let piv = &piv;
        let free: Vec<(usize, usize)> = (0..2 * n)
            .filter(|r| !piv.contains(r))
            .flat_map(|r| (0..n).filter(move |&j| r > piv[j]).map(move |j| (r, j)))
            .collect();
        check_budget(k, n, free.len())?;
        for_each_assignment(&elems, free.len(), |vals| {
            let mut x = vec![k.zero(); 2 * n * n];
            for (j, &p) in piv.iter().enumerate() {
                x[p * n + j] = k.one();
            }
            for (&(r, j), v) in free.iter().zip(vals) {
                x[r * n + j] = v.clone();
            }
            out.push(x);
        });
    }
    Ok(out)
}

/// Column space of a `2n x n` matrix as a sorted list of vectors.
fn column_space(k: &Ring, elems: &[Elem], x: &[Elem], n: usize) -> Vec<Vec<Elem>> {
    let mut span = Vec::new();
    for_each_assignment(elems, n, |v| {
        let col: Vec<Elem> = (0..2 * n)
            .map(|r| (0..n).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(&x[r * n + j], &v[j]))))
            .collect();
        span.push(col);
    });
    span.sort();
    span
}

/// Over a finite local ring some `n` rows of a left-invertible matrix form an
/// invertible block; moving it to the identity and deduplicating by column
/// space leaves one matrix per orbit.
fn local_reps(k: &Ring, n: usize) -> Result<Vec<Vec<Elem>>> {
    if k.is_division_ring() {
        return field_reps(k, n);
    }
    check_budget(k, n, n * n)?;
    let elems = k.enumerate()?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for piv in combinations(2 * n, n) {
        let rest: Vec<usize> = (0..2 * n).filter(|r| !piv.contains(r)).collect();
        for_each_assignment(&elems, n * n, |vals| {
            let mut x = vec![k.zero(); 2 * n * n];
            for (j, &p) in piv.iter().enumerate() {
                x[p * n + j] = k.one();
            }
            for (i, &r) in rest.iter().enumerate() {
                x[r * n..(r + 1) * n].clone_from_slice(&vals[i * n..(i + 1) * n]);
            }
            if seen.insert(column_space(k, &elems, &x, n)) {
                out.push(x);
            }
        });
    }
    Ok(out)
}

/// One coprime pair with `a* c` symmetric from every orbit of the right
/// unit-group action, for finite rings whose flat base is local or a product
/// of two local rings.
pub fn hypothesis_orbits(ring: &Ring) -> Result<Vec<(Elem, Elem)>> {
    if !ring.is_finite() {
        return Err(Error::InfiniteRing(ring.to_string()));
    }
    let (n, s) = ring.flat_shape();
    let candidates: Vec<Vec<Elem>> = if s.is_product() {
        let k = s.child().expect("product component").clone();
        let comp = local_reps(&k, n)?;
        let mut out = Vec::with_capacity(comp.len() * comp.len());
        for x in &comp {
            for y in &comp {
                out.push(x.iter().zip(y).map(|(u, v)| s.join(u, v)).collect());
            }
        }
        out
    } else {
        if crate::local::LocalStructure::new(&s).is_err() && !s.is_division_ring() {
            return Err(Error::Unsupported(format!("orbit representatives over {s}")));
        }
        local_reps(&s, n)?
    };
    let half = n * n;
    let mut reps = Vec::new();
    for x in candidates {
        let a = ring.unflatten(&x[..half]);
        let c = ring.unflatten(&x[half..]);
        if derive_symmetry(ring, &a, &c) {
            reps.push((a, c));
        }
    }
    Ok(reps)
}
