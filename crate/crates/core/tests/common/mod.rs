//! Brute-force oracles over small finite rings, built from the ring's own
//! arithmetic and nothing else.
#![allow(dead_code)]

use slstar::{Elem, Ring};

/// Dense operation tables of a finite ring, indexed by enumeration order.
pub struct Tables {
    pub ring: Ring,
    pub elems: Vec<Elem>,
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
    pub inv: Vec<u16>,
    pub unit: Vec<bool>,
    pub symmetric: Vec<usize>,
    pub one: usize,
    pub zero: usize,
    /// Left principal ideals `A x` as bitsets.
    pub left_ideal: Vec<Vec<u64>>,
}

impl Tables {
    pub fn new(ring: &Ring) -> Tables {
        let elems = ring.enumerate().unwrap();
        let size = elems.len();
        assert!(size <= 1 << 12);
        let idx = |x: &Elem| ring.index_of(x) as usize;
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for i in 0..size {
            for j in 0..size {
                add[i * size + j] = idx(&ring.add(&elems[i], &elems[j])) as u16;
                mul[i * size + j] = idx(&ring.mul(&elems[i], &elems[j])) as u16;
            }
        }
        let one = idx(&ring.one());
        let zero = idx(&ring.zero());
        let neg: Vec<u16> = (0..size).map(|i| (0..size).find(|&j| add[i * size + j] as usize == zero).unwrap() as u16).collect();
        let mut unit = vec![false; size];
        let mut inv = vec![u16::MAX; size];
        for i in 0..size {
            if let Some(j) = (0..size).find(|&j| mul[i * size + j] as usize == one && mul[j * size + i] as usize == one) {
                unit[i] = true;
                inv[i] = j as u16;
            }
        }
        let inv_idx: Vec<usize> = elems.iter().map(|x| idx(&ring.involute(x))).collect();
        let symmetric = (0..size).filter(|&i| inv_idx[i] == i).collect();
        let words = size.div_ceil(64);
        let left_ideal = (0..size)
            .map(|x| {
                let mut bits = vec![0u64; words];
                for y in 0..size {
                    let p = mul[y * size + x] as usize;
                    bits[p / 64] |= 1 << (p % 64);
                }
                bits
            })
            .collect();
        Tables { ring: ring.clone(), elems, size, add, mul, neg, inv, unit, symmetric, one, zero, left_ideal }
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y] as usize
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg[y] as usize)
    }

    pub fn involute(&self, x: usize) -> usize {
        self.ring.index_of(&self.ring.involute(&self.elems[x])) as usize
    }

    fn has(bits: &[u64], p: usize) -> bool {
        bits[p / 64] >> (p % 64) & 1 == 1
    }

    /// `1 in A a + A c`.
    pub fn coprime(&self, a: usize, c: usize) -> bool {
        let la = &self.left_ideal[a];
        let lc = &self.left_ideal[c];
        (0..self.size).any(|u| Self::has(la, u) && Self::has(lc, self.sub(self.one, u)))
    }

    /// Symmetric `s` with `a - s c` a unit.
    pub fn steps(&self, a: usize, c: usize) -> usize {
        self.symmetric.iter().filter(|&&s| self.unit[self.sub(a, self.mul(s, c))]).count()
    }

    /// Pairs `(a, c)` with `A a + A c = A` and `a* c = c* a`.
    pub fn hypothesis_pairs(&self) -> Vec<(usize, usize)> {
        let star: Vec<usize> = (0..self.size).map(|x| self.involute(x)).collect();
        let mut out = Vec::new();
        for a in 0..self.size {
            for c in 0..self.size {
                if self.mul(star[a], c) == self.mul(star[c], a) && self.coprime(a, c) {
                    out.push((a, c));
                }
            }
        }
        out
    }
}
