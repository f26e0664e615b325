use std::time::Instant;

use slstar::euclid::{check_coprime, derive_symmetry, divide, hypothesis_orbits};
use slstar::sl_star::{enumerate_sl_star, DEFAULT_CAP};
use slstar::Ring;

fn r(desc: &str) -> Ring {
    Ring::parse(desc).unwrap()
}

/// Lagrangian planes of a 4-dimensional symplectic space over GF(q).
fn lagrangians(q: u64) -> u64 {
    (q + 1) * (q * q + 1)
}

/// 2-dimensional subspaces of GF(q)^4.
fn planes(q: u64) -> u64 {
    (q.pow(4) - 1) * (q.pow(3) - 1) / ((q * q - 1) * (q - 1))
}

#[test]
fn orbit_counts_match_closed_forms() {
    // free summands over Z/(p^k) lift from the residue field with p^{dim (k-1)} choices
    let cases = [
        ("Mat(2,GF(2))", lagrangians(2)),
        ("Mat(2,GF(3))", lagrangians(3)),
        ("Mat(2,GF(4))", lagrangians(4)),
        ("Mat(2,Z/(4))", 8 * lagrangians(2)),
        ("Mat(2,Z/(9))", 27 * lagrangians(3)),
        ("Mat(2,Prod(GF(3),GF(3)))", planes(3)),
        ("Mat(2,Prod(Z/(4),Z/(4)))", 16 * planes(2)),
    ];
    for (desc, expect) in cases {
        let t = Instant::now();
        let reps = hypothesis_orbits(&r(desc)).unwrap();
        eprintln!("{desc}: {} reps in {:?}", reps.len(), t.elapsed());
        assert_eq!(reps.len() as u64, expect, "{desc}");
    }
}

/// Every hypothesis pair, by brute force.
fn all_pairs(ring: &Ring) -> u64 {
    let elems = ring.enumerate().unwrap();
    let mut n = 0;
    for a in &elems {
        for c in &elems {
            if derive_symmetry(ring, a, c) && check_coprime(ring, a, c).is_ok() {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn orbits_times_unit_group_cover_all_pairs() {
    for desc in ["Mat(2,GF(2))", "SplitQuat(GF(2))", "Z/(9)", "Prod(Z/(4),Z/(4))", "Quad(GF(3))", "SplitQuat(GF(3))"] {
        let ring = r(desc);
        let units = ring.units().unwrap().len() as u64;
        let reps = hypothesis_orbits(&ring).unwrap();
        assert_eq!(reps.len() as u64 * units, all_pairs(&ring), "{desc}");
    }
}

#[test]
fn orbits_match_group_quotients() {
    // first columns of SL_*(2, A) are the hypothesis pairs, each hit |A^sym| times
    for desc in ["SplitQuat(GF(2))", "Mat(2,GF(2))", "GF(5)", "Quad(GF(2))"] {
        let ring = r(desc);
        let group = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap().len() as u64;
        let sym = ring.symmetric_elements().unwrap().len() as u64;
        let units = ring.units().unwrap().len() as u64;
        let reps = hypothesis_orbits(&ring).unwrap().len() as u64;
        assert_eq!(reps * units * sym, group, "{desc}");
    }
}

#[test]
fn quaternion_orbits_divide() {
    for desc in ["SplitQuat(GF(4))", "Mat(2,SplitQuat(GF(2)))"] {
        let ring = r(desc);
        let t = Instant::now();
        let reps = hypothesis_orbits(&ring).unwrap();
        eprintln!("{desc}: {} reps in {:?}", reps.len(), t.elapsed());
        for (a, c) in &reps {
            divide(&ring, a, c).unwrap();
        }
        eprintln!("{desc}: divided in {:?}", t.elapsed());
    }
}
