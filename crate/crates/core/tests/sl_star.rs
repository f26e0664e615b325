use std::collections::HashSet;

use slstar::error::Error;
use slstar::sl_star::*;
use slstar::Ring;

fn r(desc: &str) -> Ring {
    Ring::parse(desc).unwrap()
}

/// |GL(m, F_q)| = prod (q^m - q^i).
fn gl_order(m: u32, q: u64) -> u64 {
    (0..m).map(|i| q.pow(m) - q.pow(i)).product()
}

/// |Sp(2m, F_q)| = q^{m^2} prod (q^{2i} - 1).
fn sp_order(m: u32, q: u64) -> u64 {
    q.pow(m * m) * (1..=m).map(|i| q.pow(2 * i) - 1).product::<u64>()
}

#[test]
fn transpose_matrix_groups_are_symplectic() {
    for (n, q) in [(2u32, 2u64), (2, 3)] {
        let ring = r(&format!("Mat({n},GF({q}))"));
        let all = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap();
        assert_eq!(all.len() as u64, sp_order(n, q));
    }
}

#[test]
fn closure_matches_enumeration_on_euclidean_bases() {
    for desc in ["GF(3)", "Quad(GF(2))", "Mat(2,GF(2))", "SplitQuat(GF(2))", "Prod(GF(3),GF(3))", "Z/(4)"] {
        let ring = r(desc);
        let all: HashSet<_> = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap().into_iter().collect();
        let closure = closure_bfs(&ring, DEFAULT_CAP).unwrap();
        let inside: HashSet<_> = closure.elements.iter().cloned().collect();
        assert_eq!(all, inside, "{desc}");
        for g in all.iter().take(300) {
            assert_eq!(factor(&ring, g).unwrap().eval(&ring).unwrap(), *g, "{desc}");
        }
    }
}

#[test]
fn odd_split_quaternions_are_not_bruhat_generated() {
    let ring = r("SplitQuat(GF(3))");
    let all = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap();
    let closure = closure_bfs(&ring, DEFAULT_CAP).unwrap();
    assert!(closure.size() < all.len());
    let inside: HashSet<_> = closure.elements.iter().collect();
    let mut failures = 0;
    for g in &all {
        match factor(&ring, g) {
            Ok(w) => {
                assert!(inside.contains(g));
                assert_eq!(w.eval(&ring).unwrap(), *g);
            }
            Err(Error::NotStarEuclidean(_)) => {
                failures += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(failures >= all.len() - closure.size());
}

#[test]
fn gl2loc_is_a_bijection_for_two_by_two_matrices_over_f2() {
    let ring = r("Mat(2,Prod(GF(2),GF(2)))");
    let comp = gl2loc_component(&ring).unwrap();
    assert_eq!(comp.to_string(), "Mat(2,GF(2))");
    let elems = comp.enumerate().unwrap();
    let mut image = HashSet::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let g1 = BlockMatrix::new(a.clone(), b.clone(), c.clone(), d.clone());
                    match gl2loc_iso(&ring, &g1) {
                        Ok(g) => assert!(image.insert(g)),
                        Err(Error::NotUnit) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
    assert_eq!(image.len() as u64, gl_order(4, 2));
    let group: HashSet<_> = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap().into_iter().collect();
    assert_eq!(image, group);
}

#[test]
fn twisted_product_iso_is_a_homomorphism() {
    let ring = r("Prod(GF(4),GF(4),frob)");
    let comp = gl2loc_component(&ring).unwrap();
    let elems = comp.enumerate().unwrap();
    let mut gl = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for b in elems.iter().skip(i % 3) {
            let g = BlockMatrix::new(a.clone(), b.clone(), elems[(i + 1) % 4].clone(), elems[(i + 2) % 4].clone());
            if gl2loc_iso(&ring, &g).is_ok() {
                gl.push(g);
            }
        }
    }
    assert!(gl.len() > 5);
    for x in &gl {
        for y in &gl {
            let lhs = gl2loc_iso(&ring, &x.mul(&comp, y)).unwrap();
            let rhs = gl2loc_iso(&ring, x).unwrap().mul(&ring, &gl2loc_iso(&ring, y).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
    let all = enumerate_sl_star(&ring, DEFAULT_CAP).unwrap();
    assert_eq!(all.len() as u64, gl_order(2, 4));
}
