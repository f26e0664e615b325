use super::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sl_star::{bruhat_u, bruhat_w, is_sl_star};

fn r(desc: &str) -> Ring {
    Ring::parse(desc).unwrap()
}

fn e(ring: &Ring, text: &str) -> Elem {
    ring.parse_elem(text).unwrap()
}

fn ms(ring: &Ring, texts: &[&str]) -> Vec<Elem> {
    texts.iter().map(|t| e(ring, t)).collect()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn small_quat(rng: &mut ChaCha8Rng) -> Elem {
    Elem::from_vec((0..4).map(|_| Elem::rat(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))).collect())
}

fn nonzero_quat(rng: &mut ChaCha8Rng) -> Elem {
    loop {
        let q = small_quat(rng);
        if !nrd(&q).is_zero() {
            return q;
        }
    }
}

#[test]
fn two_by_two_examples() {
    let f5 = r("GF(5)");
    let c = dieudonne_det_2x2(&f5, &ms(&f5, &["2", "1", "0", "3"])).unwrap();
    assert!(c.is_identity(&f5));
    let h = r("Quat");
    let id = ms(&h, &["1", "0", "0", "1"]);
    assert!(dieudonne_det_2x2(&h, &id).unwrap().is_identity(&h));
    // [[i,1],[j,k]]: row 2 = k * row 1, so the matrix is singular
    let m = ms(&h, &["i", "1", "j", "k"]);
    let k = e(&h, "k");
    assert_eq!(h.mul(&k, &m[0]), m[2]);
    assert_eq!(h.mul(&k, &m[1]), m[3]);
    assert!(dieudonne_det_2x2(&h, &m).unwrap().zero);
    assert!(dieudonne_det_n(&h, &m, 2).unwrap().zero);
    let m = ms(&h, &["i", "1", "j", "i"]);
    // j i j^{-1} i - j = (-k)(-j) i - j = (k j) i - j = -i i - j = 1 - j
    let v = dieudonne_det_2x2_value(&h, &m).unwrap();
    let expect = e(&h, "1-j");
    assert_eq!(v, expect);
    assert_eq!(dieudonne_det_2x2(&h, &m).unwrap().value, Elem::rat(nrd(&expect)));
}

#[test]
fn membership_examples() {
    let q = r("Q");
    assert!(sl2_membership_dieudonne(&q, &ms(&q, &["1", "5", "0", "1"]), 2).unwrap());
    assert!(!sl2_membership_dieudonne(&q, &ms(&q, &["2", "0", "0", "1"]), 2).unwrap());
    let h = r("Quat");
    let m = ms(&h, &["i", "0", "0", "i"]);
    assert_eq!(dieudonne_det_2x2_value(&h, &m).unwrap(), e(&h, "-1"));
    assert!(sl2_membership_dieudonne(&h, &m, 2).unwrap());
    assert!(!sl2_membership_dieudonne(&h, &ms(&h, &["1+i", "0", "0", "1"]), 2).unwrap());
    assert!(dieudonne_det_n(&r("SplitQuat(GF(3))"), &ms(&r("GF(3)"), &["1"]), 1).is_err());
}

#[test]
fn field_determinants_match_commutative_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for desc in ["GF(7)", "GF(4)", "Q"] {
        let f = r(desc);
        for n in [2usize, 3] {
            for _ in 0..200 {
                let m: Vec<Elem> = (0..n * n).map(|_| crate::euclid::random_bounded(&f, &mut rng, 3)).collect();
                let oracle = linalg::det(&f, &m, n);
                let c = dieudonne_det_n(&f, &m, n).unwrap();
                assert_eq!(c.zero, f.is_zero(&oracle));
                if !c.zero {
                    assert_eq!(c.value, oracle);
                }
                if n == 2 {
                    assert_eq!(dieudonne_det_2x2_value(&f, &m).unwrap(), oracle);
                }
            }
        }
    }
}

#[test]
fn quaternion_symmetric_elements_are_central() {
    let h = r("Quat");
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                for w in -1..=1 {
                    let q = Elem::from_vec([x, y, z, w].iter().map(|&c| Elem::rat(rat(c, 1))).collect());
                    assert_eq!(h.is_symmetric(&q), is_rational(&q));
                }
            }
        }
    }
}

#[test]
fn gl_criterion_examples() {
    let ring = r("Mat(2,Z/(4))");
    let id = ring.one();
    let c = gl_criterion(&ring, &id).unwrap();
    assert!(c.invertible && c.congruence && c.residue_dets);
    let c = gl_criterion(&ring, &e(&ring, "[[2,0],[0,1]]")).unwrap();
    assert!(!c.invertible && !c.congruence && !c.residue_dets);
    let c = gl_criterion(&ring, &e(&ring, "[[1,2],[2,1]]")).unwrap();
    assert!(c.invertible && c.agree());
    let two_fields = r("Mat(2,GF(2)[t])");
    assert!(gl_criterion(&two_fields, &two_fields.one()).is_err());
}

#[test]
fn gl_criterion_agrees_exhaustively() {
    for desc in ["Mat(2,Prod(GF(2),GF(2)))", "Mat(2,Z/(4))", "Mat(2,Trunc(GF(2),2))", "Mat(2,GF(3))", "Prod(Z/(4),Z/(4))"] {
        let ring = r(desc);
        let mut counts = [0usize; 2];
        for a in ring.enumerate().unwrap() {
            let c = gl_criterion(&ring, &a).unwrap();
            assert!(c.agree(), "{desc}: {}", ring.format(&a));
            counts[c.invertible as usize] += 1;
        }
        assert!(counts[0] > 0 && counts[1] > 0);
    }
}

#[test]
fn decompose_examples() {
    let h = r("Quat");
    let id = BlockMatrix::identity(&h);
    let d = decompose_dh_sl2f(&h, &id).unwrap();
    assert!(h.is_one(&d.q));
    assert_eq!(d.m_block(&h), id);
    let q = e(&h, "1+2*i-j+1/2*k");
    let hq = bruhat_h(&h, &q).unwrap();
    let d = decompose_dh_sl2f(&h, &hq).unwrap();
    assert_eq!(d.q, q);
    assert_eq!(d.m_block(&h), id);
    let bad = BlockMatrix::new(e(&h, "i"), e(&h, "j"), h.zero(), e(&h, "1"));
    assert!(matches!(decompose_dh_sl2f(&h, &bad), Err(Error::DecompositionFailed(_))));
    assert!(matches!(decompose_dh_sl2f(&r("Q"), &BlockMatrix::identity(&r("Q"))), Err(Error::Unsupported(_))));
}

#[test]
fn decompose_roundtrip_constructed() {
    let h = r("Quat");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let q = nonzero_quat(&mut rng);
        // m = u_s w u_t or a diagonal, rational
        let s = h.embed_child(&Elem::rat(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        let t = h.embed_child(&Elem::rat(rat(rng.gen_range(-5..=5), 1)));
        let m = if rng.gen_bool(0.5) {
            bruhat_u(&h, &s).unwrap().mul(&h, &bruhat_w(&h)).mul(&h, &bruhat_u(&h, &t).unwrap())
        } else {
            let x = h.embed_child(&Elem::rat(rat(rng.gen_range(1..=5), rng.gen_range(1..=5))));
            bruhat_h(&h, &x).unwrap().mul(&h, &bruhat_u(&h, &t).unwrap())
        };
        let g = bruhat_h(&h, &q).unwrap().mul(&h, &m);
        assert!(is_sl_star(&h, &g));
        let d = decompose_dh_sl2f(&h, &g).unwrap();
        assert_eq!(bruhat_h(&h, &d.q).unwrap().mul(&h, &d.m_block(&h)), g);
        assert_eq!(&d.m[0] * &d.m[3] - &d.m[1] * &d.m[2], BigRational::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nrd_is_multiplicative(seed in any::<u64>()) {
        let h = r("Quat");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = small_quat(&mut rng);
            let q = small_quat(&mut rng);
            prop_assert_eq!(nrd(&h.mul(&p, &q)), nrd(&p) * nrd(&q));
            prop_assert_eq!(h.mul(&p, &h.involute(&p)), h.embed_child(&Elem::rat(nrd(&p))));
        }
    }

    #[test]
    fn quaternion_classes_are_multiplicative(seed in any::<u64>()) {
        let h = r("Quat");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Elem> = (0..4).map(|_| small_quat(&mut rng)).collect();
        let b: Vec<Elem> = (0..4).map(|_| small_quat(&mut rng)).collect();
        let ab = linalg::mat_mul(&h, &a, &b, 2, 2, 2);
        let ca = dieudonne_det_2x2(&h, &a).unwrap();
        let cb = dieudonne_det_2x2(&h, &b).unwrap();
        let cab = dieudonne_det_2x2(&h, &ab).unwrap();
        prop_assert_eq!(&cab, &ca.mul(&h, &cb).unwrap());
        prop_assert_eq!(&dieudonne_det_n(&h, &a, 2).unwrap(), &ca);
        let c3: Vec<Elem> = (0..9).map(|_| small_quat(&mut rng)).collect();
        let d3: Vec<Elem> = (0..9).map(|_| small_quat(&mut rng)).collect();
        let cd = linalg::mat_mul(&h, &c3, &d3, 3, 3, 3);
        prop_assert_eq!(
            dieudonne_det_n(&h, &cd, 3).unwrap(),
            dieudonne_det_n(&h, &c3, 3).unwrap().mul(&h, &dieudonne_det_n(&h, &d3, 3).unwrap()).unwrap()
        );
    }

    #[test]
    fn bruhat_words_decompose(seed in any::<u64>()) {
        let h = r("Quat");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = BlockMatrix::identity(&h);
        for _ in 0..rng.gen_range(0..7) {
            let x = match rng.gen_range(0..3) {
                0 => bruhat_h(&h, &nonzero_quat(&mut rng)).unwrap(),
                1 => bruhat_u(&h, &h.embed_child(&Elem::rat(rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))))).unwrap(),
                _ => bruhat_w(&h),
            };
            g = g.mul(&h, &x);
        }
        let d = decompose_dh_sl2f(&h, &g).unwrap();
        prop_assert_eq!(bruhat_h(&h, &d.q).unwrap().mul(&h, &d.m_block(&h)), g);
    }
}
