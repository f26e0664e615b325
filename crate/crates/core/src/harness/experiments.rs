//! The canned experiments.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Report, Verdict};
use crate::adelic::{self, AdelicBase, Place};
use crate::error::{Error, Result};
use crate::euclid;
use crate::quaternion::{decompose_dh_sl2f, gl_criterion, nrd};
use crate::ring::{Elem, Ring};
use crate::sl_star::{self, bruhat_h, bruhat_u, bruhat_w, BlockMatrix, DEFAULT_CAP};

pub const EXPERIMENTS: [&str; 11] = [
    "star-local-euclid",
    "counterexample-char-odd",
    "char2-quat-euclid",
    "bruhat-closure-char2",
    "bruhat-closure-char3",
    "adelic-Q",
    "adelic-quad",
    "adelic-quat-char2",
    "adelic-quat-char0-refusal",
    "gl-criterion",
    "dh-sl2f",
];

pub const STAR_LOCAL_RINGS: [&str; 7] = [
    "Mat(2,GF(2))",
    "Mat(2,GF(3))",
    "Mat(2,GF(4))",
    "Mat(2,Z/(4))",
    "Mat(2,Z/(9))",
    "Mat(2,Prod(GF(3),GF(3)))",
    "Mat(2,Prod(Z/(4),Z/(4)))",
];

pub const ODD_SPLIT_QUATERNIONS: [&str; 3] = ["SplitQuat(GF(3))", "SplitQuat(GF(5))", "SplitQuat(Z/(9))"];

pub fn run(name: &str, seed: u64) -> Result<Report> {
    match name {
        "star-local-euclid" => star_local_euclid(seed),
        "counterexample-char-odd" => counterexample_char_odd(seed),
        "char2-quat-euclid" => char2_quat_euclid(seed),
        "bruhat-closure-char2" => bruhat_closure_char2(seed),
        "bruhat-closure-char3" => bruhat_closure_char3(seed),
        "adelic-Q" => adelic_random("adelic-Q", AdelicBase::Rational, 2, vec![2, 3, 5], seed),
        "adelic-quad" => adelic_random("adelic-quad", AdelicBase::Quadratic(-1), 2, vec![3, 5, 7, 13], seed),
        "adelic-quat-char2" => adelic_quat_char2(seed),
        "adelic-quat-char0-refusal" => adelic_quat_char0(seed),
        "gl-criterion" => gl_criterion_experiment(seed),
        "dh-sl2f" => dh_sl2f(seed),
        _ => Err(Error::Usage(format!("unknown experiment {name}; expected one of: {}", EXPERIMENTS.join(", ")))),
    }
}

fn r(desc: &str) -> Ring {
    Ring::parse(desc).expect("built-in descriptor")
}

fn star_local_euclid(seed: u64) -> Result<Report> {
    let mut rep = Report::new(
        "star-local-euclid",
        "matrices over a *-local ring are *-Euclidean with one step",
        &STAR_LOCAL_RINGS.join(" "),
        seed,
    );
    rep.param("strategy", "one pair per orbit of (a,c) -> (ag,cg), g a unit");
    for desc in STAR_LOCAL_RINGS {
        let ring = r(desc);
        let reps = euclid::hypothesis_orbits(&ring)?;
        let units = ring.units()?.len() as u64;
        let ok = reps.iter().filter(|(a, c)| euclid::divide(&ring, a, c).is_ok()).count();
        rep.record(&format!("{desc}.orbits"), reps.len());
        rep.record(&format!("{desc}.units"), units);
        rep.record(&format!("{desc}.pairs"), reps.len() as u64 * units);
        rep.record(&format!("{desc}.divided"), ok);
        rep.check(&format!("{desc}.all_divide"), ok == reps.len());
    }
    Ok(rep)
}

/// The non-divisible pair over `M(2, R)`, `R` of odd characteristic.
pub fn odd_pair(ring: &Ring) -> (Elem, Elem) {
    (ring.parse_elem("[[1,0],[1,0]]").unwrap(), ring.parse_elem("[[0,1],[0,1]]").unwrap())
}

fn counterexample_char_odd(seed: u64) -> Result<Report> {
    let mut rep = Report::new(
        "counterexample-char-odd",
        "split quaternions with 2 invertible are not *-Euclidean",
        &ODD_SPLIT_QUATERNIONS.join(" "),
        seed,
    );
    rep.param("a", "[[1,0],[1,0]]");
    rep.param("c", "[[0,1],[0,1]]");
    let mut all = true;
    for desc in ODD_SPLIT_QUATERNIONS {
        let ring = r(desc);
        let base = ring.child().unwrap().size().unwrap();
        let (a, c) = odd_pair(&ring);
        match euclid::certify_not_star_euclidean(&ring, &a, &c) {
            Ok(cert) => {
                rep.record(&format!("{desc}.symmetric_count"), cert.symmetric_count);
                rep.record(&format!("{desc}.base_size"), base);
                rep.record(&format!("{desc}.unit_remainders"), cert.unit_remainders);
                all &= cert.unit_remainders == 0 && cert.symmetric_count == base;
            }
            Err(e) => {
                rep.record(&format!("{desc}.error"), e);
                all = false;
            }
        }
    }
    rep.verdict = if all { Verdict::Refusal } else { Verdict::Fail };
    Ok(rep)
}

fn char2_quat_euclid(seed: u64) -> Result<Report> {
    let rings = ["SplitQuat(GF(2))", "SplitQuat(GF(4))", "Mat(2,SplitQuat(GF(2)))"];
    let mut rep = Report::new("char2-quat-euclid", "split quaternions in characteristic 2 are *-Euclidean", &rings.join(" "), seed);
    for desc in &rings[..2] {
        let ring = r(desc);
        let elems = ring.enumerate()?;
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        let (mut pairs, mut ok) = (0usize, 0usize);
        for a in &elems {
            for c in &elems {
                if !euclid::derive_symmetry(&ring, a, c) || euclid::check_coprime(&ring, a, c).is_err() {
                    continue;
                }
                pairs += 1;
                if let Ok((st, t)) = euclid::divide_char2_quat_detailed(&ring, a, c) {
                    if st.verify(&ring, a, c) {
                        ok += 1;
                        *tally.entry(t.map_or("closed-form".into(), |t| format!("{t:?}"))).or_default() += 1;
                    }
                }
            }
        }
        rep.record(&format!("{desc}.pairs"), pairs);
        rep.record(&format!("{desc}.divided"), ok);
        for (k, v) in &tally {
            rep.record(&format!("{desc}.template.{k}"), v);
        }
        rep.check(&format!("{desc}.all_divide"), ok == pairs);
        rep.check(&format!("{desc}.templates_at_most_3"), tally.keys().filter(|k| *k != "closed-form").count() <= 3);
    }
    let ring = r(rings[2]);
    let reps = euclid::hypothesis_orbits(&ring)?;
    let ok = reps.iter().filter(|(a, c)| euclid::divide(&ring, a, c).is_ok()).count();
    rep.record(&format!("{}.orbits", rings[2]), reps.len());
    rep.record(&format!("{}.divided", rings[2]), ok);
    rep.check(&format!("{}.all_divide", rings[2]), ok == reps.len());
    Ok(rep)
}

fn closure_vs_group(rep: &mut Report, desc: &str, factor_all: bool) -> Result<(usize, usize)> {
    let ring = r(desc);
    let closure = sl_star::closure_bfs(&ring, DEFAULT_CAP)?;
    let all = sl_star::enumerate_sl_star(&ring, DEFAULT_CAP)?;
    let inside: HashSet<&BlockMatrix> = closure.elements.iter().collect();
    rep.record(&format!("{desc}.group"), all.len());
    rep.record(&format!("{desc}.closure"), closure.size());
    rep.check(&format!("{desc}.closure_in_group"), all.iter().filter(|g| inside.contains(g)).count() == closure.size());
    if factor_all {
        let ok = all.iter().filter(|g| sl_star::factor(&ring, g).and_then(|w| w.eval(&ring)).ok().as_ref() == Some(*g)).count();
        rep.record(&format!("{desc}.factored"), ok);
        rep.check(&format!("{desc}.factor_roundtrip"), ok == all.len());
    }
    Ok((closure.size(), all.len()))
}

fn bruhat_closure_char2(seed: u64) -> Result<Report> {
    let rings = ["Mat(2,GF(2))", "Mat(1,GF(2))", "Mat(1,GF(3))", "Mat(1,GF(5))", "SplitQuat(GF(2))"];
    let mut rep = Report::new("bruhat-closure-char2", "SL_*(2,A) is generated by the Bruhat elements", &rings.join(" "), seed);
    for desc in rings {
        let (c, g) = closure_vs_group(&mut rep, desc, true)?;
        rep.check(&format!("{desc}.equal"), c == g);
    }
    let ring = r("Mat(2,GF(2))");
    let w = sl_star::make_nonunit_example(&ring)?;
    let g = w.eval(&ring)?;
    let f = sl_star::factor(&ring, &g)?;
    rep.record("nonunit.word", w.format(&ring));
    rep.record("nonunit.g", g.format(&ring));
    rep.record("nonunit.factor", f.format(&ring));
    rep.check("nonunit.divide_path", sl_star::needs_division(&ring, &g) && f.eval(&ring)? == g);
    Ok(rep)
}

fn bruhat_closure_char3(seed: u64) -> Result<Report> {
    let desc = "SplitQuat(GF(3))";
    let mut rep = Report::new("bruhat-closure-char3", "Bruhat generation fails for split quaternions outside characteristic 2", desc, seed);
    let (c, g) = closure_vs_group(&mut rep, desc, false)?;
    rep.record("relation", if c == g { "equal" } else { "strict-subset" });
    rep.record("index", format!("{}/{}", g, c));
    if g % c == 0 {
        rep.record("index_value", g / c);
    }
    rep.check("strict_subset", c < g);
    Ok(rep)
}

fn adelic_random(name: &str, base: AdelicBase, n: usize, primes: Vec<u64>, seed: u64) -> Result<Report> {
    let places: Vec<Place> = primes.iter().map(|&p| Place::Prime(p)).collect();
    run_adelic(name, base, n, places, seed)
}

fn adelic_quat_char2(seed: u64) -> Result<Report> {
    let places = vec![Place::Poly(vec![0, 1]), Place::Poly(vec![1, 1]), Place::Poly(vec![1, 1, 1])];
    run_adelic("adelic-quat-char2", AdelicBase::QuaternionChar2, 1, places, seed)
}

/// Pairs drawn per adelic experiment.
pub const ADELIC_PAIRS: usize = 100;

fn run_adelic(name: &str, base: AdelicBase, n: usize, places: Vec<Place>, seed: u64) -> Result<Report> {
    let mut rep = Report::new(name, "division on the adeles assembled from place-wise solves", &base.to_string(), seed);
    rep.param("n", n);
    rep.param("places", places.iter().map(|p| adelic::place_text(&base, p)).collect::<Vec<_>>().join(","));
    rep.param("pairs", ADELIC_PAIRS);
    rep.param("tails", "a = 0, c = 1");
    for p in &places {
        if let Some(t) = base.splitting(p) {
            rep.record(&format!("splitting.{}", adelic::place_text(&base, p)), t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut methods: BTreeMap<String, usize> = BTreeMap::new();
    let mut ok = 0;
    for _ in 0..ADELIC_PAIRS {
        let (a, c) = adelic::random_adelic_pair(&base, n, &places, &mut rng)?;
        let res = match base {
            AdelicBase::Quadratic(_) => adelic::quad_adelic_divide(&a, &c),
            AdelicBase::QuaternionChar2 => adelic::quat_adelic_divide(&a, &c),
            _ => adelic::adelic_divide_seeded(&a, &c, seed),
        };
        if let Ok(d) = res {
            if d.verify(&a, &c).is_ok() {
                ok += 1;
                for (p, m) in &d.places {
                    *methods.entry(format!("{}.{m:?}", adelic::place_text(&base, p))).or_default() += 1;
                }
            }
        }
    }
    for (k, v) in &methods {
        rep.record(&format!("method.{k}"), v);
    }
    rep.record("verified", ok);
    rep.check("all_verified", ok == ADELIC_PAIRS);
    Ok(rep)
}

fn adelic_quat_char0(seed: u64) -> Result<Report> {
    let base = AdelicBase::QuaternionRational;
    let mut rep = Report::new("adelic-quat-char0-refusal", "split quaternion adeles in characteristic 0 are not *-Euclidean", &base.to_string(), seed);
    let w = adelic::quat_char0_witness()?;
    rep.record("witness.a", adelic::format_adelic(&w.a));
    rep.record("witness.c", adelic::format_adelic(&w.c));
    rep.record("witness.place", adelic::place_text(&base, &w.place));
    rep.record("certificate.ring", &w.certificate.ring);
    rep.record("certificate.symmetric_count", w.certificate.symmetric_count);
    rep.record("certificate.unit_remainders", w.certificate.unit_remainders);
    match adelic::quat_adelic_divide(&w.a, &w.c) {
        Err(Error::NotStarEuclidean(msg)) => {
            rep.record("refusal", msg);
            rep.verdict = if w.certificate.unit_remainders == 0 { Verdict::Refusal } else { Verdict::Fail };
        }
        other => {
            rep.record("unexpected", format!("{:?}", other.map(|_| ())));
            rep.verdict = Verdict::Fail;
        }
    }
    Ok(rep)
}

fn gl_criterion_experiment(seed: u64) -> Result<Report> {
    let rings = ["Mat(2,Prod(GF(2),GF(2)))", "Mat(2,Z/(4))"];
    let mut rep = Report::new("gl-criterion", "invertibility over *-local rings: three equivalent conditions", &rings.join(" "), seed);
    for desc in rings {
        let ring = r(desc);
        let (mut total, mut agree, mut inv) = (0usize, 0usize, 0usize);
        for a in ring.enumerate()? {
            let c = gl_criterion(&ring, &a)?;
            total += 1;
            agree += c.agree() as usize;
            inv += c.invertible as usize;
        }
        rep.record(&format!("{desc}.matrices"), total);
        rep.record(&format!("{desc}.invertible"), inv);
        rep.record(&format!("{desc}.agree"), agree);
        rep.check(&format!("{desc}.all_agree"), agree == total);
    }
    Ok(rep)
}

/// Roundtrips drawn by the `dh-sl2f` experiment.
pub const DH_ROUNDTRIPS: usize = 1000;

fn small_rat<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound)))
}

/// `h_q m` for a random nonzero quaternion `q` and a random product of
/// rational Bruhat elements `m`.
pub fn random_dh_element<R: Rng + ?Sized>(h: &Ring, rng: &mut R) -> (Elem, BlockMatrix, BlockMatrix) {
    let q = loop {
        let q = Elem::from_vec((0..4).map(|_| Elem::rat(small_rat(rng, 4))).collect());
        if !num_traits::Zero::is_zero(&nrd(&q)) {
            break q;
        }
    };
    let mut m = BlockMatrix::identity(h);
    for _ in 0..rng.gen_range(1..5) {
        let x = match rng.gen_range(0..3) {
            0 => bruhat_u(h, &h.embed_child(&Elem::rat(small_rat(rng, 5)))).unwrap(),
            1 => bruhat_w(h),
            _ => {
                let t = loop {
                    let t = small_rat(rng, 5);
                    if !num_traits::Zero::is_zero(&t) {
                        break t;
                    }
                };
                bruhat_h(h, &h.embed_child(&Elem::rat(t))).unwrap()
            }
        };
        m = m.mul(h, &x);
    }
    let g = bruhat_h(h, &q).unwrap().mul(h, &m);
    (q, m, g)
}

fn dh_sl2f(seed: u64) -> Result<Report> {
    let h = r("Quat");
    let mut rep = Report::new("dh-sl2f", "SL_*(2,H) = D_H SL(2,F)", "Quat", seed);
    rep.param("roundtrips", DH_ROUNDTRIPS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    for _ in 0..DH_ROUNDTRIPS {
        let (_, _, g) = random_dh_element(&h, &mut rng);
        if let Ok(d) = decompose_dh_sl2f(&h, &g) {
            let det = &d.m[0] * &d.m[3] - &d.m[1] * &d.m[2];
            if bruhat_h(&h, &d.q)?.mul(&h, &d.m_block(&h)) == g && num_traits::One::is_one(&det) {
                ok += 1;
            }
        }
    }
    rep.record("verified", ok);
    rep.check("all_roundtrip", ok == DH_ROUNDTRIPS);
    Ok(rep)
}
