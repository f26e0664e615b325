//! One report per CLI command.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{Report, Verdict};
use crate::adelic::{self, format_adelic, parse_adelic, AdelicBase, AdelicMatrix, Place};
use crate::error::{Error, Result};
use crate::euclid;
use crate::local::classify_star_local;
use crate::ring::{Elem, Ring};
use crate::sl_star::{self, BlockMatrix};

/// Rings below this size are checked on every triple.
pub const SELFTEST_EXHAUSTIVE_BELOW: u64 = 81;

/// Math refusals become refusal reports; everything else propagates.
fn refusal_or(e: Error, mut rep: Report) -> Result<Report> {
    match e {
        Error::Parse { .. }
        | Error::Usage(_)
        | Error::InvalidParameters(_)
        | Error::DescriptorMismatch { .. }
        | Error::Io(_)
        | Error::PostconditionViolation(_)
        | Error::VerificationFailed(_) => Err(e),
        other => {
            rep.record("refusal", other.to_string());
            rep.verdict = Verdict::Refusal;
            Ok(rep)
        }
    }
}

fn axioms(ring: &Ring, x: &Elem, y: &Elem, z: &Elem) -> Option<&'static str> {
    let r = ring;
    if r.add(&r.add(x, y), z) != r.add(x, &r.add(y, z)) {
        return Some("addition is associative");
    }
    if r.add(x, y) != r.add(y, x) {
        return Some("addition is commutative");
    }
    if r.mul(&r.mul(x, y), z) != r.mul(x, &r.mul(y, z)) {
        return Some("multiplication is associative");
    }
    if r.mul(x, &r.add(y, z)) != r.add(&r.mul(x, y), &r.mul(x, z)) {
        return Some("left distributivity");
    }
    if r.mul(&r.add(x, y), z) != r.add(&r.mul(x, z), &r.mul(y, z)) {
        return Some("right distributivity");
    }
    if r.involute(&r.mul(x, y)) != r.mul(&r.involute(y), &r.involute(x)) {
        return Some("(xy)* = y* x*");
    }
    if r.involute(&r.add(x, y)) != r.add(&r.involute(x), &r.involute(y)) {
        return Some("(x+y)* = x* + y*");
    }
    None
}

fn element_axioms(ring: &Ring, x: &Elem) -> Option<&'static str> {
    let r = ring;
    if r.add(x, &r.zero()) != *x || r.mul(x, &r.one()) != *x || r.mul(&r.one(), x) != *x {
        return Some("identities");
    }
    if !r.is_zero(&r.add(x, &r.neg(x))) {
        return Some("additive inverse");
    }
    if r.involute(&r.involute(x)) != *x {
        return Some("x** = x");
    }
    match r.try_invert(x) {
        Ok(y) => {
            if !r.is_one(&r.mul(x, &y)) || !r.is_one(&r.mul(&y, x)) || !r.is_unit(x) {
                return Some("two-sided inverse");
            }
        }
        Err(_) => {
            if r.is_unit(x) {
                return Some("unit without inverse");
            }
        }
    }
    if r.parse_elem(&r.format(x)).ok().as_ref() != Some(x) || !r.is_canonical(x) {
        return Some("literal roundtrip");
    }
    None
}

pub fn ring_selftest(desc: &str, samples: usize, seed: u64) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let mut rep = Report::new("ring-selftest", "rings with involution: axioms and anti-automorphism", desc, seed);
    rep.param("samples", samples);
    let mut failure = None;
    let exhaustive = ring.size().is_some_and(|s| s < SELFTEST_EXHAUSTIVE_BELOW);
    let (mut elements, mut triples) = (0u64, 0u64);
    if exhaustive {
        let all = ring.enumerate()?;
        for x in &all {
            elements += 1;
            failure = failure.or(element_axioms(&ring, x));
            for y in &all {
                for z in &all {
                    triples += 1;
                    failure = failure.or_else(|| axioms(&ring, x, y, z));
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (x, y, z) = (ring.random(&mut rng), ring.random(&mut rng), ring.random(&mut rng));
            elements += 1;
            triples += 1;
            failure = failure.or(element_axioms(&ring, &x)).or_else(|| axioms(&ring, &x, &y, &z));
        }
    }
    rep.record("mode", if exhaustive { "exhaustive" } else { "sampled" });
    rep.record("elements", elements);
    rep.record("triples", triples);
    if let Some(size) = ring.size() {
        rep.record("size", size);
    }
    rep.record("characteristic", ring.characteristic());
    rep.record("involution", format!("{:?}", ring.involution_tag()));
    rep.record("first_failure", failure.unwrap_or("none"));
    rep.check("axioms", failure.is_none());
    Ok(rep)
}

pub fn classify(desc: &str) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let mut rep = Report::new("classify", "*-local rings: one or two maximal primes", desc, 0);
    match classify_star_local(&ring) {
        Ok(c) => {
            rep.record("kind", c.kind);
            rep.record("p", if c.p.is_empty() { "-".into() } else { c.p });
            rep.record("p_star", if c.p_star.is_empty() { "-".into() } else { c.p_star });
            rep.record("radical", if c.radical.is_empty() { "-".into() } else { c.radical });
            rep.record("residue", c.residue.map(|d| d.to_string()).unwrap_or_else(|| "-".into()));
            Ok(rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

pub fn divide(desc: &str, a: &str, c: &str, seed: u64) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let (a, c) = (ring.parse_elem(a)?, ring.parse_elem(c)?);
    let mut rep = Report::new("divide", "*-Euclidean division step a = s c + r", desc, seed);
    rep.param("a", ring.format(&a));
    rep.param("c", ring.format(&c));
    if let Ok(m) = euclid::method(&ring) {
        rep.record("method", format!("{m:?}"));
    }
    let cfg = euclid::SearchConfig { seed, ..Default::default() };
    match euclid::divide_with(&ring, &a, &c, &cfg) {
        Ok(chain) => {
            let st = &chain.steps[0];
            rep.record("s", ring.format(&st.s));
            rep.record("r", ring.format(&st.r));
            rep.record("length", chain.len());
            rep.check("verified", chain.verify(&ring).is_ok());
            Ok(rep)
        }
        Err(e @ Error::NotStarEuclidean(_)) if ring.is_finite() => {
            let cert = euclid::certify_not_star_euclidean(&ring, &a, &c)?;
            rep.record("certificate.ring", cert.ring);
            rep.record("certificate.symmetric_count", cert.symmetric_count);
            rep.record("certificate.unit_remainders", cert.unit_remainders);
            refusal_or(e, rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

pub fn slstar_check(desc: &str, g: &str) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let g = BlockMatrix::parse(&ring, g)?;
    let mut rep = Report::new("slstar-check", "SL_*(2,A): det_* = 1 and the symmetry relations", desc, 0);
    rep.param("g", g.format(&ring));
    rep.record("det_star", ring.format(&sl_star::det_star(&ring, &g)));
    match sl_star::multiplier(&ring, &g) {
        Ok(m) => rep.record("multiplier", ring.format(&m)),
        Err(_) => rep.record("multiplier", "-"),
    }
    match sl_star::sl_star_violation(&ring, &g) {
        None => {
            rep.record("member", true);
            Ok(rep)
        }
        Some(rel) => {
            rep.record("member", false);
            refusal_or(Error::NotSLStar(rel.into()), rep)
        }
    }
}

pub fn slstar_factor(desc: &str, g: &str) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let g = BlockMatrix::parse(&ring, g)?;
    let mut rep = Report::new("slstar-factor", "Bruhat generation of SL_*(2,A)", desc, 0);
    rep.param("g", g.format(&ring));
    rep.record("needs_division", sl_star::needs_division(&ring, &g));
    match sl_star::factor(&ring, &g) {
        Ok(w) => {
            rep.record("word", w.format(&ring));
            rep.record("length", w.len());
            rep.check("eval", w.eval(&ring).ok().as_ref() == Some(&g));
            Ok(rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

pub fn slstar_closure(desc: &str, cap: usize) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let mut rep = Report::new("slstar-closure", "Bruhat generation of SL_*(2,A)", desc, 0);
    rep.param("cap", cap);
    let closure = match sl_star::closure_bfs(&ring, cap) {
        Ok(c) => c,
        Err(e) => return refusal_or(e, rep),
    };
    rep.record("generators", closure.generators);
    rep.record("closure", closure.size());
    match sl_star::enumerate_sl_star(&ring, cap) {
        Ok(all) => {
            rep.record("group", all.len());
            let inside: std::collections::HashSet<&BlockMatrix> = closure.elements.iter().collect();
            let subset = all.iter().filter(|g| inside.contains(g)).count() == closure.size();
            rep.check("closure_in_group", subset);
            rep.record("relation", if all.len() == closure.size() { "equal" } else { "strict-subset" });
            if all.len() % closure.size() == 0 {
                rep.record("index", all.len() / closure.size());
            }
        }
        Err(Error::CapExceeded(c)) => rep.record("group", format!("over cap {c}")),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

pub fn slstar_enumerate(desc: &str, cap: usize) -> Result<Report> {
    let ring = Ring::parse(desc)?;
    let mut rep = Report::new("slstar-enumerate", "SL_*(2,A) by column completion", desc, 0);
    rep.param("cap", cap);
    match sl_star::enumerate_sl_star(&ring, cap) {
        Ok(all) => {
            rep.record("group", all.len());
            let bad = all.iter().filter(|g| !sl_star::is_sl_star(&ring, g)).count();
            rep.check("members", bad == 0);
            Ok(rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

/// Parses a literal, taking the smallest matrix size that fits unless `n` is given.
pub fn parse_adelic_auto(base: &AdelicBase, n: Option<usize>, text: &str) -> Result<AdelicMatrix> {
    if let Some(n) = n {
        return parse_adelic(base, n, text);
    }
    let mut first = None;
    for n in 1..=4 {
        match parse_adelic(base, n, text) {
            Ok(x) => return Ok(x),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(first.unwrap())
}

fn parse_places(base: &AdelicBase, text: &str) -> Result<BTreeSet<Place>> {
    text.split(',').filter(|p| !p.trim().is_empty()).map(|p| adelic::parse_place(base, p.trim())).collect()
}

pub fn adelic_divide(base: &str, n: Option<usize>, a: &str, c: &str, seed: u64) -> Result<Report> {
    let b = AdelicBase::parse(base)?;
    let (a, c) = (parse_adelic_auto(&b, n, a)?, parse_adelic_auto(&b, n, c)?);
    let mut rep = Report::new("adelic-divide", "local-global division over a restricted product", base, seed);
    rep.param("a", format_adelic(&a));
    rep.param("c", format_adelic(&c));
    let res = match b {
        AdelicBase::Quadratic(_) => adelic::quad_adelic_divide(&a, &c),
        AdelicBase::QuaternionChar2 | AdelicBase::QuaternionRational => adelic::quat_adelic_divide(&a, &c),
        _ => adelic::adelic_divide_seeded(&a, &c, seed),
    };
    match res {
        Ok(d) => {
            rep.record("s", format_adelic(&d.s));
            rep.record("r", format_adelic(&d.r));
            for (p, m) in &d.places {
                rep.record(&format!("method.{}", adelic::place_text(&b, p)), format!("{m:?}"));
            }
            rep.record("tail", format!("{:?}", d.tail));
            rep.check("verified", d.verify(&a, &c).is_ok());
            Ok(rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

pub fn adelic_split(base: &str, n: Option<usize>, a: &str, places: &str) -> Result<Report> {
    let b = AdelicBase::parse(base)?;
    let a = parse_adelic_auto(&b, n, a)?;
    let set = parse_places(&b, places)?;
    let mut rep = Report::new("adelic-split", "a = a_S a^S in the restricted product", base, 0);
    rep.param("a", format_adelic(&a));
    rep.param("places", set.iter().map(|p| adelic::place_text(&b, p)).collect::<Vec<_>>().join(","));
    match a.support_split(&set) {
        Ok((a_s, a_t)) => {
            rep.record("a_S", format_adelic(&a_s));
            rep.record("a^S", format_adelic(&a_t));
            rep.check("product", a_s.mul(&a_t).ok().as_ref() == Some(&a));
            Ok(rep)
        }
        Err(e) => refusal_or(e, rep),
    }
}

pub fn adelic_involute(base: &str, n: Option<usize>, a: &str) -> Result<Report> {
    let b = AdelicBase::parse(base)?;
    let a = parse_adelic_auto(&b, n, a)?;
    let mut rep = Report::new("adelic-involute", "placewise involution of the restricted product", base, 0);
    rep.param("a", format_adelic(&a));
    let s = a.involute();
    rep.record("a*", format_adelic(&s));
    rep.check("involutive", s.involute() == a);
    Ok(rep)
}
