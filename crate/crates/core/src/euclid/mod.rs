//! The *-Euclidean division step `a = s c + r` with `s` symmetric and `r` a
//! unit, and chains of such steps.
//!
//! [`divide`] dispatches on the ring class:
//!
//! * matrices over a field or division ring: closed forms, then a sweep of
//!   symmetric elements by support size (finite) or a bounded random search
//!   (infinite);
//! * matrices over `D x D` with the flip: row reduction of the first component;
//! * split quaternions over a field of characteristic 2: the three triangular
//!   and anti-triangular templates;
//! * *-local rings with nonzero radical: solve modulo the radical and lift
//!   through the section;
//! * split quaternions in odd or zero characteristic: exhaustive or exact
//!   search, reporting [`Error::NotStarEuclidean`] on failure.

mod orbits;
mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use orbits::{hypothesis_orbits, ORBIT_CANDIDATE_LIMIT};
pub use search::{random_bounded, random_symmetric, support, symmetric_count, symmetric_elements, MATERIALIZE_LIMIT};

use crate::error::{Error, Result};
use crate::linalg;
use crate::local::LocalStructure;
use crate::ring::{Elem, Kind, Ring, RingDescriptor};

/// Hard cap on the length of chains built by [`divide_iterated`].
pub const ITERATION_CAP: usize = 8;

/// `x a + y c = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeCertificate {
    pub x: Elem,
    pub y: Elem,
}

impl CoprimeCertificate {
    pub fn verify(&self, ring: &Ring, a: &Elem, c: &Elem) -> bool {
        ring.is_one(&ring.add(&ring.mul(&self.x, a), &ring.mul(&self.y, c)))
    }
}

/// One step `a = s c + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionStep {
    pub s: Elem,
    pub r: Elem,
}

impl DivisionStep {
    /// `s` symmetric, `a = s c + r` and `r` a unit.
    pub fn verify(&self, ring: &Ring, a: &Elem, c: &Elem) -> bool {
        ring.is_symmetric(&self.s) && *a == ring.add(&ring.mul(&self.s, c), &self.r) && ring.is_unit(&self.r)
    }
}

/// `r_{i-1} = s_i r_i + r_{i+1}` with `r_{-1} = a`, `r_0 = c`; step `i`
/// stores `s_i` and `r_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionChain {
    pub a: Elem,
    pub c: Elem,
    pub steps: Vec<DivisionStep>,
}

impl DivisionChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `r_{-1}, r_0, r_1, ..., r_n`.
    pub fn remainders(&self) -> Vec<&Elem> {
        let mut out = vec![&self.a, &self.c];
        out.extend(self.steps.iter().map(|st| &st.r));
        out
    }

    /// The final remainder `r_n`.
    pub fn last_remainder(&self) -> &Elem {
        self.steps.last().map_or(&self.c, |st| &st.r)
    }

    /// Replays the recurrence exactly.
    pub fn verify(&self, ring: &Ring) -> Result<()> {
        let fail = |m: String| Err(Error::PostconditionViolation(m));
        if self.steps.is_empty() {
            return fail("empty chain".into());
        }
        let rs = self.remainders();
        for (i, st) in self.steps.iter().enumerate() {
            if !ring.is_symmetric(&st.s) {
                return fail(format!("s_{i} is not symmetric"));
            }
            if *rs[i] != ring.add(&ring.mul(&st.s, rs[i + 1]), rs[i + 2]) {
                return fail(format!("recurrence fails at step {i}"));
            }
        }
        if !ring.is_unit(self.last_remainder()) {
            return fail("final remainder is not a unit".into());
        }
        Ok(())
    }
}

/// Proof by exhaustion that no symmetric `s` makes `a - s c` a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionCertificate {
    pub ring: RingDescriptor,
    pub symmetric_count: u64,
    pub unit_remainders: u64,
    pub failures: u64,
}

/// Knobs of the searches over infinite rings and very large finite ones.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    /// Largest symmetric set swept exhaustively.
    pub sweep_limit: u64,
    /// Random trials per coordinate bound; the bound doubles after each round.
    pub trials_per_bound: usize,
    pub max_bound: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0x5eed, sweep_limit: 1 << 16, trials_per_bound: 48, max_bound: 1 << 12 }
    }
}

// ---- hypotheses ------------------------------------------------------------

/// Whether `a* c = c* a`.
pub fn derive_symmetry(ring: &Ring, a: &Elem, c: &Elem) -> bool {
    ring.mul(&ring.involute(a), c) == ring.mul(&ring.involute(c), a)
}

/// A certificate for `A a + A c = A`, from row reduction of `[a; c]` in the
/// flat matrix model (componentwise for products, modulo the radical and
/// lifted for local scalars).
pub fn check_coprime(ring: &Ring, a: &Elem, c: &Elem) -> Result<CoprimeCertificate> {
    let (n, s) = ring.flat_shape();
    let (x, y) = flat_certificate(&s, &ring.flatten(a), &ring.flatten(c), n)?.ok_or(Error::NotCoprime)?;
    let cert = CoprimeCertificate { x: ring.unflatten(&x), y: ring.unflatten(&y) };
    if !cert.verify(ring, a, c) {
        return Err(Error::PostconditionViolation("coprime certificate does not verify".into()));
    }
    Ok(cert)
}

type FlatPair = (Vec<Elem>, Vec<Elem>);

fn flat_certificate(s: &Ring, fa: &[Elem], fc: &[Elem], n: usize) -> Result<Option<FlatPair>> {
    if s.is_product() {
        let comp = s.child().unwrap();
        let (a1, a2): (Vec<Elem>, Vec<Elem>) = fa.iter().map(|e| s.split(e)).unzip();
        let (c1, c2): (Vec<Elem>, Vec<Elem>) = fc.iter().map(|e| s.split(e)).unzip();
        let Some((x1, y1)) = flat_certificate(comp, &a1, &c1, n)? else { return Ok(None) };
        let Some((x2, y2)) = flat_certificate(comp, &a2, &c2, n)? else { return Ok(None) };
        let join = |u: &[Elem], v: &[Elem]| u.iter().zip(v).map(|(p, q)| s.join(p, q)).collect::<Vec<_>>();
        return Ok(Some((join(&x1, &x2), join(&y1, &y2))));
    }
    if s.is_division_ring() {
        let mut m = fa.to_vec();
        m.extend_from_slice(fc);
        let e = linalg::echelon(s, &m, 2 * n, n);
        if e.rank() < n {
            return Ok(None);
        }
        let t = &e.transform;
        let x = (0..n * n).map(|k| t[(k / n) * 2 * n + k % n].clone()).collect();
        let y = (0..n * n).map(|k| t[(k / n) * 2 * n + n + k % n].clone()).collect();
        return Ok(Some((x, y)));
    }
    let loc = LocalStructure::new(s)?;
    if loc.is_trivial() {
        return Err(Error::Unsupported(format!("coprimality over {s}")));
    }
    let pa: Vec<Elem> = fa.iter().map(|e| loc.project(e)).collect();
    let pc: Vec<Elem> = fc.iter().map(|e| loc.project(e)).collect();
    let Some((xb, yb)) = flat_certificate(loc.residue(), &pa, &pc, n)? else { return Ok(None) };
    let x: Vec<Elem> = xb.iter().map(|e| loc.section(e)).collect();
    let y: Vec<Elem> = yb.iter().map(|e| loc.section(e)).collect();
    let xa = linalg::mat_mul(s, &x, fa, n, n, n);
    let yc = linalg::mat_mul(s, &y, fc, n, n, n);
    let u: Vec<Elem> = xa.iter().zip(&yc).map(|(p, q)| s.add(p, q)).collect();
    // u = 1 modulo the radical, hence a unit
    let ui = linalg::inverse(s, &u, n)
        .ok_or_else(|| Error::PostconditionViolation("lifted certificate is not a unit".into()))?;
    Ok(Some((linalg::mat_mul(s, &ui, &x, n, n, n), linalg::mat_mul(s, &ui, &y, n, n, n))))
}

fn require_hypotheses(ring: &Ring, a: &Elem, c: &Elem) -> Result<()> {
    check_coprime(ring, a, c)?;
    if !derive_symmetry(ring, a, c) {
        return Err(Error::SymmetryViolation);
    }
    Ok(())
}

fn closed_form(ring: &Ring, a: &Elem, c: &Elem) -> Option<DivisionStep> {
    if ring.is_unit(a) {
        return Some(DivisionStep { s: ring.zero(), r: a.clone() });
    }
    if ring.is_zero(a) && ring.is_unit(c) {
        return Some(DivisionStep { s: ring.one(), r: ring.neg(c) });
    }
    None
}

fn try_s(ring: &Ring, a: &Elem, c: &Elem, s: &Elem) -> Option<DivisionStep> {
    let r = ring.sub(a, &ring.mul(s, c));
    ring.is_unit(&r).then(|| DivisionStep { s: s.clone(), r })
}

enum Search {
    Found(DivisionStep),
    Exhausted { complete: bool, tried: u64 },
}

/// Every symmetric element by support size when the set is small enough,
/// otherwise the random search.
fn search(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<Search> {
    if let Some(count) = symmetric_count(ring) {
        if count <= cfg.sweep_limit {
            let syms = symmetric_elements(ring)?;
            for s in syms.iter() {
                if let Some(st) = try_s(ring, a, c, s) {
                    return Ok(Search::Found(st));
                }
            }
            return Ok(Search::Exhausted { complete: true, tried: syms.len() as u64 });
        }
    }
    Ok(random_search(ring, a, c, cfg))
}

fn random_search(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Search {
    let mut tried = 0;
    for v in [0, 1, -1] {
        tried += 1;
        if let Some(st) = try_s(ring, a, c, &ring.from_int(v)) {
            return Search::Found(st);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bound = 1;
    while bound <= cfg.max_bound {
        for _ in 0..cfg.trials_per_bound {
            tried += 1;
            let s = random_symmetric(ring, &mut rng, bound);
            if let Some(st) = try_s(ring, a, c, &s) {
                return Search::Found(st);
            }
        }
        bound *= 2;
    }
    Search::Exhausted { complete: false, tried }
}

fn exhausted(ring: &Ring, complete: bool, tried: u64) -> Error {
    if complete {
        Error::SearchExhausted(format!("all {tried} symmetric elements of {ring} fail"))
    } else {
        Error::SearchExhausted(format!("{tried} random symmetric trials over {ring} fail"))
    }
}

// ---- ring classes ------------------------------------------------------------

/// Base ring `D` when the ring is `SplitQuat(D)` or matrices over it.
fn quaternion_base(ring: &Ring) -> Option<&Ring> {
    match ring.kind() {
        Kind::SplitQuat => ring.child(),
        Kind::Matrix { .. } => quaternion_base(ring.child().unwrap()),
        _ => None,
    }
}

fn nontrivial_local(ring: &Ring) -> Option<LocalStructure> {
    LocalStructure::new(ring).ok().filter(|l| !l.is_trivial())
}

/// The algorithm [`divide`] uses for a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FieldMatrix,
    TwoLocal,
    Char2Quaternion,
    Lift,
    /// Split quaternions outside characteristic 2.
    OddQuaternion,
    /// Exhaustive sweep over a finite ring outside the classes above.
    Sweep,
}

pub fn method(ring: &Ring) -> Result<Method> {
    let (_, s) = ring.flat_shape();
    if let Some(d) = quaternion_base(ring) {
        return Ok(if d.characteristic() == 2 {
            if d.is_division_ring() {
                if matches!(ring.kind(), Kind::SplitQuat) {
                    Method::Char2Quaternion
                } else {
                    Method::FieldMatrix
                }
            } else if nontrivial_local(ring).is_some() {
                Method::Lift
            } else if ring.is_finite() {
                Method::Sweep
            } else {
                return Err(Error::Unsupported(format!("division over {ring}")));
            }
        } else {
            Method::OddQuaternion
        });
    }
    if s.is_division_ring() {
        return Ok(Method::FieldMatrix);
    }
    if s.is_product() && s.child().unwrap().is_division_ring() {
        return Ok(Method::TwoLocal);
    }
    if nontrivial_local(ring).is_some() {
        return Ok(Method::Lift);
    }
    if ring.is_finite() {
        return Ok(Method::Sweep);
    }
    Err(Error::Unsupported(format!("division over {ring}")))
}

// ---- algorithms ------------------------------------------------------------

/// Matrices over a field or division ring (including the split quaternion
/// models, whose flat base is a field).
pub fn divide_field_matrix(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionStep> {
    divide_field_matrix_with(ring, a, c, &SearchConfig::default())
}

pub fn divide_field_matrix_with(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<DivisionStep> {
    let (_, s) = ring.flat_shape();
    if !s.is_division_ring() {
        return Err(Error::Unsupported(format!("{ring} is not a matrix ring over a division ring")));
    }
    match searched(ring, a, c, cfg)? {
        Search::Found(st) => Ok(st),
        Search::Exhausted { complete, tried } => Err(exhausted(ring, complete, tried)),
    }
}

/// Hypotheses, closed forms, then [`search`].
fn searched(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<Search> {
    require_hypotheses(ring, a, c)?;
    if let Some(st) = closed_form(ring, a, c) {
        return Ok(Search::Found(st));
    }
    search(ring, a, c, cfg)
}

/// A completed sweep is a certificate; an unsuccessful random search is not.
fn certified(ring: &Ring, outcome: Search) -> Result<DivisionStep> {
    match outcome {
        Search::Found(st) => Ok(st),
        Search::Exhausted { complete: true, tried } => Err(Error::NotStarEuclidean(format!(
            "none of the {tried} symmetric elements of {ring} gives a unit remainder"
        ))),
        Search::Exhausted { complete: false, tried } => Err(exhausted(ring, false, tried)),
    }
}

/// Matrices over `D x D` with the (twisted) flip: `e a_1 + f c_1` is made
/// invertible by row reduction of `a_1` and completion of its row space
/// from rows of `c_1`; `s_1 = -e^{-1} f` and `s_2` is forced by symmetry.
pub fn divide_two_local(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionStep> {
    let (n, s) = ring.flat_shape();
    if !(s.is_product() && s.child().unwrap().is_division_ring()) {
        return Err(Error::Unsupported(format!("{ring} is not a matrix ring over a product of division rings")));
    }
    require_hypotheses(ring, a, c)?;
    if let Some(st) = closed_form(ring, a, c) {
        return Ok(st);
    }
    let k = s.child().unwrap();
    let a1: Vec<Elem> = ring.flatten(a).iter().map(|e| s.split(e).0).collect();
    let c1: Vec<Elem> = ring.flatten(c).iter().map(|e| s.split(e).0).collect();

    let ech = linalg::echelon(k, &a1, n, n);
    let rank = ech.rank();
    // f picks rows of c_1 completing the row space of a_1
    let mut f = vec![k.zero(); n * n];
    let mut basis: Vec<Elem> = ech.reduced[..rank * n].to_vec();
    let mut next = rank;
    for row in 0..n {
        if next == n {
            break;
        }
        let mut trial = basis.clone();
        trial.extend_from_slice(&c1[row * n..(row + 1) * n]);
        if linalg::rank(k, &trial, next + 1, n) == next + 1 {
            basis = trial;
            f[next * n + row] = k.one();
            next += 1;
        }
    }
    if next < n {
        return Err(Error::NotCoprime);
    }
    let e_inv = linalg::inverse(k, &ech.transform, n)
        .ok_or_else(|| Error::PostconditionViolation("row transform is singular".into()))?;
    let s1: Vec<Elem> = linalg::mat_mul(k, &e_inv, &f, n, n, n).iter().map(|x| k.neg(x)).collect();
    // s_2 = phi(s_1)^T
    let mut flat_s = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            flat_s.push(s.join(&s1[i * n + j], &s.twist_map(&s1[j * n + i])));
        }
    }
    let s_elem = ring.unflatten(&flat_s);
    let r = ring.sub(a, &ring.mul(&s_elem, c));
    let step = DivisionStep { s: s_elem, r };
    if !step.verify(ring, a, c) {
        return Err(Error::PostconditionViolation("second component of the remainder is not a unit".into()));
    }
    Ok(step)
}

/// Template shapes for split quaternions in characteristic 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// `[[alpha, beta], [0, alpha]]`
    Upper,
    /// `[[alpha, 0], [gamma, alpha]]`
    Lower,
    /// `[[0, alpha], [alpha, 0]]`
    Anti,
}

impl Template {
    pub const ALL: [Template; 3] = [Template::Upper, Template::Lower, Template::Anti];

    /// The template with parameters `alpha` and `beta` (ignored for `Anti`).
    pub fn build(self, ring: &Ring, alpha: &Elem, beta: &Elem) -> Elem {
        let z = ring.child().unwrap().zero();
        let v = match self {
            Template::Upper => vec![alpha.clone(), beta.clone(), z, alpha.clone()],
            Template::Lower => vec![alpha.clone(), z, beta.clone(), alpha.clone()],
            Template::Anti => vec![z.clone(), alpha.clone(), alpha.clone(), z],
        };
        Elem::from_vec(v)
    }
}

/// Parameter values swept by the templates: the whole field when finite,
/// polynomials of degree below 2 for `GF(q)(t)`. A nonzero polynomial of
/// degree at most 2 in each parameter does not vanish on a grid of side 3 or
/// more, so the infinite sweep is exact.
fn template_values(d: &Ring) -> Result<Vec<Elem>> {
    if d.is_finite() {
        return d.enumerate();
    }
    let t = d.generator("t").ok_or_else(|| Error::Unsupported(format!("templates over {d}")))?;
    let coeffs = d.child().unwrap().enumerate()?;
    let mut out = Vec::new();
    for c1 in &coeffs {
        for c0 in &coeffs {
            out.push(d.add(&d.mul(&d.embed_child(c1), &t), &d.embed_child(c0)));
        }
    }
    Ok(out)
}

/// Split quaternions `M(2, D)` over a field `D` of characteristic 2, with the
/// template of the returned symmetric quotient (`None` for the closed forms).
pub fn divide_char2_quat_detailed(ring: &Ring, a: &Elem, c: &Elem) -> Result<(DivisionStep, Option<Template>)> {
    let d = match ring.kind() {
        Kind::SplitQuat => ring.child().unwrap(),
        _ => return Err(Error::Unsupported(format!("{ring} is not a split quaternion ring"))),
    };
    if d.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    if !d.is_division_ring() {
        return Err(Error::Unsupported(format!("{d} is not a field")));
    }
    check_coprime(ring, a, c)?;
    if ring.is_unit(a) {
        return Ok((DivisionStep { s: ring.zero(), r: a.clone() }, None));
    }
    if ring.is_zero(a) {
        return Ok((DivisionStep { s: ring.one(), r: c.clone() }, None));
    }
    // a has rank 1: a u0 = [[x, 0], [y, 0]]
    let u0 = column_normalizer(d, a);
    let au = ring.mul(a, &u0);
    let cu = ring.mul(c, &u0);
    let values = template_values(d)?;
    for tpl in Template::ALL {
        let betas: &[Elem] = if tpl == Template::Anti { &values[..1] } else { &values };
        for alpha in &values {
            for beta in betas {
                let s = tpl.build(ring, alpha, beta);
                if ring.is_unit(&ring.add(&au, &ring.mul(&s, &cu))) {
                    let r = ring.sub(a, &ring.mul(&s, c));
                    return Ok((DivisionStep { s, r }, Some(tpl)));
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!("no template quotient over {ring}")))
}

pub fn divide_char2_quat(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionStep> {
    divide_char2_quat_detailed(ring, a, c).map(|(st, _)| st)
}

/// A unit `u0` with `a u0` zero in the second column, for `a` of rank 1.
fn column_normalizer(d: &Ring, a: &Elem) -> Elem {
    let v = a.as_slice();
    let (one, zero) = (d.one(), d.zero());
    if d.is_zero(&v[0]) && d.is_zero(&v[2]) {
        return Elem::from_vec(vec![zero.clone(), one.clone(), one, zero]);
    }
    // column 2 = lambda * column 1
    let (p, q) = if d.is_zero(&v[0]) { (&v[2], &v[3]) } else { (&v[0], &v[1]) };
    let lambda = d.mul(q, &d.try_invert(p).expect("nonzero"));
    Elem::from_vec(vec![one.clone(), d.neg(&lambda), zero, one])
}

/// *-local rings with nonzero radical: divide modulo the radical, lift the
/// quotient through the section and recompute the remainder, which is a unit
/// plus a radical element.
pub fn divide_lift(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionStep> {
    divide_lift_with(ring, a, c, &SearchConfig::default())
}

pub fn divide_lift_with(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<DivisionStep> {
    let loc = nontrivial_local(ring)
        .ok_or_else(|| Error::Unsupported(format!("{ring} has no nonzero radical to reduce by")))?;
    require_hypotheses(ring, a, c)?;
    let res = loc.residue();
    let down = step_with(res, &loc.project(a), &loc.project(c), cfg)?;
    let s = loc.section(&down.s);
    if !ring.is_symmetric(&s) {
        return Err(Error::Unsupported(format!("the section of {ring} does not preserve symmetric elements")));
    }
    let r = ring.sub(a, &ring.mul(&s, c));
    let step = DivisionStep { s, r };
    if !step.verify(ring, a, c) {
        return Err(Error::PostconditionViolation("lifted remainder is not a unit".into()));
    }
    Ok(step)
}

/// Split quaternions outside characteristic 2: exhaustive over finite rings;
/// over infinite commutative bases the symmetric elements are the scalars
/// `alpha I` and `det(a - alpha c)` has degree at most 2 in `alpha`, so
/// `alpha = 0, 1, 2` decide.
fn divide_odd_quat(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<DivisionStep> {
    let d = quaternion_base(ring).unwrap();
    let exact = matches!(ring.kind(), Kind::SplitQuat) && matches!(d.kind(), Kind::Rationals | Kind::RatFunc(_));
    if !exact {
        return certified(ring, searched(ring, a, c, cfg)?);
    }
    require_hypotheses(ring, a, c)?;
    for v in 0..3 {
        if let Some(st) = try_s(ring, a, c, &ring.from_int(v)) {
            return Ok(st);
        }
    }
    Err(Error::NotStarEuclidean(format!(
        "det(a - alpha c) vanishes identically over {ring}; the symmetric elements are the scalars"
    )))
}

fn step_with(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<DivisionStep> {
    match method(ring)? {
        Method::FieldMatrix | Method::Sweep => certified(ring, searched(ring, a, c, cfg)?),
        Method::TwoLocal => divide_two_local(ring, a, c),
        Method::Char2Quaternion => {
            require_hypotheses(ring, a, c)?;
            divide_char2_quat(ring, a, c)
        }
        Method::Lift => divide_lift_with(ring, a, c, cfg),
        Method::OddQuaternion => divide_odd_quat(ring, a, c, cfg),
    }
}

/// One verified division step, dispatched on the ring class.
pub fn divide_step(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionStep> {
    step_with(ring, a, c, &SearchConfig::default())
}

/// A verified chain of length 1.
pub fn divide(ring: &Ring, a: &Elem, c: &Elem) -> Result<DivisionChain> {
    divide_with(ring, a, c, &SearchConfig::default())
}

pub fn divide_with(ring: &Ring, a: &Elem, c: &Elem, cfg: &SearchConfig) -> Result<DivisionChain> {
    let step = step_with(ring, a, c, cfg)?;
    let chain = DivisionChain { a: a.clone(), c: c.clone(), steps: vec![step] };
    chain.verify(ring)?;
    Ok(chain)
}

/// Repeats the division step, falling back to `s = 0` (which swaps the pair)
/// when no single step exists, for at most `max_len` steps, capped at
/// [`ITERATION_CAP`].
pub fn divide_iterated(ring: &Ring, a: &Elem, c: &Elem, max_len: usize) -> Result<DivisionChain> {
    require_hypotheses(ring, a, c)?;
    let cap = max_len.min(ITERATION_CAP);
    let mut steps = Vec::new();
    let (mut x, mut y) = (a.clone(), c.clone());
    for _ in 0..cap {
        match divide_step(ring, &x, &y) {
            Ok(st) => {
                steps.push(st);
                let chain = DivisionChain { a: a.clone(), c: c.clone(), steps };
                chain.verify(ring)?;
                return Ok(chain);
            }
            Err(Error::NotStarEuclidean(_) | Error::SearchExhausted(_)) => {
                steps.push(DivisionStep { s: ring.zero(), r: x.clone() });
                std::mem::swap(&mut x, &mut y);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::CapExceeded(cap))
}

/// Enumerates every symmetric `s` and certifies that `a - s c` is never a
/// unit. Refuses with [`Error::StepExists`] when some `s` works.
pub fn certify_not_star_euclidean(ring: &Ring, a: &Elem, c: &Elem) -> Result<ExhaustionCertificate> {
    if !ring.is_finite() {
        return Err(Error::InfiniteRing(ring.to_string()));
    }
    match check_coprime(ring, a, c) {
        Ok(_) => {}
        Err(Error::NotCoprime) => return Err(Error::HypothesesNotMet("A a + A c != A".into())),
        Err(e) => return Err(e),
    }
    if !derive_symmetry(ring, a, c) {
        return Err(Error::HypothesesNotMet("a* c is not symmetric".into()));
    }
    let syms = symmetric_elements(ring)?;
    let units = syms.iter().filter(|s| ring.is_unit(&ring.sub(a, &ring.mul(s, c)))).count() as u64;
    let total = syms.len() as u64;
    if units > 0 {
        return Err(Error::StepExists(format!("{units} of {total} symmetric elements give a unit remainder")));
    }
    Ok(ExhaustionCertificate {
        ring: ring.descriptor().clone(),
        symmetric_count: total,
        unit_remainders: 0,
        failures: total,
    })
}
