//! `SL_*(2, A)`: 2x2 block matrices `g` over `A` with `g* J g = J`, the Bruhat
//! elements `h_a`, `u_b`, `w`, factorization into Bruhat words and closure
//! experiments over finite rings.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::euclid;
use crate::linalg;
use crate::ring::{Elem, Ring};

/// Default cap for closures and enumerations.
pub const DEFAULT_CAP: usize = 10_000_000;

/// `[[a, b], [c, d]]` over `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockMatrix {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl BlockMatrix {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> BlockMatrix {
        BlockMatrix { a, b, c, d }
    }

    pub fn identity(ring: &Ring) -> BlockMatrix {
        BlockMatrix::new(ring.one(), ring.zero(), ring.zero(), ring.one())
    }

    /// `J = [[0, 1], [-1, 0]]`, which is also `w`.
    pub fn j(ring: &Ring) -> BlockMatrix {
        BlockMatrix::new(ring.zero(), ring.one(), ring.neg(&ring.one()), ring.zero())
    }

    pub fn mul(&self, ring: &Ring, o: &BlockMatrix) -> BlockMatrix {
        let m = |x: &Elem, y: &Elem, z: &Elem, t: &Elem| ring.add(&ring.mul(x, y), &ring.mul(z, t));
        BlockMatrix::new(
            m(&self.a, &o.a, &self.b, &o.c),
            m(&self.a, &o.b, &self.b, &o.d),
            m(&self.c, &o.a, &self.d, &o.c),
            m(&self.c, &o.b, &self.d, &o.d),
        )
    }

    pub fn neg(&self, ring: &Ring) -> BlockMatrix {
        BlockMatrix::new(ring.neg(&self.a), ring.neg(&self.b), ring.neg(&self.c), ring.neg(&self.d))
    }

    /// The *-transpose `[[a*, c*], [b*, d*]]`.
    pub fn involute(&self, ring: &Ring) -> BlockMatrix {
        BlockMatrix::new(ring.involute(&self.a), ring.involute(&self.c), ring.involute(&self.b), ring.involute(&self.d))
    }

    pub fn blocks(&self) -> [&Elem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Parses `[[a, b], [c, d]]` with each block in the element literal grammar.
    pub fn parse(ring: &Ring, text: &str) -> Result<BlockMatrix> {
        let parts = split_block_literal(text)?;
        let v: Vec<Elem> = parts.iter().map(|p| ring.parse_elem(p)).collect::<Result<_>>()?;
        Ok(BlockMatrix::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
    }

    pub fn format(&self, ring: &Ring) -> String {
        let f = |x: &Elem| ring.format(x);
        format!("[[{}, {}], [{}, {}]]", f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

/// Splits `[[a, b], [c, d]]` into its four top-level block texts.
fn split_block_literal(text: &str) -> Result<Vec<String>> {
    let t = text.trim();
    let bad = |position: usize, m: &str| Error::Parse { position, message: m.into() };
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| bad(0, "expected [[a, b], [c, d]]"))?;
    let mut rows = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                rows.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    rows.push(&inner[start..]);
    if rows.len() != 2 {
        return Err(bad(1, "expected two block rows"));
    }
    let mut out = Vec::new();
    for row in rows {
        let row = row.trim();
        let body = row.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| bad(1, "expected [x, y] row"))?;
        let mut depth = 0i32;
        let mut start = 0;
        let mut cells = Vec::new();
        for (i, ch) in body.char_indices() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                ',' if depth == 0 => {
                    cells.push(body[start..i].trim().to_string());
                    start = i + 1;
                }
                _ => {}
            }
        }
        cells.push(body[start..].trim().to_string());
        if cells.len() != 2 {
            return Err(bad(1, "expected two blocks per row"));
        }
        out.extend(cells);
    }
    Ok(out)
}

// ---- relations ---------------------------------------------------------------

/// `det_*(g) = a d* - b c*`.
pub fn det_star(ring: &Ring, g: &BlockMatrix) -> Elem {
    ring.sub(&ring.mul(&g.a, &ring.involute(&g.d)), &ring.mul(&g.b, &ring.involute(&g.c)))
}

/// Names of the defining relations, in checking order.
pub const RELATIONS: [&str; 6] = ["ad* - bc* = 1", "a*d - c*b = 1", "ab* symmetric", "cd* symmetric", "a*c symmetric", "b*d symmetric"];

/// The first violated defining relation of `SL_*(2, A)`, if any.
pub fn sl_star_violation(ring: &Ring, g: &BlockMatrix) -> Option<&'static str> {
    let s = |x: &Elem| ring.involute(x);
    let checks = [
        ring.is_one(&det_star(ring, g)),
        ring.is_one(&ring.sub(&ring.mul(&s(&g.a), &g.d), &ring.mul(&s(&g.c), &g.b))),
        ring.is_symmetric(&ring.mul(&g.a, &s(&g.b))),
        ring.is_symmetric(&ring.mul(&g.c, &s(&g.d))),
        ring.is_symmetric(&ring.mul(&s(&g.a), &g.c)),
        ring.is_symmetric(&ring.mul(&s(&g.b), &g.d)),
    ];
    checks.iter().position(|ok| !ok).map(|i| RELATIONS[i])
}

pub fn is_sl_star(ring: &Ring, g: &BlockMatrix) -> bool {
    sl_star_violation(ring, g).is_none()
}

fn require_sl_star(ring: &Ring, g: &BlockMatrix) -> Result<()> {
    match sl_star_violation(ring, g) {
        None => Ok(()),
        Some(rel) => Err(Error::NotSLStar(rel.into())),
    }
}

/// `delta` with `g* J g = delta J`, required central, invertible and symmetric.
pub fn multiplier(ring: &Ring, g: &BlockMatrix) -> Result<Elem> {
    let gjg = g.involute(ring).mul(ring, &BlockMatrix::j(ring)).mul(ring, g);
    let delta = gjg.b.clone();
    let ok = ring.is_zero(&gjg.a)
        && ring.is_zero(&gjg.d)
        && gjg.c == ring.neg(&delta)
        && ring.is_central_invertible_symmetric(&delta);
    if ok {
        Ok(delta)
    } else {
        Err(Error::NotGLStar)
    }
}

/// Product with both factors and the result checked against the relations.
pub fn group_mul(ring: &Ring, g: &BlockMatrix, h: &BlockMatrix) -> Result<BlockMatrix> {
    require_sl_star(ring, g)?;
    require_sl_star(ring, h)?;
    let p = g.mul(ring, h);
    require_sl_star(ring, &p)?;
    Ok(p)
}

/// `g^{-1} = J^{-1} g* J = [[d*, -b*], [-c*, a*]]`.
pub fn group_inv(ring: &Ring, g: &BlockMatrix) -> Result<BlockMatrix> {
    require_sl_star(ring, g)?;
    let j = BlockMatrix::j(ring);
    let inv = j.neg(ring).mul(ring, &g.involute(ring)).mul(ring, &j);
    require_sl_star(ring, &inv)?;
    Ok(inv)
}

// ---- Bruhat elements -----------------------------------------------------------

/// `h_a = diag(a*, a^{-1})`.
pub fn bruhat_h(ring: &Ring, a: &Elem) -> Result<BlockMatrix> {
    let inv = ring.try_invert(a)?;
    Ok(BlockMatrix::new(ring.involute(a), ring.zero(), ring.zero(), inv))
}

/// `u_b = [[1, b], [0, 1]]`.
pub fn bruhat_u(ring: &Ring, b: &Elem) -> Result<BlockMatrix> {
    if !ring.is_symmetric(b) {
        return Err(Error::NotSymmetric);
    }
    Ok(BlockMatrix::new(ring.one(), b.clone(), ring.zero(), ring.one()))
}

/// `w = [[0, 1], [-1, 0]]`.
pub fn bruhat_w(ring: &Ring) -> BlockMatrix {
    BlockMatrix::j(ring)
}

/// `w^{-1} = [[0, -1], [1, 0]]`.
pub fn bruhat_w_inv(ring: &Ring) -> BlockMatrix {
    BlockMatrix::j(ring).neg(ring)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    H(Elem),
    U(Elem),
    W,
    WInv,
}

/// A product of Bruhat elements, evaluated left to right as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BruhatWord {
    pub tokens: Vec<Token>,
}

impl BruhatWord {
    pub fn new(tokens: Vec<Token>) -> BruhatWord {
        BruhatWord { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_matrix(ring: &Ring, t: &Token) -> Result<BlockMatrix> {
        match t {
            Token::H(a) => bruhat_h(ring, a),
            Token::U(b) => bruhat_u(ring, b),
            Token::W => Ok(bruhat_w(ring)),
            Token::WInv => Ok(bruhat_w_inv(ring)),
        }
    }

    /// The product of the tokens; fails on a non-unit `H` or non-symmetric `U`.
    pub fn eval(&self, ring: &Ring) -> Result<BlockMatrix> {
        let mut acc = BlockMatrix::identity(ring);
        for t in &self.tokens {
            acc = acc.mul(ring, &BruhatWord::token_matrix(ring, t)?);
        }
        Ok(acc)
    }

    /// Drops `H(1)` and `U(0)`, merges adjacent `U` tokens and cancels
    /// adjacent `W`, `W^{-1}` pairs; the value is unchanged.
    pub fn simplify(&self, ring: &Ring) -> BruhatWord {
        let mut out: Vec<Token> = Vec::new();
        for t in &self.tokens {
            match t {
                Token::H(a) if ring.is_one(a) => continue,
                Token::U(b) if ring.is_zero(b) => continue,
                _ => {}
            }
            match (out.last(), t) {
                (Some(Token::W), Token::WInv) | (Some(Token::WInv), Token::W) => {
                    out.pop();
                }
                (Some(Token::U(b0)), Token::U(b1)) => {
                    let sum = ring.add(b0, b1);
                    out.pop();
                    if !ring.is_zero(&sum) {
                        out.push(Token::U(sum));
                    }
                }
                (Some(Token::H(a0)), Token::H(a1)) => {
                    // h_x h_y = h_{y x}
                    let prod = ring.mul(a1, a0);
                    out.pop();
                    if !ring.is_one(&prod) {
                        out.push(Token::H(prod));
                    }
                }
                _ => out.push(t.clone()),
            }
        }
        BruhatWord::new(out)
    }

    /// Dot-separated tokens, e.g. `U[[1,0],[0,1]] . W . H[[1,1],[0,1]] . Winv`;
    /// the empty word is `id`.
    pub fn format(&self, ring: &Ring) -> String {
        if self.tokens.is_empty() {
            return "id".into();
        }
        let lit = |x: &Elem| {
            let s = ring.format(x);
            if s.starts_with('[') || s.starts_with('(') {
                s
            } else {
                format!("({s})")
            }
        };
        self.tokens
            .iter()
            .map(|t| match t {
                Token::H(a) => format!("H{}", lit(a)),
                Token::U(b) => format!("U{}", lit(b)),
                Token::W => "W".into(),
                Token::WInv => "Winv".into(),
            })
            .collect::<Vec<_>>()
            .join(" . ")
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<BruhatWord> {
        let text = text.trim();
        if text.is_empty() || text == "id" {
            return Ok(BruhatWord::default());
        }
        let mut tokens = Vec::new();
        let mut offset = 0;
        for part in text.split('.') {
            let tok = part.trim();
            let pos = offset + part.len() - part.trim_start().len();
            offset += part.len() + 1;
            let err = |m: &str| Error::Parse { position: pos, message: m.into() };
            let t = if tok == "W" {
                Token::W
            } else if tok == "Winv" {
                Token::WInv
            } else if let Some(rest) = tok.strip_prefix('H') {
                let a = ring.parse_elem(rest).map_err(|_| err("bad H argument"))?;
                if !ring.is_unit(&a) {
                    return Err(Error::NotUnit);
                }
                Token::H(a)
            } else if let Some(rest) = tok.strip_prefix('U') {
                let b = ring.parse_elem(rest).map_err(|_| err("bad U argument"))?;
                if !ring.is_symmetric(&b) {
                    return Err(Error::NotSymmetric);
                }
                Token::U(b)
            } else {
                return Err(err("expected H, U, W or Winv"));
            };
            tokens.push(t);
        }
        Ok(BruhatWord::new(tokens))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::H(_) => f.write_str("H"),
            Token::U(_) => f.write_str("U"),
            Token::W => f.write_str("W"),
            Token::WInv => f.write_str("Winv"),
        }
    }
}

// ---- factorization ------------------------------------------------------------

/// `g = w^{-1} h_a^{-1} u_{-a* c} w u_{a^{-1} b}` for a unit `a`.
fn core_word(ring: &Ring, g: &BlockMatrix) -> Result<Vec<Token>> {
    let ainv = ring.try_invert(&g.a)?;
    Ok(vec![
        Token::WInv,
        Token::H(ainv.clone()),
        Token::U(ring.neg(&ring.mul(&ring.involute(&g.a), &g.c))),
        Token::W,
        Token::U(ring.mul(&ainv, &g.b)),
    ])
}

fn checked(ring: &Ring, g: &BlockMatrix, word: BruhatWord) -> Result<BruhatWord> {
    let word = word.simplify(ring);
    if word.eval(ring)? != *g {
        return Err(Error::VerificationFailed(format!("word {} does not evaluate to g", word.format(ring))));
    }
    Ok(word)
}

/// Factorization when some block is a unit; `b`, `c` or `d` units are moved
/// to the corner by multiplying with `w` on the right, the left or both.
pub fn factor_unit_corner(ring: &Ring, g: &BlockMatrix) -> Result<BruhatWord> {
    require_sl_star(ring, g)?;
    let w = bruhat_w(ring);
    let mut tokens = Vec::new();
    if ring.is_unit(&g.a) {
        tokens = core_word(ring, g)?;
    } else if ring.is_unit(&g.b) {
        // g w has corner -b
        tokens.extend(core_word(ring, &g.mul(ring, &w))?);
        tokens.push(Token::WInv);
    } else if ring.is_unit(&g.c) {
        // w g has corner c
        tokens.push(Token::WInv);
        tokens.extend(core_word(ring, &w.mul(ring, g))?);
    } else if ring.is_unit(&g.d) {
        // w g w has corner -d
        tokens.push(Token::WInv);
        tokens.extend(core_word(ring, &w.mul(ring, g).mul(ring, &w))?);
        tokens.push(Token::WInv);
    } else {
        return Err(Error::NoUnitEntry);
    }
    checked(ring, g, BruhatWord::new(tokens))
}

/// Factorization through one division step when no block is a unit:
/// `a = s c + r` gives `u_{-s} g` with unit corner `r`.
pub fn factor(ring: &Ring, g: &BlockMatrix) -> Result<BruhatWord> {
    require_sl_star(ring, g)?;
    if g.blocks().iter().any(|x| ring.is_unit(x)) {
        return factor_unit_corner(ring, g);
    }
    let chain = euclid::divide(ring, &g.a, &g.c)?;
    let s = chain.steps[0].s.clone();
    let rest = bruhat_u(ring, &ring.neg(&s))?.mul(ring, g);
    let mut tokens = vec![Token::U(s)];
    tokens.extend(factor_unit_corner(ring, &rest)?.tokens);
    checked(ring, g, BruhatWord::new(tokens))
}

/// Whether `factor` had to divide (no block of `g` is a unit).
pub fn needs_division(ring: &Ring, g: &BlockMatrix) -> bool {
    !g.blocks().iter().any(|x| ring.is_unit(x))
}

/// Searches symmetric `b1, b2, b3` with every block of
/// `u_{b1} w u_{b2} w^{-1} u_{b3}` a non-unit.
pub fn make_nonunit_example(ring: &Ring) -> Result<BruhatWord> {
    let syms = euclid::symmetric_elements(ring)?;
    let pool = &syms[..syms.len().min(64)];
    let w = bruhat_w(ring);
    let winv = bruhat_w_inv(ring);
    for b1 in pool {
        let x1 = bruhat_u(ring, b1)?.mul(ring, &w);
        for b2 in pool {
            let x2 = x1.mul(ring, &bruhat_u(ring, b2)?).mul(ring, &winv);
            for b3 in pool {
                let g = x2.mul(ring, &bruhat_u(ring, b3)?);
                if needs_division(ring, &g) {
                    return Ok(BruhatWord::new(vec![
                        Token::U(b1.clone()),
                        Token::W,
                        Token::U(b2.clone()),
                        Token::WInv,
                        Token::U(b3.clone()),
                    ]));
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!("no all-non-unit product among {} symmetric triples", pool.len().pow(3))))
}

// ---- finite groups ----------------------------------------------------------------

/// Result of a breadth-first closure.
#[derive(Debug, Clone)]
pub struct Closure {
    /// Elements in discovery order.
    pub elements: Vec<BlockMatrix>,
    pub generators: usize,
    /// Whether the frontier emptied (always true on success).
    pub exhausted: bool,
}

impl Closure {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// All Bruhat elements `h_a`, `u_b`, `w` of a finite ring, in enumeration order.
pub fn bruhat_generators(ring: &Ring) -> Result<Vec<BlockMatrix>> {
    let mut gens = Vec::new();
    for a in ring.units()? {
        gens.push(bruhat_h(ring, &a)?);
    }
    for b in euclid::symmetric_elements(ring)?.iter() {
        gens.push(bruhat_u(ring, b)?);
    }
    gens.push(bruhat_w(ring));
    gens.sort();
    gens.dedup();
    Ok(gens)
}

/// Breadth-first closure of the Bruhat elements under right multiplication.
pub fn closure_bfs(ring: &Ring, cap: usize) -> Result<Closure> {
    let gens = bruhat_generators(ring)?;
    let id = BlockMatrix::identity(ring);
    let mut seen: HashSet<BlockMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.mul(ring, g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(y.clone());
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(Closure { elements, generators: gens.len(), exhausted: true })
}

/// A completion `g` of the column `(a, c)`: `d = x*`, `b = -y*` from the
/// coprime certificate `x a + y c = 1`, then corrected by `u_t` with
/// `t = b* d` so that `b* d` becomes symmetric.
pub fn complete_column(ring: &Ring, a: &Elem, c: &Elem) -> Result<BlockMatrix> {
    let cert = euclid::check_coprime(ring, a, c)?;
    if !euclid::derive_symmetry(ring, a, c) {
        return Err(Error::SymmetryViolation);
    }
    let d0 = ring.involute(&cert.x);
    let b0 = ring.neg(&ring.involute(&cert.y));
    let t = ring.mul(&ring.involute(&b0), &d0);
    let b = ring.add(&b0, &ring.mul(a, &t));
    let d = ring.add(&d0, &ring.mul(c, &t));
    let g = BlockMatrix::new(a.clone(), b, c.clone(), d);
    require_sl_star(ring, &g).map_err(|_| Error::PostconditionViolation("column completion failed".into()))?;
    Ok(g)
}

/// Every element of `SL_*(2, A)` for a finite `A`: each admissible first
/// column `(a, c)` has the completions `g_0 u_t`, `t` symmetric.
pub fn enumerate_sl_star(ring: &Ring, cap: usize) -> Result<Vec<BlockMatrix>> {
    let elems = ring.enumerate()?;
    let syms = euclid::symmetric_elements(ring)?;
    let stars: Vec<Elem> = elems.iter().map(|x| ring.involute(x)).collect();
    let mut out = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for (j, c) in elems.iter().enumerate() {
            if ring.mul(&stars[i], c) != ring.mul(&stars[j], a) {
                continue;
            }
            let g0 = match complete_column(ring, a, c) {
                Ok(g) => g,
                Err(Error::NotCoprime) => continue,
                Err(e) => return Err(e),
            };
            for t in syms.iter() {
                if out.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(g0.mul(ring, &bruhat_u(ring, t)?));
            }
        }
    }
    Ok(out)
}

// ---- two-local isomorphism and isometries ------------------------------------------

/// The component ring `M(n, K)` of `A = M(n, K x K)` (or `K` for `A = K x K`).
pub fn gl2loc_component(ring: &Ring) -> Result<Ring> {
    let (n, s) = ring.flat_shape();
    if !s.is_product() {
        return Err(Error::Unsupported(format!("{ring} is not over a product with the flip")));
    }
    let k = s.child().unwrap().clone();
    if n == 1 && !ring.is_matrix() {
        return Ok(k);
    }
    Ring::new(&crate::ring::RingDescriptor::Matrix { n, base: Box::new(k.descriptor().clone()) })
}

/// `g_1 -> (g_1, J phi(g_1)^{-T} J^{-1})`, from `GL(2, M(n, K))` onto
/// `SL_*(2, M(n, K x K))`.
pub fn gl2loc_iso(ring: &Ring, g1: &BlockMatrix) -> Result<BlockMatrix> {
    let comp = gl2loc_component(ring)?;
    let (n, s) = ring.flat_shape();
    let k = s.child().unwrap();
    let m = 2 * n;
    // flat 2n x 2n matrix of g1 over K
    let mut big = vec![k.zero(); m * m];
    for (bi, blk) in g1.blocks().iter().enumerate() {
        let flat = comp.flatten(blk);
        let (r0, c0) = ((bi / 2) * n, (bi % 2) * n);
        for i in 0..n {
            for j in 0..n {
                big[(r0 + i) * m + c0 + j] = flat[i * n + j].clone();
            }
        }
    }
    let inv = linalg::inverse(k, &big, m).ok_or(Error::NotUnit)?;
    let phi_inv_t: Vec<Elem> = linalg::transpose(&inv, m, m).iter().map(|x| s.twist_map(x)).collect();
    let mut jm = vec![k.zero(); m * m];
    for i in 0..n {
        jm[i * m + n + i] = k.one();
        jm[(n + i) * m + i] = k.neg(&k.one());
    }
    let jinv: Vec<Elem> = jm.iter().map(|x| k.neg(x)).collect();
    let g2 = linalg::mat_mul(k, &linalg::mat_mul(k, &jm, &phi_inv_t, m, m, m), &jinv, m, m, m);
    let block = |bi: usize| {
        let (r0, c0) = ((bi / 2) * n, (bi % 2) * n);
        let flat: Vec<Elem> = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let p = (r0 + i) * m + c0 + j;
                s.join(&big[p], &g2[p])
            })
            .collect();
        ring.unflatten(&flat)
    };
    let g = BlockMatrix::new(block(0), block(1), block(2), block(3));
    require_sl_star(ring, &g).map_err(|e| Error::PostconditionViolation(format!("gl2loc image: {e}")))?;
    Ok(g)
}

/// `h(x, y) = x* J y = x_1* y_2 - x_2* y_1` on columns of `A^2`.
pub fn hermitian_form(ring: &Ring, x: &(Elem, Elem), y: &(Elem, Elem)) -> Elem {
    ring.sub(&ring.mul(&ring.involute(&x.0), &y.1), &ring.mul(&ring.involute(&x.1), &y.0))
}

fn apply(ring: &Ring, g: &BlockMatrix, x: &(Elem, Elem)) -> (Elem, Elem) {
    (
        ring.add(&ring.mul(&g.a, &x.0), &ring.mul(&g.b, &x.1)),
        ring.add(&ring.mul(&g.c, &x.0), &ring.mul(&g.d, &x.1)),
    )
}

/// Whether `h(g x, g y) = h(x, y)`.
pub fn hermitian_check(ring: &Ring, g: &BlockMatrix, x: &(Elem, Elem), y: &(Elem, Elem)) -> bool {
    hermitian_form(ring, &apply(ring, g, x), &apply(ring, g, y)) == hermitian_form(ring, x, y)
}

/// A pair of columns whose form `g` does not preserve, by random sampling.
pub fn find_isometry_violation<R: Rng + ?Sized>(
    ring: &Ring,
    g: &BlockMatrix,
    rng: &mut R,
    samples: usize,
) -> Option<((Elem, Elem), (Elem, Elem))> {
    (0..samples).find_map(|_| {
        let x = (euclid::random_bounded(ring, rng, 3), euclid::random_bounded(ring, rng, 3));
        let y = (euclid::random_bounded(ring, rng, 3), euclid::random_bounded(ring, rng, 3));
        (!hermitian_check(ring, g, &x, &y)).then_some((x, y))
    })
}
