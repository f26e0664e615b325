//! `{2: [[...]], 3: [[...]], tail: [[...]]}`.

use std::collections::BTreeMap;

use super::{place_text, AdelicBase, AdelicMatrix, Place};
use crate::error::{Error, Result};

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// Top-level comma separated items of `body`, with their byte offsets.
fn split_items(body: &str, offset: usize) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(offset + i, "unbalanced bracket"));
                }
            }
            ',' if depth == 0 => {
                out.push((offset + start, &body[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(perr(offset + body.len(), "unbalanced bracket"));
    }
    if !body[start..].trim().is_empty() || !out.is_empty() {
        out.push((offset + start, &body[start..]));
    }
    Ok(out)
}

/// A prime, a monic irreducible polynomial or `inf`.
pub fn parse_place(base: &AdelicBase, key: &str) -> Result<Place> {
    parse_place_at(base, key, 0)
}

fn parse_place_at(base: &AdelicBase, key: &str, pos: usize) -> Result<Place> {
    if key == "inf" {
        return Ok(Place::Infinity);
    }
    let place = if let Some(pr) = base.coefficient_field() {
        let x = pr.parse_elem(key).map_err(|_| perr(pos, format!("bad place {key}")))?;
        Place::Poly(pr.poly_codes(&x))
    } else {
        Place::Prime(key.parse().map_err(|_| perr(pos, format!("bad place {key}")))?)
    };
    base.check_place(&place)?;
    Ok(place)
}

/// Parses an adelic literal of `n x n` matrices over `base`. A missing tail
/// is the identity.
pub fn parse_adelic(base: &AdelicBase, n: usize, text: &str) -> Result<AdelicMatrix> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let body = t
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| perr(lead, "expected {...}"))?;
    let g = base.global_ring(n);
    let mut components = BTreeMap::new();
    let mut tail = None;
    for (pos, item) in split_items(body, lead + 1)? {
        let (key, value) = item.split_once(':').ok_or_else(|| perr(pos, "expected place: matrix"))?;
        let key = key.trim();
        if key == "tail" {
            if tail.is_some() {
                return Err(perr(pos, "duplicate tail"));
            }
            tail = Some(g.parse_elem(value.trim())?);
            continue;
        }
        let place = parse_place_at(base, key, pos)?;
        let x = base.place_ring(&place, n).parse_elem(value.trim())?;
        if components.insert(place, x).is_some() {
            return Err(perr(pos, format!("duplicate place {key}")));
        }
    }
    AdelicMatrix::new(base.clone(), n, components, tail.unwrap_or_else(|| g.one()))
}

pub fn format_adelic(x: &AdelicMatrix) -> String {
    let mut parts: Vec<String> = x
        .components
        .iter()
        .map(|(p, v)| format!("{}: {}", place_text(&x.base, p), x.place_ring(p).format(v)))
        .collect();
    parts.push(format!("tail: {}", x.global_ring().format(&x.tail)));
    format!("{{{}}}", parts.join(", "))
}
