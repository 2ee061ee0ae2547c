//! Text formats: rationals, permutations, partitions, diagrams, elements,
//! and theory files.
//!
//! Diagram literals never carry the signature; it comes from the caller.
//!
//! * closed: `p(σ; n_1,…,n_r)` or `p(σ; n_1,…,n_r; m)`, e.g. `p((1 2); 2)`
//! * open: `c(j; σ; τ; n_1,…,n_r; m)`
//! * element: `3/2*p((1 2); 2) - p(; 0) + D`
//!
//! Permutations are 1-based cycles `(1 3)(2 4)`, `()` or empty for the
//! identity, or one-line `[2,1,3]`.

use crate::axioms::{Axiom, Theory};
use crate::diagram::{canonicalize_closed, ClosedDiagram, OpenDiagram, TypeSignature};
use crate::kx::KXElement;
use crate::reptheory::Partition;
use crate::symgrp::Perm;
use crate::{Error, Result, Q};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// `3`, `-2/5`.
pub fn parse_rational(s: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|e| perr(format!("rational {s:?}: {e}")))
}

pub fn parse_partition(s: &str) -> Result<Partition> {
    s.parse()
}

/// A permutation of degree `n` in cycle or one-line notation.
pub fn parse_perm(s: &str, n: usize) -> Result<Perm> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Perm::identity(n));
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let images = numbers(inner)?;
        if images.len() != n {
            return Err(perr(format!("one-line permutation {s} has degree {}, expected {n}", images.len())));
        }
        return Perm::from_one_line(&images).map_err(|e| perr(e.detail()));
    }
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| perr(format!("expected '(' in permutation {s:?}")))?;
        let close = body.find(')').ok_or_else(|| perr(format!("unclosed cycle in {s:?}")))?;
        let cycle = numbers(&body[..close])?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Perm::from_cycles(n, &cycles).map_err(|e| perr(e.detail()))
}

fn numbers(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| perr(format!("{t:?}: {e}"))))
        .collect()
}

/// Splits on `sep` at parenthesis/bracket depth 0.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn call_args(s: &str, head: char) -> Result<Vec<&str>> {
    let s = s.trim();
    let inner = s
        .strip_prefix(head)
        .map(str::trim_start)
        .and_then(|t| t.strip_prefix('('))
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(format!("expected {head}(…), got {s:?}")))?;
    Ok(split_top(inner, ';').into_iter().map(str::trim).collect())
}

fn parse_multidegree(s: &str, sig: &TypeSignature) -> Result<Vec<usize>> {
    let md = numbers(s)?;
    if md.len() != sig.len() {
        return Err(perr(format!("multidegree {s:?} has {} entries, signature {sig} needs {}", md.len(), sig.len())));
    }
    Ok(md)
}

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(format!("bad {what} {s:?}")))
}

/// `p(σ; n_1,…,n_r[; m])`, canonicalized.
pub fn parse_closed(sig: &TypeSignature, s: &str) -> Result<ClosedDiagram> {
    let args = call_args(s, 'p')?;
    if !(2..=3).contains(&args.len()) {
        return Err(perr(format!("closed diagram needs 2 or 3 fields: {s:?}")));
    }
    let md = parse_multidegree(args[1], sig)?;
    let m = match args.get(2) {
        Some(t) => parse_count(t, "identity count")?,
        None => 0,
    };
    let (o, i) = sig.string_counts(&md);
    if o != i {
        return Err(Error::Unbalanced { outputs: o, inputs: i });
    }
    let sigma = parse_perm(args[0], o + m)?;
    canonicalize_closed(sig, &md, m, &sigma)
}

/// `c(j; σ; τ; n_1,…,n_r; m)`.
pub fn parse_open(sig: &TypeSignature, s: &str) -> Result<OpenDiagram> {
    let args = call_args(s, 'c')?;
    if args.len() != 5 {
        return Err(perr(format!("open diagram needs 5 fields: {s:?}")));
    }
    let j = parse_count(args[0], "contraction count")?;
    let md = parse_multidegree(args[3], sig)?;
    let m = parse_count(args[4], "identity count")?;
    let (o, i) = sig.string_counts(&md);
    let sigma = parse_perm(args[1], o + m)?;
    let tau = parse_perm(args[2], i + m)?;
    OpenDiagram::new(sig, j, sigma, tau, &md, m)
}

/// Splits a signed sum into `(sign, term)` pieces.
fn signed_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    for (k, &(i, c)) in bytes.iter().enumerate() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' | '-' if depth == 0 => {
                // a sign directly after '*' or '/' belongs to the coefficient
                let prev = bytes[..k].iter().rev().find(|(_, c)| !c.is_whitespace()).map(|&(_, c)| c);
                if matches!(prev, Some('*') | Some('/')) {
                    continue;
                }
                let piece = s[start..i].trim();
                if !piece.is_empty() {
                    out.push((negative, piece));
                } else if prev.is_some() && k > 0 && start != 0 {
                    return Err(perr(format!("empty term in {s:?}")));
                }
                negative = c == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if last.is_empty() {
        if !out.is_empty() || negative {
            return Err(perr(format!("dangling sign in {s:?}")));
        }
    } else {
        out.push((negative, last));
    }
    Ok(out)
}

/// Splits `coeff*body` into the coefficient and the body.
fn coefficient_and_body(term: &str) -> Result<(Q, &str)> {
    match split_top(term, '*').as_slice() {
        [body] => Ok((Q::from_integer(1.into()), body.trim())),
        [c, body] => Ok((parse_rational(c)?, body.trim())),
        _ => Err(perr(format!("term {term:?} has more than one '*'"))),
    }
}

fn is_number(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_digit())
}

/// A rational combination of closed diagrams; `D` is the dimension
/// invariant, a bare number is a multiple of the unit, `0` is zero.
pub fn parse_element(sig: &TypeSignature, s: &str) -> Result<KXElement> {
    let mut out = KXElement::zero(sig);
    if s.trim().is_empty() {
        return Err(perr("empty element"));
    }
    for (negative, term) in signed_terms(s)? {
        // a product of numbers, diagrams and `D`
        let mut value = KXElement::unit(sig);
        for factor in split_top(term, '*').into_iter().map(str::trim) {
            let f = match factor {
                f if is_number(f) => KXElement::unit(sig).scale(&parse_rational(f)?),
                "D" => KXElement::dimension(sig),
                f if f.starts_with('p') => KXElement::from_diagram(&parse_closed(sig, f)?)?,
                f => return Err(perr(format!("unknown factor {f:?}"))),
            };
            value = value.multiply(&f)?;
        }
        if negative {
            value = -&value;
        }
        out = &out + &value;
    }
    Ok(out)
}

/// A rational combination of open diagrams of one degree.
pub fn parse_open_combination(sig: &TypeSignature, s: &str) -> Result<Vec<(Q, OpenDiagram)>> {
    let mut out = Vec::new();
    for (negative, term) in signed_terms(s)? {
        let (mut c, body) = coefficient_and_body(term)?;
        if negative {
            c = -c;
        }
        out.push((c, parse_open(sig, body)?));
    }
    Ok(out)
}

/// Theory file: `signature …` (optional when a signature is supplied),
/// then `axiom p q` blocks of `term coeff c(…)` lines.
pub fn parse_theory(sig: Option<&TypeSignature>, text: &str) -> Result<Theory> {
    let mut sig = sig.cloned();
    let mut axioms: Vec<Axiom> = Vec::new();
    let mut current: Option<((usize, usize), Vec<(Q, OpenDiagram)>)> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| perr(format!("line {}: {}", ln + 1, e));
        if let Some(rest) = line.strip_prefix("signature") {
            let s: TypeSignature = rest.parse().map_err(at)?;
            if let Some(given) = &sig {
                given.check_same(&s).map_err(at)?;
            }
            sig = Some(s);
        } else if let Some(rest) = line.strip_prefix("axiom") {
            if let Some((deg, terms)) = current.take() {
                axioms.push(Axiom::new(deg, terms)?);
            }
            let nums = numbers(rest).map_err(at)?;
            let [p, q] = nums[..] else {
                return Err(perr(format!("line {}: expected `axiom p q`", ln + 1)));
            };
            current = Some(((p, q), Vec::new()));
        } else if let Some(rest) = line.strip_prefix("term") {
            let s = sig.as_ref().ok_or_else(|| perr(format!("line {}: term before signature", ln + 1)))?;
            let (_, terms) = current
                .as_mut()
                .ok_or_else(|| perr(format!("line {}: term outside an axiom", ln + 1)))?;
            let rest = rest.trim();
            let split = rest.find(char::is_whitespace).ok_or_else(|| perr(format!("line {}: expected `term coeff c(…)`", ln + 1)))?;
            let c = parse_rational(&rest[..split]).map_err(at)?;
            terms.push((c, parse_open(s, rest[split..].trim()).map_err(at)?));
        } else {
            return Err(perr(format!("line {}: unrecognized {line:?}", ln + 1)));
        }
    }
    if let Some((deg, terms)) = current.take() {
        axioms.push(Axiom::new(deg, terms)?);
    }
    let sig = sig.ok_or_else(|| perr("theory without a signature"))?;
    Theory::new(&sig, axioms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q_int;

    fn endo() -> TypeSignature {
        TypeSignature::new(vec![(1, 1)]).unwrap()
    }

    #[test]
    fn permutations() {
        assert_eq!(parse_perm("(1 3)(2 5 4)", 5).unwrap().to_string(), "(1 3)(2 5 4)");
        assert_eq!(parse_perm("[2,1,3]", 3).unwrap(), parse_perm("(1 2)", 3).unwrap());
        assert!(parse_perm("()", 4).unwrap().is_identity());
        assert!(parse_perm("", 0).unwrap().is_identity());
        assert!(parse_perm("(1 5)", 3).is_err());
        assert!(parse_perm("[1,2]", 3).is_err());
        assert!(parse_perm("1 2", 2).is_err());
    }

    #[test]
    fn closed_literals_round_trip() {
        let s = endo();
        for text in ["p((1 2); 2)", "p(; 0)", "p((1 2 3); 3)", "p((1 2); 1; 1)"] {
            let d = parse_closed(&s, text).unwrap();
            assert_eq!(parse_closed(&s, &d.to_string()).unwrap(), d);
        }
        assert!(parse_closed(&TypeSignature::new(vec![(1, 2)]).unwrap(), "p(; 1)").is_err());
        assert!(parse_closed(&s, "p((1 2); 2, 1)").is_err());
    }

    #[test]
    fn elements() {
        let s = endo();
        let e = parse_element(&s, "3/2*p((1 2); 2) + p(; 0) - 2*D").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(parse_element(&s, &e.to_string()).unwrap(), e);
        assert!(parse_element(&s, "0").unwrap().is_zero());
        assert_eq!(parse_element(&s, "-1/2*p(; 1)").unwrap(), parse_element(&s, "p(;1)").unwrap().scale(&Q::new((-1).into(), 2.into())));
        assert_eq!(parse_element(&s, "p(; 1) * 2").unwrap(), parse_element(&s, "2*p(;1)").unwrap());
        assert_eq!(parse_element(&s, "p(; 1)*p(; 1)").unwrap().len(), 1);
        assert!(parse_element(&s, "p(; 1) * q").is_err());
        assert!(parse_element(&s, "p(; 1) +").is_err());
        assert_eq!(parse_element(&s, "2").unwrap(), KXElement::unit(&s).scale(&q_int(2)));
    }

    #[test]
    fn open_literals() {
        let s = TypeSignature::new(vec![(2, 1)]).unwrap();
        let o = parse_open(&s, "c(1; (1 2); ; 2; 0)").unwrap();
        assert_eq!(o.degree(), (3, 1));
        assert_eq!(parse_open(&s, &o.to_string()).unwrap(), o);
        let comb = parse_open_combination(&s, "c(0; ; ; 1; 0) - 2*c(0; (1 2); ; 1; 0)").unwrap();
        assert_eq!(comb.len(), 2);
        assert_eq!(comb[1].0, q_int(-2));
    }
}
