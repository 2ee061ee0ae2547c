//! Theories as linear combinations of open diagrams, models, and the ideal
//! of closed relations an axiom generates.
//!
//! An axiom of degree `(p,q)` is a combination `Σ c_k x_k` of open diagrams
//! of that degree; a structure is a model when the combination realizes to
//! the zero tensor. Closing an axiom against any open diagram `y` of degree
//! `(q,p)` gives a closed relation `pair(x, y)` that vanishes on every
//! model.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::diagram::{pair_open, DiagramBuilder, OpenDiagram, Sink, Source, TypeSignature};
use crate::eval::{realize_open, RationalTensor, Structure};
use crate::kx::KXElement;
use crate::symgrp::all_perms;
use crate::{limits, q_int, Error, Result, Q};

/// A homogeneous combination of open diagrams of degree `(p,q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    degree: (usize, usize),
    terms: Vec<(Q, OpenDiagram)>,
}

impl Axiom {
    pub fn new(degree: (usize, usize), terms: Vec<(Q, OpenDiagram)>) -> Result<Axiom> {
        if let Some((_, d)) = terms.iter().find(|(_, d)| d.degree() != degree) {
            return Err(Error::DegreeMismatch(format!("term {d} has degree {:?}, axiom {:?}", d.degree(), degree)));
        }
        if let Some(first) = terms.first() {
            for (_, d) in &terms[1..] {
                first.1.signature().check_same(d.signature())?;
            }
        }
        Ok(Axiom { degree, terms })
    }

    pub fn degree(&self) -> (usize, usize) {
        self.degree
    }

    pub fn terms(&self) -> &[(Q, OpenDiagram)] {
        &self.terms
    }

    /// `Σ c_k realize(x_k)`.
    pub fn realize(&self, s: &Structure) -> Result<RationalTensor> {
        let (p, q) = self.degree;
        let mut acc = RationalTensor::zeros(p, q, s.dim())?;
        for (c, d) in &self.terms {
            let t = realize_open(d, s)?;
            acc = add_tensors(&acc, &t.scale(c));
        }
        Ok(acc)
    }
}

fn add_tensors(a: &RationalTensor, b: &RationalTensor) -> RationalTensor {
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect();
    RationalTensor::new(a.out_arity(), a.in_arity(), a.dim(), data).expect("same shape")
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "axiom {} {}", self.degree.0, self.degree.1)?;
        for (c, d) in &self.terms {
            writeln!(f, "term {} {d}", crate::fmt_q(c))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    sig: TypeSignature,
    axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(sig: &TypeSignature, axioms: Vec<Axiom>) -> Result<Theory> {
        for a in &axioms {
            for (_, d) in &a.terms {
                sig.check_same(d.signature())?;
            }
        }
        Ok(Theory { sig: sig.clone(), axioms })
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }
}

/// Theory file form, readable by [`crate::parse::parse_theory`].
impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat: Vec<String> = self.sig.pairs().iter().map(|(p, q)| format!("{p} {q}")).collect();
        writeln!(f, "signature {}", flat.join(" "))?;
        for a in &self.axioms {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Every axiom realizes to the zero tensor on `s`.
pub fn is_model(t: &Theory, s: &Structure) -> Result<bool> {
    t.sig.check_same(s.signature())?;
    for a in &t.axioms {
        if !a.realize(s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `pair(Σ c_k x_k, y) = Σ c_k pair(x_k, y)`.
pub fn pair(x: &[(Q, OpenDiagram)], y: &OpenDiagram) -> Result<KXElement> {
    let mut out = KXElement::zero(y.signature());
    for (c, d) in x {
        out = &out + &KXElement::from_diagram(&pair_open(d, y)?)?.scale(c);
    }
    Ok(out)
}

/// Open diagrams of degree `(p,q)` with at most `max_boxes` tensor boxes and
/// only pass-through `Id` boxes, one per equivalence class.
pub fn open_diagrams_upto(sig: &TypeSignature, degree: (usize, usize), max_boxes: usize) -> Result<Vec<OpenDiagram>> {
    let (p, q) = degree;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for md in multidegrees_upto(sig.len(), max_boxes) {
        let (o, i) = sig.string_counts(&md);
        for m in 0..=p.min(q) {
            let (o, i) = (o + m, i + m);
            if o < p || i < q || o - p != i - q {
                continue;
            }
            let j = o - p;
            limits::check_enumeration(limits::factorial(o).saturating_mul(limits::factorial(i)))?;
            let (outs, ins) = (all_perms(o)?, all_perms(i)?);
            for sigma in &outs {
                for tau in &ins {
                    let d = OpenDiagram::new(sig, j, sigma.clone(), tau.clone(), &md, m)?;
                    let n = d.normalize()?;
                    // Id boxes that survive reduction but are not pass-throughs are loops
                    if n.id_boxes() != m {
                        continue;
                    }
                    if seen.insert(n.clone()) {
                        out.push(n);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn multidegrees_upto(r: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                let used: usize = prefix.iter().sum();
                (0..=max - used).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// `pair(a, y)` for every axiom `a` and every complement `y` with at most
/// `size_bound` tensor boxes; nonzero, made monic, deduplicated.
pub fn ideal_generators_upto(t: &Theory, size_bound: usize) -> Result<Vec<KXElement>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in &t.axioms {
        let (p, q) = a.degree;
        for y in open_diagrams_upto(&t.sig, (q, p), size_bound)? {
            let g = pair(&a.terms, &y)?;
            if g.is_zero() {
                continue;
            }
            let g = g.monic();
            if seen.insert(g.to_string()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Type of unital algebras: a product `W⊗W → W` and a unit `K → W`.
pub fn algebra_signature() -> TypeSignature {
    TypeSignature::new(vec![(1, 2), (1, 0)]).expect("valid")
}

fn one() -> Q {
    Q::one()
}

/// `m(m(a,b),c) - m(a,m(b,c))`, degree `(1,3)`.
pub fn associativity(sig: &TypeSignature, product: usize) -> Result<Axiom> {
    let mut left = DiagramBuilder::new(sig);
    let (u, v) = (left.tensor(product), left.tensor(product));
    left.connect(Source::FreeIn(0), Sink::BoxIn(u, 0))
        .connect(Source::FreeIn(1), Sink::BoxIn(u, 1))
        .connect(Source::BoxOut(u, 0), Sink::BoxIn(v, 0))
        .connect(Source::FreeIn(2), Sink::BoxIn(v, 1))
        .connect(Source::BoxOut(v, 0), Sink::FreeOut(0));
    let mut right = DiagramBuilder::new(sig);
    let (u, v) = (right.tensor(product), right.tensor(product));
    right
        .connect(Source::FreeIn(1), Sink::BoxIn(u, 0))
        .connect(Source::FreeIn(2), Sink::BoxIn(u, 1))
        .connect(Source::FreeIn(0), Sink::BoxIn(v, 0))
        .connect(Source::BoxOut(u, 0), Sink::BoxIn(v, 1))
        .connect(Source::BoxOut(v, 0), Sink::FreeOut(0));
    Axiom::new((1, 3), vec![(one(), left.build()?), (-one(), right.build()?)])
}

/// `m(e, a) - a`, degree `(1,1)`.
pub fn left_unit(sig: &TypeSignature, product: usize, unit: usize) -> Result<Axiom> {
    let mut b = DiagramBuilder::new(sig);
    let (m, e) = (b.tensor(product), b.tensor(unit));
    b.connect(Source::BoxOut(e, 0), Sink::BoxIn(m, 0))
        .connect(Source::FreeIn(0), Sink::BoxIn(m, 1))
        .connect(Source::BoxOut(m, 0), Sink::FreeOut(0));
    let id = OpenDiagram::single_box(sig, crate::diagram::BoxLabel::Id)?;
    Axiom::new((1, 1), vec![(one(), b.build()?), (-one(), id)])
}

/// `m(a,b) - m(b,a)`, degree `(1,2)`.
pub fn commutativity(sig: &TypeSignature, product: usize) -> Result<Axiom> {
    let build = |first: usize| -> Result<OpenDiagram> {
        let mut b = DiagramBuilder::new(sig);
        let m = b.tensor(product);
        b.connect(Source::FreeIn(first), Sink::BoxIn(m, 0))
            .connect(Source::FreeIn(1 - first), Sink::BoxIn(m, 1))
            .connect(Source::BoxOut(m, 0), Sink::FreeOut(0));
        b.build()
    };
    Axiom::new((1, 2), vec![(one(), build(0)?), (-one(), build(1)?)])
}

/// Associative unital algebras over [`algebra_signature`].
pub fn unital_associative_theory() -> Result<Theory> {
    let sig = algebra_signature();
    Theory::new(&sig, vec![associativity(&sig, 0)?, left_unit(&sig, 0, 1)?])
}

/// Commutative associative unital algebras.
pub fn commutative_theory() -> Result<Theory> {
    let sig = algebra_signature();
    Theory::new(&sig, vec![associativity(&sig, 0)?, left_unit(&sig, 0, 1)?, commutativity(&sig, 0)?])
}

/// `M_n(K)` with basis `E_{ij} ↦ n·i + j`: `x[c; a, b]` is the coefficient
/// of `e_c` in `e_a e_b`, and the unit is the identity matrix.
pub fn matrix_algebra(n: usize) -> Result<Structure> {
    let d = n * n;
    let mut m = RationalTensor::zeros(1, 2, d)?;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                m.set(&[n * i + l, n * i + j, n * j + l], q_int(1));
            }
        }
    }
    let mut e = RationalTensor::zeros(1, 0, d)?;
    for i in 0..n {
        e.set(&[n * i + i], q_int(1));
    }
    Structure::new(&algebra_signature(), d, vec![m, e])
}

/// `K^n` with the coordinatewise product.
pub fn diagonal_algebra(n: usize) -> Result<Structure> {
    let mut m = RationalTensor::zeros(1, 2, n)?;
    let mut e = RationalTensor::zeros(1, 0, n)?;
    for i in 0..n {
        m.set(&[i, i, i], q_int(1));
        e.set(&[i], q_int(1));
    }
    Structure::new(&algebra_signature(), n, vec![m, e])
}

/// `s` with one entry of tensor `which` increased by 1.
pub fn perturb(s: &Structure, which: usize, index: &[usize]) -> Result<Structure> {
    let mut tensors = s.tensors().to_vec();
    let t = tensors
        .get_mut(which)
        .ok_or_else(|| Error::Invalid(format!("no tensor {}", which + 1)))?;
    let x = t.get(index) + Q::one();
    t.set(index, x);
    Structure::new(s.signature(), s.dim(), tensors)
}

/// Whether every generator evaluates to zero on `s`.
pub fn all_vanish(gens: &[KXElement], s: &Structure) -> Result<bool> {
    for g in gens {
        if !crate::eval::evaluate_element(g, s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{canonicalize_closed, BoxLabel};
    use crate::eval::evaluate_element;
    use crate::symgrp::Perm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_algebra_is_a_model() {
        let t = unital_associative_theory().unwrap();
        let m2 = matrix_algebra(2).unwrap();
        assert!(is_model(&t, &m2).unwrap());
        let bad = perturb(&m2, 0, &[0, 0, 0]).unwrap();
        assert!(!t.axioms()[0].realize(&bad).unwrap().is_zero());
        assert!(!t.axioms()[1].realize(&bad).unwrap().is_zero());
        assert!(!is_model(&commutative_theory().unwrap(), &m2).unwrap());
        assert!(is_model(&commutative_theory().unwrap(), &diagonal_algebra(3).unwrap()).unwrap());
        assert!(is_model(&Theory::new(&algebra_signature(), vec![]).unwrap(), &bad).unwrap());
    }

    #[test]
    fn pairing_examples() {
        let sig = TypeSignature::new(vec![(1, 1)]).unwrap();
        let x = OpenDiagram::single_box(&sig, BoxLabel::Tensor(0)).unwrap();
        let id = OpenDiagram::single_box(&sig, BoxLabel::Id).unwrap();
        let p1 = canonicalize_closed(&sig, &[1], 0, &Perm::identity(1)).unwrap();
        assert_eq!(pair(&[(q_int(1), x.clone())], &id).unwrap(), KXElement::from_diagram(&p1).unwrap());
        assert!(pair(&[], &id).unwrap().is_zero());
        assert!(pair(&[(q_int(1), x.clone())], &OpenDiagram::empty(&sig)).is_err());
    }

    #[test]
    fn commuting_square() {
        let sig = algebra_signature();
        let t = commutative_theory().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in t.axioms() {
            let (p, q) = a.degree();
            for y in open_diagrams_upto(&sig, (q, p), 1).unwrap().iter().take(6) {
                let s = Structure::random_with(&sig, 2, &mut rng).unwrap();
                let lhs = evaluate_element(&pair(a.terms(), y).unwrap(), &s).unwrap();
                let rhs = a.realize(&s).unwrap().pairing(&realize_open(y, &s).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn generators_vanish_on_models() {
        let t = unital_associative_theory().unwrap();
        let gens = ideal_generators_upto(&t, 1).unwrap();
        assert!(!gens.is_empty());
        let m2 = matrix_algebra(2).unwrap();
        assert!(all_vanish(&gens, &m2).unwrap());
        let bad = perturb(&m2, 0, &[0, 0, 0]).unwrap();
        assert!(!all_vanish(&gens, &bad).unwrap());
        let c = commutative_theory().unwrap();
        assert!(all_vanish(&ideal_generators_upto(&c, 1).unwrap(), &diagonal_algebra(2).unwrap()).unwrap());
    }

    #[test]
    fn complements_are_distinct_classes() {
        let sig = algebra_signature();
        let ys = open_diagrams_upto(&sig, (1, 1), 1).unwrap();
        // Id, and x_1 with its output fed back (two ways) or closed by the unit
        assert!(ys.iter().any(|y| y.id_boxes() == 1 && y.multidegree() == [0, 0]));
        let normals: BTreeSet<_> = ys.iter().map(|y| y.normalize().unwrap()).collect();
        assert_eq!(normals.len(), ys.len());
    }

    #[test]
    fn theory_text_round_trip() {
        let t = commutative_theory().unwrap();
        let back = crate::parse::parse_theory(None, &t.to_string()).unwrap();
        let m2 = matrix_algebra(2).unwrap();
        for (a, b) in t.axioms().iter().zip(back.axioms()) {
            assert_eq!(a.realize(&m2).unwrap(), b.realize(&m2).unwrap());
        }
    }
}
