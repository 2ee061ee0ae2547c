//! `K[X]_aug = K[X] ⊗ K[D]`: rational combinations of canonical closed
//! diagrams, with product, the two coproducts, counits, antipode, grading
//! and the inner product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::diagram::{connected_components, identity_reduce, star_product, ClosedDiagram, TypeSignature};
use crate::limits::factorial;
use crate::symgrp::Perm;
use crate::{fmt_q, Result, Q};

/// Basis key: an `Id`-free canonical diagram times `D^{d_power}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    diagram: ClosedDiagram,
    d_power: usize,
}

impl Monomial {
    pub fn new(d: &ClosedDiagram) -> Result<Monomial> {
        let (diagram, d_power) = identity_reduce(d)?;
        Ok(Monomial { diagram, d_power })
    }

    pub fn unit(sig: &TypeSignature) -> Monomial {
        Monomial { diagram: ClosedDiagram::unit(sig), d_power: 0 }
    }

    pub fn dimension_power(sig: &TypeSignature, k: usize) -> Monomial {
        Monomial { diagram: ClosedDiagram::unit(sig), d_power: k }
    }

    /// The `Id`-free part.
    pub fn diagram(&self) -> &ClosedDiagram {
        &self.diagram
    }

    pub fn d_power(&self) -> usize {
        self.d_power
    }

    pub fn multidegree(&self) -> &[usize] {
        self.diagram.multidegree()
    }

    pub fn is_unit(&self) -> bool {
        self.d_power == 0 && self.diagram.is_unit()
    }

    /// The diagram with its `D` factors written as `Id` loops.
    pub fn to_diagram(&self) -> ClosedDiagram {
        if self.d_power == 0 {
            return self.diagram.clone();
        }
        let n = self.diagram.strings();
        let mut word = self.diagram.sigma().word().to_vec();
        word.extend(n..n + self.d_power);
        ClosedDiagram::new(
            self.diagram.signature(),
            self.diagram.multidegree(),
            self.d_power,
            &Perm::from_word_unchecked(word),
        )
        .expect("adding identity loops keeps the diagram valid")
    }

    /// Connected components; `D` factors are listed as separate components.
    pub fn components(&self) -> Vec<Monomial> {
        let sig = self.diagram.signature();
        let mut out: Vec<Monomial> = connected_components(&self.diagram)
            .expect("an Id-free diagram has components")
            .into_iter()
            .map(|diagram| Monomial { diagram, d_power: 0 })
            .collect();
        out.extend(std::iter::repeat_n(Monomial::dimension_power(sig, 1), self.d_power));
        out
    }

    pub fn product(&self, other: &Monomial) -> Result<Monomial> {
        Ok(Monomial {
            diagram: star_product(&self.diagram, &other.diagram)?,
            d_power: self.d_power + other.d_power,
        })
    }

    /// `⟨m, m⟩ = |Aut(diagram)| · d_power!`.
    pub fn norm(&self) -> u128 {
        self.diagram.aut_order() * factorial(self.d_power)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_diagram())
    }
}

/// A finitely supported rational combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KXElement {
    sig: TypeSignature,
    terms: BTreeMap<Monomial, Q>,
}

impl KXElement {
    pub fn zero(sig: &TypeSignature) -> KXElement {
        KXElement { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn unit(sig: &TypeSignature) -> KXElement {
        KXElement::from_monomial(Monomial::unit(sig))
    }

    /// The dimension invariant `D`.
    pub fn dimension(sig: &TypeSignature) -> KXElement {
        KXElement::from_monomial(Monomial::dimension_power(sig, 1))
    }

    pub fn from_monomial(m: Monomial) -> KXElement {
        let sig = m.diagram.signature().clone();
        let mut terms = BTreeMap::new();
        terms.insert(m, Q::one());
        KXElement { sig, terms }
    }

    pub fn from_diagram(d: &ClosedDiagram) -> Result<KXElement> {
        Ok(KXElement::from_monomial(Monomial::new(d)?))
    }

    /// `Σ coeff · diagram`.
    pub fn from_terms<'a>(sig: &TypeSignature, terms: impl IntoIterator<Item = (Q, &'a ClosedDiagram)>) -> Result<KXElement> {
        let mut out = KXElement::zero(sig);
        for (c, d) in terms {
            sig.check_same(d.signature())?;
            out.add_term(Monomial::new(d)?, c);
        }
        Ok(out)
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Q) -> KXElement {
        if c.is_zero() {
            return KXElement::zero(&self.sig);
        }
        KXElement { sig: self.sig.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Product, bilinear in the disjoint union of diagrams.
    pub fn multiply(&self, other: &KXElement) -> Result<KXElement> {
        self.sig.check_same(&other.sig)?;
        let mut out = KXElement::zero(&self.sig);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.product(b)?, x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<KXElement> {
        (0..k).try_fold(KXElement::unit(&self.sig), |acc, _| acc.multiply(self))
    }

    /// `Δ` from direct sums: connected diagrams (and `D`) are primitive.
    pub fn coproduct_sum(&self) -> Result<TensorSquareElement> {
        let mut out = TensorSquareElement::zero(&self.sig);
        for (m, c) in &self.terms {
            for (l, r, k) in split_components(m)? {
                out.add_term(l, r, c * Q::from_integer(k.into()));
            }
        }
        Ok(out)
    }

    /// `Δ⊗` from tensor products: every basis diagram is group-like.
    pub fn coproduct_tensor(&self) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero(&self.sig);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), m.clone(), c.clone());
        }
        out
    }

    /// Counit of `Δ`: the coefficient of the empty diagram.
    pub fn counit_sum(&self) -> Q {
        self.coefficient(&Monomial::unit(&self.sig))
    }

    /// Counit of `Δ⊗`: evaluation at `(K,(1))`, i.e. the sum of coefficients.
    pub fn counit_tensor(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c)
    }

    /// `S(c_1⋯c_t) = (-1)^t c_1⋯c_t`.
    pub fn antipode(&self) -> KXElement {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let t = m.components().len();
                (m.clone(), if t % 2 == 0 { c.clone() } else { -c })
            })
            .collect();
        KXElement { sig: self.sig.clone(), terms }
    }

    /// `⟨·,·⟩`: monomials are orthogonal with `⟨m,m⟩ = |Aut(m)|`.
    pub fn inner_product(&self, other: &KXElement) -> Result<Q> {
        self.sig.check_same(&other.sig)?;
        let mut sum = Q::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                sum += c * d * Q::from_integer(m.norm().into());
            }
        }
        Ok(sum)
    }

    /// The part of box-degree `multidegree`.
    pub fn grade_project(&self, multidegree: &[usize]) -> KXElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.multidegree() == multidegree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        KXElement { sig: self.sig.clone(), terms }
    }

    /// `true` if every term has the given box-degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.multidegree());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    /// Rescales so that the first nonzero coefficient is 1.
    pub fn monic(&self) -> KXElement {
        match self.terms.values().next() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }
}

/// Every way to split the components of `m` into a left and a right factor,
/// with multiplicity: `Π_i Σ_k binom(a_i,k) c_i^k ⊗ c_i^{a_i-k}`.
fn split_components(m: &Monomial) -> Result<Vec<(Monomial, Monomial, u64)>> {
    let sig = m.diagram.signature();
    let comps = m.components();
    let mut groups: Vec<(Monomial, usize)> = Vec::new();
    for c in comps {
        match groups.last_mut() {
            Some((g, k)) if *g == c => *k += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut acc = vec![(Monomial::unit(sig), Monomial::unit(sig), 1u64)];
    for (c, a) in groups {
        let mut powers = vec![Monomial::unit(sig)];
        for _ in 0..a {
            let next = powers.last().expect("starts with the unit").product(&c)?;
            powers.push(next);
        }
        let mut next = Vec::with_capacity(acc.len() * (a + 1));
        for (l, r, k) in &acc {
            for i in 0..=a {
                next.push((l.product(&powers[i])?, r.product(&powers[a - i])?, k * binomial(a, i)));
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl fmt::Display for KXElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (c, m.to_string())))
    }
}

fn write_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (&'a Q, String)>) -> fmt::Result {
    let mut first = true;
    for (c, body) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        if abs.is_one() {
            write!(f, "{body}")?;
        } else {
            write!(f, "{}*{body}", fmt_q(&abs))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl Add for &KXElement {
    type Output = KXElement;

    fn add(self, other: &KXElement) -> KXElement {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &KXElement {
    type Output = KXElement;

    fn sub(self, other: &KXElement) -> KXElement {
        self + &(-other)
    }
}

impl Neg for &KXElement {
    type Output = KXElement;

    fn neg(self) -> KXElement {
        self.scale(&-Q::one())
    }
}

impl Mul for &KXElement {
    type Output = KXElement;

    fn mul(self, other: &KXElement) -> KXElement {
        self.multiply(other).expect("signature mismatch")
    }
}

/// An element of `K[X] ⊗ K[X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSquareElement {
    sig: TypeSignature,
    terms: BTreeMap<(Monomial, Monomial), Q>,
}

impl TensorSquareElement {
    pub fn zero(sig: &TypeSignature) -> TensorSquareElement {
        TensorSquareElement { sig: sig.clone(), terms: BTreeMap::new() }
    }

    /// `a ⊗ b`.
    pub fn pure(a: &KXElement, b: &KXElement) -> Result<TensorSquareElement> {
        a.sig.check_same(&b.sig)?;
        let mut out = TensorSquareElement::zero(&a.sig);
        for (x, c) in &a.terms {
            for (y, d) in &b.terms {
                out.add_term(x.clone(), y.clone(), c * d);
            }
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, a: Monomial, b: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &TensorSquareElement) -> TensorSquareElement {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn multiply(&self, other: &TensorSquareElement) -> Result<TensorSquareElement> {
        self.sig.check_same(&other.sig)?;
        let mut out = TensorSquareElement::zero(&self.sig);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                out.add_term(a.product(c)?, b.product(d)?, x * y);
            }
        }
        Ok(out)
    }

    /// `⟨a⊗b, c⊗d⟩ = ⟨a,c⟩⟨b,d⟩`.
    pub fn inner_product(&self, other: &TensorSquareElement) -> Result<Q> {
        self.sig.check_same(&other.sig)?;
        let mut sum = Q::zero();
        for (key, c) in &self.terms {
            if let Some(d) = other.terms.get(key) {
                sum += c * d * Q::from_integer((key.0.norm() * key.1.norm()).into());
            }
        }
        Ok(sum)
    }

    /// `m ∘ (f ⊗ g)`.
    pub fn contract_with(
        &self,
        f: impl Fn(&KXElement) -> KXElement,
        g: impl Fn(&KXElement) -> KXElement,
    ) -> KXElement {
        let mut out = KXElement::zero(&self.sig);
        for ((a, b), c) in &self.terms {
            let l = f(&KXElement::from_monomial(a.clone()));
            let r = g(&KXElement::from_monomial(b.clone()));
            out = &out + &(&l * &r).scale(c);
        }
        out
    }

    /// Applies `f ⊗ g` where both are linear maps to `K[X]`.
    pub fn map(&self, f: impl Fn(&KXElement) -> KXElement, g: impl Fn(&KXElement) -> KXElement) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero(&self.sig);
        for ((a, b), c) in &self.terms {
            let l = f(&KXElement::from_monomial(a.clone()));
            let r = g(&KXElement::from_monomial(b.clone()));
            out = out.add(&TensorSquareElement::pure(&l, &r).expect("same signature").scale(c));
        }
        out
    }

    pub fn scale(&self, c: &Q) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero(&self.sig);
        for ((a, b), x) in &self.terms {
            out.add_term(a.clone(), b.clone(), x * c);
        }
        out
    }
}

impl fmt::Display for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|((a, b), c)| (c, format!("{a} ⊗ {b}"))))
    }
}
