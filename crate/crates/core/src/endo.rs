//! The single-endomorphism case, type `((1,1))`.
//!
//! Closed diagrams with one box type are the power sums
//! `p_μ = Π Tr(T^{μ_i})`, indexed by cycle types. The Schur-type basis is
//! `{λ} = Σ_μ χ_λ(μ)/z_μ · p_μ`; it is orthonormal, multiplies by
//! Littlewood–Richardson coefficients, and `I_d` is spanned by the `{λ}`
//! with more than `d` rows.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::diagram::{canonicalize_closed, TypeSignature};
use crate::kx::{KXElement, Monomial};
use crate::reptheory::{char_value, list_partitions, lr_coefficient, Partition};
use crate::symgrp::Perm;
use crate::{fmt_q, Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    PowerSum,
    Schur,
}

/// A finitely supported combination of `p_μ` or of `{λ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymElement {
    basis: Basis,
    terms: BTreeMap<Partition, Q>,
}

impl SymElement {
    pub fn zero(basis: Basis) -> SymElement {
        SymElement { basis, terms: BTreeMap::new() }
    }

    pub fn one(basis: Basis) -> SymElement {
        SymElement::basis_element(basis, Partition::empty())
    }

    pub fn basis_element(basis: Basis, p: Partition) -> SymElement {
        let mut terms = BTreeMap::new();
        terms.insert(p, Q::one());
        SymElement { basis, terms }
    }

    pub fn power_sum(mu: &Partition) -> SymElement {
        SymElement::basis_element(Basis::PowerSum, mu.clone())
    }

    pub fn schur(lambda: &Partition) -> SymElement {
        SymElement::basis_element(Basis::Schur, lambda.clone())
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Partition, Q)>) -> SymElement {
        let mut out = SymElement::zero(basis);
        for (p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Q> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Partition) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &SymElement) -> SymElement {
        let mut out = self.clone();
        for (p, c) in &other.convert(self.basis).terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> SymElement {
        SymElement::from_terms(self.basis, self.terms.iter().map(|(p, x)| (p.clone(), x * c)))
    }

    pub fn sub(&self, other: &SymElement) -> SymElement {
        self.add(&other.scale(&-Q::one()))
    }

    /// The same element expressed in `basis`.
    pub fn convert(&self, basis: Basis) -> SymElement {
        if basis == self.basis {
            return self.clone();
        }
        let mut out = SymElement::zero(basis);
        for (p, c) in &self.terms {
            let image = match basis {
                Basis::PowerSum => schur_to_powersum(p),
                Basis::Schur => powersum_to_schur(p),
            };
            for (q, x) in image.terms {
                out.add_term(q, x * c);
            }
        }
        out
    }

    pub fn to_powersum(&self) -> SymElement {
        self.convert(Basis::PowerSum)
    }

    pub fn to_schur(&self) -> SymElement {
        self.convert(Basis::Schur)
    }

    /// Product, computed in the power-sum basis (`p_μ p_ν = p_{μ∪ν}`) and
    /// returned in the basis of `self`.
    pub fn multiply(&self, other: &SymElement) -> SymElement {
        let (a, b) = (self.to_powersum(), other.to_powersum());
        let mut out = SymElement::zero(Basis::PowerSum);
        for (p, x) in &a.terms {
            for (q, y) in &b.terms {
                out.add_term(p.union(q), x * y);
            }
        }
        out.convert(self.basis)
    }

    /// `⟨p_μ, p_ν⟩ = z_μ [μ = ν]`, equivalently `⟨{λ},{μ}⟩ = [λ = μ]`.
    pub fn inner_product(&self, other: &SymElement) -> Q {
        let (a, b) = (self.to_powersum(), other.to_powersum());
        a.terms
            .iter()
            .filter_map(|(p, x)| b.terms.get(p).map(|y| x * y * Q::from_integer(p.centralizer_order().into())))
            .sum()
    }

    /// Value at a square matrix: `p_μ ↦ Π Tr(T^{μ_i})`.
    pub fn evaluate(&self, t: &[Vec<Q>]) -> Q {
        let a = self.to_powersum();
        let max = a.terms.keys().flat_map(|p| p.rows().first().copied()).max().unwrap_or(0);
        let mut traces = Vec::with_capacity(max);
        let mut power = t.to_vec();
        for k in 1..=max {
            if k > 1 {
                power = crate::linalg::matmul(&power, t);
            }
            traces.push((0..t.len()).map(|i| power[i][i].clone()).sum::<Q>());
        }
        a.terms
            .iter()
            .map(|(p, c)| p.rows().iter().fold(c.clone(), |acc, &k| acc * &traces[k - 1]))
            .sum()
    }
}

/// `3/2*p(2,1) - {(1,1)}` style; `p(…)` for power sums, `{…}` for Schur.
impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let name = match self.basis {
                Basis::PowerSum => format!("p{p}"),
                Basis::Schur => format!("{{{p}}}"),
            };
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sep = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            if abs.is_one() {
                write!(f, "{sep}{name}")?;
            } else {
                write!(f, "{sep}{}*{name}", fmt_q(&abs))?;
            }
        }
        Ok(())
    }
}

/// `{λ} = Σ_μ χ_λ(μ)/z_μ · p_μ`.
pub fn schur_to_powersum(lambda: &Partition) -> SymElement {
    SymElement::from_terms(
        Basis::PowerSum,
        list_partitions(lambda.size(), None).into_iter().map(|mu| {
            let c = Q::new(char_value(lambda, &mu).into(), mu.centralizer_order().into());
            (mu, c)
        }),
    )
}

/// `p_μ = Σ_λ χ_λ(μ) {λ}`.
pub fn powersum_to_schur(mu: &Partition) -> SymElement {
    SymElement::from_terms(
        Basis::Schur,
        list_partitions(mu.size(), None)
            .into_iter()
            .map(|lambda| (lambda.clone(), Q::from_integer(char_value(&lambda, mu).into()))),
    )
}

/// `{λ}{μ} = Σ_ν c^ν_{λμ} {ν}`.
pub fn schur_product(lambda: &Partition, mu: &Partition) -> SymElement {
    SymElement::from_terms(
        Basis::Schur,
        list_partitions(lambda.size() + mu.size(), None).into_iter().map(|nu| {
            let c = lr_coefficient(&nu, lambda, mu).expect("sizes add up");
            (nu, Q::from_integer(c.into()))
        }),
    )
}

/// `X_k = {(k)}`, with `X_0 = 1` and `X_k = 0` for `k < 0`.
fn x_gen(k: i64) -> SymElement {
    match k {
        k if k < 0 => SymElement::zero(Basis::Schur),
        0 => SymElement::one(Basis::Schur),
        k => SymElement::schur(&Partition::row(k as usize)),
    }
}

/// `det(X_{λ_i + j - i})`, expanded by the Leibniz formula.
pub fn jacobi_trudi(lambda: &Partition) -> SymElement {
    let rows = lambda.rows();
    let l = rows.len();
    let mut out = SymElement::zero(Basis::Schur);
    for s in crate::symgrp::all_perms(l).expect("few rows") {
        let mut term = SymElement::one(Basis::Schur);
        for (i, &r) in rows.iter().enumerate() {
            let j = s.image(i);
            term = term.multiply(&x_gen(r as i64 + j as i64 - i as i64));
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term.scale(&Q::from_integer(s.sign().into())));
    }
    out
}

/// The involution `{λ} ↦ {λ^t}`.
pub fn transpose_map(a: &SymElement) -> SymElement {
    let s = a.to_schur();
    SymElement::from_terms(Basis::Schur, s.terms.iter().map(|(p, c)| (p.transpose(), c.clone()))).convert(a.basis)
}

/// Whether `a ∈ I_d`: every `{λ}` with at most `d` rows has coefficient 0.
pub fn in_ideal_id(a: &SymElement, d: usize) -> bool {
    a.to_schur().terms.keys().all(|p| p.row_count() > d)
}

/// `dim (K[X]/I_d)_n = #{λ ⊢ n : λ has at most d rows}`.
pub fn quotient_dim(n: usize, d: usize) -> usize {
    list_partitions(n, Some(d)).len()
}

/// Coefficient of `t^n` in `Π_{k=1}^{d} 1/(1-t^k)`: the Hilbert function
/// of a polynomial ring with generators in degrees `1,…,d`.
pub fn polynomial_ring_hilbert(d: usize, n: usize) -> u128 {
    let mut coeffs = vec![0u128; n + 1];
    coeffs[0] = 1;
    for k in 1..=d {
        for m in k..=n {
            coeffs[m] += coeffs[m - k];
        }
    }
    coeffs[n]
}

/// The type `((1,1))`.
pub fn endo_signature() -> TypeSignature {
    TypeSignature::new(vec![(1, 1)]).expect("valid")
}

/// A permutation of the given cycle type (cycles on consecutive points).
pub fn perm_of_type(mu: &Partition) -> Perm {
    let mut word = Vec::with_capacity(mu.size());
    let mut start = 0;
    for &k in mu.rows() {
        word.extend((1..=k).map(|t| start + t % k));
        start += k;
    }
    Perm::from_word(word).expect("a permutation")
}

/// `p_μ ↦ p(n, σ_μ, n)` into `K[X]`.
pub fn to_kx(a: &SymElement) -> Result<KXElement> {
    let sig = endo_signature();
    let mut out = KXElement::zero(&sig);
    for (mu, c) in &a.to_powersum().terms {
        let d = canonicalize_closed(&sig, &[mu.size()], 0, &perm_of_type(mu))?;
        out = &out + &KXElement::from_diagram(&d)?.scale(c);
    }
    Ok(out)
}

/// Inverse of [`to_kx`]; fails on elements involving `D`.
pub fn from_kx(a: &KXElement) -> Result<SymElement> {
    if a.signature() != &endo_signature() {
        return Err(Error::SignatureMismatch(format!("{} is not ((1,1))", a.signature())));
    }
    let mut out = SymElement::zero(Basis::PowerSum);
    for (m, c) in a.terms() {
        if m.d_power() > 0 {
            return Err(Error::Invalid("the dimension invariant has no power-sum image".into()));
        }
        out.add_term(m.diagram().sigma().cycle_type(), c.clone());
    }
    Ok(out)
}

/// The monomial `p_μ` of `K[X]`.
pub fn power_sum_monomial(mu: &Partition) -> Result<Monomial> {
    let d = canonicalize_closed(&endo_signature(), &[mu.size()], 0, &perm_of_type(mu))?;
    Monomial::new(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_element, Structure};
    use crate::q_int;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn half() -> Q {
        Q::new(1.into(), 2.into())
    }

    #[test]
    fn small_conversions() {
        assert_eq!(schur_to_powersum(&p(&[1])), SymElement::power_sum(&p(&[1])));
        let s2 = schur_to_powersum(&p(&[2]));
        assert_eq!(s2.coefficient(&p(&[2])), half());
        assert_eq!(s2.coefficient(&p(&[1, 1])), half());
        let s11 = schur_to_powersum(&p(&[1, 1]));
        assert_eq!(s11.coefficient(&p(&[2])), -half());
        assert_eq!(s11.coefficient(&p(&[1, 1])), half());
        let cycle = powersum_to_schur(&p(&[5]));
        for (lambda, c) in cycle.terms() {
            assert!(lambda.rows()[1..].iter().all(|&r| r == 1), "{lambda} is not a hook");
            assert!(num_traits::Signed::abs(c).is_one());
        }
        assert_eq!(cycle.terms().len(), 5);
    }

    #[test]
    fn round_trips() {
        for n in 0..=6 {
            for lambda in list_partitions(n, None) {
                let s = SymElement::schur(&lambda);
                assert_eq!(s.to_powersum().to_schur(), s);
                let ps = SymElement::power_sum(&lambda);
                assert_eq!(ps.to_schur().to_powersum(), ps);
            }
        }
    }

    #[test]
    fn products() {
        let one = p(&[1]);
        let expect = SymElement::schur(&p(&[2])).add(&SymElement::schur(&p(&[1, 1])));
        assert_eq!(schur_product(&one, &one), expect);
        assert_eq!(schur_product(&p(&[2, 1]), &Partition::empty()), SymElement::schur(&p(&[2, 1])));
        for (a, b) in [(p(&[2, 1]), p(&[1])), (p(&[2]), p(&[2])), (p(&[2, 1]), p(&[2, 1]))] {
            assert_eq!(SymElement::schur(&a).multiply(&SymElement::schur(&b)), schur_product(&a, &b));
        }
    }

    #[test]
    fn jacobi_trudi_examples() {
        assert_eq!(jacobi_trudi(&p(&[3])), SymElement::schur(&p(&[3])));
        assert_eq!(jacobi_trudi(&p(&[1, 1])), SymElement::schur(&p(&[1, 1])));
        let x2x1 = x_gen(2).multiply(&x_gen(1));
        assert_eq!(x2x1.sub(&x_gen(3)), SymElement::schur(&p(&[2, 1])));
        for n in 0..=5 {
            for lambda in list_partitions(n, None) {
                assert_eq!(jacobi_trudi(&lambda), SymElement::schur(&lambda), "{lambda}");
            }
        }
    }

    #[test]
    fn transposition() {
        let x = SymElement::schur(&p(&[3]));
        assert_eq!(transpose_map(&x), SymElement::schur(&p(&[1, 1, 1])));
        let y = SymElement::schur(&p(&[2, 1])).add(&SymElement::power_sum(&p(&[2, 1])).scale(&q_int(3)));
        assert_eq!(transpose_map(&transpose_map(&y)), y);
        let one = SymElement::schur(&p(&[1]));
        assert_eq!(transpose_map(&one.multiply(&one)), transpose_map(&SymElement::schur(&p(&[2]))).add(&transpose_map(&SymElement::schur(&p(&[1, 1])))));
        // p_μ ↦ ±p_μ with sign (-1)^{n - ℓ(μ)}
        let t = transpose_map(&SymElement::power_sum(&p(&[2, 1]))).to_powersum();
        assert_eq!(t, SymElement::power_sum(&p(&[2, 1])).scale(&q_int(-1)));
    }

    #[test]
    fn ideal_membership() {
        assert!(in_ideal_id(&SymElement::schur(&p(&[1, 1])), 1));
        assert!(!in_ideal_id(&SymElement::power_sum(&p(&[2])), 1));
        assert!(!in_ideal_id(&SymElement::schur(&p(&[2, 1])), 3));
        assert!(in_ideal_id(&SymElement::zero(Basis::Schur), 0));
    }

    #[test]
    fn orthonormal_basis() {
        for n in 0..=5 {
            let ps = list_partitions(n, None);
            for a in &ps {
                for b in &ps {
                    let v = SymElement::schur(a).inner_product(&SymElement::schur(b));
                    assert_eq!(v, q_int((a == b) as i64));
                }
            }
        }
    }

    #[test]
    fn bridge_to_kx() {
        let sig = endo_signature();
        for n in 1..=4 {
            for mu in list_partitions(n, None) {
                let k = to_kx(&SymElement::power_sum(&mu)).unwrap();
                assert_eq!(from_kx(&k).unwrap(), SymElement::power_sum(&mu));
                for nu in list_partitions(n, None) {
                    let a = SymElement::schur(&mu);
                    let b = SymElement::schur(&nu);
                    assert_eq!(to_kx(&a).unwrap().inner_product(&to_kx(&b).unwrap()).unwrap(), a.inner_product(&b));
                }
            }
        }
        let t = Structure::random(&sig, 2, 5).unwrap();
        let m: Vec<Vec<Q>> = (0..2).map(|i| (0..2).map(|j| t.tensors()[0].get(&[i, j]).clone()).collect()).collect();
        for lambda in list_partitions(4, None) {
            let s = SymElement::schur(&lambda);
            assert_eq!(s.evaluate(&m), evaluate_element(&to_kx(&s).unwrap(), &t).unwrap());
            assert_eq!(s.evaluate(&m).is_zero(), lambda.row_count() > 2);
        }
    }

    #[test]
    fn quotient_hilbert_function() {
        for d in 0..=4 {
            for n in 0..=10 {
                assert_eq!(quotient_dim(n, d) as u128, polynomial_ring_hilbert(d, n));
            }
        }
    }
}
