//! Self-check suites run by `kx verify`.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{balanced_multidegrees, TypeSignature};
use crate::endo::{self, SymElement};
use crate::eval::evaluation_rank;
use crate::hilbert::{dim_burnside, dim_formula, quotient_dim};
use crate::kx::{KXElement, Monomial, TensorSquareElement};
use crate::reptheory::{list_partitions, lr_coefficient, partition_count};
use crate::{q_int, Result, Q};

/// One named check and its outcome.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn record(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "{}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// `p_μ` monomials of `K[X]` for type `((1,1))`, all `μ ⊢ n`.
fn endo_monomials(n: usize) -> Result<Vec<Monomial>> {
    list_partitions(n, None).iter().map(endo::power_sum_monomial).collect()
}

/// Hopf-algebra identities for type `((1,1))` up to degree `max_n`:
/// `⟨a⊗b, Δc⟩ = ⟨ab, c⟩`, `m(S⊗id)Δ = ε`, and `ε` on products.
pub fn psh(max_n: usize) -> Result<Report> {
    let sig = endo::endo_signature();
    let mut report = Report::default();
    let by_degree: Vec<Vec<Monomial>> = (0..=max_n).map(endo_monomials).collect::<Result<_>>()?;
    let (mut checked, mut bad) = (0usize, 0usize);
    for n in 0..=max_n {
        for k in 0..=n {
            for a in &by_degree[k] {
                for b in &by_degree[n - k] {
                    let ab = KXElement::from_monomial(a.product(b)?);
                    let pure = TensorSquareElement::pure(&KXElement::from_monomial(a.clone()), &KXElement::from_monomial(b.clone()))?;
                    for c in &by_degree[n] {
                        let c = KXElement::from_monomial(c.clone());
                        checked += 1;
                        if pure.inner_product(&c.coproduct_sum()?)? != ab.inner_product(&c)? {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    report.record("adjointness", bad == 0, format!("{checked} triples up to degree {max_n}, {bad} failures"));
    let mut bad = 0;
    let mut count = 0;
    for n in 0..=max_n {
        for m in &by_degree[n] {
            let x = KXElement::from_monomial(m.clone());
            let lhs = x.coproduct_sum()?.contract_with(|l| l.antipode(), |r| r.clone());
            let rhs = KXElement::unit(&sig).scale(&x.counit_sum());
            count += 1;
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    report.record("antipode", bad == 0, format!("{count} monomials, {bad} failures"));
    Ok(report)
}

/// Burnside and formula dimensions agree (and count partitions for
/// `((1,1))`); quotient dimensions match evaluation ranks.
pub fn hilbert(max_n: usize, samples: usize, seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let endo_sig = endo::endo_signature();
    for n in 0..=max_n {
        let (b, f) = (dim_burnside(&endo_sig, &[n])?, dim_formula(&endo_sig, &[n], None)?);
        let p = partition_count(n);
        report.record(format!("((1,1)) n={n}"), b == f && f == p, format!("burnside {b}, formula {f}, partitions {p}"));
    }
    for pairs in [vec![(2, 2)], vec![(2, 1), (1, 2)]] {
        let sig = TypeSignature::new(pairs)?;
        for md in balanced_multidegrees(&sig, max_n, max_n) {
            let (b, f) = (dim_burnside(&sig, &md)?, dim_formula(&sig, &md, None)?);
            report.record(format!("{sig} {md:?}"), b == f, format!("burnside {b}, formula {f}"));
        }
    }
    for n in 0..=max_n.min(5) {
        for d in 0..=3 {
            let q = quotient_dim(&endo_sig, &[n], d)?;
            let r = evaluation_rank(&endo_sig, &[n], d, samples, seed)?;
            report.record(format!("((1,1)) n={n} d={d}"), q == r as u128, format!("quotient {q}, rank {r} (seed {seed})"));
        }
    }
    Ok(report)
}

/// A `d×d` integer matrix with entries in `[-5,5]`.
pub fn witness_matrix(d: usize, seed: u64) -> Vec<Vec<Q>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d).map(|_| (0..d).map(|_| q_int(rng.random_range(-5i64..=5))).collect()).collect()
}

/// Symmetric-function identities of the single-endomorphism case.
pub fn endo_suite(seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let mut bad = 0;
    for n in 0..=7 {
        let ps = list_partitions(n, None);
        for a in &ps {
            for b in &ps {
                let v = SymElement::schur(a).inner_product(&SymElement::schur(b));
                if v != q_int((a == b) as i64) {
                    bad += 1;
                }
            }
        }
    }
    report.record("orthonormality", bad == 0, format!("n ≤ 7, {bad} failures"));
    let mut bad = 0;
    for k in 0..=4 {
        for l in 0..=3 {
            for a in list_partitions(k, None) {
                for b in list_partitions(l, None) {
                    let prod = SymElement::schur(&a).multiply(&SymElement::schur(&b));
                    for nu in list_partitions(k + l, None) {
                        if prod.coefficient(&nu) != q_int(lr_coefficient(&nu, &a, &b)?) {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    report.record("products", bad == 0, format!("sizes ≤ 4+3, {bad} failures"));
    let bad = (0..=6)
        .flat_map(|n| list_partitions(n, None))
        .filter(|l| endo::jacobi_trudi(l) != SymElement::schur(l))
        .count();
    report.record("jacobi-trudi", bad == 0, format!("n ≤ 6, {bad} failures"));
    let mut bad = Vec::new();
    for d in 0..=3 {
        let t = witness_matrix(d, seed);
        for n in 0..=6 {
            for l in list_partitions(n, None) {
                let vanishes = SymElement::schur(&l).evaluate(&t).is_zero();
                if vanishes != (l.row_count() > d) {
                    bad.push(format!("{l} d={d}"));
                }
            }
        }
    }
    report.record("vanishing", bad.is_empty(), format!("n ≤ 6, d ≤ 3, witness seed {seed}, failures {bad:?}"));
    let mut bad = 0;
    for d in 0..=4 {
        for n in 0..=10 {
            if endo::quotient_dim(n, d) as u128 != endo::polynomial_ring_hilbert(d, n) {
                bad += 1;
            }
        }
    }
    report.record("quotient hilbert", bad == 0, format!("n ≤ 10, d ≤ 4, {bad} failures"));
    Ok(report)
}
