//! Acceptance suite: nine end-to-end criteria, one status line each.
//!
//! Runs without the libtest harness so the lines always reach the output of
//! `cargo test`; the process fails if any criterion fails.

use std::time::Instant;

use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invariant_ring::axioms::{self, commutative_theory, ideal_generators_upto, unital_associative_theory};
use invariant_ring::diagram::{balanced_multidegrees, basis, canonicalize_closed, OpenDiagram, TypeSignature};
use invariant_ring::endo::{self, SymElement};
use invariant_ring::eval::{direct_sum, evaluate_closed, evaluate_element, evaluation_rank, realize_open, tensor_structures, Structure};
use invariant_ring::hilbert::{dim_burnside, dim_formula, id_generators, quotient_dim};
use invariant_ring::kx::{KXElement, Monomial, TensorSquareElement};
use invariant_ring::reptheory::{list_partitions, lr_coefficient};
use invariant_ring::symgrp::{alpha_embed, Perm};
use invariant_ring::{q_int, Result};

/// Seed of every random choice below.
const SEED: u64 = 20261019;

type Outcome = Result<(bool, String)>;

fn sig(pairs: &[(usize, usize)]) -> TypeSignature {
    TypeSignature::new(pairs.to_vec()).unwrap()
}

fn three_signatures() -> Vec<TypeSignature> {
    vec![sig(&[(1, 1)]), sig(&[(2, 2)]), sig(&[(2, 1), (1, 2)])]
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    use rand::seq::SliceRandom;
    let mut w: Vec<usize> = (0..n).collect();
    w.shuffle(rng);
    Perm::from_word(w).unwrap()
}

fn criterion_1() -> Outcome {
    let s = sig(&[(1, 1)]);
    let expected = [1u128, 1, 2, 3, 5, 7, 11];
    let mut bad = Vec::new();
    for (n, &p) in expected.iter().enumerate() {
        let (b, f) = (dim_burnside(&s, &[n])?, dim_formula(&s, &[n], None)?);
        if b != p || f != p {
            bad.push(format!("n={n}: burnside {b}, formula {f}, expected {p}"));
        }
    }
    Ok((bad.is_empty(), format!("n = 0..6 give {expected:?}; mismatches {bad:?}")))
}

fn criterion_2() -> Outcome {
    let s = sig(&[(1, 1)]);
    let mut bad = Vec::new();
    let mut cases = 0;
    for n in 0..=5 {
        for d in 0..=3 {
            let count = list_partitions(n, None).iter().filter(|l| l.row_count() <= d).count() as u128;
            let q = quotient_dim(&s, &[n], d)?;
            let r = evaluation_rank(&s, &[n], d, 30, SEED)? as u128;
            cases += 1;
            if q != count || r != count {
                bad.push(format!("n={n} d={d}: quotient {q}, rank {r}, partitions {count}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} cases, 30 samples each; mismatches {bad:?}")))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for s in [sig(&[(2, 2)]), sig(&[(2, 1), (1, 2)])] {
        // n counts boxes here, which also covers every multidegree with at most 5 strings
        for md in balanced_multidegrees(&s, 10, 5) {
            let (b, f) = (dim_burnside(&s, &md)?, dim_formula(&s, &md, None)?);
            cases += 1;
            if b != f {
                bad.push(format!("{s} {md:?}: burnside {b}, formula {f}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} multidegrees; mismatches {bad:?}")))
}

fn adjoint(a: &Monomial, b: &Monomial, c: &KXElement, delta_c: &TensorSquareElement) -> Result<bool> {
    let ab = KXElement::from_monomial(a.product(b)?);
    let pure = TensorSquareElement::pure(&KXElement::from_monomial(a.clone()), &KXElement::from_monomial(b.clone()))?;
    Ok(pure.inner_product(delta_c)? == ab.inner_product(c)?)
}

fn criterion_4() -> Outcome {
    // ((1,1)): monomials are products of connected diagrams p_(k), one per partition
    let mut by_degree: Vec<Vec<Monomial>> = Vec::new();
    for n in 0..=6 {
        by_degree.push(list_partitions(n, None).iter().map(endo::power_sum_monomial).collect::<Result<_>>()?);
    }
    let all: Vec<(usize, &Monomial)> = by_degree.iter().enumerate().flat_map(|(n, ms)| ms.iter().map(move |m| (n, m))).collect();
    let deltas: Vec<(KXElement, TensorSquareElement)> = all
        .iter()
        .map(|(_, m)| {
            let c = KXElement::from_monomial((*m).clone());
            let d = c.coproduct_sum()?;
            Ok((c, d))
        })
        .collect::<Result<_>>()?;
    let (mut triples, mut bad) = (0, 0);
    for (da, a) in &all {
        for (db, b) in &all {
            if da + db > 6 {
                continue;
            }
            for (c, dc) in &deltas {
                triples += 1;
                if !adjoint(a, b, c, dc)? {
                    bad += 1;
                }
            }
        }
    }
    // ((2,2)): 100 random triples
    let s = sig(&[(2, 2)]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool: Vec<Monomial> = (0..=2)
        .flat_map(|n| basis(&s, &[n]).unwrap())
        .map(|d| Monomial::new(&d))
        .collect::<Result<_>>()?;
    let mut bases: Vec<Option<Vec<Monomial>>> = vec![None; 5];
    let mut bad_random = 0;
    for _ in 0..100 {
        let a = pool.choose(&mut rng).unwrap();
        let b = pool.choose(&mut rng).unwrap();
        let n = a.multidegree()[0] + b.multidegree()[0];
        let c = if rng.random_bool(0.5) {
            a.product(b)?
        } else {
            let list = bases[n].get_or_insert_with(|| basis(&s, &[n]).unwrap().iter().map(|d| Monomial::new(d).unwrap()).collect());
            list.choose(&mut rng).unwrap().clone()
        };
        let c = KXElement::from_monomial(c);
        if !adjoint(a, b, &c, &c.coproduct_sum()?)? {
            bad_random += 1;
        }
    }
    Ok((
        bad == 0 && bad_random == 0,
        format!("((1,1)): {triples} triples, {bad} failures; ((2,2)): 100 random triples, {bad_random} failures"),
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sigs = three_signatures();
    let diagrams: Vec<Vec<_>> = sigs
        .iter()
        .map(|s| {
            balanced_multidegrees(s, 4, 4)
                .iter()
                .flat_map(|md| basis(s, md).unwrap())
                .collect()
        })
        .collect();
    let (mut sums, mut products, mut bad) = (0, 0, Vec::new());
    for k in 0..50 {
        let which = k % sigs.len();
        let s = &sigs[which];
        let (d1, d2) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let a = Structure::random_with(s, d1, &mut rng)?;
        let b = Structure::random_with(s, d2, &mut rng)?;
        let (sum, prod) = (direct_sum(&a, &b)?, tensor_structures(&a, &b)?);
        for d in &diagrams[which] {
            let (x, y) = (evaluate_closed(d, &a)?, evaluate_closed(d, &b)?);
            if d.is_connected() {
                sums += 1;
                if evaluate_closed(d, &sum)? != &x + &y {
                    bad.push(format!("{s} {d} on ⊕ (pair {k})"));
                }
            }
            products += 1;
            if evaluate_closed(d, &prod)? != &x * &y {
                bad.push(format!("{s} {d} on ⊗ (pair {k})"));
            }
        }
    }
    Ok((bad.is_empty(), format!("50 pairs, {sums} additivity and {products} multiplicativity checks; failures {bad:?}")))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut gens, mut evals, mut bad) = (0, 0, Vec::new());
    for d in 0..=3 {
        let n = d + 1;
        for s in three_signatures() {
            for md in balanced_multidegrees(&s, n, n) {
                if s.string_counts(&md).0 != n {
                    continue;
                }
                let g = id_generators(d, &s, &md)?;
                gens += g.len();
                for _ in 0..20 {
                    let st = Structure::random_with(&s, d, &mut rng)?;
                    for x in &g {
                        evals += 1;
                        if !evaluate_element(x, &st)?.is_zero() {
                            bad.push(format!("{s} d={d}: {x}"));
                        }
                    }
                }
            }
        }
    }
    Ok((bad.is_empty() && gens > 0, format!("{gens} generators, {evals} evaluations; nonzero {bad:?}")))
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for n in 0..=7 {
        let ps = list_partitions(n, None);
        for a in &ps {
            for b in &ps {
                if SymElement::schur(a).inner_product(&SymElement::schur(b)) != q_int((a == b) as i64) {
                    failures.push(format!("⟨{a},{b}⟩"));
                }
            }
        }
    }
    for k in 0..=4 {
        for l in 0..=3 {
            for a in list_partitions(k, None) {
                for b in list_partitions(l, None) {
                    let prod = SymElement::schur(&a).multiply(&SymElement::schur(&b));
                    for nu in list_partitions(k + l, None) {
                        if prod.coefficient(&nu) != q_int(lr_coefficient(&nu, &a, &b)?) {
                            failures.push(format!("{a}·{b} at {nu}"));
                        }
                    }
                }
            }
        }
    }
    for n in 0..=6 {
        for l in list_partitions(n, None) {
            if endo::jacobi_trudi(&l) != endo::schur_to_powersum(&l).to_schur() {
                failures.push(format!("Jacobi–Trudi {l}"));
            }
        }
    }
    let witness_seed = 0;
    for d in 0..=3 {
        let t = invariant_ring::verify::witness_matrix(d, witness_seed);
        for n in 0..=6 {
            for l in list_partitions(n, None) {
                if SymElement::schur(&l).evaluate(&t).is_zero() != (l.row_count() > d) {
                    failures.push(format!("eval {l} d={d}"));
                }
            }
        }
    }
    let s = sig(&[(1, 1)]);
    for d in 0..=4 {
        for n in 0..=10 {
            if quotient_dim(&s, &[n], d)? != endo::polynomial_ring_hilbert(d, n) {
                failures.push(format!("quotient n={n} d={d}"));
            }
        }
    }
    Ok((failures.is_empty(), format!("witness seed {witness_seed}; failures {failures:?}")))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let theory = unital_associative_theory()?;
    let m2 = axioms::matrix_algebra(2)?;
    let bad = axioms::perturb(&m2, 0, &[0, 0, 0])?;
    for (k, a) in theory.axioms().iter().enumerate() {
        if !a.realize(&m2)?.is_zero() {
            failures.push(format!("axiom {} nonzero on M_2", k + 1));
        }
        if a.realize(&bad)?.is_zero() {
            failures.push(format!("axiom {} zero on the perturbation", k + 1));
        }
    }
    let gens = ideal_generators_upto(&theory, 2)?;
    for g in &gens {
        if !evaluate_element(g, &m2)?.is_zero() {
            failures.push(format!("generator {g} nonzero on M_2"));
        }
    }
    let full = commutative_theory()?;
    let sig = full.signature().clone();
    let mut complements: Vec<Vec<OpenDiagram>> = Vec::new();
    for a in full.axioms() {
        let (p, q) = a.degree();
        complements.push(axioms::open_diagrams_upto(&sig, (q, p), 2)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..50 {
        let k = rng.random_range(0..full.axioms().len());
        let a = &full.axioms()[k];
        let y = complements[k].choose(&mut rng).unwrap();
        let d = rng.random_range(1..=3);
        let s = Structure::random_with(&sig, d, &mut rng)?;
        let lhs = evaluate_element(&axioms::pair(a.terms(), y)?, &s)?;
        let rhs = a.realize(&s)?.pairing(&realize_open(y, &s)?)?;
        if lhs != rhs {
            failures.push(format!("square fails for axiom {} and {y}", k + 1));
        }
    }
    Ok((failures.is_empty(), format!("{} generators at bound 2, 50 squares; failures {failures:?}", gens.len())))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sigs = three_signatures();
    let mut bad = Vec::new();
    for k in 0..200 {
        let s = &sigs[k % sigs.len()];
        let mds: Vec<Vec<usize>> = balanced_multidegrees(s, 6, 4).into_iter().filter(|md| md.iter().sum::<usize>() > 0).collect();
        let md = mds.choose(&mut rng).unwrap().clone();
        let (n, _) = s.string_counts(&md);
        let sigma = random_perm(n, &mut rng);
        let g: Vec<Perm> = md.iter().map(|&m| random_perm(m, &mut rng)).collect();
        let a_in = alpha_embed(&s.in_weights(), &md, &g)?;
        let a_out = alpha_embed(&s.out_weights(), &md, &g)?;
        let moved = a_in.compose(&sigma)?.compose(&a_out.inverse())?;
        let (c1, c2) = (canonicalize_closed(s, &md, 0, &sigma)?, canonicalize_closed(s, &md, 0, &moved)?);
        let st = Structure::random_with(s, rng.random_range(1..=2), &mut rng)?;
        let raw = |p: &Perm| -> Result<_> {
            let t = realize_open(&OpenDiagram::new(s, n, p.clone(), Perm::identity(n), &md, 0)?, &st)?;
            Ok(t.as_scalar().unwrap().clone())
        };
        let (v1, v2, v3) = (raw(&sigma)?, raw(&moved)?, evaluate_closed(&c1, &st)?);
        if c1 != c2 || v1 != v2 || v1 != v3 {
            bad.push(format!("{s} {md:?} σ={sigma} g·σ={moved}"));
        }
    }
    Ok((bad.is_empty(), format!("200 pairs; failures {bad:?}")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("three-way Hilbert agreement for ((1,1))", criterion_1),
        ("quotient dimensions and evaluation ranks", criterion_2),
        ("multi-tensor Hilbert cross-check", criterion_3),
        ("PSH adjointness", criterion_4),
        ("direct sum and tensor product compatibility", criterion_5),
        ("Schur–Weyl kernel", criterion_6),
        ("single-endomorphism suite", criterion_7),
        ("axioms, models and the commuting square", criterion_8),
        ("canonicalization soundness", criterion_9),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "criterion {}: {} - {name} ({detail}) [{:.1}s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
