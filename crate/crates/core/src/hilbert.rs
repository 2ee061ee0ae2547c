//! Graded dimensions of `K[X]` and `K[X]/I_d`, and generators of `I_d`.
//!
//! The piece of multidegree `(n_1,…,n_r)` has a basis of orbits of
//! `G = S_{n_1}×…×S_{n_r}` on `S_n` under `g·σ = α_q(g) σ α_p(g)⁻¹`. Its
//! dimension is computed by Burnside's lemma, by the character formula
//! (Littlewood–Richardson times Kronecker coefficients), and, for the
//! quotients, by evaluation ranks in [`crate::eval`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::diagram::{canonicalize_closed, TypeSignature};
use crate::kx::KXElement;
use crate::reptheory::{iterated_lr_unchecked, kronecker_unchecked, list_partitions, Partition};
use crate::symgrp::{all_perms, young_order, young_subgroup, Perm};
use crate::{limits, Error, Result, Q};

/// Burnside count of the orbits. `α_q(g)` and `α_p(g)` have cycle types
/// `∪ κ_i^{q_i}` and `∪ κ_i^{p_i}` where `κ_i` is the cycle type of `g_i`;
/// when these agree, `g` fixes exactly a centralizer's worth of `σ`.
pub fn dim_burnside(sig: &TypeSignature, multidegree: &[usize]) -> Result<u128> {
    sig.check_multidegree(multidegree)?;
    if !sig.is_balanced(multidegree) {
        return Ok(0);
    }
    let mut fixed = BigInt::zero();
    for g in young_subgroup(multidegree)? {
        let types: Vec<Partition> = g.iter().map(Perm::cycle_type).collect();
        let joined = |weights: &[usize]| {
            types
                .iter()
                .zip(weights)
                .fold(Partition::empty(), |acc, (k, &w)| acc.union(&k.repeat_parts(w)))
        };
        let (outs, ins) = (joined(&sig.out_weights()), joined(&sig.in_weights()));
        if outs == ins {
            fixed += BigInt::from(ins.centralizer_order());
        }
    }
    let count = fixed / BigInt::from(young_order(multidegree));
    Ok(count.to_u128().expect("orbit count fits"))
}

/// `Σ_λ Σ_ρ A_p(λ,ρ) A_q(λ,ρ)` with
/// `A_w(λ,ρ) = Σ_μ c^λ_μ Π_i g(μ_{i,1},…,μ_{i,w_i},ρ_i)`, where each
/// `μ_{i,j} ⊢ n_i`, `ρ_i ⊢ n_i`, and `c^λ_μ` is the iterated
/// Littlewood–Richardson coefficient for the blocks in `i`-major order.
/// With `max_rows = Some(d)` only `λ` with at most `d` rows contribute.
pub fn dim_formula(sig: &TypeSignature, multidegree: &[usize], max_rows: Option<usize>) -> Result<u128> {
    sig.check_multidegree(multidegree)?;
    if !sig.is_balanced(multidegree) {
        return Ok(0);
    }
    let (n, _) = sig.string_counts(multidegree);
    let rho_tuples = partition_tuples(multidegree);
    let mut kron = BTreeMap::new();
    let mut total = BigInt::zero();
    for lambda in list_partitions(n, max_rows) {
        let a_out = side_coefficients(&lambda, &sig.out_weights(), multidegree, &rho_tuples, &mut kron);
        let a_in = side_coefficients(&lambda, &sig.in_weights(), multidegree, &rho_tuples, &mut kron);
        for (x, y) in a_out.iter().zip(&a_in) {
            total += BigInt::from(*x) * BigInt::from(*y);
        }
    }
    Ok(total.to_u128().expect("dimension fits"))
}

type KroneckerMemo = BTreeMap<Vec<Partition>, i64>;

/// `A_w(λ, ρ)` for every `ρ` in `rho_tuples`.
fn side_coefficients(
    lambda: &Partition,
    weights: &[usize],
    multidegree: &[usize],
    rho_tuples: &[Vec<Partition>],
    kron: &mut KroneckerMemo,
) -> Vec<i64> {
    let block_sizes: Vec<usize> = multidegree
        .iter()
        .zip(weights)
        .flat_map(|(&n, &w)| std::iter::repeat_n(n, w))
        .collect();
    let mut out = vec![0i64; rho_tuples.len()];
    for mu in partition_tuples(&block_sizes) {
        let c = iterated_lr_unchecked(lambda, &mu);
        if c == 0 {
            continue;
        }
        for (slot, rho) in out.iter_mut().zip(rho_tuples) {
            let mut term = c;
            let mut start = 0;
            for (i, &w) in weights.iter().enumerate() {
                let mut args = mu[start..start + w].to_vec();
                args.push(rho[i].clone());
                start += w;
                let g = *kron.entry(args).or_insert_with_key(|a| kronecker_unchecked(multidegree[i], a));
                term *= g;
                if term == 0 {
                    break;
                }
            }
            *slot += term;
        }
    }
    out
}

/// Every tuple `(μ_1,…,μ_k)` with `μ_i ⊢ sizes[i]`.
fn partition_tuples(sizes: &[usize]) -> Vec<Vec<Partition>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        let parts = list_partitions(n, None);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut t = prefix.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// `dim (K[X]/I_d)` in the given multidegree.
pub fn quotient_dim(sig: &TypeSignature, multidegree: &[usize], d: usize) -> Result<u128> {
    dim_formula(sig, multidegree, Some(d))
}

/// The alternating sums `Σ_{σ∈S_{d+1}} sign(σ) p(n, τ_1 σ τ_2)` over all
/// `τ_1, τ_2 ∈ S_n`, with `S_{d+1}` acting on the first `d+1` strings.
/// Zero sums are dropped and the rest are made monic and deduplicated.
pub fn id_generators(d: usize, sig: &TypeSignature, multidegree: &[usize]) -> Result<Vec<KXElement>> {
    sig.check_multidegree(multidegree)?;
    let (o, i) = sig.string_counts(multidegree);
    if o != i {
        return Err(Error::Unbalanced { outputs: o, inputs: i });
    }
    let n = o;
    if n <= d {
        return Ok(Vec::new());
    }
    let nf = limits::factorial(n);
    limits::check_enumeration(nf.saturating_mul(nf))?;
    let alternating: Vec<(Q, Perm)> = all_perms(d + 1)?
        .into_iter()
        .map(|s| (Q::from_integer(s.sign().into()), s.direct_sum(&Perm::identity(n - d - 1))))
        .collect();
    let perms = all_perms(n)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t1 in &perms {
        for t2 in &perms {
            let mut diagrams = Vec::with_capacity(alternating.len());
            for (sign, s) in &alternating {
                let word = t1.compose(&s.compose(t2)?)?;
                diagrams.push((sign.clone(), canonicalize_closed(sig, multidegree, 0, &word)?));
            }
            let element = KXElement::from_terms(sig, diagrams.iter().map(|(c, dg)| (c.clone(), dg)))?;
            if element.is_zero() {
                continue;
            }
            let element = element.monic();
            if seen.insert(element.to_string()) {
                out.push(element);
            }
        }
    }
    Ok(out)
}

/// Dimensions of one graded piece by every available method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertReport {
    pub multidegree: Vec<usize>,
    pub burnside: u128,
    pub formula: u128,
    /// `(d, quotient_dim, evaluation_rank)` when a dimension was requested.
    pub quotient: Option<(usize, u128, usize)>,
}

pub fn report(
    sig: &TypeSignature,
    multidegree: &[usize],
    d: Option<usize>,
    samples: usize,
    seed: u64,
) -> Result<HilbertReport> {
    let burnside = dim_burnside(sig, multidegree)?;
    let formula = dim_formula(sig, multidegree, None)?;
    let quotient = match d {
        Some(d) => Some((
            d,
            quotient_dim(sig, multidegree, d)?,
            crate::eval::evaluation_rank(sig, multidegree, d, samples, seed)?,
        )),
        None => None,
    };
    Ok(HilbertReport { multidegree: multidegree.to_vec(), burnside, formula, quotient })
}
