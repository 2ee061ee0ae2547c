//! Partitions, irreducible characters of `S_n`, and the coefficient families
//! built from them (Littlewood–Richardson and Kronecker, plain and iterated).
//!
//! Every coefficient is a class-function inner product over cycle types, so
//! the one Murnaghan–Nakayama routine below is the only combinatorial input.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::limits::factorial;
use crate::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    /// Validates that `rows` is positive and weakly decreasing.
    pub fn new(rows: Vec<usize>) -> Result<Partition> {
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("not a partition: {rows:?}")));
        }
        Ok(Partition { rows })
    }

    /// Sorts and drops zeros.
    pub fn from_parts(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { rows: parts }
    }

    pub fn empty() -> Partition {
        Partition { rows: Vec::new() }
    }

    /// The one-row partition `(n)`; empty for `n = 0`.
    pub fn row(n: usize) -> Partition {
        Partition::from_parts(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Partition {
        Partition { rows: vec![1; n] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// `r(λ)`, the number of nonzero rows.
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn transpose(&self) -> Partition {
        let width = self.rows.first().copied().unwrap_or(0);
        let rows = (0..width).map(|j| self.rows.iter().filter(|&&r| r > j).count()).collect();
        Partition { rows }
    }

    /// `(k, m_k)` pairs for every part size `k` that occurs.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &r in &self.rows {
            match out.last_mut() {
                Some((k, m)) if *k == r => *m += 1,
                _ => out.push((r, 1)),
            }
        }
        out
    }

    /// `z_λ = Π k^{m_k} m_k!`, the centralizer order of a permutation of
    /// cycle type `λ`.
    pub fn centralizer_order(&self) -> u128 {
        self.multiplicities()
            .into_iter()
            .fold(1u128, |acc, (k, m)| acc * (k as u128).pow(m as u32) * factorial(m))
    }

    /// The partition obtained by joining the parts of `self` and `other`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.rows.clone();
        parts.extend_from_slice(&other.rows);
        Partition::from_parts(parts)
    }

    /// Every part repeated `k` times.
    pub fn repeat_parts(&self, k: usize) -> Partition {
        Partition::from_parts(self.rows.iter().flat_map(|&r| std::iter::repeat_n(r, k)).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("partition literal must be parenthesized: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let rows = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// All partitions of `n` (optionally with at most `max_rows` rows) in
/// reverse lexicographic order: `(n)` first, `(1^n)` last.
pub fn list_partitions(n: usize, max_rows: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, max_rows.unwrap_or(usize::MAX), &mut cur, &mut out);
    out
}

fn fill(rest: usize, cap: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { rows: cur.clone() });
        return;
    }
    if rows_left == 0 {
        return;
    }
    for part in (1..=cap.min(rest)).rev() {
        cur.push(part);
        fill(rest - part, part, rows_left - 1, cur, out);
        cur.pop();
    }
}

/// Number of partitions of `n`.
pub fn partition_count(n: usize) -> u128 {
    // p(n) by the standard coin-change recurrence over part sizes
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// `d_λ`, by the hook length formula. Exact for `|λ| ≤ 33`.
pub fn specht_dimension(lambda: &Partition) -> u128 {
    let t = lambda.transpose();
    let mut hooks = 1u128;
    for (i, &r) in lambda.rows.iter().enumerate() {
        for j in 0..r {
            hooks *= (r - j + t.rows[j] - i - 1) as u128;
        }
    }
    factorial(lambda.size()) / hooks
}

thread_local! {
    static CHAR_MEMO: RefCell<HashMap<(Partition, Partition), i64>> = RefCell::new(HashMap::new());
}

/// `χ_λ(μ)`: the irreducible character indexed by `λ` on the class of cycle
/// type `μ`.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("χ_{lambda} on class {mu}")));
    }
    Ok(char_value(lambda, mu))
}

pub(crate) fn char_value(lambda: &Partition, mu: &Partition) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = CHAR_MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }
    let v = murnaghan_nakayama(lambda, mu);
    CHAR_MEMO.with(|m| m.borrow_mut().insert(key, v));
    v
}

/// One step of the recursion: strip every rim hook of length `μ_1` from `λ`.
/// Rim hooks are bead moves on the beta-set `{λ_i + r - 1 - i}`; the height
/// of the hook is the number of beads jumped over.
fn murnaghan_nakayama(lambda: &Partition, mu: &Partition) -> i64 {
    let k = mu.rows[0];
    let rest = Partition { rows: mu.rows[1..].to_vec() };
    let r = lambda.rows.len();
    let beta: Vec<usize> = lambda.rows.iter().enumerate().map(|(i, &l)| l + r - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let len = moved.len();
        let shape = Partition::from_parts(moved.iter().enumerate().map(|(i, &x)| x + i + 1 - len).collect());
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * char_value(&shape, &rest);
    }
    total
}

/// `n!/z_μ` as an integer.
fn class_size(mu: &Partition) -> u128 {
    factorial(mu.size()) / mu.centralizer_order()
}

/// Calls `f` on every tuple of cycle types `(κ_1,…,κ_k)` with `κ_i ⊢ sizes[i]`.
fn for_each_type_tuple(sizes: &[usize], f: &mut dyn FnMut(&[Partition])) {
    let lists: Vec<Vec<Partition>> = sizes.iter().map(|&n| list_partitions(n, None)).collect();
    let mut idx = vec![0usize; sizes.len()];
    loop {
        let tuple: Vec<Partition> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
        f(&tuple);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn exact_quotient(num: BigInt, den: BigInt) -> i64 {
    debug_assert!((&num % &den).is_zero(), "class function sum not integral");
    (num / den).to_i64().expect("coefficient fits in i64")
}

/// `c^λ_{μν}`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<i64> {
    iterated_lr(lambda, &[mu.clone(), nu.clone()])
}

/// `c^λ_{(λ_1,…,λ_k)}`: multiplicity of `S_{λ_1}⊠…⊠S_{λ_k}` in the
/// restriction of `S_λ` along `Π_{(|λ_1|,…,|λ_k|)}`.
pub fn iterated_lr(lambda: &Partition, parts: &[Partition]) -> Result<i64> {
    let total: usize = parts.iter().map(Partition::size).sum();
    if total != lambda.size() {
        return Err(Error::SizeMismatch(format!(
            "parts of total size {total} under λ = {lambda}"
        )));
    }
    Ok(iterated_lr_unchecked(lambda, parts))
}

pub(crate) fn iterated_lr_unchecked(lambda: &Partition, parts: &[Partition]) -> i64 {
    let sizes: Vec<usize> = parts.iter().map(Partition::size).collect();
    let mut sum = BigInt::zero();
    for_each_type_tuple(&sizes, &mut |kappa| {
        let mut term = BigInt::from(1);
        let mut joined = Partition::empty();
        for (k, part) in kappa.iter().zip(parts) {
            let chi = char_value(part, k);
            if chi == 0 {
                return;
            }
            term *= BigInt::from(class_size(k)) * chi;
            joined = joined.union(k);
        }
        let chi = char_value(lambda, &joined);
        if chi != 0 {
            sum += term * chi;
        }
    });
    let order = sizes.iter().fold(BigInt::from(1), |acc, &n| acc * BigInt::from(factorial(n)));
    exact_quotient(sum, order)
}

/// `g(λ_1,…,λ_k) = dim Hom_{S_n}(S_{λ_1}⊗…⊗S_{λ_k}, 1)`.
pub fn kronecker(partitions: &[Partition]) -> Result<i64> {
    let Some(first) = partitions.first() else {
        return Err(Error::Invalid("kronecker needs at least one partition".into()));
    };
    let n = first.size();
    if partitions.iter().any(|p| p.size() != n) {
        return Err(Error::SizeMismatch("kronecker arguments differ in size".into()));
    }
    Ok(kronecker_unchecked(n, partitions))
}

pub(crate) fn kronecker_unchecked(n: usize, partitions: &[Partition]) -> i64 {
    let mut sum = BigInt::zero();
    for kappa in list_partitions(n, None) {
        let mut term = BigInt::from(class_size(&kappa));
        for p in partitions {
            let chi = char_value(p, &kappa);
            if chi == 0 {
                term = BigInt::zero();
                break;
            }
            term *= chi;
        }
        sum += term;
    }
    exact_quotient(sum, BigInt::from(factorial(n)))
}
