//! Permutations and the block maps used to index strings of a diagram.
//!
//! Permutations are stored in one-line notation with 0-based images; the
//! public constructors and `Display` use the usual 1-based conventions.
//! Composition is `(a∘b)(x) = a(b(x))`.

use std::fmt;

use crate::limits;
use crate::reptheory::Partition;
use crate::{Error, Result};

/// A permutation of `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    word: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { word: (0..n).collect() }
    }

    /// From 0-based images.
    pub fn from_word(word: Vec<usize>) -> Result<Perm> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &x in &word {
            if x >= n || seen[x] {
                return Err(Error::Invalid(format!("not a permutation word: {word:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Perm {
        debug_assert!(Perm::from_word(word.clone()).is_ok());
        Perm { word }
    }

    /// From 1-based one-line notation, e.g. `[4,5,2,3,1]`.
    pub fn from_one_line(images: &[usize]) -> Result<Perm> {
        if images.contains(&0) {
            return Err(Error::Invalid("one-line notation is 1-based".into()));
        }
        Perm::from_word(images.iter().map(|&x| x - 1).collect())
    }

    /// From 1-based disjoint or overlapping cycles; cycles are composed
    /// right to left as written.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut perm = Perm::identity(n);
        for cycle in cycles.iter().rev() {
            let mut word: Vec<usize> = (0..n).collect();
            let mut seen = std::collections::HashSet::new();
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || !seen.insert(x) {
                    return Err(Error::Invalid(format!("bad cycle {cycle:?} in S_{n}")));
                }
                let next = cycle[(k + 1) % cycle.len()];
                word[x - 1] = next - 1;
            }
            perm = Perm { word }.compose(&perm)?;
        }
        Ok(perm)
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    /// 0-based image of `x`.
    pub fn image(&self, x: usize) -> usize {
        self.word[x]
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.word.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(format!(
                "cannot compose S_{} with S_{}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Perm { word: other.word.iter().map(|&x| self.word[x]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.word.iter().enumerate() {
            inv[x] = i;
        }
        Perm { word: inv }
    }

    /// Disjoint cycles (0-based), each starting at its smallest element,
    /// fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.word[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.word[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_parts(self.cycles().iter().map(Vec::len).collect())
    }

    /// Order of the centralizer of `self` in `S_n`.
    pub fn centralizer_order(&self) -> u128 {
        self.cycle_type().centralizer_order()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i64 {
        let odd = self.cycles().iter().filter(|c| c.len() % 2 == 0).count() % 2;
        if odd == 0 {
            1
        } else {
            -1
        }
    }

    /// Block placement `(self, other) ∈ S_a × S_b → S_{a+b}`.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let a = self.degree();
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&x| x + a));
        Perm { word }
    }

    /// Advances to the next permutation in lexicographic order of the word.
    /// Returns `false` (leaving `self` unchanged) at the last one.
    pub fn next_lex(&mut self) -> bool {
        next_permutation(&mut self.word)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

/// Cycle notation, fixed points omitted; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn next_permutation(w: &mut [usize]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// All of `S_n` in lexicographic order.
pub fn all_perms(n: usize) -> Result<Vec<Perm>> {
    limits::check_enumeration(limits::factorial(n))?;
    let mut p = Perm::identity(n);
    let mut out = vec![p.clone()];
    while p.next_lex() {
        out.push(p.clone());
    }
    Ok(out)
}

/// A sequence of non-negative block sizes `(n_1,…,n_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Composition {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// 0-based start of block `i`.
    pub fn offset(&self, i: usize) -> usize {
        self.parts[..i].iter().sum()
    }

    /// The interval of block `i` (0-based, half open).
    pub fn interval(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.offset(i);
        start..start + self.parts[i]
    }

    /// Block index of every position.
    fn block_of(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| std::iter::repeat_n(i, len))
            .collect()
    }
}

/// `Π_c`: the element of `S_n` acting on block `i` by `elems[i]`.
pub fn pi_embed(c: &Composition, elems: &[Perm]) -> Result<Perm> {
    if elems.len() != c.parts.len() {
        return Err(Error::SizeMismatch(format!(
            "{} blocks but {} permutations",
            c.parts.len(),
            elems.len()
        )));
    }
    let mut word = Vec::with_capacity(c.total());
    let mut offset = 0;
    for (e, &len) in elems.iter().zip(&c.parts) {
        if e.degree() != len {
            return Err(Error::DegreeMismatch(format!("block of size {len} got S_{}", e.degree())));
        }
        word.extend(e.word.iter().map(|&x| x + offset));
        offset += len;
    }
    Ok(Perm { word })
}

/// `Ω^c(s)`: the permutation that moves block `i` to block rank `s(i)` and
/// keeps the order inside each block.
///
/// Computed by stable-sorting positions by `(s(block), position)`; that
/// sorted list is the arrangement of `{1..n}` after the shuffle, and the map
/// itself is its inverse.
pub fn omega_block(c: &Composition, s: &Perm) -> Result<Perm> {
    if s.degree() != c.parts.len() {
        return Err(Error::DegreeMismatch(format!(
            "{} blocks but s ∈ S_{}",
            c.parts.len(),
            s.degree()
        )));
    }
    let block = c.block_of();
    let mut arrangement: Vec<usize> = (0..c.total()).collect();
    arrangement.sort_by_key(|&x| s.word[block[x]]);
    Ok(Perm { word: arrangement }.inverse())
}

/// `α^{(w_i)}_{(n_i)}`: `S_{n_1}×…×S_{n_k} → S_n` with `n = Σ n_i w_i`,
/// built as `Π_{(n_i w_i)} ∘ (Ω^{(w_1^{n_1})} × … × Ω^{(w_k^{n_k})})`.
pub fn alpha_embed(weights: &[usize], multidegree: &[usize], elems: &[Perm]) -> Result<Perm> {
    if weights.len() != multidegree.len() || elems.len() != multidegree.len() {
        return Err(Error::SizeMismatch(format!(
            "weights {}, multidegree {}, elements {}",
            weights.len(),
            multidegree.len(),
            elems.len()
        )));
    }
    let mut blocks = Vec::with_capacity(elems.len());
    for ((&w, &n), e) in weights.iter().zip(multidegree).zip(elems) {
        if e.degree() != n {
            return Err(Error::DegreeMismatch(format!("S_{n} slot got S_{}", e.degree())));
        }
        blocks.push(omega_block(&Composition::new(vec![w; n]), e)?);
    }
    let outer = Composition::new(weights.iter().zip(multidegree).map(|(w, n)| w * n).collect());
    pi_embed(&outer, &blocks)
}

/// Iterator over the Young subgroup `S_{n_1} × … × S_{n_k}`.
pub struct YoungSubgroup {
    factors: Vec<Vec<Perm>>,
    index: Vec<usize>,
    done: bool,
}

/// Enumerates `S_{n_1}×…×S_{n_k}` once each; fails when `Π n_i!` exceeds
/// the enumeration limit.
pub fn young_subgroup(multidegree: &[usize]) -> Result<YoungSubgroup> {
    limits::check_enumeration(young_order(multidegree))?;
    let factors = multidegree.iter().map(|&n| all_perms(n)).collect::<Result<Vec<_>>>()?;
    Ok(YoungSubgroup { index: vec![0; factors.len()], factors, done: false })
}

/// `Π n_i!` (saturating).
pub fn young_order(multidegree: &[usize]) -> u128 {
    multidegree
        .iter()
        .fold(1u128, |acc, &n| acc.saturating_mul(limits::factorial(n)))
}

impl Iterator for YoungSubgroup {
    type Item = Vec<Perm>;

    fn next(&mut self) -> Option<Vec<Perm>> {
        if self.done {
            return None;
        }
        let item = self.index.iter().zip(&self.factors).map(|(&i, f)| f[i].clone()).collect();
        // odometer, last factor fastest
        let mut k = self.factors.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.factors[k].len() {
                break;
            }
            self.index[k] = 0;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let t12 = cyc(3, &[&[1, 2]]);
        let t23 = cyc(3, &[&[2, 3]]);
        assert!(t12.compose(&t12).unwrap().is_identity());
        assert_eq!(t12.compose(&Perm::identity(3)).unwrap(), t12);
        assert_eq!(t12.compose(&t23).unwrap().one_line(), vec![2, 3, 1]);
        assert!(t12.compose(&Perm::identity(4)).is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(3).cycle_type().rows(), &[1, 1, 1]);
        assert_eq!(cyc(3, &[&[1, 2, 3]]).cycle_type().rows(), &[3]);
        assert_eq!(Perm::from_one_line(&[4, 5, 2, 3, 1]).unwrap().cycle_type().rows(), &[5]);
    }

    #[test]
    fn centralizer_orders() {
        for n in 1..7 {
            assert_eq!(cyc(n, &[&(1..=n).collect::<Vec<_>>()]).centralizer_order(), n as u128);
            assert_eq!(Perm::identity(n).centralizer_order(), limits::factorial(n));
        }
        // brute force for (12) in S_4
        let t = cyc(4, &[&[1, 2]]);
        let brute = all_perms(4)
            .unwrap()
            .into_iter()
            .filter(|g| g.compose(&t).unwrap() == t.compose(g).unwrap())
            .count();
        assert_eq!(brute, 4);
        assert_eq!(t.centralizer_order(), 4);
    }

    #[test]
    fn centralizer_times_class_size() {
        for n in 0..=6 {
            let all = all_perms(n).unwrap();
            for a in &all {
                let class: std::collections::HashSet<_> = all
                    .iter()
                    .map(|g| g.compose(a).unwrap().compose(&g.inverse()).unwrap())
                    .collect();
                assert_eq!(a.centralizer_order() * class.len() as u128, limits::factorial(n));
            }
        }
    }

    #[test]
    fn pi_examples() {
        let c = Composition::new(vec![2, 3]);
        let p = pi_embed(&c, &[cyc(2, &[&[1, 2]]), cyc(3, &[&[1, 2, 3]])]).unwrap();
        assert_eq!(p.one_line(), vec![2, 1, 4, 5, 3]);
        assert!(pi_embed(&c, &[Perm::identity(2), Perm::identity(3)]).unwrap().is_identity());
        let c = Composition::new(vec![1, 2]);
        let p = pi_embed(&c, &[Perm::identity(1), cyc(2, &[&[1, 2]])]).unwrap();
        assert_eq!(p.one_line(), vec![1, 3, 2]);
        assert!(pi_embed(&c, &[Perm::identity(2), Perm::identity(2)]).is_err());
    }

    /// The unique permutation satisfying both ordering conditions, by search.
    fn omega_by_search(c: &Composition, s: &Perm) -> Perm {
        let block = c.block_of();
        let found: Vec<Perm> = all_perms(c.total())
            .unwrap()
            .into_iter()
            .filter(|w| {
                (0..c.total()).all(|x| {
                    (0..c.total()).all(|y| {
                        let lt = w.image(x) < w.image(y);
                        if block[x] != block[y] {
                            lt == (s.image(block[x]) < s.image(block[y]))
                        } else {
                            lt == (x < y)
                        }
                    })
                })
            })
            .collect();
        assert_eq!(found.len(), 1);
        found.into_iter().next().unwrap()
    }

    #[test]
    fn omega_examples() {
        let c = Composition::new(vec![1, 2, 2]);
        let s = cyc(3, &[&[1, 3]]);
        let w = omega_block(&c, &s).unwrap();
        assert_eq!(w, omega_by_search(&c, &s));
        // The displayed two-row form lists the rearranged sequence, i.e. the
        // inverse map; as a cycle it is (14325).
        assert_eq!(w.inverse().one_line(), vec![4, 5, 2, 3, 1]);
        assert_eq!(w.inverse().to_string(), "(1 4 3 2 5)");
        assert_eq!(w.cycle_type().rows(), &[5]);

        assert!(omega_block(&c, &Perm::identity(3)).unwrap().is_identity());
        let c = Composition::new(vec![2, 2]);
        let s = cyc(2, &[&[1, 2]]);
        assert_eq!(omega_block(&c, &s).unwrap().one_line(), vec![3, 4, 1, 2]);
        assert_eq!(omega_block(&c, &s).unwrap(), omega_by_search(&c, &s));
    }

    #[test]
    fn omega_matches_search_exhaustively() {
        for parts in [vec![1, 2, 0], vec![2, 1, 1], vec![3, 1], vec![1, 1, 1, 1]] {
            let c = Composition::new(parts);
            for s in all_perms(c.parts().len()).unwrap() {
                assert_eq!(omega_block(&c, &s).unwrap(), omega_by_search(&c, &s));
            }
        }
    }

    fn is_hom(c: &Composition) -> bool {
        let group = all_perms(c.parts().len()).unwrap();
        group.iter().all(|a| {
            group.iter().all(|b| {
                omega_block(c, &a.compose(b).unwrap()).unwrap()
                    == omega_block(c, a).unwrap().compose(&omega_block(c, b).unwrap()).unwrap()
            })
        })
    }

    #[test]
    fn omega_homomorphism_iff_equal_parts() {
        assert!(is_hom(&Composition::new(vec![2, 2, 2])));
        assert!(is_hom(&Composition::new(vec![1, 1, 1])));
        assert!(is_hom(&Composition::new(vec![3, 3])));
        assert!(!is_hom(&Composition::new(vec![1, 2, 2])));
        assert!(!is_hom(&Composition::new(vec![1, 2])));
        assert!(!is_hom(&Composition::new(vec![2, 1, 1])));
    }

    #[test]
    fn alpha_examples() {
        // weights all one: α is Π
        let elems = [cyc(2, &[&[1, 2]]), cyc(3, &[&[1, 3]])];
        let c = Composition::new(vec![2, 3]);
        assert_eq!(alpha_embed(&[1, 1], &[2, 3], &elems).unwrap(), pi_embed(&c, &elems).unwrap());
        assert!(alpha_embed(&[2, 1], &[2, 3], &[Perm::identity(2), Perm::identity(3)])
            .unwrap()
            .is_identity());
        let a = alpha_embed(&[2], &[2], &[cyc(2, &[&[1, 2]])]).unwrap();
        assert_eq!(a.one_line(), vec![3, 4, 1, 2]);
        assert!(alpha_embed(&[2], &[2, 1], &[Perm::identity(2)]).is_err());
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        // exhaustive over Σ n_i ≤ 4
        for (weights, md) in [
            (vec![1, 1], vec![2, 2]),
            (vec![2, 1], vec![2, 1]),
            (vec![1, 3], vec![3, 1]),
            (vec![2], vec![2]),
            (vec![1, 2, 0], vec![1, 1, 2]),
        ] {
            let group: Vec<_> = young_subgroup(&md).unwrap().collect();
            let mut images = std::collections::HashSet::new();
            for g in &group {
                let ag = alpha_embed(&weights, &md, g).unwrap();
                let pg = pi_embed(&Composition::new(md.clone()), g).unwrap();
                images.insert((ag.clone(), pg.clone()));
                for h in &group {
                    let gh: Vec<Perm> = g.iter().zip(h).map(|(a, b)| a.compose(b).unwrap()).collect();
                    let ah = alpha_embed(&weights, &md, h).unwrap();
                    assert_eq!(alpha_embed(&weights, &md, &gh).unwrap(), ag.compose(&ah).unwrap());
                    let ph = pi_embed(&Composition::new(md.clone()), h).unwrap();
                    assert_eq!(
                        pi_embed(&Composition::new(md.clone()), &gh).unwrap(),
                        pg.compose(&ph).unwrap()
                    );
                }
            }
            let alpha_images: std::collections::HashSet<_> = images.iter().map(|x| &x.1).collect();
            assert_eq!(alpha_images.len(), group.len());
            if weights.iter().all(|&w| w > 0) {
                let a: std::collections::HashSet<_> = images.iter().map(|x| &x.0).collect();
                assert_eq!(a.len(), group.len());
            }
        }
    }

    #[test]
    fn young_subgroup_counts() {
        assert_eq!(young_subgroup(&[1, 1]).unwrap().count(), 1);
        assert_eq!(young_subgroup(&[2, 1]).unwrap().count(), 2);
        let all: Vec<_> = young_subgroup(&[3, 2]).unwrap().collect();
        assert_eq!(all.len(), 12);
        let distinct: std::collections::HashSet<_> = all.into_iter().collect();
        assert_eq!(distinct.len(), 12);
        assert_eq!(young_subgroup(&[]).unwrap().count(), 1);
        assert!(matches!(young_subgroup(&[11]), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn display_and_parse_forms() {
        let p = cyc(5, &[&[1, 3], &[2, 5, 4]]);
        assert_eq!(p.to_string(), "(1 3)(2 5 4)");
        assert_eq!(Perm::identity(4).to_string(), "()");
        assert_eq!(p.sign(), -1);
    }
}
