//! Exact rational tensors, concrete structures, and evaluation of diagrams.
//!
//! A tensor of arity `(p,q)` on `K^d` is stored densely, row-major over the
//! multi-index `(a_1,…,a_p, b_1,…,b_q)` with `a_1` most significant.
//!
//! Diagrams are evaluated as tensor networks: every string is a summation
//! variable, every `x_i` box a factor, and variables are summed out one at a
//! time in a greedy order that keeps intermediate factors small. The
//! arithmetic runs on integers (each tensor is scaled by the common
//! denominator of its entries) in `i128`, switching to `BigInt` on overflow.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{basis, BoxLabel, ClosedDiagram, End, OpenDiagram, TypeSignature, Wiring};
use crate::kx::KXElement;
use crate::limits;
use crate::linalg;
use crate::symgrp::Perm;
use crate::{fmt_q, Error, Result, Q};

/// Which index group of a tensor a permutation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Out,
    In,
}

/// Dense tensor in `W^{⊗p} ⊗ (W*)^{⊗q}`, `W = K^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTensor {
    out_arity: usize,
    in_arity: usize,
    dim: usize,
    data: Vec<Q>,
}

fn entry_count(dim: usize, slots: usize) -> Result<usize> {
    let n = (dim as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    limits::check_tensor(n)?;
    Ok(n as usize)
}

impl RationalTensor {
    pub fn new(out_arity: usize, in_arity: usize, dim: usize, data: Vec<Q>) -> Result<RationalTensor> {
        let n = entry_count(dim, out_arity + in_arity)?;
        if data.len() != n {
            return Err(Error::SizeMismatch(format!("expected {n} entries, got {}", data.len())));
        }
        Ok(RationalTensor { out_arity, in_arity, dim, data })
    }

    pub fn zeros(out_arity: usize, in_arity: usize, dim: usize) -> Result<RationalTensor> {
        let n = entry_count(dim, out_arity + in_arity)?;
        Ok(RationalTensor { out_arity, in_arity, dim, data: vec![Q::zero(); n] })
    }

    pub fn scalar(x: Q) -> RationalTensor {
        RationalTensor { out_arity: 0, in_arity: 0, dim: 0, data: vec![x] }
    }

    /// `Id_W` as a `(1,1)` tensor.
    pub fn identity(dim: usize) -> RationalTensor {
        let mut t = RationalTensor::zeros(1, 1, dim).expect("small");
        for a in 0..dim {
            t.data[a * dim + a] = Q::one();
        }
        t
    }

    /// Integer entries.
    pub fn from_ints(out_arity: usize, in_arity: usize, dim: usize, data: &[i64]) -> Result<RationalTensor> {
        RationalTensor::new(out_arity, in_arity, dim, data.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn slots(&self) -> usize {
        self.out_arity + self.in_arity
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflat(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.slots()];
        for k in (0..idx.len()).rev() {
            idx[k] = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    /// Entry at the 0-based multi-index `(outs…, ins…)`.
    pub fn get(&self, idx: &[usize]) -> &Q {
        &self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], x: Q) {
        let f = self.flat(idx);
        self.data[f] = x;
    }

    pub fn scale(&self, c: &Q) -> RationalTensor {
        let mut t = self.clone();
        for x in &mut t.data {
            *x *= c;
        }
        t
    }

    /// The single entry of a `(0,0)` tensor.
    pub fn as_scalar(&self) -> Option<&Q> {
        (self.slots() == 0).then(|| &self.data[0])
    }

    /// Full contraction `Σ self[a;b]·other[b;a]` with a tensor of the
    /// transposed arity; equals `Tr(self ∘ other)`.
    pub fn pairing(&self, other: &RationalTensor) -> Result<Q> {
        if (self.out_arity, self.in_arity) != (other.in_arity, other.out_arity) || self.dim != other.dim {
            return Err(Error::DegreeMismatch("pairing needs transposed arities and equal dimensions".into()));
        }
        let mut sum = Q::zero();
        for (f, x) in self.data.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let idx = self.unflat(f);
            let (a, b) = idx.split_at(self.out_arity);
            let mut swapped = b.to_vec();
            swapped.extend_from_slice(a);
            sum += x * other.get(&swapped);
        }
        Ok(sum)
    }
}

/// `a ⊗ b` with slot order `(outs a, outs b, ins a, ins b)`.
pub fn tensor_product(a: &RationalTensor, b: &RationalTensor) -> Result<RationalTensor> {
    let dim = match (a.slots(), b.slots()) {
        (0, _) => b.dim,
        (_, 0) => a.dim,
        _ if a.dim == b.dim => a.dim,
        _ => return Err(Error::SizeMismatch(format!("dimensions {} and {}", a.dim, b.dim))),
    };
    let mut out = RationalTensor::zeros(a.out_arity + b.out_arity, a.in_arity + b.in_arity, dim)?;
    for (fa, x) in a.data.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let ia = if a.slots() == 0 { Vec::new() } else { a.unflat(fa) };
        for (fb, y) in b.data.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let ib = if b.slots() == 0 { Vec::new() } else { b.unflat(fb) };
            let mut idx = ia[..a.out_arity].to_vec();
            idx.extend_from_slice(&ib[..b.out_arity]);
            idx.extend_from_slice(&ia[a.out_arity..]);
            idx.extend_from_slice(&ib[b.out_arity..]);
            out.set(&idx, x * y);
        }
    }
    Ok(out)
}

/// `L_σ ∘ t` (side `Out`) or `t ∘ L_σ` (side `In`), where `L_σ` moves
/// tensor factor `k` to position `σ(k)`.
pub fn apply_perm(t: &RationalTensor, sigma: &Perm, side: Side) -> Result<RationalTensor> {
    let (offset, arity) = match side {
        Side::Out => (0, t.out_arity),
        Side::In => (t.out_arity, t.in_arity),
    };
    if sigma.degree() != arity {
        return Err(Error::DegreeMismatch(format!("S_{} on {arity} slots", sigma.degree())));
    }
    let mut out = RationalTensor::zeros(t.out_arity, t.in_arity, t.dim)?;
    for f in 0..t.data.len() {
        let new = t.unflat(f);
        let mut old = new.clone();
        for k in 0..arity {
            match side {
                // new(a) = old(a_{σ(1)}, …, a_{σ(p)})
                Side::Out => old[offset + k] = new[offset + sigma.image(k)],
                // new(b) = old(b_{σ⁻¹(1)}, …): input slot σ(k) receives position k
                Side::In => old[offset + sigma.image(k)] = new[offset + k],
            }
        }
        out.data[f] = t.get(&old).clone();
    }
    Ok(out)
}

/// `ev^j`: contracts the last `j` outputs against the last `j` inputs,
/// output `p-j+k` with input `q-j+k`.
pub fn partial_trace(t: &RationalTensor, j: usize) -> Result<RationalTensor> {
    if j > t.out_arity || j > t.in_arity {
        return Err(Error::Invalid(format!("cannot contract {j} strings of a ({},{}) tensor", t.out_arity, t.in_arity)));
    }
    let (p, q) = (t.out_arity - j, t.in_arity - j);
    let mut out = RationalTensor::zeros(p, q, t.dim)?;
    if p + q == 0 {
        out.dim = t.dim;
    }
    for (f, x) in t.data.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let idx = t.unflat(f);
        let (outs, ins) = idx.split_at(t.out_arity);
        if (0..j).any(|k| outs[p + k] != ins[q + k]) {
            continue;
        }
        let mut new = outs[..p].to_vec();
        new.extend_from_slice(&ins[..q]);
        let g = out.flat(&new);
        out.data[g] += x;
    }
    Ok(out)
}

/// A structure `(K^d, (x_i))` of a given type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    sig: TypeSignature,
    dim: usize,
    tensors: Vec<RationalTensor>,
    /// Per tensor: common denominator and the scaled integer entries.
    scaled: Vec<(BigInt, Vec<BigInt>)>,
}

impl Structure {
    pub fn new(sig: &TypeSignature, dim: usize, tensors: Vec<RationalTensor>) -> Result<Structure> {
        if tensors.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!("{} tensors for {sig}", tensors.len())));
        }
        let mut fixed = Vec::with_capacity(tensors.len());
        for (t, &(p, q)) in tensors.into_iter().zip(sig.pairs()) {
            if (t.out_arity, t.in_arity) != (p, q) {
                return Err(Error::SignatureMismatch(format!(
                    "tensor of arity ({},{}) in a ({p},{q}) slot",
                    t.out_arity, t.in_arity
                )));
            }
            if p + q > 0 && t.dim != dim {
                return Err(Error::SizeMismatch(format!("tensor on K^{} in a structure on K^{dim}", t.dim)));
            }
            let mut t = t;
            t.dim = dim;
            fixed.push(t);
        }
        let scaled = fixed.iter().map(scale_to_integers).collect();
        Ok(Structure { sig: sig.clone(), dim, tensors: fixed, scaled })
    }

    /// Integer entries uniform in `[-5, 5]` from a seeded ChaCha8 stream.
    pub fn random(sig: &TypeSignature, dim: usize, seed: u64) -> Result<Structure> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Structure::random_with(sig, dim, &mut rng)
    }

    pub fn random_with<R: Rng>(sig: &TypeSignature, dim: usize, rng: &mut R) -> Result<Structure> {
        let tensors = sig
            .pairs()
            .iter()
            .map(|&(p, q)| {
                let n = entry_count(dim, p + q)?;
                let data = (0..n).map(|_| Q::from_integer(rng.random_range(-5i64..=5).into())).collect();
                RationalTensor::new(p, q, dim, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Structure::new(sig, dim, tensors)
    }

    /// The zero-dimensional structure (scalars set to 0).
    pub fn zero_dimensional(sig: &TypeSignature) -> Structure {
        let tensors = sig.pairs().iter().map(|&(p, q)| RationalTensor::zeros(p, q, 0).expect("empty")).collect();
        Structure::new(sig, 0, tensors).expect("consistent")
    }

    /// `(K, (1))`: every tensor is the single entry 1.
    pub fn unit(sig: &TypeSignature) -> Structure {
        let tensors = sig
            .pairs()
            .iter()
            .map(|&(p, q)| RationalTensor::new(p, q, 1, vec![Q::one()]).expect("one entry"))
            .collect();
        Structure::new(sig, 1, tensors).expect("consistent")
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensors(&self) -> &[RationalTensor] {
        &self.tensors
    }

    /// Conjugates every tensor by `g ∈ GL_d`: `g^{⊗p} x (g⁻¹)^{⊗q}`.
    pub fn change_basis(&self, g: &[Vec<Q>]) -> Result<Structure> {
        let g_inv = linalg::inverse(g)?;
        if g.len() != self.dim {
            return Err(Error::SizeMismatch(format!("{}×{} matrix on K^{}", g.len(), g.len(), self.dim)));
        }
        let mut out = Vec::with_capacity(self.tensors.len());
        for t in &self.tensors {
            let mut cur = t.clone();
            for slot in 0..t.slots() {
                cur = mode_multiply(&cur, slot, |a, c| {
                    if slot < t.out_arity {
                        g[a][c].clone()
                    } else {
                        g_inv[c][a].clone()
                    }
                })?;
            }
            out.push(cur);
        }
        Structure::new(&self.sig, self.dim, out)
    }

    /// Reads the line-oriented structure format.
    pub fn parse(text: &str) -> Result<Structure> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| Error::Parse(format!("line {}: {msg}", line + 1));
        let (ln, first) = lines.next().ok_or_else(|| Error::Parse("empty structure file".into()))?;
        let sig: TypeSignature = first
            .strip_prefix("signature")
            .ok_or_else(|| perr(ln, "expected `signature p1 q1 …`"))?
            .parse()?;
        let (ln, second) = lines.next().ok_or_else(|| Error::Parse("missing `dim d` line".into()))?;
        let dim: usize = second
            .strip_prefix("dim")
            .ok_or_else(|| perr(ln, "expected `dim d`"))?
            .trim()
            .parse()
            .map_err(|_| perr(ln, "bad dimension"))?;
        let mut tensors: Vec<RationalTensor> = sig
            .pairs()
            .iter()
            .map(|&(p, q)| RationalTensor::zeros(p, q, dim))
            .collect::<Result<_>>()?;
        let mut seen: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); sig.len()];
        let mut current: Option<usize> = None;
        for (ln, line) in lines {
            if let Some(rest) = line.strip_prefix("tensor") {
                let i: usize = rest.trim().parse().map_err(|_| perr(ln, "bad tensor index"))?;
                if i == 0 || i > sig.len() {
                    return Err(perr(ln, "tensor index out of range"));
                }
                current = Some(i - 1);
                continue;
            }
            let i = current.ok_or_else(|| perr(ln, "entry before any `tensor i` line"))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let (p, q) = sig.pairs()[i];
            if fields.len() != p + q + 1 {
                return Err(perr(ln, &format!("expected {} indices and a value", p + q)));
            }
            let idx = fields[..p + q]
                .iter()
                .map(|f| match f.parse::<usize>() {
                    Ok(k) if k >= 1 && k <= dim => Ok(k - 1),
                    _ => Err(perr(ln, &format!("index {f:?} out of range 1..={dim}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let value = crate::parse::parse_rational(fields[p + q]).map_err(|_| perr(ln, "bad value"))?;
            if !seen[i].insert(idx.clone()) {
                return Err(perr(ln, "duplicate index"));
            }
            tensors[i].set(&idx, value);
        }
        Structure::new(&sig, dim, tensors)
    }

    /// Inverse of [`Structure::parse`]; zero entries are omitted.
    pub fn to_text(&self) -> String {
        let mut out = format!("signature {}\ndim {}\n", flat_sig(&self.sig), self.dim);
        for (i, t) in self.tensors.iter().enumerate() {
            out.push_str(&format!("tensor {}\n", i + 1));
            for (f, x) in t.data.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let idx: Vec<String> = t.unflat(f).iter().map(|k| (k + 1).to_string()).collect();
                let mut line = idx.join(" ");
                if !line.is_empty() {
                    line.push(' ');
                }
                out.push_str(&format!("{line}{}\n", fmt_q(x)));
            }
        }
        out
    }
}

fn flat_sig(sig: &TypeSignature) -> String {
    sig.pairs().iter().map(|(p, q)| format!("{p} {q}")).collect::<Vec<_>>().join(" ")
}

fn scale_to_integers(t: &RationalTensor) -> (BigInt, Vec<BigInt>) {
    let l = t.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = t.data.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    (l, ints)
}

/// Multiplies one slot by a matrix: `new[…a…] = Σ_c m(a,c)·old[…c…]`.
fn mode_multiply(t: &RationalTensor, slot: usize, m: impl Fn(usize, usize) -> Q) -> Result<RationalTensor> {
    let mut out = RationalTensor::zeros(t.out_arity, t.in_arity, t.dim)?;
    for (f, x) in t.data.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mut idx = t.unflat(f);
        let c = idx[slot];
        for a in 0..t.dim {
            let coeff = m(a, c);
            if coeff.is_zero() {
                continue;
            }
            idx[slot] = a;
            let g = out.flat(&idx);
            out.data[g] += x * coeff;
        }
    }
    Ok(out)
}

/// Block-diagonal structure on `K^{d_1} ⊕ K^{d_2}`; scalar slots add.
pub fn direct_sum(s1: &Structure, s2: &Structure) -> Result<Structure> {
    s1.sig.check_same(&s2.sig)?;
    let dim = s1.dim + s2.dim;
    let mut tensors = Vec::with_capacity(s1.tensors.len());
    for (a, b) in s1.tensors.iter().zip(&s2.tensors) {
        if a.slots() == 0 {
            tensors.push(RationalTensor::scalar(&a.data[0] + &b.data[0]));
            continue;
        }
        let mut t = RationalTensor::zeros(a.out_arity, a.in_arity, dim)?;
        for (f, x) in a.data.iter().enumerate() {
            t.set(&a.unflat(f), x.clone());
        }
        for (f, x) in b.data.iter().enumerate() {
            let idx: Vec<usize> = b.unflat(f).into_iter().map(|k| k + s1.dim).collect();
            t.set(&idx, x.clone());
        }
        tensors.push(t);
    }
    Structure::new(&s1.sig, dim, tensors)
}

/// Structure on `K^{d_1} ⊗ K^{d_2}`, basis `e_a ⊗ e_b ↦ a·d_2 + b`.
pub fn tensor_structures(s1: &Structure, s2: &Structure) -> Result<Structure> {
    s1.sig.check_same(&s2.sig)?;
    let dim = s1.dim * s2.dim;
    let mut tensors = Vec::with_capacity(s1.tensors.len());
    for (a, b) in s1.tensors.iter().zip(&s2.tensors) {
        if a.slots() == 0 {
            tensors.push(RationalTensor::scalar(&a.data[0] * &b.data[0]));
            continue;
        }
        let mut t = RationalTensor::zeros(a.out_arity, a.in_arity, dim)?;
        for (fa, x) in a.data.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let ia = a.unflat(fa);
            for (fb, y) in b.data.iter().enumerate() {
                let ib = b.unflat(fb);
                let idx: Vec<usize> = ia.iter().zip(&ib).map(|(&i, &j)| i * s2.dim + j).collect();
                t.set(&idx, x * y);
            }
        }
        tensors.push(t);
    }
    Structure::new(&s1.sig, dim, tensors)
}

/// Integer arithmetic used by the contraction engine. `None` means overflow.
trait Ring: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn from_usize(x: usize) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn from_usize(x: usize) -> Self {
        x as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn from_usize(x: usize) -> Self {
        BigInt::from(x)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Dense factor over a sorted list of variables, first variable most
/// significant.
struct Factor<R> {
    vars: Vec<usize>,
    data: Vec<R>,
}

/// Sums the product of `factors` over `sum_var` (if any); the result lives
/// on the union of their variables minus `sum_var`.
fn combine<R: Ring>(d: usize, factors: &[Factor<R>], sum_var: Option<usize>) -> Option<Factor<R>> {
    let union: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let result_vars: Vec<usize> = union.iter().copied().filter(|&v| Some(v) != sum_var).collect();
    let stride_of = |vars: &[usize]| -> Vec<usize> {
        union
            .iter()
            .map(|u| match vars.iter().position(|v| v == u) {
                Some(k) => d.pow((vars.len() - 1 - k) as u32),
                None => 0,
            })
            .collect()
    };
    let strides: Vec<Vec<usize>> = factors.iter().map(|f| stride_of(&f.vars)).collect();
    let out_stride = stride_of(&result_vars);
    let mut out = vec![R::zero(); d.pow(result_vars.len() as u32)];
    let total = d.pow(union.len() as u32);
    if total == 0 {
        return Some(Factor { vars: result_vars, data: out });
    }
    let mut digits = vec![0usize; union.len()];
    let mut idx = vec![0usize; factors.len()];
    let mut out_idx = 0usize;
    for _ in 0..total {
        let mut prod: Option<R> = None;
        let mut zero = false;
        for (f, &i) in factors.iter().zip(&idx) {
            let x = &f.data[i];
            if x.is_zero() {
                zero = true;
                break;
            }
            prod = Some(match prod {
                None => x.clone(),
                Some(p) => p.mul(x)?,
            });
        }
        if !zero {
            let p = prod.unwrap_or_else(|| R::from_usize(1));
            out[out_idx] = out[out_idx].add(&p)?;
        }
        // odometer step, last variable fastest
        let mut k = union.len();
        while k > 0 {
            k -= 1;
            digits[k] += 1;
            for (i, s) in idx.iter_mut().zip(&strides) {
                *i += s[k];
            }
            out_idx += out_stride[k];
            if digits[k] < d {
                break;
            }
            digits[k] = 0;
            for (i, s) in idx.iter_mut().zip(&strides) {
                *i -= d * s[k];
            }
            out_idx -= d * out_stride[k];
        }
    }
    Some(Factor { vars: result_vars, data: out })
}

/// A contraction problem: box factors with variable lists (repeats
/// allowed), variables to keep, and the number of variables.
struct Network {
    /// `(tensor index, variables per slot)` for every `x_i` box.
    boxes: Vec<(usize, Vec<usize>)>,
    free: Vec<usize>,
    live: BTreeSet<usize>,
}

impl Network {
    /// Variables: one per output slot, then one per free input. `Id` boxes
    /// identify their two variables.
    fn from_wiring(sig: &TypeSignature, w: &Wiring) -> (Network, Vec<usize>, Vec<usize>) {
        let n_out = w.out_target.len();
        let n_in = w.in_count(sig);
        let mut feeder = vec![usize::MAX; n_in];
        for (s, e) in w.out_target.iter().enumerate() {
            if let End::Slot(u) = *e {
                feeder[u] = s;
            }
        }
        for (k, &u) in w.free_in.iter().enumerate() {
            feeder[u] = n_out + k;
        }
        let var_count = n_out + w.free_in.len();
        let mut parent: Vec<usize> = (0..var_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let out_off = w.out_offsets(sig);
        let in_off = w.in_offsets(sig);
        for (b, &l) in w.labels.iter().enumerate() {
            if l == BoxLabel::Id {
                let (a, c) = (find(&mut parent, out_off[b]), find(&mut parent, feeder[in_off[b]]));
                parent[a] = c;
            }
        }
        let mut boxes = Vec::new();
        for (b, &l) in w.labels.iter().enumerate() {
            if let BoxLabel::Tensor(i) = l {
                let (p, q) = sig.pairs()[i];
                let mut vars: Vec<usize> = (0..p).map(|t| find(&mut parent, out_off[b] + t)).collect();
                vars.extend((0..q).map(|t| find(&mut parent, feeder[in_off[b] + t])));
                boxes.push((i, vars));
            }
        }
        let p = w.free_out_count();
        let mut free_out = vec![0; p];
        for (s, e) in w.out_target.iter().enumerate() {
            if let End::Free(k) = *e {
                free_out[k] = find(&mut parent, s);
            }
        }
        let free_in: Vec<usize> = (0..w.free_in.len()).map(|k| find(&mut parent, n_out + k)).collect();
        let mut free: Vec<usize> = free_out.iter().chain(&free_in).copied().collect();
        free.sort_unstable();
        free.dedup();
        // only representatives are live variables
        // every class of strings is one summation variable, including
        // closed loops of identity boxes
        let live: BTreeSet<usize> = (0..var_count).map(|v| find(&mut parent, v)).collect();
        let net = Network { boxes, free, live };
        (net, free_out, free_in)
    }

    /// Elimination order: repeatedly sum out the variable whose factors
    /// have the smallest combined support. Returns the steps and the
    /// largest support size.
    fn plan(&self) -> (Vec<usize>, usize) {
        let mut sets: Vec<BTreeSet<usize>> = self.boxes.iter().map(|(_, v)| v.iter().copied().collect()).collect();
        let mut pending: BTreeSet<usize> = self.live.iter().copied().filter(|v| !self.free.contains(v)).collect();
        let mut steps = Vec::new();
        let mut widest = sets.iter().map(BTreeSet::len).max().unwrap_or(0);
        while !pending.is_empty() {
            let mut best: Option<(usize, usize)> = None;
            for &v in &pending {
                let size = sets.iter().filter(|s| s.contains(&v)).fold(BTreeSet::new(), |mut acc, s| {
                    acc.extend(s.iter().copied());
                    acc
                });
                let cost = size.len();
                if best.is_none_or(|(c, _)| cost < c) {
                    best = Some((cost, v));
                }
            }
            let (cost, v) = best.expect("pending is non-empty");
            widest = widest.max(cost);
            let mut merged = BTreeSet::new();
            sets.retain(|s| {
                if s.contains(&v) {
                    merged.extend(s.iter().copied());
                    false
                } else {
                    true
                }
            });
            merged.remove(&v);
            sets.push(merged);
            pending.remove(&v);
            steps.push(v);
        }
        let final_size = sets.iter().fold(BTreeSet::new(), |mut acc, s| {
            acc.extend(s.iter().copied());
            acc
        });
        (steps, widest.max(final_size.len()).max(self.free.len()))
    }

    /// Runs the contraction; the result is a factor over `self.free`.
    fn run<R: Ring>(&self, d: usize, tensors: &[Vec<BigInt>], steps: &[usize]) -> Option<Factor<R>> {
        let mut factors: Vec<Factor<R>> = Vec::with_capacity(self.boxes.len());
        for (i, vars) in &self.boxes {
            factors.push(box_factor::<R>(d, &tensors[*i], vars)?);
        }
        let mut scalar = R::from_usize(1);
        for &v in steps {
            let (with, without): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&v));
            factors = without;
            if with.is_empty() {
                // a loop with nothing on it: a factor d
                scalar = scalar.mul(&R::from_usize(d))?;
                continue;
            }
            factors.push(combine(d, &with, Some(v))?);
        }
        let mut last = combine(d, &factors, None)?;
        if !scalar.to_big().is_one() {
            for x in &mut last.data {
                *x = x.mul(&scalar)?;
            }
        }
        // extend to the full free-variable set (free variables untouched by
        // any box, e.g. pass-through strings)
        if last.vars.len() < self.free.len() {
            let missing: Vec<usize> = self.free.iter().copied().filter(|v| !last.vars.contains(v)).collect();
            let ones = Factor { data: vec![R::from_usize(1); d.pow(missing.len() as u32)], vars: missing };
            last = combine(d, &[last, ones], None)?;
        }
        Some(last)
    }
}

/// Factor of one box whose slots carry `vars` (possibly repeated).
fn box_factor<R: Ring>(d: usize, entries: &[BigInt], vars: &[usize]) -> Option<Factor<R>> {
    let unique: Vec<usize> = vars.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pos: Vec<usize> = vars.iter().map(|v| unique.iter().position(|u| u == v).expect("present")).collect();
    let size = d.pow(unique.len() as u32);
    let mut data = Vec::with_capacity(size);
    let mut digits = vec![0usize; unique.len()];
    for f in 0..size {
        let mut rest = f;
        for k in (0..unique.len()).rev() {
            digits[k] = rest % d;
            rest /= d;
        }
        let idx = pos.iter().fold(0usize, |acc, &p| acc * d + digits[p]);
        data.push(R::from_big(&entries[idx])?);
    }
    Some(Factor { vars: unique, data })
}

/// Contracts a wiring on a structure. Returns the integer result over the
/// free variables, the free output/input variables, and the denominator.
fn contract(sig: &TypeSignature, w: &Wiring, s: &Structure) -> Result<(Factor<BigInt>, Vec<usize>, Vec<usize>, BigInt)> {
    sig.check_same(&s.sig)?;
    let (net, free_out, free_in) = Network::from_wiring(sig, w);
    let (steps, widest) = net.plan();
    limits::check_tensor((s.dim as u128).checked_pow(widest as u32).unwrap_or(u128::MAX))?;
    let tensors: Vec<Vec<BigInt>> = s.scaled.iter().map(|(_, v)| v.clone()).collect();
    let result = match net.run::<i128>(s.dim, &tensors, &steps) {
        Some(f) => Factor { vars: f.vars, data: f.data.iter().map(Ring::to_big).collect() },
        None => net.run::<BigInt>(s.dim, &tensors, &steps).expect("BigInt never overflows"),
    };
    let (md, _) = w.multidegree(sig);
    let den = md
        .iter()
        .zip(&s.scaled)
        .fold(BigInt::one(), |acc, (&n, (l, _))| acc * num_traits::pow(l.clone(), n));
    Ok((result, free_out, free_in, den))
}

fn to_q(x: &BigInt, den: &BigInt) -> Q {
    Q::new(x.clone(), den.clone())
}

/// `Tr(L_σ(x_1^{⊗n_1}⊗…⊗Id^{⊗m}))`.
pub fn evaluate_closed(dg: &ClosedDiagram, s: &Structure) -> Result<Q> {
    let sig = dg.signature();
    let (f, _, _, den) = contract(sig, &dg.wiring(), s)?;
    Ok(to_q(&f.data[0], &den))
}

/// Linear extension of [`evaluate_closed`]; `D` evaluates to `d`.
pub fn evaluate_element(a: &KXElement, s: &Structure) -> Result<Q> {
    a.signature().check_same(&s.sig)?;
    let d = Q::from_integer(s.dim.into());
    let mut sum = Q::zero();
    for (m, c) in a.terms() {
        let v = evaluate_closed(m.diagram(), s)?;
        sum += c * v * num_traits::pow(d.clone(), m.d_power());
    }
    Ok(sum)
}

/// The tensor an open diagram represents, slot order `(free outs, free ins)`.
pub fn realize_open(dg: &OpenDiagram, s: &Structure) -> Result<RationalTensor> {
    let sig = dg.signature();
    let (p, q) = dg.degree();
    let (f, free_out, free_in, den) = contract(sig, &dg.wiring(), s)?;
    let d = s.dim;
    let mut out = RationalTensor::zeros(p, q, d)?;
    if p + q == 0 {
        out.data[0] = to_q(&f.data[0], &den);
        return Ok(out);
    }
    let slot_vars: Vec<usize> = free_out.iter().chain(&free_in).copied().collect();
    let pos: Vec<usize> = slot_vars.iter().map(|v| f.vars.iter().position(|u| u == v).expect("free")).collect();
    for flat in 0..out.data.len() {
        let idx = out.unflat(flat);
        // repeated variables force equal indices
        let mut assign = vec![usize::MAX; f.vars.len()];
        let mut ok = true;
        for (&k, &i) in pos.iter().zip(&idx) {
            if assign[k] == usize::MAX {
                assign[k] = i;
            } else if assign[k] != i {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let g = assign.iter().fold(0usize, |acc, &a| acc * d + a);
        out.data[flat] = to_q(&f.data[g], &den);
    }
    Ok(out)
}

/// `x_1^{⊗n_1} ⊗ … ⊗ x_r^{⊗n_r} ⊗ Id^{⊗m}` materialized.
pub fn materialize(s: &Structure, multidegree: &[usize], m: usize) -> Result<RationalTensor> {
    let mut acc = RationalTensor::scalar(Q::one());
    acc.dim = s.dim;
    for (t, &n) in s.tensors.iter().zip(multidegree) {
        for _ in 0..n {
            acc = tensor_product(&acc, t)?;
        }
    }
    let id = RationalTensor::identity(s.dim);
    for _ in 0..m {
        acc = tensor_product(&acc, &id)?;
    }
    acc.dim = s.dim;
    Ok(acc)
}

/// Reference route for small cases: `ev^j(L_σ X L_τ)` computed literally.
pub fn realize_open_dense(dg: &OpenDiagram, s: &Structure) -> Result<RationalTensor> {
    dg.signature().check_same(&s.sig)?;
    let x = materialize(s, dg.multidegree(), dg.id_boxes())?;
    let y = apply_perm(&x, dg.sigma(), Side::Out)?;
    let z = apply_perm(&y, dg.tau(), Side::In)?;
    partial_trace(&z, dg.contracted())
}

/// Reference route for small cases: `Tr(L_σ X)` computed literally.
pub fn evaluate_closed_dense(dg: &ClosedDiagram, s: &Structure) -> Result<Q> {
    let t = realize_open_dense(&OpenDiagram::from_closed(dg), s)?;
    Ok(t.data[0].clone())
}

/// Rank of `[eval(b_i, s_j)]` over the basis of one graded piece and
/// `samples` seeded random structures of dimension `d`. A lower bound for
/// `dim (K[X]/I_d)_{multidegree}`, equal to it for generic samples.
pub fn evaluation_rank(sig: &TypeSignature, multidegree: &[usize], d: usize, samples: usize, seed: u64) -> Result<usize> {
    let b = basis(sig, multidegree)?;
    if b.is_empty() {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = Structure::random_with(sig, d, &mut rng)?;
        rows.push(b.iter().map(|dg| evaluate_closed(dg, &s)).collect::<Result<Vec<_>>>()?);
    }
    Ok(linalg::rank(&rows))
}

/// Random `d×d` integer matrix with entries in `[-3,3]` and nonzero
/// determinant.
pub fn random_invertible(d: usize, rng: &mut impl Rng) -> Vec<Vec<Q>> {
    loop {
        let g: Vec<Vec<Q>> = (0..d)
            .map(|_| (0..d).map(|_| Q::from_integer(rng.random_range(-3i64..=3).into())).collect())
            .collect();
        if linalg::rank(&g) == d {
            return g;
        }
    }
}
