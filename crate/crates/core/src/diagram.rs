//! Closed and open string diagrams.
//!
//! A diagram has boxes labelled `x_1,…,x_r` or `Id`, sorted in that order.
//! Box `(i,k)` owns the output slots `Σ_{i'<i} n_{i'}p_{i'} + k·p_i + [0,p_i)`
//! and the input slots laid out the same way with the `q`'s; `Id` boxes come
//! last with one slot each. A closed diagram `p(n,σ,n_1,…,n_r,m)` glues
//! output slot `s` to input slot `σ(s)`, i.e. it is `Tr(L_σ X)`.
//!
//! Relabelling boxes by `g ∈ S_{n_1}×…×S_{n_r}×S_m` sends `σ` to
//! `α^{(q)}(g)·σ·α^{(p)}(g)⁻¹`; canonical forms are orbit minima under that
//! action.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::limits;
use crate::symgrp::{next_permutation, omega_block, young_order, young_subgroup, Composition, Perm};
use crate::{Error, Result};

/// The arities `((p_1,q_1),…,(p_r,q_r))` of the structure tensors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSignature {
    pairs: Vec<(usize, usize)>,
}

impl TypeSignature {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<TypeSignature> {
        if pairs.is_empty() {
            return Err(Error::Invalid("a signature needs at least one tensor".into()));
        }
        if pairs.iter().all(|&(p, q)| p == 0 && q == 0) {
            return Err(Error::Invalid("a signature cannot consist of scalars only".into()));
        }
        Ok(TypeSignature { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of tensors `r`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn out_weights(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(p, _)| p).collect()
    }

    pub fn in_weights(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(_, q)| q).collect()
    }

    /// `(Σ n_i p_i, Σ n_i q_i)`.
    pub fn string_counts(&self, multidegree: &[usize]) -> (usize, usize) {
        multidegree.iter().zip(&self.pairs).fold((0, 0), |(a, b), (&n, &(p, q))| (a + n * p, b + n * q))
    }

    pub fn is_balanced(&self, multidegree: &[usize]) -> bool {
        let (o, i) = self.string_counts(multidegree);
        o == i
    }

    pub(crate) fn check_multidegree(&self, multidegree: &[usize]) -> Result<()> {
        if multidegree.len() != self.len() {
            return Err(Error::SizeMismatch(format!(
                "multidegree has {} entries, signature has {}",
                multidegree.len(),
                self.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &TypeSignature) -> Result<()> {
        if self != other {
            return Err(Error::SignatureMismatch(format!("{self} vs {other}")));
        }
        Ok(())
    }

    fn out_arity(&self, label: BoxLabel) -> usize {
        match label {
            BoxLabel::Tensor(i) => self.pairs[i].0,
            BoxLabel::Id => 1,
        }
    }

    fn in_arity(&self, label: BoxLabel) -> usize {
        match label {
            BoxLabel::Tensor(i) => self.pairs[i].1,
            BoxLabel::Id => 1,
        }
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.pairs.iter().map(|(p, q)| format!("({p},{q})")).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Parses the flat form `"p1 q1 p2 q2 …"`.
impl FromStr for TypeSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<TypeSignature> {
        let nums = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("signature entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse("signature needs an even number of integers".into()));
        }
        TypeSignature::new(nums.chunks(2).map(|c| (c[0], c[1])).collect())
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Box label; the derived order `x_1 < … < x_r < Id` is the layout order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxLabel {
    Tensor(usize),
    Id,
}

/// Where an output string (or a free input string) goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum End {
    /// An input slot of some box.
    Slot(usize),
    /// A free output string.
    Free(usize),
}

/// Explicit wiring of a diagram: every output slot and every free input
/// names its destination. All diagram surgery happens in this form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Wiring {
    pub labels: Vec<BoxLabel>,
    pub out_target: Vec<End>,
    pub free_in: Vec<usize>,
}

impl Wiring {
    pub fn out_offsets(&self, sig: &TypeSignature) -> Vec<usize> {
        offsets(self.labels.iter().map(|&l| sig.out_arity(l)))
    }

    pub fn in_offsets(&self, sig: &TypeSignature) -> Vec<usize> {
        offsets(self.labels.iter().map(|&l| sig.in_arity(l)))
    }

    pub fn in_count(&self, sig: &TypeSignature) -> usize {
        self.labels.iter().map(|&l| sig.in_arity(l)).sum()
    }

    pub fn free_out_count(&self) -> usize {
        self.out_target.iter().filter(|e| matches!(e, End::Free(_))).count()
    }

    /// Box owning each output slot and each input slot.
    pub fn slot_owners(&self, sig: &TypeSignature) -> (Vec<usize>, Vec<usize>) {
        let mut outs = Vec::new();
        let mut ins = Vec::new();
        for (b, &l) in self.labels.iter().enumerate() {
            outs.extend(std::iter::repeat_n(b, sig.out_arity(l)));
            ins.extend(std::iter::repeat_n(b, sig.in_arity(l)));
        }
        (outs, ins)
    }

    /// Stable-sorts the boxes into layout order.
    pub fn sorted(&self, sig: &TypeSignature) -> Wiring {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by_key(|&b| self.labels[b]);
        if order.iter().enumerate().all(|(i, &b)| i == b) {
            return self.clone();
        }
        let old_out = self.out_offsets(sig);
        let old_in = self.in_offsets(sig);
        let labels: Vec<BoxLabel> = order.iter().map(|&b| self.labels[b]).collect();
        let mut out_map = vec![0; self.out_target.len()];
        let mut in_map = vec![0; self.in_count(sig)];
        let (mut o, mut i) = (0, 0);
        for &b in &order {
            let l = self.labels[b];
            for t in 0..sig.out_arity(l) {
                out_map[old_out[b] + t] = o;
                o += 1;
            }
            for t in 0..sig.in_arity(l) {
                in_map[old_in[b] + t] = i;
                i += 1;
            }
        }
        self.remap(labels, &out_map, &in_map)
    }

    /// Renumbers slots: old output slot `s` becomes `out_map[s]`, old input
    /// slot `u` becomes `in_map[u]`.
    fn remap(&self, labels: Vec<BoxLabel>, out_map: &[usize], in_map: &[usize]) -> Wiring {
        let mut out_target = vec![End::Free(0); self.out_target.len()];
        for (s, &e) in self.out_target.iter().enumerate() {
            out_target[out_map[s]] = match e {
                End::Slot(u) => End::Slot(in_map[u]),
                f => f,
            };
        }
        let free_in = self.free_in.iter().map(|&u| in_map[u]).collect();
        Wiring { labels, out_target, free_in }
    }

    /// Side-by-side placement (`self` left of `other`), boxes re-sorted.
    pub fn merge(&self, other: &Wiring, sig: &TypeSignature) -> Wiring {
        let in_a = self.in_count(sig);
        let p_a = self.free_out_count();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut out_target = self.out_target.clone();
        out_target.extend(other.out_target.iter().map(|&e| match e {
            End::Slot(u) => End::Slot(u + in_a),
            End::Free(k) => End::Free(k + p_a),
        }));
        let mut free_in = self.free_in.clone();
        free_in.extend(other.free_in.iter().map(|&u| u + in_a));
        Wiring { labels, out_target, free_in }.sorted(sig)
    }

    /// Counts per tensor label and the number of `Id` boxes.
    pub fn multidegree(&self, sig: &TypeSignature) -> (Vec<usize>, usize) {
        let mut md = vec![0; sig.len()];
        let mut m = 0;
        for &l in &self.labels {
            match l {
                BoxLabel::Tensor(i) => md[i] += 1,
                BoxLabel::Id => m += 1,
            }
        }
        (md, m)
    }

    /// Removes every `Id` box that is neither a free pass-through nor a
    /// closed loop by joining its source directly to its target.
    pub fn reduce_identities(&self, sig: &TypeSignature) -> Wiring {
        let mut w = self.clone();
        'outer: loop {
            let out_off = w.out_offsets(sig);
            let in_off = w.in_offsets(sig);
            for b in 0..w.labels.len() {
                if w.labels[b] != BoxLabel::Id {
                    continue;
                }
                let (s_b, u_b) = (out_off[b], in_off[b]);
                let target = w.out_target[s_b];
                let source_out = w.out_target.iter().position(|&e| e == End::Slot(u_b));
                match (source_out, target) {
                    (Some(s), _) if s == s_b => continue,
                    (Some(s), t) => w.out_target[s] = t,
                    (None, End::Free(_)) => continue,
                    (None, End::Slot(t)) => {
                        let k = w.free_in.iter().position(|&u| u == u_b).expect("input slot is fed");
                        w.free_in[k] = t;
                    }
                }
                w.remove_box(b, s_b, u_b);
                continue 'outer;
            }
            return w;
        }
    }

    fn remove_box(&mut self, b: usize, s_b: usize, u_b: usize) {
        self.labels.remove(b);
        self.out_target.remove(s_b);
        let shift = |u: usize| if u > u_b { u - 1 } else { u };
        for e in &mut self.out_target {
            if let End::Slot(u) = e {
                *u = shift(*u);
            }
        }
        for u in &mut self.free_in {
            *u = shift(*u);
        }
    }

    /// Number of `Id` boxes wired to themselves.
    pub fn identity_loops(&self, sig: &TypeSignature) -> usize {
        let out_off = self.out_offsets(sig);
        let in_off = self.in_offsets(sig);
        (0..self.labels.len())
            .filter(|&b| self.labels[b] == BoxLabel::Id && self.out_target[out_off[b]] == End::Slot(in_off[b]))
            .count()
    }

    /// Canonical `c(j,σ,τ)` data for this box order: contracted strings are
    /// numbered by increasing source output slot.
    pub fn cdata(&self) -> (usize, Vec<usize>, Vec<usize>) {
        let p = self.free_out_count();
        let q = self.free_in.len();
        let mut sigma = Vec::with_capacity(self.out_target.len());
        let mut tau = self.free_in.clone();
        for e in &self.out_target {
            match *e {
                End::Free(k) => sigma.push(k),
                End::Slot(u) => {
                    sigma.push(p + (tau.len() - q));
                    tau.push(u);
                }
            }
        }
        (tau.len() - q, sigma, tau)
    }

    /// Union-find over boxes; returns the component index of every box.
    pub fn box_components(&self, sig: &TypeSignature) -> Vec<usize> {
        let n = self.labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let (out_owner, in_owner) = self.slot_owners(sig);
        for (s, e) in self.out_target.iter().enumerate() {
            if let End::Slot(u) = *e {
                let (a, b) = (find(&mut parent, out_owner[s]), find(&mut parent, in_owner[u]));
                parent[a] = b;
            }
        }
        (0..n).map(|b| find(&mut parent, b)).collect()
    }
}

fn offsets(arities: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    arities
        .map(|a| {
            let o = acc;
            acc += a;
            o
        })
        .collect()
}

fn layout_labels(multidegree: &[usize], m: usize) -> Vec<BoxLabel> {
    let mut labels = Vec::new();
    for (i, &n) in multidegree.iter().enumerate() {
        labels.extend(std::iter::repeat_n(BoxLabel::Tensor(i), n));
    }
    labels.extend(std::iter::repeat_n(BoxLabel::Id, m));
    labels
}

/// Slot permutations induced by relabelling the boxes of one layout.
struct ActionTable {
    n_out: usize,
    n_in: usize,
    /// `α^{(p)}(g)⁻¹` for every group element, flattened.
    out_inv: Vec<u32>,
    /// `α^{(q)}(g)` for every group element, flattened.
    ins: Vec<u32>,
}

impl ActionTable {
    fn len(&self) -> usize {
        if self.n_out == 0 {
            self.ins.len().checked_div(self.n_in).unwrap_or(1)
        } else {
            self.out_inv.len() / self.n_out
        }
    }

    fn out_inv(&self, g: usize) -> &[u32] {
        &self.out_inv[g * self.n_out..(g + 1) * self.n_out]
    }

    fn ins(&self, g: usize) -> &[u32] {
        &self.ins[g * self.n_in..(g + 1) * self.n_in]
    }
}

const CACHED_GROUP_ORDER: u128 = 100_000;

thread_local! {
    static ACTION_CACHE: RefCell<HashMap<(Vec<(usize, usize)>, Vec<usize>, usize), Rc<ActionTable>>> =
        RefCell::new(HashMap::new());
}

/// `α^{(w)}(g)` for the block layout `(w_i)` with `n_i` blocks of type `i`:
/// block `k` of type `i` moves to block `g_i(k)`, keeping its offsets.
fn block_action(weights: &[usize], counts: &[usize], g: &[Perm], out: &mut Vec<u32>) {
    let mut base = 0;
    for ((&w, &n), gi) in weights.iter().zip(counts).zip(g) {
        for k in 0..n {
            let dest = base + gi.image(k) * w;
            for t in 0..w {
                out.push((dest + t) as u32);
            }
        }
        base += n * w;
    }
}

fn action_table(sig: &TypeSignature, multidegree: &[usize], m: usize) -> Result<Rc<ActionTable>> {
    let key = (sig.pairs.clone(), multidegree.to_vec(), m);
    if let Some(t) = ACTION_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(t);
    }
    let mut counts = multidegree.to_vec();
    counts.push(m);
    let mut out_w = sig.out_weights();
    out_w.push(1);
    let mut in_w = sig.in_weights();
    in_w.push(1);
    let (n_out, n_in) = sig.string_counts(multidegree);
    let (n_out, n_in) = (n_out + m, n_in + m);
    let order = young_order(&counts);
    let mut table = ActionTable {
        n_out,
        n_in,
        out_inv: Vec::with_capacity(order.min(CACHED_GROUP_ORDER) as usize * n_out),
        ins: Vec::with_capacity(order.min(CACHED_GROUP_ORDER) as usize * n_in),
    };
    let mut scratch = Vec::with_capacity(n_out);
    for g in young_subgroup(&counts)? {
        scratch.clear();
        block_action(&out_w, &counts, &g, &mut scratch);
        let base = table.out_inv.len();
        table.out_inv.resize(base + n_out, 0);
        for (s, &x) in scratch.iter().enumerate() {
            table.out_inv[base + x as usize] = s as u32;
        }
        block_action(&in_w, &counts, &g, &mut table.ins);
    }
    if n_out == 0 && n_in == 0 {
        // only the group order matters; keep one dummy entry per element
        table.n_in = 1;
        table.ins = vec![0; order as usize];
    }
    let table = Rc::new(table);
    if order <= CACHED_GROUP_ORDER {
        ACTION_CACHE.with(|c| c.borrow_mut().insert(key, table.clone()));
    }
    Ok(table)
}

/// Lexicographic orbit minimum of `sigma` and the size of its stabilizer.
fn orbit_min(table: &ActionTable, sigma: &[usize]) -> (Vec<usize>, u128) {
    let n = sigma.len();
    let mut best: Vec<usize> = sigma.to_vec();
    let mut stab = 0u128;
    for g in 0..table.len() {
        let (oi, ins) = (table.out_inv(g), table.ins(g));
        let image = |t: usize| ins[sigma[oi[t] as usize]] as usize;
        if (0..n).all(|t| image(t) == sigma[t]) {
            stab += 1;
        }
        for t in 0..n {
            let x = image(t);
            if x != best[t] {
                if x < best[t] {
                    best = (0..n).map(image).collect();
                }
                break;
            }
        }
    }
    (best, stab)
}

/// A closed diagram `p(n,σ,n_1,…,n_r,m)` in canonical form: `σ` is the
/// lexicographic minimum of its orbit under box relabelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedDiagram {
    sig: TypeSignature,
    multidegree: Vec<usize>,
    m: usize,
    sigma: Perm,
    aut_order: u128,
}

/// Canonical form of `p(n,σ,n_1,…,n_r,m)`.
pub fn canonicalize_closed(sig: &TypeSignature, multidegree: &[usize], m: usize, sigma: &Perm) -> Result<ClosedDiagram> {
    sig.check_multidegree(multidegree)?;
    let (o, i) = sig.string_counts(multidegree);
    if o != i {
        return Err(Error::Unbalanced { outputs: o, inputs: i });
    }
    if sigma.degree() != o + m {
        return Err(Error::DegreeMismatch(format!(
            "σ ∈ S_{} but the diagram has {} strings",
            sigma.degree(),
            o + m
        )));
    }
    let table = action_table(sig, multidegree, m)?;
    let (best, aut_order) = orbit_min(&table, sigma.word());
    Ok(ClosedDiagram {
        sig: sig.clone(),
        multidegree: multidegree.to_vec(),
        m,
        sigma: Perm::from_word_unchecked(best),
        aut_order,
    })
}

impl ClosedDiagram {
    /// Canonicalizes; same as [`canonicalize_closed`].
    pub fn new(sig: &TypeSignature, multidegree: &[usize], m: usize, sigma: &Perm) -> Result<ClosedDiagram> {
        canonicalize_closed(sig, multidegree, m, sigma)
    }

    /// The empty diagram, the unit of `K[X]`.
    pub fn unit(sig: &TypeSignature) -> ClosedDiagram {
        ClosedDiagram {
            sig: sig.clone(),
            multidegree: vec![0; sig.len()],
            m: 0,
            sigma: Perm::identity(0),
            aut_order: 1,
        }
    }

    /// The dimension invariant `D = p(1, id, 0,…,0, 1)`.
    pub fn dimension(sig: &TypeSignature) -> ClosedDiagram {
        ClosedDiagram {
            sig: sig.clone(),
            multidegree: vec![0; sig.len()],
            m: 1,
            sigma: Perm::identity(1),
            aut_order: 1,
        }
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    pub fn multidegree(&self) -> &[usize] {
        &self.multidegree
    }

    /// Total number of tensor boxes `Σ n_i`.
    pub fn box_count(&self) -> usize {
        self.multidegree.iter().sum()
    }

    pub fn id_boxes(&self) -> usize {
        self.m
    }

    /// Number of strings `n`.
    pub fn strings(&self) -> usize {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    /// Order of the stabilizer of `σ` in `S_{n_1}×…×S_{n_r}×S_m`.
    pub fn aut_order(&self) -> u128 {
        self.aut_order
    }

    /// Size of the relabelling orbit of `σ`.
    pub fn orbit_size(&self) -> u128 {
        let mut counts = self.multidegree.clone();
        counts.push(self.m);
        young_order(&counts) / self.aut_order
    }

    pub fn is_unit(&self) -> bool {
        self.m == 0 && self.multidegree.iter().all(|&n| n == 0)
    }

    pub fn is_dimension(&self) -> bool {
        self.m == 1 && self.multidegree.iter().all(|&n| n == 0)
    }

    pub(crate) fn wiring(&self) -> Wiring {
        Wiring {
            labels: layout_labels(&self.multidegree, self.m),
            out_target: self.sigma.word().iter().map(|&u| End::Slot(u)).collect(),
            free_in: Vec::new(),
        }
    }

    /// Canonical diagram of a closed wiring with sorted boxes.
    pub(crate) fn from_wiring(sig: &TypeSignature, w: &Wiring) -> Result<ClosedDiagram> {
        debug_assert!(w.free_in.is_empty());
        let (md, m) = w.multidegree(sig);
        let word = w
            .out_target
            .iter()
            .map(|e| match *e {
                End::Slot(u) => Ok(u),
                End::Free(_) => Err(Error::Invalid("diagram has free output strings".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        canonicalize_closed(sig, &md, m, &Perm::from_word(word)?)
    }

    /// Number of connected components after identity reduction, each `D`
    /// counted once.
    pub fn component_count(&self) -> usize {
        connected_components(self).map(|c| c.len()).unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// `p(σ; n_1,…,n_r; m)` with `; m` omitted when `m = 0`.
impl fmt::Display for ClosedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma = if self.sigma.degree() == 0 { String::new() } else { self.sigma.to_string() };
        let md: Vec<String> = self.multidegree.iter().map(|n| n.to_string()).collect();
        write!(f, "p({sigma}; {}", md.join(","))?;
        if self.m > 0 {
            write!(f, "; {}", self.m)?;
        }
        write!(f, ")")
    }
}

/// `true` iff the diagrams agree after identity reduction.
pub fn equal(a: &ClosedDiagram, b: &ClosedDiagram) -> Result<bool> {
    a.sig.check_same(&b.sig)?;
    Ok(identity_reduce(a)? == identity_reduce(b)?)
}

/// Removes reducible `Id` boxes; every remaining `Id` loop is one factor of
/// `D`. Returns the `Id`-free diagram and the power of `D`.
pub fn identity_reduce(d: &ClosedDiagram) -> Result<(ClosedDiagram, usize)> {
    if d.m == 0 {
        return Ok((d.clone(), 0));
    }
    let reduced = d.wiring().reduce_identities(&d.sig);
    let loops = reduced.identity_loops(&d.sig);
    let mut w = reduced;
    w.labels.retain(|&l| l != BoxLabel::Id);
    // the loops sit at the end of the layout, remove their slots
    let keep = w.out_target.len() - loops;
    w.out_target.truncate(keep);
    Ok((ClosedDiagram::from_wiring(&d.sig, &w)?, loops))
}

/// Connected components (after identity reduction), each as a standalone
/// canonical diagram; `D` factors appear as copies of the dimension
/// invariant. Sorted.
pub fn connected_components(d: &ClosedDiagram) -> Result<Vec<ClosedDiagram>> {
    let (core, d_power) = identity_reduce(d)?;
    let sig = &core.sig;
    let w = core.wiring();
    let comp = w.box_components(sig);
    let (out_owner, in_owner) = w.slot_owners(sig);
    let mut roots: Vec<usize> = comp.clone();
    roots.sort_unstable();
    roots.dedup();
    let mut out = Vec::with_capacity(roots.len() + d_power);
    for root in roots {
        // boxes of this component keep their relative (sorted) order
        let boxes: Vec<usize> = (0..w.labels.len()).filter(|&b| comp[b] == root).collect();
        let in_slots: Vec<usize> = (0..in_owner.len()).filter(|&u| comp[in_owner[u]] == root).collect();
        let mut in_map = HashMap::new();
        for (new, &u) in in_slots.iter().enumerate() {
            in_map.insert(u, new);
        }
        let out_target = (0..out_owner.len())
            .filter(|&s| comp[out_owner[s]] == root)
            .map(|s| match w.out_target[s] {
                End::Slot(u) => End::Slot(in_map[&u]),
                f => f,
            })
            .collect();
        let sub = Wiring { labels: boxes.iter().map(|&b| w.labels[b]).collect(), out_target, free_in: Vec::new() };
        out.push(ClosedDiagram::from_wiring(sig, &sub)?);
    }
    out.extend(std::iter::repeat_n(ClosedDiagram::dimension(sig), d_power));
    out.sort();
    Ok(out)
}

/// Disjoint union of two closed diagrams.
pub fn star_product(a: &ClosedDiagram, b: &ClosedDiagram) -> Result<ClosedDiagram> {
    a.sig.check_same(&b.sig)?;
    ClosedDiagram::from_wiring(&a.sig, &a.wiring().merge(&b.wiring(), &a.sig))
}

/// Closed diagram realizing the product formula with explicit block
/// shuffles: `p(n+n', μ_2⁻¹(σ,σ')μ_1)`.
pub fn star_product_formula(a: &ClosedDiagram, b: &ClosedDiagram) -> Result<ClosedDiagram> {
    let x = OpenDiagram::from_closed(a);
    let y = OpenDiagram::from_closed(b);
    let prod = open_product(&x, &y)?;
    prod.to_closed()
}

/// Every canonical `Id`-free closed diagram of the given multidegree, in
/// increasing order of `σ`.
pub fn basis(sig: &TypeSignature, multidegree: &[usize]) -> Result<Vec<ClosedDiagram>> {
    sig.check_multidegree(multidegree)?;
    let (o, i) = sig.string_counts(multidegree);
    if o != i {
        return Ok(Vec::new());
    }
    let n = o;
    limits::check_enumeration(limits::factorial(n))?;
    let table = action_table(sig, multidegree, 0)?;
    let group = young_order(multidegree);
    let mut seen = vec![false; limits::factorial(n) as usize];
    let mut word: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if !seen[perm_rank(&word)] {
            let mut orbit = 0u128;
            for g in 0..table.len() {
                let (oi, ins) = (table.out_inv(g), table.ins(g));
                let image: Vec<usize> = (0..n).map(|t| ins[word[oi[t] as usize]] as usize).collect();
                let r = perm_rank(&image);
                if !seen[r] {
                    seen[r] = true;
                    orbit += 1;
                }
            }
            out.push(ClosedDiagram {
                sig: sig.clone(),
                multidegree: multidegree.to_vec(),
                m: 0,
                sigma: Perm::from_word_unchecked(word.clone()),
                aut_order: group / orbit,
            });
        }
        if !next_permutation(&mut word) {
            break;
        }
    }
    Ok(out)
}

/// Lexicographic rank of a permutation word.
fn perm_rank(word: &[usize]) -> usize {
    let n = word.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = word[i + 1..].iter().filter(|&&x| x < word[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// All balanced multidegrees with `Σ n_i p_i ≤ max_strings`.
pub fn balanced_multidegrees(sig: &TypeSignature, max_strings: usize, max_boxes: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; sig.len()];
    fn rec(sig: &TypeSignature, i: usize, cur: &mut Vec<usize>, max_s: usize, max_b: usize, out: &mut Vec<Vec<usize>>) {
        if i == sig.len() {
            let (o, q) = sig.string_counts(cur);
            if o == q && o <= max_s && cur.iter().sum::<usize>() <= max_b {
                out.push(cur.clone());
            }
            return;
        }
        let (p, q) = sig.pairs()[i];
        let mut n = 0;
        loop {
            cur[i] = n;
            let (o, inn) = sig.string_counts(cur);
            let boxes: usize = cur.iter().sum();
            if o > max_s || inn > max_s || boxes > max_b {
                break;
            }
            rec(sig, i + 1, cur, max_s, max_b, out);
            if p == 0 && q == 0 && boxes >= max_b {
                break;
            }
            n += 1;
        }
        cur[i] = 0;
    }
    rec(sig, 0, &mut cur, max_strings, max_boxes, &mut out);
    out
}

/// An open diagram `c(j,σ,τ,n_1,…,n_r,m) = ev^j(L_σ X L_τ)` of degree
/// `(p,q)`, with `σ ∈ S_{p+j}` and `τ ∈ S_{q+j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenDiagram {
    sig: TypeSignature,
    multidegree: Vec<usize>,
    m: usize,
    j: usize,
    sigma: Perm,
    tau: Perm,
}

impl OpenDiagram {
    pub fn new(
        sig: &TypeSignature,
        j: usize,
        sigma: Perm,
        tau: Perm,
        multidegree: &[usize],
        m: usize,
    ) -> Result<OpenDiagram> {
        sig.check_multidegree(multidegree)?;
        let (o, i) = sig.string_counts(multidegree);
        if sigma.degree() != o + m || tau.degree() != i + m {
            return Err(Error::DegreeMismatch(format!(
                "σ ∈ S_{}, τ ∈ S_{} but the boxes have {} outputs and {} inputs",
                sigma.degree(),
                tau.degree(),
                o + m,
                i + m
            )));
        }
        if j > o + m || j > i + m {
            return Err(Error::Invalid(format!("cannot contract {j} strings")));
        }
        Ok(OpenDiagram { sig: sig.clone(), multidegree: multidegree.to_vec(), m, j, sigma, tau })
    }

    /// A single box with no wiring: degree `(p_i, q_i)` (or `(1,1)` for `Id`).
    pub fn single_box(sig: &TypeSignature, label: BoxLabel) -> Result<OpenDiagram> {
        let mut md = vec![0; sig.len()];
        let m = match label {
            BoxLabel::Tensor(i) if i < sig.len() => {
                md[i] = 1;
                0
            }
            BoxLabel::Tensor(i) => return Err(Error::Invalid(format!("no tensor x{}", i + 1))),
            BoxLabel::Id => 1,
        };
        let (o, i) = sig.string_counts(&md);
        OpenDiagram::new(sig, 0, Perm::identity(o + m), Perm::identity(i + m), &md, m)
    }

    /// The empty diagram of degree `(0,0)`.
    pub fn empty(sig: &TypeSignature) -> OpenDiagram {
        OpenDiagram {
            sig: sig.clone(),
            multidegree: vec![0; sig.len()],
            m: 0,
            j: 0,
            sigma: Perm::identity(0),
            tau: Perm::identity(0),
        }
    }

    /// `c(n, σ, id)` for a closed diagram.
    pub fn from_closed(d: &ClosedDiagram) -> OpenDiagram {
        let n = d.strings();
        OpenDiagram {
            sig: d.sig.clone(),
            multidegree: d.multidegree.clone(),
            m: d.m,
            j: n,
            sigma: d.sigma.clone(),
            tau: Perm::identity(n),
        }
    }

    /// For degree `(0,0)`: the closed diagram `p(n, τσ)`.
    pub fn to_closed(&self) -> Result<ClosedDiagram> {
        if self.degree() != (0, 0) {
            return Err(Error::DegreeMismatch(format!("degree {:?} is not closed", self.degree())));
        }
        canonicalize_closed(&self.sig, &self.multidegree, self.m, &self.tau.compose(&self.sigma)?)
    }

    pub fn signature(&self) -> &TypeSignature {
        &self.sig
    }

    pub fn multidegree(&self) -> &[usize] {
        &self.multidegree
    }

    pub fn id_boxes(&self) -> usize {
        self.m
    }

    pub fn contracted(&self) -> usize {
        self.j
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn tau(&self) -> &Perm {
        &self.tau
    }

    /// `(p, q)`: free output and input strings.
    pub fn degree(&self) -> (usize, usize) {
        (self.sigma.degree() - self.j, self.tau.degree() - self.j)
    }

    pub(crate) fn wiring(&self) -> Wiring {
        let (p, q) = self.degree();
        let out_target = self
            .sigma
            .word()
            .iter()
            .map(|&pos| if pos < p { End::Free(pos) } else { End::Slot(self.tau.image(q + pos - p)) })
            .collect();
        let free_in = (0..q).map(|i| self.tau.image(i)).collect();
        Wiring { labels: layout_labels(&self.multidegree, self.m), out_target, free_in }
    }

    /// From a wiring with sorted boxes, numbering contracted strings by
    /// source output slot.
    pub(crate) fn from_wiring(sig: &TypeSignature, w: &Wiring) -> OpenDiagram {
        let (md, m) = w.multidegree(sig);
        let (j, sigma, tau) = w.cdata();
        OpenDiagram {
            sig: sig.clone(),
            multidegree: md,
            m,
            j,
            sigma: Perm::from_word_unchecked(sigma),
            tau: Perm::from_word_unchecked(tau),
        }
    }

    /// Normal form: reducible `Id` boxes removed, contracted strings and box
    /// labels chosen to minimize `(σ, τ)`. Equivalent diagrams, and only
    /// those, share a normal form.
    pub fn normalize(&self) -> Result<OpenDiagram> {
        normalize_open(self)
    }
}

/// `c(j; σ; τ; n_1,…,n_r; m)`.
impl fmt::Display for OpenDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Perm| if p.degree() == 0 { String::new() } else { p.to_string() };
        let md: Vec<String> = self.multidegree.iter().map(|n| n.to_string()).collect();
        write!(f, "c({}; {}; {}; {}; {})", self.j, show(&self.sigma), show(&self.tau), md.join(","), self.m)
    }
}

/// Minimum over box relabellings of the canonical data of an
/// identity-reduced diagram.
pub fn normalize_open(a: &OpenDiagram) -> Result<OpenDiagram> {
    let sig = &a.sig;
    let w = a.wiring().reduce_identities(sig);
    let (md, m) = w.multidegree(sig);
    let mut counts = md.clone();
    counts.push(m);
    let mut out_w = sig.out_weights();
    out_w.push(1);
    let mut in_w = sig.in_weights();
    in_w.push(1);
    let mut best: Option<(Vec<usize>, Vec<usize>, usize)> = None;
    let mut out_map = Vec::new();
    let mut in_map = Vec::new();
    for g in young_subgroup(&counts)? {
        out_map.clear();
        in_map.clear();
        block_action(&out_w, &counts, &g, &mut out_map);
        block_action(&in_w, &counts, &g, &mut in_map);
        let om: Vec<usize> = out_map.iter().map(|&x| x as usize).collect();
        let im: Vec<usize> = in_map.iter().map(|&x| x as usize).collect();
        let (j, s, t) = w.remap(w.labels.clone(), &om, &im).cdata();
        if best.as_ref().is_none_or(|(bs, bt, _)| (&s, &t) < (bs, bt)) {
            best = Some((s, t, j));
        }
    }
    let (s, t, j) = best.expect("the group is never empty");
    Ok(OpenDiagram {
        sig: sig.clone(),
        multidegree: md,
        m,
        j,
        sigma: Perm::from_word_unchecked(s),
        tau: Perm::from_word_unchecked(t),
    })
}

/// `a ⋆ b`, `a` placed to the left of `b`, via explicit block shuffles:
/// with `μ_1, μ_2` the merge maps of outputs and inputs and
/// `ρ_3 = Ω^{(p,j,p',j')}((2 3))`, `ρ_4 = Ω^{(q,j,q',j')}((2 3))⁻¹`, the
/// product is `c(j+j', ρ_3(σ,σ')μ_1, μ_2⁻¹(τ,τ')ρ_4)`.
pub fn open_product(a: &OpenDiagram, b: &OpenDiagram) -> Result<OpenDiagram> {
    a.sig.check_same(&b.sig)?;
    let sig = &a.sig;
    let r = sig.len();
    // merged layout has blocks (a_1, b_1, a_2, b_2, …, a_Id, b_Id); μ sends
    // them back to the concatenated order (a_1, …, a_Id, b_1, …, b_Id)
    let mu_word: Vec<usize> = (0..2 * (r + 1)).map(|x| if x % 2 == 0 { x / 2 } else { r + 1 + x / 2 }).collect();
    let mu = Perm::from_word_unchecked(mu_word);
    let mut lam_out = Vec::with_capacity(2 * r + 2);
    let mut lam_in = Vec::with_capacity(2 * r + 2);
    for i in 0..r {
        let (p, q) = sig.pairs[i];
        lam_out.extend([a.multidegree[i] * p, b.multidegree[i] * p]);
        lam_in.extend([a.multidegree[i] * q, b.multidegree[i] * q]);
    }
    lam_out.extend([a.m, b.m]);
    lam_in.extend([a.m, b.m]);
    let mu1 = omega_block(&Composition::new(lam_out), &mu)?;
    let mu2 = omega_block(&Composition::new(lam_in), &mu)?;
    let swap = Perm::from_one_line(&[1, 3, 2, 4])?;
    let (p, q) = a.degree();
    let (p2, q2) = b.degree();
    let rho3 = omega_block(&Composition::new(vec![p, a.j, p2, b.j]), &swap)?;
    let rho4 = omega_block(&Composition::new(vec![q, a.j, q2, b.j]), &swap)?.inverse();
    let sigma = rho3.compose(&a.sigma.direct_sum(&b.sigma))?.compose(&mu1)?;
    let tau = mu2.inverse().compose(&a.tau.direct_sum(&b.tau))?.compose(&rho4)?;
    let md: Vec<usize> = a.multidegree.iter().zip(&b.multidegree).map(|(x, y)| x + y).collect();
    OpenDiagram::new(sig, a.j + b.j, sigma, tau, &md, a.m + b.m)
}

/// Side-by-side placement through the explicit wiring; agrees with
/// [`open_product`] up to equivalence.
pub fn open_product_wired(a: &OpenDiagram, b: &OpenDiagram) -> Result<OpenDiagram> {
    a.sig.check_same(&b.sig)?;
    Ok(OpenDiagram::from_wiring(&a.sig, &a.wiring().merge(&b.wiring(), &a.sig)))
}

/// Closes `x` of degree `(p,q)` against `y` of degree `(q,p)`: free output
/// `k` of `x` feeds free input `k` of `y` and vice versa.
pub fn pair_open(x: &OpenDiagram, y: &OpenDiagram) -> Result<ClosedDiagram> {
    x.sig.check_same(&y.sig)?;
    let (p, q) = x.degree();
    if y.degree() != (q, p) {
        return Err(Error::DegreeMismatch(format!("cannot pair degree ({p},{q}) with {:?}", y.degree())));
    }
    let sig = &x.sig;
    let (wx, wy) = (x.wiring(), y.wiring());
    let in_x = wx.in_count(sig);
    let mut labels = wx.labels.clone();
    labels.extend_from_slice(&wy.labels);
    let mut out_target: Vec<End> = wx
        .out_target
        .iter()
        .map(|&e| match e {
            End::Slot(u) => End::Slot(u),
            End::Free(k) => End::Slot(in_x + wy.free_in[k]),
        })
        .collect();
    out_target.extend(wy.out_target.iter().map(|&e| match e {
        End::Slot(u) => End::Slot(u + in_x),
        End::Free(k) => End::Slot(wx.free_in[k]),
    }));
    let w = Wiring { labels, out_target, free_in: Vec::new() }.sorted(sig);
    ClosedDiagram::from_wiring(sig, &w)
}

/// One end of a connection made with [`DiagramBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Output string `slot` of box `b`.
    BoxOut(usize, usize),
    /// Free input string `k`.
    FreeIn(usize),
}

/// The other end of a connection made with [`DiagramBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sink {
    /// Input string `slot` of box `b`.
    BoxIn(usize, usize),
    /// Free output string `k`.
    FreeOut(usize),
}

/// Assembles an open diagram from boxes and explicit strings.
///
/// Every box output and every free input must be connected exactly once,
/// as must every box input and free output. A string from a free input
/// straight to a free output gets an `Id` box.
#[derive(Clone, Debug)]
pub struct DiagramBuilder {
    sig: TypeSignature,
    labels: Vec<BoxLabel>,
    wires: Vec<(Source, Sink)>,
}

impl DiagramBuilder {
    pub fn new(sig: &TypeSignature) -> DiagramBuilder {
        DiagramBuilder { sig: sig.clone(), labels: Vec::new(), wires: Vec::new() }
    }

    /// Adds a box `x_{i+1}` and returns its index.
    pub fn tensor(&mut self, i: usize) -> usize {
        self.labels.push(BoxLabel::Tensor(i));
        self.labels.len() - 1
    }

    /// Adds an `Id` box and returns its index.
    pub fn id(&mut self) -> usize {
        self.labels.push(BoxLabel::Id);
        self.labels.len() - 1
    }

    pub fn connect(&mut self, from: Source, to: Sink) -> &mut Self {
        self.wires.push((from, to));
        self
    }

    pub fn build(&self) -> Result<OpenDiagram> {
        let sig = &self.sig;
        if let Some(BoxLabel::Tensor(i)) = self.labels.iter().find(|l| matches!(l, BoxLabel::Tensor(i) if *i >= sig.len())) {
            return Err(Error::Invalid(format!("no tensor x{}", i + 1)));
        }
        let mut labels = self.labels.clone();
        let mut wires = self.wires.clone();
        // route free-to-free strings through fresh Id boxes
        for idx in 0..wires.len() {
            if let (Source::FreeIn(k), Sink::FreeOut(l)) = wires[idx] {
                labels.push(BoxLabel::Id);
                let b = labels.len() - 1;
                wires[idx] = (Source::FreeIn(k), Sink::BoxIn(b, 0));
                wires.push((Source::BoxOut(b, 0), Sink::FreeOut(l)));
            }
        }
        let probe = Wiring { labels: labels.clone(), out_target: Vec::new(), free_in: Vec::new() };
        let out_off = probe.out_offsets(sig);
        let in_off = probe.in_offsets(sig);
        let n_out: usize = labels.iter().map(|&l| sig.out_arity(l)).sum();
        let n_in = probe.in_count(sig);
        let q = wires.iter().filter(|(s, _)| matches!(s, Source::FreeIn(_))).count();
        let p = wires.iter().filter(|(_, t)| matches!(t, Sink::FreeOut(_))).count();
        let mut out_target: Vec<Option<End>> = vec![None; n_out];
        let mut free_in: Vec<Option<usize>> = vec![None; q];
        let mut in_used = vec![false; n_in];
        let mut free_out_used = vec![false; p];
        let bad = |msg: String| Err(Error::Invalid(msg));
        for &(src, dst) in &wires {
            let end = match dst {
                Sink::BoxIn(b, t) => {
                    if b >= labels.len() || t >= sig.in_arity(labels[b]) {
                        return bad(format!("no input {t} on box {b}"));
                    }
                    let u = in_off[b] + t;
                    if std::mem::replace(&mut in_used[u], true) {
                        return bad(format!("input {t} of box {b} connected twice"));
                    }
                    End::Slot(u)
                }
                Sink::FreeOut(k) => {
                    if k >= p || std::mem::replace(&mut free_out_used[k], true) {
                        return bad(format!("free output {k} missing or repeated"));
                    }
                    End::Free(k)
                }
            };
            match src {
                Source::BoxOut(b, t) => {
                    if b >= labels.len() || t >= sig.out_arity(labels[b]) {
                        return bad(format!("no output {t} on box {b}"));
                    }
                    if out_target[out_off[b] + t].replace(end).is_some() {
                        return bad(format!("output {t} of box {b} connected twice"));
                    }
                }
                Source::FreeIn(k) => {
                    let End::Slot(u) = end else { unreachable!("rerouted above") };
                    if k >= q || free_in[k].replace(u).is_some() {
                        return bad(format!("free input {k} missing or repeated"));
                    }
                }
            }
        }
        if in_used.iter().any(|&x| !x) {
            return bad("some box input is not connected".into());
        }
        let out_target = out_target
            .into_iter()
            .map(|e| e.ok_or_else(|| Error::Invalid("some box output is not connected".into())))
            .collect::<Result<Vec<_>>>()?;
        let free_in = free_in.into_iter().map(|u| u.expect("checked by count")).collect();
        let w = Wiring { labels, out_target, free_in }.sorted(sig);
        Ok(OpenDiagram::from_wiring(sig, &w))
    }
}
