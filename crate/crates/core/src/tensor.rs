//! Coordinate tensors over an algebra basis.
//!
//! An [`Element`] of rank `k` lives in `A^{⊗k}`. Entries are addressed by a
//! flat mixed-radix index in which leg 1 is the most significant digit.
//! [`StructureMap`]s are sparse `d^k × d^j` matrices stored column-wise, so
//! applying a map to a contiguous leg range is a scatter over the image of
//! each source basis tuple.
//!
//! Every formula in the library is evaluated with [`Algebra::fuse`]: a list of
//! input tensors is expanded into its components and legs (and fixed rank-1
//! constants) are multiplied in a prescribed order to form the output legs.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::scalar::{Ring, ScalarError};
use crate::{Error, Result};

pub(crate) fn split(mut flat: usize, dim: usize, rank: usize) -> Vec<usize> {
    let mut out = vec![0; rank];
    for slot in out.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
    out
}

pub(crate) fn join(digits: &[usize], dim: usize) -> usize {
    digits.iter().fold(0, |acc, &i| acc * dim + i)
}

fn space(dim: usize, rank: usize) -> usize {
    dim.pow(rank as u32)
}

// Above this many slots an accumulator hashes instead of allocating densely.
const DENSE_ACCUM_LIMIT: usize = 1 << 18;

pub(crate) enum Accum<R> {
    Dense(Vec<R>),
    Sparse(HashMap<usize, R>),
}

impl<R: Ring> Accum<R> {
    pub(crate) fn new(space: usize) -> Self {
        if space <= DENSE_ACCUM_LIMIT {
            Accum::Dense(vec![R::zero(); space])
        } else {
            Accum::Sparse(HashMap::new())
        }
    }

    pub(crate) fn add(&mut self, idx: usize, v: R) {
        match self {
            Accum::Dense(buf) => buf[idx] += v,
            Accum::Sparse(map) => *map.entry(idx).or_insert_with(R::zero) += v,
        }
    }

    fn merge(&mut self, other: Accum<R>) {
        match other {
            Accum::Dense(buf) => {
                for (i, v) in buf.into_iter().enumerate() {
                    if !v.is_zero() {
                        self.add(i, v);
                    }
                }
            }
            Accum::Sparse(map) => {
                let mut items: Vec<_> = map.into_iter().collect();
                items.sort_by_key(|(i, _)| *i);
                for (i, v) in items {
                    self.add(i, v);
                }
            }
        }
    }

    pub(crate) fn finish(self, rank: usize, dim: usize) -> Element<R> {
        let entries: Vec<(usize, R)> = match self {
            Accum::Dense(buf) => buf.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect(),
            Accum::Sparse(map) => {
                let mut v: Vec<_> = map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                v.sort_by_key(|(i, _)| *i);
                v
            }
        };
        Element::from_sorted(rank, dim, entries)
    }
}

// Cache of evaluated fuse groups keyed by the group's leg digits.
enum Memo<R> {
    Dense(Vec<Option<Vec<(usize, R)>>>),
    Sparse(HashMap<usize, Vec<(usize, R)>>),
}

impl<R> Memo<R> {
    fn new(space: usize) -> Self {
        if space <= 1 << 16 {
            Memo::Dense((0..space).map(|_| None).collect())
        } else {
            Memo::Sparse(HashMap::new())
        }
    }

    fn ensure(&mut self, key: usize, eval: impl FnOnce() -> Vec<(usize, R)>) {
        match self {
            Memo::Dense(v) => {
                if v[key].is_none() {
                    v[key] = Some(eval());
                }
            }
            Memo::Sparse(m) => {
                m.entry(key).or_insert_with(eval);
            }
        }
    }

    fn get(&self, key: usize) -> &[(usize, R)] {
        match self {
            Memo::Dense(v) => v[key].as_deref().expect("evaluated before lookup"),
            Memo::Sparse(m) => &m[&key],
        }
    }
}

#[derive(Clone, Debug)]
enum Store<R> {
    Sparse(Vec<(usize, R)>),
    Dense(Vec<R>),
}

/// An element of `A^{⊗rank}`; rank 0 is a scalar.
#[derive(Clone, Debug)]
pub struct Element<R> {
    rank: usize,
    dim: usize,
    store: Store<R>,
}

impl<R: Ring> PartialEq for Element<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.dim == other.dim && self.entries().eq(other.entries())
    }
}

impl<R: Ring> Element<R> {
    // `entries` sorted by index, no zeros
    fn from_sorted(rank: usize, dim: usize, entries: Vec<(usize, R)>) -> Self {
        let total = space(dim, rank);
        let store = if entries.len() * 4 > total {
            let mut dense = vec![R::zero(); total];
            for (i, v) in entries {
                dense[i] = v;
            }
            Store::Dense(dense)
        } else {
            Store::Sparse(entries)
        };
        Element { rank, dim, store }
    }

    pub fn zero(rank: usize, dim: usize) -> Self {
        Element {
            rank,
            dim,
            store: Store::Sparse(Vec::new()),
        }
    }

    pub fn scalar(dim: usize, c: R) -> Self {
        let entries = if c.is_zero() { vec![] } else { vec![(0, c)] };
        Element::from_sorted(0, dim, entries)
    }

    /// The basis tensor `e_{i1} ⊗ ... ⊗ e_{ik}`.
    pub fn basis(dim: usize, idx: &[usize]) -> Result<Self> {
        if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
            return Err(Error::Index(format!("basis index {bad} with dimension {dim}")));
        }
        Ok(Element::from_sorted(idx.len(), dim, vec![(join(idx, dim), R::one())]))
    }

    /// Build from index tuples; repeated tuples are summed.
    pub fn from_entries<I>(rank: usize, dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, R)>,
    {
        let mut acc = Accum::new(space(dim, rank));
        for (idx, v) in rows {
            if idx.len() != rank {
                return Err(Error::Shape(format!(
                    "index of length {} in rank {rank} tensor",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::Index(format!("basis index {bad} with dimension {dim}")));
            }
            acc.add(join(&idx, dim), v);
        }
        Ok(acc.finish(rank, dim))
    }

    pub fn from_dense(rank: usize, dim: usize, values: Vec<R>) -> Result<Self> {
        if values.len() != space(dim, rank) {
            return Err(Error::Shape(format!(
                "{} values for rank {rank} over dimension {dim}",
                values.len()
            )));
        }
        let entries = values.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Element::from_sorted(rank, dim, entries))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries().count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().next().is_none()
    }

    /// Nonzero entries as `(flat index, value)` in increasing index order.
    pub fn entries(&self) -> Box<dyn Iterator<Item = (usize, &R)> + '_> {
        match &self.store {
            Store::Sparse(v) => Box::new(v.iter().map(|(i, c)| (*i, c))),
            Store::Dense(v) => Box::new(v.iter().enumerate().filter(|(_, c)| !c.is_zero())),
        }
    }

    /// Nonzero entries keyed by index tuples.
    pub fn rows(&self) -> Vec<(Vec<usize>, R)> {
        self.entries()
            .map(|(i, c)| (split(i, self.dim, self.rank), c.clone()))
            .collect()
    }

    pub fn get_flat(&self, flat: usize) -> R {
        match &self.store {
            Store::Sparse(v) => v
                .binary_search_by_key(&flat, |(i, _)| *i)
                .map(|k| v[k].1.clone())
                .unwrap_or_else(|_| R::zero()),
            Store::Dense(v) => v.get(flat).cloned().unwrap_or_else(R::zero),
        }
    }

    pub fn get(&self, idx: &[usize]) -> R {
        if idx.len() != self.rank || idx.iter().any(|&i| i >= self.dim) {
            return R::zero();
        }
        self.get_flat(join(idx, self.dim))
    }

    /// Value of a rank-0 element.
    pub fn scalar_value(&self) -> R {
        self.get_flat(0)
    }

    /// Dense coefficient vector (rank 1 only is typical).
    pub fn to_dense(&self) -> Vec<R> {
        let mut out = vec![R::zero(); space(self.dim, self.rank)];
        for (i, c) in self.entries() {
            out[i] = c.clone();
        }
        out
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.dim != other.dim {
            return Err(Error::Shape(format!(
                "rank {} dim {} vs rank {} dim {}",
                self.rank, self.dim, other.rank, other.dim
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: bool) -> Result<Self> {
        self.same_shape(other)?;
        let mut acc = Accum::new(space(self.dim, self.rank));
        for (i, c) in self.entries() {
            acc.add(i, c.clone());
        }
        for (i, c) in other.entries() {
            acc.add(i, if sign { c.clone() } else { -c.clone() });
        }
        Ok(acc.finish(self.rank, self.dim))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn scale(&self, c: &R) -> Self {
        let entries = self
            .entries()
            .map(|(i, v)| (i, v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Element::from_sorted(self.rank, self.dim, entries)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-R::one())
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.entries().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`, together with whether the difference is
    /// structurally zero.
    pub fn residual(&self, other: &Self) -> Result<(f64, bool)> {
        let d = self.sub(other)?;
        Ok((d.max_norm(), d.is_zero()))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!("dim {} vs dim {}", self.dim, other.dim)));
        }
        let shift = space(self.dim, other.rank);
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, a) in self.entries() {
            for (j, b) in other.entries() {
                let v = a.clone() * b.clone();
                if !v.is_zero() {
                    entries.push((i * shift + j, v));
                }
            }
        }
        Ok(Element::from_sorted(self.rank + other.rank, self.dim, entries))
    }

    pub fn permute(&self, p: &LegPermutation) -> Result<Self> {
        if p.arity() != self.rank {
            return Err(Error::Arity {
                perm: p.arity(),
                rank: self.rank,
            });
        }
        let mut entries: Vec<(usize, R)> = self
            .entries()
            .map(|(i, c)| {
                let digits = split(i, self.dim, self.rank);
                let out: Vec<usize> = p.slots.iter().map(|&l| digits[l]).collect();
                (join(&out, self.dim), c.clone())
            })
            .collect();
        entries.sort_by_key(|(i, _)| *i);
        Ok(Element::from_sorted(self.rank, self.dim, entries))
    }

    /// The flip `T` on a rank-2 element.
    pub fn flip(&self) -> Result<Self> {
        self.permute(&LegPermutation::transposition(2, 1, 2)?)
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> Element<S> {
        let entries = self
            .entries()
            .map(|(i, c)| (i, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Element::from_sorted(self.rank, self.dim, entries)
    }
}

impl<R: Ring> fmt::Display for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        if rows.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in rows.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}){idx:?}")?;
        }
        Ok(())
    }
}

/// Permutation of tensor legs. Slot `p` of the result holds leg `slots[p]`
/// of the input, so `[3,1,2]` (one-based) sends `X⊗Y⊗Z` to `Z⊗X⊗Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegPermutation {
    slots: Vec<usize>,
}

impl LegPermutation {
    /// From zero-based slot contents.
    pub fn new(slots: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; slots.len()];
        for &s in &slots {
            if s >= slots.len() || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Positions(slots.iter().map(|s| s + 1).collect()));
            }
        }
        Ok(LegPermutation { slots })
    }

    /// From one-based subscripts, `Φ_{312}` is `from_subscript(&[3, 1, 2])`.
    pub fn from_subscript(sub: &[usize]) -> Result<Self> {
        if sub.contains(&0) {
            return Err(Error::Positions(sub.to_vec()));
        }
        Self::new(sub.iter().map(|s| s - 1).collect())
    }

    pub fn identity(k: usize) -> Self {
        LegPermutation {
            slots: (0..k).collect(),
        }
    }

    /// Swap of the one-based legs `a` and `b` among `k`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > k || b > k {
            return Err(Error::Positions(vec![a, b]));
        }
        let mut slots: Vec<usize> = (0..k).collect();
        slots.swap(a - 1, b - 1);
        Ok(LegPermutation { slots })
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    /// Apply `self`, then `next`.
    pub fn then(&self, next: &LegPermutation) -> Result<Self> {
        if self.arity() != next.arity() {
            return Err(Error::Arity {
                perm: next.arity(),
                rank: self.arity(),
            });
        }
        Ok(LegPermutation {
            slots: next.slots.iter().map(|&q| self.slots[q]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut slots = vec![0; self.slots.len()];
        for (p, &l) in self.slots.iter().enumerate() {
            slots[l] = p;
        }
        LegPermutation { slots }
    }
}

/// Linear map `A^{⊗src} → A^{⊗tgt}`, one sparse column per source basis tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureMap<R> {
    src: usize,
    tgt: usize,
    dim: usize,
    cols: Vec<Vec<(usize, R)>>,
}

impl<R: Ring> StructureMap<R> {
    pub fn from_images(src: usize, tgt: usize, dim: usize, images: Vec<Element<R>>) -> Result<Self> {
        if images.len() != space(dim, src) {
            return Err(Error::Shape(format!(
                "{} images for a map from rank {src} over dimension {dim}",
                images.len()
            )));
        }
        let mut cols = Vec::with_capacity(images.len());
        for img in images {
            if img.rank != tgt || img.dim != dim {
                return Err(Error::Shape(format!(
                    "image of rank {} dim {} for a map into rank {tgt} dim {dim}",
                    img.rank, img.dim
                )));
            }
            cols.push(img.entries().map(|(i, c)| (i, c.clone())).collect());
        }
        Ok(StructureMap { src, tgt, dim, cols })
    }

    /// Rows list the source indices, then the target indices.
    pub fn from_rows<I>(src: usize, tgt: usize, dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, R)>,
    {
        let mut acc: Vec<Vec<(Vec<usize>, R)>> = vec![Vec::new(); space(dim, src)];
        for (idx, c) in rows {
            if idx.len() != src + tgt {
                return Err(Error::Shape(format!(
                    "row with {} indices for a ({src},{tgt}) map",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::Index(format!("basis index {bad} with dimension {dim}")));
            }
            acc[join(&idx[..src], dim)].push((idx[src..].to_vec(), c));
        }
        let images = acc
            .into_iter()
            .map(|rows| Element::from_entries(tgt, dim, rows))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(src, tgt, dim, images)
    }

    pub fn identity(dim: usize) -> Self {
        StructureMap {
            src: 1,
            tgt: 1,
            dim,
            cols: (0..dim).map(|i| vec![(i, R::one())]).collect(),
        }
    }

    pub fn source_rank(&self) -> usize {
        self.src
    }

    pub fn target_rank(&self) -> usize {
        self.tgt
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &[(usize, R)] {
        &self.cols[j]
    }

    pub fn image(&self, j: usize) -> Element<R> {
        Element::from_sorted(self.tgt, self.dim, self.cols[j].clone())
    }

    pub fn rows(&self) -> Vec<(Vec<usize>, R)> {
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                let mut idx = split(j, self.dim, self.src);
                idx.extend(split(*i, self.dim, self.tgt));
                out.push((idx, c.clone()));
            }
        }
        out
    }

    /// Contract the map into legs `at..at+src` (one-based) of `x`.
    pub fn apply(&self, x: &Element<R>, at: usize) -> Result<Element<R>> {
        if x.dim != self.dim {
            return Err(Error::Shape(format!("map dim {} on element dim {}", self.dim, x.dim)));
        }
        if at == 0 || at - 1 + self.src > x.rank {
            return Err(Error::LegRange(format!(
                "legs {at}..{} of a rank {} element",
                at + self.src,
                x.rank
            )));
        }
        let after = x.rank - (at - 1) - self.src;
        let d_after = space(self.dim, after);
        let d_src = space(self.dim, self.src);
        let d_tgt = space(self.dim, self.tgt);
        let out_rank = x.rank - self.src + self.tgt;
        let mut acc = Accum::new(space(self.dim, out_rank));
        for (flat, c) in x.entries() {
            let suffix = flat % d_after;
            let mid = (flat / d_after) % d_src;
            let prefix = flat / (d_after * d_src);
            for (t, m) in &self.cols[mid] {
                acc.add((prefix * d_tgt + t) * d_after + suffix, c.clone() * m.clone());
            }
        }
        Ok(acc.finish(out_rank, self.dim))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StructureMap<R>) -> Result<Self> {
        if inner.tgt != self.src || inner.dim != self.dim {
            return Err(Error::Shape("incompatible structure maps".into()));
        }
        let images = (0..inner.cols.len())
            .map(|j| self.apply(&inner.image(j), 1))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(inner.src, self.tgt, self.dim, images)
    }

    /// Largest column residual against another map of the same shape.
    pub fn residual(&self, other: &Self) -> Result<(f64, bool)> {
        if (self.src, self.tgt, self.dim) != (other.src, other.tgt, other.dim) {
            return Err(Error::Shape("incompatible structure maps".into()));
        }
        let mut worst = (0.0, true);
        for j in 0..self.cols.len() {
            let (r, z) = self.image(j).residual(&other.image(j))?;
            worst = (f64::max(worst.0, r), worst.1 && z);
        }
        Ok(worst)
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> StructureMap<S> {
        StructureMap {
            src: self.src,
            tgt: self.tgt,
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(i, v)| (*i, f(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }
}

/// One factor in an ordered product inside [`Algebra::fuse`].
#[derive(Debug)]
pub enum Factor<'a, R> {
    /// Zero-based leg of the concatenated inputs.
    Leg(usize),
    /// A fixed rank-1 element.
    Elem(&'a Element<R>),
}

impl<R> Clone for Factor<'_, R> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<R> Copy for Factor<'_, R> {}

/// Multiplication and unit of the underlying algebra.
#[derive(Clone, Debug)]
pub struct Algebra<R> {
    dim: usize,
    mult: StructureMap<R>,
    unit: Element<R>,
}

impl<R: Ring> Algebra<R> {
    pub fn new(mult: StructureMap<R>, unit: Element<R>) -> Result<Self> {
        if mult.src != 2 || mult.tgt != 1 {
            return Err(Error::Shape("multiplication must map rank 2 to rank 1".into()));
        }
        if unit.rank != 1 || unit.dim != mult.dim {
            return Err(Error::Shape("unit must be a rank 1 element".into()));
        }
        Ok(Algebra {
            dim: mult.dim,
            mult,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &StructureMap<R> {
        &self.mult
    }

    pub fn unit(&self) -> &Element<R> {
        &self.unit
    }

    /// `1^{⊗k}`; `k = 0` gives the scalar one.
    pub fn one(&self, k: usize) -> Element<R> {
        let mut out = Element::scalar(self.dim, R::one());
        for _ in 0..k {
            out = out.tensor(&self.unit).expect("same dimension");
        }
        out
    }

    pub fn basis(&self, i: usize) -> Element<R> {
        Element::basis(self.dim, &[i]).expect("index below dimension")
    }

    /// Componentwise product in `A^{⊗k}`.
    pub fn multiply(&self, x: &Element<R>, y: &Element<R>) -> Result<Element<R>> {
        x.same_shape(y)?;
        let k = x.rank;
        let groups: Vec<Vec<Factor<R>>> = (0..k).map(|l| vec![Factor::Leg(l), Factor::Leg(k + l)]).collect();
        self.fuse(&[x, y], &groups)
    }

    /// Ordered product of several elements of equal rank, folded pairwise.
    pub fn product(&self, xs: &[&Element<R>]) -> Result<Element<R>> {
        let (first, rest) = xs.split_first().ok_or_else(|| Error::Shape("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, x| self.multiply(&acc, x))
    }

    /// Place the legs of `x` at the given one-based positions of a rank-`n`
    /// tensor with the unit on the remaining legs.
    pub fn embed(&self, x: &Element<R>, positions: &[usize], n: usize) -> Result<Element<R>> {
        let k = x.rank;
        if positions.len() != k || k > n {
            return Err(Error::Positions(positions.to_vec()));
        }
        let mut slots = vec![usize::MAX; n];
        for (l, &p) in positions.iter().enumerate() {
            if p == 0 || p > n || slots[p - 1] != usize::MAX {
                return Err(Error::Positions(positions.to_vec()));
            }
            slots[p - 1] = l;
        }
        for (next, s) in (k..).zip(slots.iter_mut().filter(|s| **s == usize::MAX)) {
            *s = next;
        }
        x.tensor(&self.one(n - k))?.permute(&LegPermutation::new(slots)?)
    }

    // dense right multiplication of `acc` by the basis vector e_b
    fn times_basis(&self, acc: &[R], b: usize, out: &mut [R]) {
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, m) in &self.mult.cols[i * self.dim + b] {
                out[*k] += a.clone() * m.clone();
            }
        }
    }

    fn eval_group(&self, group: &[Factor<R>], digits: &[usize]) -> Vec<(usize, R)> {
        let d = self.dim;
        let mut acc: Option<Vec<R>> = None;
        for f in group {
            acc = Some(match (acc, f) {
                (None, Factor::Leg(l)) => {
                    let mut v = vec![R::zero(); d];
                    v[digits[*l]] = R::one();
                    v
                }
                (None, Factor::Elem(e)) => e.to_dense(),
                (Some(a), Factor::Leg(l)) => {
                    let mut out = vec![R::zero(); d];
                    self.times_basis(&a, digits[*l], &mut out);
                    out
                }
                (Some(a), Factor::Elem(e)) => {
                    let mut out = vec![R::zero(); d];
                    let mut tmp = vec![R::zero(); d];
                    for (j, c) in e.entries() {
                        tmp.iter_mut().for_each(|t| *t = R::zero());
                        self.times_basis(&a, j, &mut tmp);
                        for (o, t) in out.iter_mut().zip(&tmp) {
                            if !t.is_zero() {
                                *o += t.clone() * c.clone();
                            }
                        }
                    }
                    out
                }
            });
        }
        match acc {
            None => self.unit.entries().map(|(i, c)| (i, c.clone())).collect(),
            Some(v) => v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// General ordered contraction.
    ///
    /// The inputs are expanded into their components; their legs are numbered
    /// consecutively from zero across all inputs. Output leg `g` is the
    /// ordered product of the factors in `groups[g]`. Every input leg must be
    /// used exactly once; `Factor::Elem` constants may appear anywhere.
    pub fn fuse(&self, inputs: &[&Element<R>], groups: &[Vec<Factor<'_, R>>]) -> Result<Element<R>> {
        let d = self.dim;
        let total: usize = inputs.iter().map(|x| x.rank).sum();
        let mut used = vec![false; total];
        for x in inputs {
            if x.dim != d {
                return Err(Error::Shape(format!("element of dim {} in algebra of dim {d}", x.dim)));
            }
        }
        for f in groups.iter().flatten() {
            match f {
                Factor::Leg(l) => {
                    if *l >= total || std::mem::replace(&mut used[*l], true) {
                        return Err(Error::LegRange(format!("leg {l} missing or used twice")));
                    }
                }
                Factor::Elem(e) => {
                    if e.rank != 1 || e.dim != d {
                        return Err(Error::Shape("constant factors must be rank 1".into()));
                    }
                }
            }
        }
        if used.iter().any(|u| !u) {
            return Err(Error::LegRange("an input leg is not consumed".into()));
        }

        let out_rank = groups.len();
        let out_space = space(d, out_rank);
        let ents: Vec<Vec<(Vec<usize>, R)>> = inputs.iter().map(|x| x.rows()).collect();
        if ents.iter().any(|e| e.is_empty()) {
            return Ok(Element::zero(out_rank, d));
        }
        let offsets: Vec<usize> = inputs
            .iter()
            .scan(0, |acc, x| {
                let o = *acc;
                *acc += x.rank;
                Some(o)
            })
            .collect();
        let group_legs: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| {
                g.iter()
                    .filter_map(|f| match f {
                        Factor::Leg(l) => Some(*l),
                        Factor::Elem(_) => None,
                    })
                    .collect()
            })
            .collect();

        let work = |first: &[(Vec<usize>, R)]| -> Accum<R> {
            let mut acc = Accum::new(out_space);
            let mut memo: Vec<Memo<R>> = group_legs.iter().map(|l| Memo::new(space(d, l.len()))).collect();
            let mut terms: Vec<(usize, R)> = Vec::new();
            let mut next: Vec<(usize, R)> = Vec::new();
            let mut digits = vec![0usize; total];
            let mut pos = vec![0usize; inputs.len()];
            let mut keys = vec![0usize; groups.len()];
            for e0 in first {
                digits[..e0.0.len()].copy_from_slice(&e0.0);
                pos[1..].iter_mut().for_each(|p| *p = 0);
                loop {
                    let mut coef = e0.1.clone();
                    for m in 1..inputs.len() {
                        let (idx, c) = &ents[m][pos[m]];
                        digits[offsets[m]..offsets[m] + idx.len()].copy_from_slice(idx);
                        coef = coef * c.clone();
                    }
                    for (g, legs) in group_legs.iter().enumerate() {
                        let key = legs.iter().fold(0, |a, &l| a * d + digits[l]);
                        keys[g] = key;
                        memo[g].ensure(key, || self.eval_group(&groups[g], &digits));
                    }
                    terms.clear();
                    terms.push((0, coef));
                    for g in 0..groups.len() {
                        let vec = memo[g].get(keys[g]);
                        next.clear();
                        for (i, c) in &terms {
                            for (k, v) in vec {
                                next.push((i * d + k, c.clone() * v.clone()));
                            }
                        }
                        std::mem::swap(&mut terms, &mut next);
                        if terms.is_empty() {
                            break;
                        }
                    }
                    for (i, c) in terms.drain(..) {
                        acc.add(i, c);
                    }
                    // odometer over the remaining inputs
                    let mut m = inputs.len() - 1;
                    loop {
                        if m == 0 {
                            break;
                        }
                        pos[m] += 1;
                        if pos[m] < ents[m].len() {
                            break;
                        }
                        pos[m] = 0;
                        m -= 1;
                    }
                    if m == 0 {
                        break;
                    }
                }
            }
            acc
        };

        let combos: usize = ents.iter().map(|e| e.len()).product();
        let first = &ents[0];
        if combos < 4096 || first.len() < 2 {
            return Ok(work(first).finish(out_rank, d));
        }
        // fixed chunking keeps floating point sums independent of thread count
        let chunk = first.len().div_ceil(64).max(1);
        let parts: Vec<Accum<R>> = first.par_chunks(chunk).map(work).collect();
        let mut parts = parts.into_iter();
        let mut acc = parts.next().expect("at least one chunk");
        for p in parts {
            acc.merge(p);
        }
        Ok(acc.finish(out_rank, d))
    }

    /// Inverse through a linear solve against left multiplication. Only
    /// available for floating point scalars.
    pub fn invert(&self, x: &Element<R>) -> Result<Element<R>> {
        if R::MODE.is_exact() {
            return Err(Error::InversionUnsupported);
        }
        let k = x.rank;
        let n = space(self.dim, k);
        let mut a = vec![R::zero(); n * n];
        for j in 0..n {
            let ej = Element::basis(self.dim, &split(j, self.dim, k))?;
            for (i, c) in self.multiply(x, &ej)?.entries() {
                a[i * n + j] = c.clone();
            }
        }
        let b = self.one(k).to_dense();
        let y = R::solve(n, &a, &b).map_err(|e| match e {
            ScalarError::SolveUnsupported(_) => Error::InversionUnsupported,
            _ => Error::NotInvertible,
        })?;
        Element::from_dense(k, self.dim, y)
    }

    pub fn map_scalars<S: Ring>(&self, f: impl Fn(&R) -> S) -> Algebra<S> {
        Algebra {
            dim: self.dim,
            mult: self.mult.map_scalars(&f),
            unit: self.unit.map_scalars(&f),
        }
    }
}
