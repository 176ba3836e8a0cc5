//! Sparse exact linear algebra over the rationals.
//!
//! Every subspace is represented by its canonical reduced row-echelon
//! basis ([`SliceBasis`]). Pivots are the leftmost nonzero column of each
//! row, each pivot entry is one, and pivot columns vanish in every other
//! row. The canonical form does not depend on the order in which spanning
//! vectors are fed in, which is what lets the parallel reducer split work
//! into chunks and still return bit-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::par;
use crate::scalar::Rational;

const NO_ROW: u32 = u32::MAX;

/// A sparse vector: strictly increasing column indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, Rational)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Collects arbitrary `(index, value)` pairs, summing duplicates and
    /// dropping zeros.
    pub fn new<I: IntoIterator<Item = (usize, Rational)>>(items: I) -> Self {
        let mut v: Vec<(u32, Rational)> = items.into_iter().map(|(i, q)| (i as u32, q)).collect();
        v.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, Rational)> = Vec::with_capacity(v.len());
        for (i, q) in v {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &q,
                _ => out.push((i, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        SparseVec { entries: out }
    }

    /// Standard basis vector.
    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i as u32, Rational::ONE)] }
    }

    pub(crate) fn from_sorted(entries: Vec<(u32, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, q)| (*i as usize, q))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0 as usize)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0 as usize)
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rational::ZERO,
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec { entries: self.entries.iter().map(|(i, q)| (*i, q * c)).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let s = &a[i].1 + &(&b[j].1 * c);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Rational::from_int(-1), other)
    }

    /// Rescales so the leading entry is one.
    pub fn normalized(&self) -> SparseVec {
        match self.entries.first() {
            Some((_, q)) if !q.is_one() => self.scaled(&q.recip()),
            _ => self.clone(),
        }
    }

    /// Restricts to indices in `lo..hi`, shifting them down by `lo`.
    pub fn window(&self, lo: usize, hi: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| (*i as usize) >= lo && (*i as usize) < hi)
                .map(|(i, q)| (*i - lo as u32, q.clone()))
                .collect(),
        }
    }

    /// Shifts every index up by `by`.
    pub fn shifted(&self, by: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, q)| (*i + by as u32, q.clone())).collect() }
    }

    fn check_dim(&self, ambient: usize) -> Result<()> {
        match self.max_index() {
            Some(m) if m >= ambient => input(format!("index {m} out of range for ambient dimension {ambient}")),
            _ => Ok(()),
        }
    }
}

/// Canonical RREF basis of a subspace of `Q^ambient`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceBasis {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
}

impl SliceBasis {
    pub fn empty(ambient: usize) -> Self {
        SliceBasis { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        SliceBasis {
            ambient,
            rows: (0..ambient).map(SparseVec::unit).collect(),
            pivots: (0..ambient as u32).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().map(|p| *p as usize)
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn pivot_row(&self, col: u32) -> Option<usize> {
        self.pivots.binary_search(&col).ok()
    }

    /// Normal form of `v` modulo the span: subtracts the pivot-column
    /// components. Zero exactly when `v` lies in the span.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        if self.is_full() {
            return SparseVec::zero();
        }
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        for (c, q) in v.entries() {
            match self.pivot_row(*c) {
                Some(r) => {
                    let neg = -q;
                    for (j, x) in self.rows[r].entries().iter().skip(1) {
                        terms.push((*j as usize, x * &neg));
                    }
                }
                None => terms.push((*c as usize, q.clone())),
            }
        }
        SparseVec::new(terms)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        v.check_dim(self.ambient)?;
        Ok(self.residual(v).is_zero())
    }

    /// Coordinates of `v` in the row basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        if !self.residual(v).is_zero() {
            return None;
        }
        Some(self.pivots.iter().map(|p| v.get(*p as usize)).collect())
    }

    /// `span(self) ⊆ span(other)`.
    pub fn is_subspace_of(&self, other: &SliceBasis) -> Result<bool> {
        same_ambient(self, other)?;
        Ok(self.rows.iter().all(|r| other.residual(r).is_zero()))
    }
}

fn same_ambient(a: &SliceBasis, b: &SliceBasis) -> Result<()> {
    if a.ambient != b.ambient {
        return input(format!("ambient dimensions differ: {} vs {}", a.ambient, b.ambient));
    }
    Ok(())
}

/// Incremental RREF accumulator.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SparseVec>,
    row_of_col: Vec<u32>,
    scratch: Vec<Rational>,
    touched: Vec<u32>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon {
            ambient,
            rows: Vec::new(),
            row_of_col: vec![NO_ROW; ambient],
            scratch: vec![Rational::ZERO; ambient],
            touched: Vec::new(),
        }
    }

    pub fn from_basis(b: &SliceBasis) -> Self {
        let mut e = Echelon::new(b.ambient);
        for (r, p) in b.rows.iter().zip(&b.pivots) {
            e.row_of_col[*p as usize] = e.rows.len() as u32;
            e.rows.push(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn residual(&mut self, v: &SparseVec) -> SparseVec {
        for (c, q) in v.entries() {
            let r = self.row_of_col[*c as usize];
            if r == NO_ROW {
                self.bump(*c, q);
            } else {
                let neg = -q;
                let row = &self.rows[r as usize];
                for (j, x) in row.entries().iter().skip(1) {
                    let t = x * &neg;
                    let slot = &mut self.scratch[*j as usize];
                    if slot.is_zero() {
                        self.touched.push(*j);
                    }
                    *slot += &t;
                }
            }
        }
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            let q = std::mem::take(&mut self.scratch[j as usize]);
            if !q.is_zero() {
                out.push((j, q));
            }
        }
        self.touched.clear();
        SparseVec::from_sorted(out)
    }

    fn bump(&mut self, c: u32, q: &Rational) {
        let slot = &mut self.scratch[c as usize];
        if slot.is_zero() {
            self.touched.push(c);
        }
        *slot += q;
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if self.is_full() || v.is_zero() {
            return false;
        }
        let r = self.residual(v);
        if r.is_zero() {
            return false;
        }
        let r = r.normalized();
        let c = r.leading().unwrap() as u32;
        for row in self.rows.iter_mut() {
            let x = row.get(c as usize);
            if !x.is_zero() {
                *row = row.axpy(&-&x, &r);
            }
        }
        self.row_of_col[c as usize] = self.rows.len() as u32;
        self.rows.push(r);
        true
    }

    pub fn contains(&mut self, v: &SparseVec) -> bool {
        self.is_full() || self.residual(v).is_zero()
    }

    pub fn finish(self) -> SliceBasis {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().unwrap());
        let pivots = rows.iter().map(|r| r.leading().unwrap() as u32).collect();
        SliceBasis { ambient: self.ambient, rows, pivots }
    }
}

/// Chunk size above which the reducer splits its input across threads.
const PAR_CHUNK: usize = 512;

fn reduce_unchecked(vectors: &[SparseVec], ambient: usize) -> SliceBasis {
    if vectors.len() <= PAR_CHUNK || !par::enabled() {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            if e.is_full() {
                break;
            }
            e.insert(v);
        }
        return e.finish();
    }
    let parts: Vec<SliceBasis> = par::map_chunks(vectors, PAR_CHUNK, |chunk| {
        let mut e = Echelon::new(ambient);
        for v in chunk {
            if e.is_full() {
                break;
            }
            e.insert(v);
        }
        e.finish()
    });
    merge_all(parts, ambient)
}

fn merge_all(mut parts: Vec<SliceBasis>, ambient: usize) -> SliceBasis {
    if parts.is_empty() {
        return SliceBasis::empty(ambient);
    }
    while parts.len() > 1 {
        let pairs: Vec<(SliceBasis, Option<SliceBasis>)> = {
            let mut it = parts.into_iter();
            let mut v = Vec::new();
            while let Some(a) = it.next() {
                v.push((a, it.next()));
            }
            v
        };
        parts = par::map_vec(pairs, |(a, b)| match b {
            Some(b) => merge_two(a, &b),
            None => a,
        });
    }
    parts.pop().unwrap()
}

fn merge_two(a: SliceBasis, b: &SliceBasis) -> SliceBasis {
    let (big, small) = if a.rank() >= b.rank() { (a, b.clone()) } else { (b.clone(), a) };
    let mut e = Echelon::from_basis(&big);
    for r in &small.rows {
        if e.is_full() {
            break;
        }
        e.insert(r);
    }
    e.finish()
}

/// Canonical RREF basis of the span of `vectors`.
pub fn reduce(vectors: &[SparseVec], ambient: usize) -> Result<SliceBasis> {
    for v in vectors {
        v.check_dim(ambient)?;
    }
    Ok(reduce_unchecked(vectors, ambient))
}

/// `dim(span(u) + w) - dim(w)`.
pub fn relative_dim(u: &[SparseVec], w: &SliceBasis) -> Result<usize> {
    for v in u {
        v.check_dim(w.ambient)?;
    }
    let mut e = Echelon::from_basis(w);
    for v in u {
        if e.is_full() {
            break;
        }
        e.insert(v);
    }
    Ok(e.rank() - w.rank())
}

/// Canonical basis of `A + B`.
pub fn sum_basis(a: &SliceBasis, b: &SliceBasis) -> Result<SliceBasis> {
    same_ambient(a, b)?;
    Ok(merge_two(a.clone(), b))
}

/// `dim(A ∩ B)`, via `dim A + dim B - dim(A + B)`.
pub fn intersection_dim(a: &SliceBasis, b: &SliceBasis) -> Result<usize> {
    let s = sum_basis(a, b)?;
    Ok(a.rank() + b.rank() - s.rank())
}

/// Basis of the kernel of the linear map sending the `i`-th standard basis
/// vector of `Q^images.len()` to `images[i] ∈ Q^out_dim`.
pub fn kernel(images: &[SparseVec], out_dim: usize) -> Result<Vec<SparseVec>> {
    let n = images.len();
    let aug: Vec<SparseVec> = images
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.check_dim(out_dim)?;
            let mut e = v.entries().to_vec();
            e.push(((out_dim + i) as u32, Rational::ONE));
            Ok(SparseVec::from_sorted(e))
        })
        .collect::<Result<_>>()?;
    let b = reduce_unchecked(&aug, out_dim + n);
    Ok(b
        .rows
        .iter()
        .zip(&b.pivots)
        .filter(|(_, p)| **p as usize >= out_dim)
        .map(|(r, _)| r.window(out_dim, out_dim + n))
        .collect())
}

/// Rank of the linear map with the given images.
pub fn rank_of(images: &[SparseVec], out_dim: usize) -> Result<usize> {
    Ok(reduce(images, out_dim)?.rank())
}

/// Canonical basis of `A ∩ B`.
pub fn intersection_basis(a: &SliceBasis, b: &SliceBasis) -> Result<SliceBasis> {
    same_ambient(a, b)?;
    let minus = Rational::from_int(-1);
    let images: Vec<SparseVec> = a.rows.iter().cloned().chain(b.rows.iter().map(|r| r.scaled(&minus))).collect();
    let ker = kernel(&images, a.ambient)?;
    let vecs: Vec<SparseVec> = ker
        .iter()
        .map(|k| {
            let mut items = Vec::new();
            for (i, c) in k.iter().take_while(|(i, _)| *i < a.rank()) {
                items.extend(a.rows[i].iter().map(|(j, x)| (j, x * c)));
            }
            SparseVec::new(items)
        })
        .collect();
    reduce(&vecs, a.ambient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn sv(items: &[(usize, i64)]) -> SparseVec {
        SparseVec::new(items.iter().map(|(i, c)| (*i, q(*c))))
    }

    #[test]
    fn reduce_examples() {
        let b = reduce(&[sv(&[(0, 1), (1, 2)]), sv(&[(0, 2), (1, 4)])], 2).unwrap();
        assert_eq!(b.rank(), 1);
        assert_eq!(b.pivots().collect::<Vec<_>>(), vec![0]);
        assert_eq!(reduce(&[], 3).unwrap().rank(), 0);
        let b = reduce(&[sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])], 2).unwrap();
        assert_eq!(b, SliceBasis::full(2));
        assert!(reduce(&[sv(&[(5, 1)])], 2).is_err());
    }

    #[test]
    fn contains_examples() {
        let b = reduce(&[sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])], 2).unwrap();
        assert!(b.contains(&sv(&[(0, 1)])).unwrap());
        let e1 = reduce(&[sv(&[(0, 1)])], 2).unwrap();
        assert!(!e1.contains(&sv(&[(1, 1)])).unwrap());
        assert!(SliceBasis::empty(2).contains(&SparseVec::zero()).unwrap());
        assert!(e1.contains(&sv(&[(3, 1)])).is_err());
    }

    #[test]
    fn relative_dim_examples() {
        let w1 = reduce(&[sv(&[(0, 1)])], 2).unwrap();
        let w2 = reduce(&[sv(&[(1, 1)])], 2).unwrap();
        assert_eq!(relative_dim(&[sv(&[(0, 1)])], &w1).unwrap(), 0);
        assert_eq!(relative_dim(&[sv(&[(0, 1)])], &w2).unwrap(), 1);
        assert_eq!(relative_dim(&[sv(&[(0, 1), (1, 1)]), sv(&[(0, 1), (1, -1)])], &w1).unwrap(), 1);
    }

    #[test]
    fn sum_examples() {
        let e1 = reduce(&[sv(&[(0, 1)])], 2).unwrap();
        let e2 = reduce(&[sv(&[(1, 1)])], 2).unwrap();
        assert_eq!(sum_basis(&e1, &e2).unwrap().rank(), 2);
        assert_eq!(sum_basis(&e1, &e1).unwrap().rank(), 1);
        let p = reduce(&[sv(&[(0, 1), (1, 1)])], 2).unwrap();
        let m = reduce(&[sv(&[(0, 1), (1, -1)])], 2).unwrap();
        assert_eq!(sum_basis(&p, &m).unwrap().rank(), 2);
        assert!(sum_basis(&e1, &SliceBasis::empty(3)).is_err());
    }

    #[test]
    fn rref_shape() {
        let b = reduce(&[sv(&[(0, 2), (1, 4), (3, 2)]), sv(&[(0, 1), (2, 3)]), sv(&[(1, 1), (2, 1)])], 4).unwrap();
        for (r, p) in b.rows().iter().zip(b.pivots()) {
            assert_eq!(r.leading(), Some(p));
            assert!(r.get(p).is_one());
            for (r2, p2) in b.rows().iter().zip(b.pivots()) {
                if p2 != p {
                    assert!(r2.get(p).is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_of_projection() {
        // (a, b, c) -> (a + b, b + c)
        let imgs = vec![sv(&[(0, 1)]), sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])];
        let k = kernel(&imgs, 2).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], sv(&[(0, 1), (1, -1), (2, 1)]));
    }

    /// Dense Gaussian elimination used as an independent oracle.
    fn dense_rank(rows: &[Vec<Rational>]) -> usize {
        let mut m: Vec<Vec<Rational>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, p);
            let inv = m[rank][c].recip();
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] * &inv;
                    for j in c..cols {
                        let t = &m[rank][j] * &f;
                        m[r][j] -= &t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
        (0..n).map(|i| v.get(i)).collect()
    }

    fn arb_vecs(dim: usize) -> impl Strategy<Value = Vec<SparseVec>> {
        prop::collection::vec(
            prop::collection::vec((0..dim, -3i64..=3), 0..5)
                .prop_map(|items| SparseVec::new(items.into_iter().map(|(i, c)| (i, Rational::from_int(c))))),
            0..10,
        )
    }

    proptest! {
        #[test]
        fn idempotent_and_order_independent(vs in arb_vecs(8)) {
            let b = reduce(&vs, 8).unwrap();
            prop_assert_eq!(reduce(b.rows(), 8).unwrap(), b.clone());
            let mut rev = vs.clone();
            rev.reverse();
            prop_assert_eq!(reduce(&rev, 8).unwrap(), b);
        }

        #[test]
        fn matches_dense_oracle(vs in arb_vecs(10), probe in arb_vecs(10)) {
            let b = reduce(&vs, 10).unwrap();
            let dense: Vec<_> = vs.iter().map(|v| to_dense(v, 10)).collect();
            prop_assert_eq!(b.rank(), dense_rank(&dense));
            for p in &probe {
                let mut with = dense.clone();
                with.push(to_dense(p, 10));
                let expect = dense_rank(&with) == dense_rank(&dense);
                prop_assert_eq!(b.contains(p).unwrap(), expect);
            }
        }

        #[test]
        fn grassmann_identity(a in arb_vecs(7), b in arb_vecs(7)) {
            let ba = reduce(&a, 7).unwrap();
            let bb = reduce(&b, 7).unwrap();
            let s = sum_basis(&ba, &bb).unwrap();
            // brute-force intersection: kernel of [a-rows | -b-rows]
            let mut imgs: Vec<SparseVec> = ba.rows().to_vec();
            imgs.extend(bb.rows().iter().map(|r| r.scaled(&Rational::from_int(-1))));
            let k = kernel(&imgs, 7).unwrap();
            prop_assert_eq!(s.rank() + k.len(), ba.rank() + bb.rank());
            prop_assert_eq!(relative_dim(bb.rows(), &ba).unwrap(), s.rank() - ba.rank());
            let i = intersection_basis(&ba, &bb).unwrap();
            prop_assert_eq!(i.rank(), k.len());
            prop_assert!(i.is_subspace_of(&ba).unwrap() && i.is_subspace_of(&bb).unwrap());
        }
    }
}
