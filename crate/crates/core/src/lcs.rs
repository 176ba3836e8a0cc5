//! Graded spans of the lower central series filtration, the associated
//! ideals, and the dimensions of their successive quotients.
//!
//! Every subspace is computed one slice at a time (a slice is the set of
//! words sharing a grading key) and stored as a canonical RREF basis. Spans
//! are memoized in memory and optionally on disk.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::{sub_key, FreeElement, GradedSlice, Grading, Signature, SliceKey, Word};
use crate::cache::{sha256_hex, DiskCache};
use crate::error::{input, Error, Result};
use crate::linalg::{reduce, SliceBasis, SparseVec};
use crate::par;

/// A named two-sided ideal given by homogeneous generators.
#[derive(Clone, Debug)]
pub struct Ideal {
    name: String,
    generators: Vec<FreeElement>,
    fingerprint: String,
}

impl Ideal {
    pub fn new(name: impl Into<String>, generators: Vec<FreeElement>) -> Result<Self> {
        for g in &generators {
            if g.degree().is_none() && !g.is_zero() {
                return input("ideal generators must be homogeneous in total degree");
            }
        }
        let generators: Vec<FreeElement> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let json: Vec<serde_json::Value> = generators.iter().map(FreeElement::to_json).collect();
        let fingerprint = sha256_hex(serde_json::Value::Array(json).to_string().as_bytes())[..16].to_string();
        Ok(Ideal { name: name.into(), generators, fingerprint })
    }

    /// The ideal generated by the symplectic form of `A_{2n}`.
    pub fn omega(n: usize) -> Result<Self> {
        Ideal::new("omega", vec![crate::algebra::omega_element(n)?])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[FreeElement] {
        &self.generators
    }
}

/// Which subspace of the free algebra a span describes.
#[derive(Clone, Debug)]
pub enum Filtration {
    /// `L_k = [A, L_{k-1}]`, `L_1 = A`.
    L(usize),
    /// Two-sided ideal generated by `L_k`.
    M(usize),
    Ideal(Arc<Ideal>),
    Sum(Vec<Filtration>),
}

impl Filtration {
    /// `self + I`, or `self` when no ideal is given.
    pub fn plus(self, ideal: Option<&Arc<Ideal>>) -> Filtration {
        match ideal {
            None => self,
            Some(i) => Filtration::Sum(vec![self, Filtration::Ideal(i.clone())]),
        }
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filtration::L(k) => write!(f, "L{k}"),
            Filtration::M(k) => write!(f, "M{k}"),
            Filtration::Ideal(i) => write!(f, "<{}:{}>", i.name, i.fingerprint),
            Filtration::Sum(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A reduced span together with the slice it lives in.
#[derive(Clone, Debug)]
pub struct FiltrationSpan {
    pub signature: Signature,
    pub tag: String,
    pub key: SliceKey,
    pub basis: Arc<SliceBasis>,
}

/// Counts of disk-cache lookups performed by an engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

/// Span calculator for one algebra and one grading.
pub struct Engine {
    sig: Signature,
    grading: Grading,
    slices: Mutex<HashMap<SliceKey, Arc<GradedSlice>>>,
    spans: Mutex<HashMap<(String, SliceKey), Arc<SliceBasis>>>,
    disk: Option<DiskCache>,
    max_slice_dim: usize,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl Engine {
    pub fn new(sig: Signature, grading: Grading) -> Self {
        Engine {
            sig,
            grading,
            slices: Mutex::new(HashMap::new()),
            spans: Mutex::new(HashMap::new()),
            disk: None,
            max_slice_dim: 1 << 17,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    /// `A_{2n}` graded by degree and symplectic weight.
    pub fn symplectic(n: usize) -> Self {
        Engine::new(Signature::free(2 * n), Grading::SpWeight { n })
    }

    pub fn with_disk_cache(mut self, cache: DiskCache) -> Self {
        self.disk = Some(cache);
        self
    }

    /// Slices larger than this fail with a resource error.
    pub fn with_max_slice_dim(mut self, max: usize) -> Self {
        self.max_slice_dim = max;
        self
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn cache_stats(&self) -> CacheStats {
        CacheStats { hits: self.hits.load(Ordering::Relaxed), misses: self.misses.load(Ordering::Relaxed) }
    }

    pub fn slice(&self, key: &SliceKey) -> Result<Arc<GradedSlice>> {
        if let Some(s) = self.slices.lock().unwrap().get(key) {
            return Ok(s.clone());
        }
        let s = Arc::new(GradedSlice::new(self.sig, &self.grading, key.clone()));
        if s.dim() > self.max_slice_dim {
            return Err(Error::Resource(format!("slice {key:?} has {} words", s.dim())));
        }
        Ok(self.slices.lock().unwrap().entry(key.clone()).or_insert(s).clone())
    }

    /// Slice key and coordinates of a homogeneous element.
    pub fn locate(&self, e: &FreeElement) -> Result<Option<(SliceKey, SparseVec)>> {
        if e.signature() != self.sig {
            return input("element signature does not match the engine");
        }
        let Some(key) = e.key(&self.grading)? else { return Ok(None) };
        let v = self.slice(&key)?.vector(e)?;
        Ok(Some((key, v)))
    }

    fn cache_key(&self, tag: &str, key: &SliceKey) -> String {
        format!("v1|{:?}|{:?}|{tag}|{:?}", self.sig, self.grading, key.as_slice())
    }

    pub fn span(&self, f: &Filtration, key: &SliceKey) -> Result<Arc<SliceBasis>> {
        let tag = f.to_string();
        let mk = (tag.clone(), key.clone());
        if let Some(b) = self.spans.lock().unwrap().get(&mk) {
            return Ok(b.clone());
        }
        let disk_key = self.cache_key(&tag, key);
        if let Some(d) = &self.disk {
            if let Some(b) = d.load(&disk_key)? {
                self.hits.fetch_add(1, Ordering::Relaxed);
                let b = Arc::new(b);
                return Ok(self.spans.lock().unwrap().entry(mk).or_insert(b).clone());
            }
            self.misses.fetch_add(1, Ordering::Relaxed);
        }
        // computed outside the lock: concurrent duplicates are harmless
        // because the reduced basis is canonical
        let b = Arc::new(self.compute(f, key)?);
        if let Some(d) = &self.disk {
            d.store(&disk_key, &tag, key, &b)?;
        }
        Ok(self.spans.lock().unwrap().entry(mk).or_insert(b).clone())
    }

    pub fn filtration_span(&self, f: &Filtration, key: &SliceKey) -> Result<FiltrationSpan> {
        Ok(FiltrationSpan { signature: self.sig, tag: f.to_string(), key: key.clone(), basis: self.span(f, key)? })
    }

    fn compute(&self, f: &Filtration, key: &SliceKey) -> Result<SliceBasis> {
        let slice = self.slice(key)?;
        let dim = slice.dim();
        if !self.grading.feasible(key) || dim == 0 {
            return Ok(SliceBasis::empty(dim));
        }
        let degree = key[0] as usize;
        let gens: Vec<SparseVec> = match f {
            Filtration::L(0) | Filtration::M(0) => return input("filtration index starts at 1"),
            Filtration::L(1) | Filtration::M(1) => return Ok(SliceBasis::full(dim)),
            Filtration::L(k) => {
                if degree < *k {
                    return Ok(SliceBasis::empty(dim));
                }
                self.bracket_generators(*k, key, &slice)?
            }
            Filtration::M(k) => {
                if degree < *k {
                    return Ok(SliceBasis::empty(dim));
                }
                self.right_ideal_generators(*k, key, &slice)?
            }
            Filtration::Ideal(i) => self.ideal_generators(i, key, &slice)?,
            Filtration::Sum(parts) => {
                let spans: Vec<Arc<SliceBasis>> =
                    par::map(parts, |p| self.span(p, key)).into_iter().collect::<Result<_>>()?;
                if let Some(full) = spans.iter().find(|s| s.is_full()) {
                    return Ok((**full).clone());
                }
                spans.iter().flat_map(|s| s.rows().iter().cloned()).collect()
            }
        };
        reduce(&gens, dim)
    }

    /// `[w, b]` for words `w` of every sub-key and basis rows `b` of
    /// `L_{k-1}` on the complementary key.
    fn bracket_generators(&self, k: usize, key: &SliceKey, slice: &GradedSlice) -> Result<Vec<SparseVec>> {
        let degree = key[0] as usize;
        let mut jobs: Vec<SliceKey> = Vec::new();
        for d1 in 1..=degree - (k - 1) {
            jobs.extend(self.grading.split_keys(key, d1));
        }
        let chunks = par::map(&jobs, |k1| -> Result<Vec<SparseVec>> {
            let left = self.slice(k1)?;
            let rest = sub_key(key, k1);
            let inner = self.span(&Filtration::L(k - 1), &rest)?;
            if left.dim() == 0 || inner.rank() == 0 {
                return Ok(Vec::new());
            }
            let right = self.slice(&rest)?;
            let mut out = Vec::with_capacity(left.dim() * inner.rank());
            for w in &left.words {
                for row in inner.rows() {
                    let mut items = Vec::with_capacity(2 * row.nnz());
                    for (j, c) in row.iter() {
                        let u = &right.words[j];
                        push_product(slice, w, u, c, false, &mut items)?;
                        push_product(slice, u, w, c, true, &mut items)?;
                    }
                    let v = SparseVec::new(items);
                    if !v.is_zero() {
                        out.push(v);
                    }
                }
            }
            Ok(out)
        });
        flatten(chunks)
    }

    /// `b·w` for basis rows `b` of `L_k` and words `w`; this spans the
    /// two-sided ideal of `L_k` because `a·l = l·a + [a, l]` with
    /// `[a, l] ∈ L_{k+1} ⊆ L_k`.
    fn right_ideal_generators(&self, k: usize, key: &SliceKey, slice: &GradedSlice) -> Result<Vec<SparseVec>> {
        let degree = key[0] as usize;
        let mut jobs: Vec<SliceKey> = Vec::new();
        for d2 in 0..=degree - k {
            jobs.extend(self.grading.split_keys(key, d2));
        }
        let chunks = par::map(&jobs, |k2| -> Result<Vec<SparseVec>> {
            let right = self.slice(k2)?;
            let rest = sub_key(key, k2);
            let inner = self.span(&Filtration::L(k), &rest)?;
            if right.dim() == 0 || inner.rank() == 0 {
                return Ok(Vec::new());
            }
            let left = self.slice(&rest)?;
            let mut out = Vec::with_capacity(right.dim() * inner.rank());
            for w in &right.words {
                for row in inner.rows() {
                    let mut items = Vec::with_capacity(row.nnz());
                    for (j, c) in row.iter() {
                        push_product(slice, &left.words[j], w, c, false, &mut items)?;
                    }
                    let v = SparseVec::new(items);
                    if !v.is_zero() {
                        out.push(v);
                    }
                }
            }
            Ok(out)
        });
        flatten(chunks)
    }

    /// `w1·g·w2` over generators `g` and words filling the slice.
    fn ideal_generators(&self, ideal: &Ideal, key: &SliceKey, slice: &GradedSlice) -> Result<Vec<SparseVec>> {
        let mut jobs: Vec<(usize, SliceKey, SliceKey)> = Vec::new();
        for (gi, g) in ideal.generators.iter().enumerate() {
            if g.signature() != self.sig {
                return input("ideal generator signature does not match the engine");
            }
            let Some(gk) = g.key(&self.grading)? else { continue };
            let outer = sub_key(key, &gk);
            if !self.grading.feasible(&outer) {
                continue;
            }
            for d1 in 0..=outer[0] as usize {
                for k1 in self.grading.split_keys(&outer, d1) {
                    let k2 = sub_key(&outer, &k1);
                    jobs.push((gi, k1, k2));
                }
            }
        }
        let chunks = par::map(&jobs, |(gi, k1, k2)| -> Result<Vec<SparseVec>> {
            let g = &ideal.generators[*gi];
            let left = self.slice(k1)?;
            let right = self.slice(k2)?;
            let mut out = Vec::with_capacity(left.dim() * right.dim());
            for w1 in &left.words {
                for w2 in &right.words {
                    let mut items = Vec::with_capacity(g.len());
                    for (u, c) in g.terms() {
                        let Some((a, s1)) = w1.mul(u) else { continue };
                        let Some((b, s2)) = a.mul(w2) else { continue };
                        let i = slice_index(slice, &b)?;
                        items.push((i, if s1 != s2 { -c } else { c.clone() }));
                    }
                    let v = SparseVec::new(items);
                    if !v.is_zero() {
                        out.push(v);
                    }
                }
            }
            Ok(out)
        });
        flatten(chunks)
    }

    pub fn span_l(&self, k: usize, key: &SliceKey) -> Result<Arc<SliceBasis>> {
        self.span(&Filtration::L(k), key)
    }

    pub fn span_m(&self, k: usize, key: &SliceKey) -> Result<Arc<SliceBasis>> {
        self.span(&Filtration::M(k), key)
    }

    pub fn span_ideal(&self, ideal: &Arc<Ideal>, key: &SliceKey) -> Result<Arc<SliceBasis>> {
        self.span(&Filtration::Ideal(ideal.clone()), key)
    }

    /// Whether the homogeneous element `e` lies in `f`.
    pub fn contains(&self, f: &Filtration, e: &FreeElement) -> Result<bool> {
        match self.locate(e)? {
            None => Ok(true),
            Some((key, v)) => self.span(f, &key)?.contains(&v),
        }
    }

    /// `dim(top + I) - dim(bottom + I)` on one slice.
    fn quotient_dim(&self, top: Filtration, bottom: Filtration, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        let t = self.span(&top.plus(ideal), key)?.rank();
        let b = self.span(&bottom.plus(ideal), key)?.rank();
        Ok(t - b)
    }

    /// `B_k = L_k / L_{k+1}` of `A/I` on one slice.
    pub fn dim_b(&self, k: usize, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        if k == 0 {
            return input("k must be at least 1");
        }
        self.quotient_dim(Filtration::L(k), Filtration::L(k + 1), key, ideal)
    }

    /// `N_k = M_k / M_{k+1}` of `A/I` on one slice.
    pub fn dim_n(&self, k: usize, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        if k == 0 {
            return input("k must be at least 1");
        }
        self.quotient_dim(Filtration::M(k), Filtration::M(k + 1), key, ideal)
    }

    /// `A / (M_3 + L_2 + I)` on one slice.
    pub fn dim_b1bar(&self, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        let bottom = Filtration::Sum(vec![Filtration::M(3), Filtration::L(2)]);
        self.quotient_dim(Filtration::L(1), bottom, key, ideal)
    }

    /// `A / (M_k + I)` on one slice.
    pub fn dim_mod_m(&self, k: usize, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        self.quotient_dim(Filtration::L(1), Filtration::M(k), key, ideal)
    }

    pub fn dim_quotient(&self, q: Quotient, key: &SliceKey, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        match q {
            Quotient::B(k) => self.dim_b(k, key, ideal),
            Quotient::N(k) => self.dim_n(k, key, ideal),
            Quotient::B1Bar => self.dim_b1bar(key, ideal),
            Quotient::ModM(k) => self.dim_mod_m(k, key, ideal),
        }
    }

    /// Whether the class of `e ∈ L_k` is nonzero in `B_k(A/I)`, i.e.
    /// `e ∉ L_{k+1} + I`. Fails with a precondition error if `e ∉ L_k`.
    pub fn certify_nonzero(&self, e: &FreeElement, k: usize, ideal: Option<&Arc<Ideal>>) -> Result<bool> {
        let Some((key, v)) = self.locate(e)? else { return Ok(false) };
        if !self.span(&Filtration::L(k), &key)?.contains(&v)? {
            return Err(Error::Precondition(format!("element is not in L{k}")));
        }
        Ok(!self.span(&Filtration::L(k + 1).plus(ideal), &key)?.contains(&v)?)
    }

    /// Per-slice dimensions of a quotient for degrees `lo..=hi`.
    pub fn dims(&self, q: Quotient, lo: usize, hi: usize, ideal: Option<&Arc<Ideal>>, per_slice: bool) -> Result<QuotientDims> {
        let mut rows = Vec::new();
        for d in lo..=hi {
            let keys = self.grading.keys_of_degree(d);
            let dims: Vec<usize> = par::map(&keys, |k| self.dim_quotient(q, k, ideal)).into_iter().collect::<Result<_>>()?;
            if per_slice {
                for (k, dim) in keys.iter().zip(dims) {
                    if dim > 0 {
                        rows.push(DimRow { degree: d, weight: Some(k[1..].iter().map(|x| *x as i32).collect()), dim });
                    }
                }
            } else {
                rows.push(DimRow { degree: d, weight: None, dim: dims.iter().sum() });
            }
        }
        Ok(QuotientDims {
            quotient: q.to_string(),
            k: q.index(),
            ideal: ideal.map(|i| i.name.clone()),
            rows,
        })
    }

    /// Total dimension of a quotient in degree `d`, summed over slices.
    pub fn dim_in_degree(&self, q: Quotient, d: usize, ideal: Option<&Arc<Ideal>>) -> Result<usize> {
        Ok(self.dims(q, d, d, ideal, false)?.rows[0].dim)
    }
}

fn push_product(
    slice: &GradedSlice,
    a: &Word,
    b: &Word,
    c: &crate::scalar::Rational,
    negate: bool,
    items: &mut Vec<(usize, crate::scalar::Rational)>,
) -> Result<()> {
    if let Some((w, neg)) = a.mul(b) {
        let i = slice_index(slice, &w)?;
        items.push((i, if neg != negate { -c } else { c.clone() }));
    }
    Ok(())
}

fn slice_index(slice: &GradedSlice, w: &Word) -> Result<usize> {
    slice
        .index_of(w)
        .ok_or_else(|| Error::Input(format!("word {w:?} outside slice {:?}", slice.key)))
}

fn flatten(chunks: Vec<Result<Vec<SparseVec>>>) -> Result<Vec<SparseVec>> {
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Which successive quotient to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quotient {
    B(usize),
    N(usize),
    B1Bar,
    ModM(usize),
}

impl Quotient {
    fn index(&self) -> usize {
        match self {
            Quotient::B(k) | Quotient::N(k) | Quotient::ModM(k) => *k,
            Quotient::B1Bar => 1,
        }
    }
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quotient::B(k) => write!(f, "B{k}"),
            Quotient::N(k) => write!(f, "N{k}"),
            Quotient::B1Bar => write!(f, "B1bar"),
            Quotient::ModM(k) => write!(f, "AmodM{k}"),
        }
    }
}

impl std::str::FromStr for Quotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |rest: &str| rest.parse::<usize>().ok().filter(|k| *k >= 1);
        let q = if s.eq_ignore_ascii_case("b1bar") {
            Some(Quotient::B1Bar)
        } else if let Some(r) = s.strip_prefix("AmodM") {
            num(r).map(Quotient::ModM)
        } else if let Some(r) = s.strip_prefix('B') {
            num(r).map(Quotient::B)
        } else if let Some(r) = s.strip_prefix('N') {
            num(r).map(Quotient::N)
        } else {
            None
        };
        q.ok_or_else(|| Error::Input(format!("unknown quotient '{s}' (expected Bk, Nk, B1bar or AmodMk)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub degree: usize,
    pub weight: Option<Vec<i32>>,
    pub dim: usize,
}

/// A dimension table for one quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDims {
    pub quotient: String,
    pub k: usize,
    pub ideal: Option<String>,
    pub rows: Vec<DimRow>,
}

impl QuotientDims {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,degree,weight,dim\n");
        for r in &self.rows {
            let w = match &r.weight {
                Some(w) => w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                None => "all".to_string(),
            };
            s.push_str(&format!("{},{},{},{}\n", self.k, r.degree, w, r.dim));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Dimension per degree, summed over slices.
    pub fn by_degree(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some((d, n)) if *d == r.degree => *n += r.dim,
                _ => out.push((r.degree, r.dim)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_slice, Word};
    use crate::scalar::Rational;

    fn deg(d: usize) -> SliceKey {
        Grading::Degree.degree_key(d)
    }

    #[test]
    fn span_l_examples() {
        let e = Engine::new(Signature::free(2), Grading::Degree);
        let l2 = e.span_l(2, &deg(2)).unwrap();
        assert_eq!(l2.rank(), 1);
        let s = enumerate_slice(Signature::free(2), 2, None);
        let b = FreeElement::from_letters(Signature::free(2), &[0, 1])
            .sub(&FreeElement::from_letters(Signature::free(2), &[1, 0]))
            .unwrap();
        assert!(l2.contains(&s.vector(&b).unwrap()).unwrap());
        assert_eq!(e.span_l(2, &deg(1)).unwrap().rank(), 0);
        let e4 = Engine::new(Signature::free(4), Grading::Degree);
        assert_eq!(e4.span_l(3, &deg(3)).unwrap().rank(), 20);
    }

    #[test]
    fn span_ideal_examples() {
        let e = Engine::new(Signature::free(2), Grading::Degree);
        let w = Arc::new(Ideal::omega(1).unwrap());
        assert_eq!(e.span_ideal(&w, &deg(2)).unwrap().rank(), 1);
        assert_eq!(e.span_ideal(&w, &deg(3)).unwrap().rank(), 4);
        assert_eq!(e.span_m(3, &deg(3)).unwrap().rank(), 2);
        assert!(Ideal::new("bad", vec![FreeElement::one(Signature::free(2))
            .add(&FreeElement::gen(Signature::free(2), 0))
            .unwrap()])
        .is_err());
    }

    #[test]
    fn quotient_examples() {
        let e = Engine::symplectic(1);
        let w = Arc::new(Ideal::omega(1).unwrap());
        assert_eq!(e.dim_in_degree(Quotient::B(2), 2, None).unwrap(), 1);
        for d in 0..=6 {
            assert_eq!(e.dim_in_degree(Quotient::B(2), d, Some(&w)).unwrap(), 0, "degree {d}");
        }
        assert_eq!(e.dim_in_degree(Quotient::N(3), 3, None).unwrap(), 2);
        assert_eq!(e.dim_in_degree(Quotient::N(4), 3, None).unwrap(), 0);
        assert_eq!(e.dim_in_degree(Quotient::B1Bar, 3, Some(&w)).unwrap(), 4);
        assert_eq!(e.dim_in_degree(Quotient::B1Bar, 0, None).unwrap(), 1);
        let e2 = Engine::symplectic(2);
        assert_eq!(e2.dim_in_degree(Quotient::B(3), 3, None).unwrap(), 20);
    }

    #[test]
    fn certify_examples() {
        let sig = Signature::free(2);
        let e = Engine::symplectic(1);
        let w = Arc::new(Ideal::omega(1).unwrap());
        let b = FreeElement::gen(sig, 0).bracket(&FreeElement::gen(sig, 1)).unwrap();
        assert!(e.certify_nonzero(&b, 2, None).unwrap());
        assert!(!e.certify_nonzero(&b, 2, Some(&w)).unwrap());
        assert!(matches!(e.certify_nonzero(&FreeElement::gen(sig, 0), 2, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn weight_slicing_matches_degree_slicing() {
        let plain = Engine::new(Signature::free(4), Grading::Degree);
        let weighted = Engine::symplectic(2);
        for k in 2..=3 {
            for d in 2..=5 {
                let a = plain.span_l(k, &deg(d)).unwrap().rank();
                let b: usize = weighted
                    .grading()
                    .keys_of_degree(d)
                    .iter()
                    .map(|key| weighted.span_l(k, key).unwrap().rank())
                    .sum();
                assert_eq!(a, b, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn quotient_parsing_and_csv() {
        assert_eq!("B3".parse::<Quotient>().unwrap(), Quotient::B(3));
        assert_eq!("b1bar".parse::<Quotient>().unwrap(), Quotient::B1Bar);
        assert_eq!("AmodM3".parse::<Quotient>().unwrap(), Quotient::ModM(3));
        assert!("Q2".parse::<Quotient>().is_err());
        assert!("B0".parse::<Quotient>().is_err());
        let e = Engine::symplectic(1);
        let t = e.dims(Quotient::B(2), 2, 3, None, true).unwrap();
        assert!(t.to_csv().starts_with("k,degree,weight,dim\n2,2,0,1\n"));
        assert_eq!(t.by_degree(), vec![(2, 1), (3, 2)]);
    }

    #[test]
    fn disk_cache_hits_are_identical() {
        let dir = tempfile::tempdir().unwrap();
        let key = Grading::weight_key(5, &[1, 0]);
        let fresh = Engine::symplectic(2).span_l(3, &key).unwrap();
        let first = Engine::symplectic(2).with_disk_cache(DiskCache::open(dir.path()).unwrap());
        assert_eq!(*first.span_l(3, &key).unwrap(), *fresh);
        assert_eq!(first.cache_stats().hits, 0);
        let second = Engine::symplectic(2).with_disk_cache(DiskCache::open(dir.path()).unwrap());
        assert_eq!(*second.span_l(3, &key).unwrap(), *fresh);
        assert_eq!(second.cache_stats(), CacheStats { hits: 1, misses: 0 });
    }

    #[test]
    fn super_algebra_slices() {
        let sig = Signature::mixed(2, 3);
        let e = Engine::new(sig, Grading::Multidegree { sig });
        let z = |i| FreeElement::odd_gen(sig, i);
        let ef = FreeElement::gen(sig, 0).bracket(&FreeElement::gen(sig, 1)).unwrap();
        // [e z2, [f z0, z1]] = 2 [e,f] z0 z1 z2, which survives modulo L4
        let v = ef.multiply(&z(0)).unwrap().multiply(&z(1)).unwrap().multiply(&z(2)).unwrap();
        assert!(!e.certify_nonzero(&v, 2, None).unwrap());
        assert!(e.certify_nonzero(&v, 3, None).unwrap());
        // odd generators anticommute, so [z0, z1] = 2 z0 z1
        let c = z(0).bracket(&z(1)).unwrap();
        assert_eq!(c.coeff(&Word { letters: Default::default(), odd: 0b11 }), Rational::from_int(2));
        assert!(e.contains(&Filtration::L(2), &c).unwrap());
    }
}
