//! Free associative algebras over the rationals, optionally tensored with an
//! exterior algebra on odd generators.
//!
//! A [`Word`] is a normal-form monomial: a sequence of even letters followed
//! by a sorted set of odd letters. Odd letters commute with even letters and
//! anticommute (and square to zero) among themselves, so `B = A ⊗ E` is
//! modelled literally. The pure free algebra is the case with no odd
//! generators.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{input, Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Rational;

/// Generator counts of a free (super)algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub even: usize,
    pub odd: usize,
}

impl Signature {
    /// The free algebra `A_m`.
    pub fn free(m: usize) -> Self {
        Signature { even: m, odd: 0 }
    }

    /// `A_2 ⊗ Λ(z_0, .., z_{odd-1})`, with even generators named `e`, `f`.
    pub fn mixed(even: usize, odd: usize) -> Self {
        assert!(odd <= 32, "at most 32 odd generators");
        Signature { even, odd }
    }

    pub fn generators(&self) -> usize {
        self.even + self.odd
    }

    fn even_name(&self, i: usize) -> String {
        if self.odd > 0 && self.even == 2 {
            ["e", "f"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }
}

pub type Letters = SmallVec<[u8; 12]>;

/// Normal-form monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Letters,
    pub odd: u32,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn even(letters: &[u8]) -> Self {
        Word { letters: letters.iter().copied().collect(), odd: 0 }
    }

    pub fn degree(&self) -> usize {
        self.letters.len() + self.odd.count_ones() as usize
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |i| self.odd & (1 << i) != 0)
    }

    /// Product of two normal-form words: `None` when an odd letter repeats,
    /// otherwise the product word and whether the sign flipped.
    pub fn mul(&self, other: &Word) -> Option<(Word, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        let neg = odd_merge_sign(self.odd, other.odd);
        Some((Word { letters, odd: self.odd | other.odd }, neg))
    }
}

/// Parity of the number of pairs `(s, t)` with `s ∈ a`, `t ∈ b`, `s > t`.
pub(crate) fn odd_merge_sign(a: u32, b: u32) -> bool {
    let mut inv = 0u32;
    let mut bits = b;
    while bits != 0 {
        let t = bits.trailing_zeros();
        bits &= bits - 1;
        let above = if t >= 31 { 0 } else { a >> (t + 1) };
        inv += above.count_ones();
    }
    inv % 2 == 1
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters).then_with(|| self.odd_indices().cmp(other.odd_indices()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters.as_slice())?;
        if self.odd != 0 {
            write!(f, "z{:?}", self.odd_indices().collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

/// Exact linear combination of normal-form words.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeElement {
    sig: Signature,
    terms: BTreeMap<Word, Rational>,
}

impl FreeElement {
    pub fn zero(sig: Signature) -> Self {
        FreeElement { sig, terms: BTreeMap::new() }
    }

    pub fn one(sig: Signature) -> Self {
        Self::word(sig, Word::empty())
    }

    pub fn word(sig: Signature, w: Word) -> Self {
        Self::term(sig, w, Rational::ONE)
    }

    pub fn term(sig: Signature, w: Word, c: Rational) -> Self {
        let mut e = Self::zero(sig);
        e.add_term(w, c);
        e
    }

    /// Even generator `i` (0-based).
    pub fn gen(sig: Signature, i: usize) -> Self {
        assert!(i < sig.even, "generator index out of range");
        Self::word(sig, Word::even(&[i as u8]))
    }

    /// Odd generator `z_i` (0-based).
    pub fn odd_gen(sig: Signature, i: usize) -> Self {
        assert!(i < sig.odd, "odd generator index out of range");
        Self::word(sig, Word { letters: Letters::new(), odd: 1 << i })
    }

    pub fn from_letters(sig: Signature, letters: &[u8]) -> Self {
        Self::word(sig, Word::even(letters))
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(q) => {
                *q += &c;
                if q.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check_sig(&self, other: &FreeElement) -> Result<()> {
        if self.sig != other.sig {
            return input(format!("signature mismatch: {:?} vs {:?}", self.sig, other.sig));
        }
        Ok(())
    }

    pub fn add(&self, other: &FreeElement) -> Result<FreeElement> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FreeElement) -> Result<FreeElement> {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> FreeElement {
        if c.is_zero() {
            return Self::zero(self.sig);
        }
        FreeElement { sig: self.sig, terms: self.terms.iter().map(|(w, q)| (w.clone(), q * c)).collect() }
    }

    pub fn multiply(&self, other: &FreeElement) -> Result<FreeElement> {
        self.check_sig(other)?;
        let mut out = Self::zero(self.sig);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if let Some((w, neg)) = u.mul(v) {
                    let c = a * b;
                    out.add_term(w, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Commutator `ab - ba`.
    pub fn bracket(&self, other: &FreeElement) -> Result<FreeElement> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn pow(&self, e: usize) -> FreeElement {
        let mut acc = Self::one(self.sig);
        for _ in 0..e {
            acc = acc.multiply(self).expect("same signature");
        }
        acc
    }

    /// Total degree if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Slice key under `grading` if every term has the same key.
    pub fn key(&self, grading: &Grading) -> Result<Option<SliceKey>> {
        let mut it = self.terms.keys().map(|w| grading.key(w));
        let Some(first) = it.next() else { return Ok(None) };
        let first = first?;
        for k in it {
            if k? != first {
                return input("element is not homogeneous for the grading");
            }
        }
        Ok(Some(first))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let (n, d) = c.parts();
                serde_json::json!([format!("{n}/{d}"), w.letters.to_vec(), w.odd_indices().collect::<Vec<_>>()])
            })
            .collect();
        serde_json::json!({ "signature": { "even": self.sig.even, "odd": self.sig.odd }, "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FreeElement> {
        #[derive(Deserialize)]
        struct Doc {
            signature: Signature,
            terms: Vec<(String, Vec<u8>, Vec<usize>)>,
        }
        let doc: Doc = serde_json::from_value(v.clone())?;
        let mut out = FreeElement::zero(doc.signature);
        for (c, letters, odd) in doc.terms {
            if letters.iter().any(|l| *l as usize >= doc.signature.even)
                || odd.iter().any(|o| *o >= doc.signature.odd)
            {
                return input("generator index out of range in serialized element");
            }
            let c: Rational = c.parse()?;
            let mut mask = 0u32;
            let mut sorted = odd.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != odd.len() {
                continue;
            }
            for o in &odd {
                mask |= 1 << o;
            }
            // sign of sorting the listed odd letters
            let mut inv = 0;
            for i in 0..odd.len() {
                for j in i + 1..odd.len() {
                    if odd[i] > odd[j] {
                        inv += 1;
                    }
                }
            }
            let c = if inv % 2 == 1 { -c } else { c };
            out.add_term(Word { letters: letters.into_iter().collect(), odd: mask }, c);
        }
        Ok(out)
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if w.degree() == 0 {
                write!(f, "1")?;
            }
            for l in &w.letters {
                write!(f, "{}", self.sig.even_name(*l as usize))?;
            }
            for o in w.odd_indices() {
                write!(f, "z{o}")?;
            }
        }
        Ok(())
    }
}

pub fn omega_element(n: usize) -> Result<FreeElement> {
    if n < 1 {
        return input("omega needs n >= 1");
    }
    let sig = Signature::free(2 * n);
    let half = Rational::new(1, 2);
    let mut out = FreeElement::zero(sig);
    for i in 0..n {
        let a = FreeElement::gen(sig, i);
        let b = FreeElement::gen(sig, i + n);
        out = out.add(&a.bracket(&b)?.scale(&half))?;
    }
    Ok(out)
}

/// Images of the generators of a source signature: even generators first,
/// then odd ones.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub source: Signature,
    pub target: Signature,
    pub images: Vec<Option<FreeElement>>,
}

impl GeneratorMap {
    pub fn new(source: Signature, target: Signature) -> Self {
        GeneratorMap { source, target, images: vec![None; source.generators()] }
    }

    pub fn set(&mut self, gen: usize, img: FreeElement) -> Result<()> {
        if img.signature() != self.target {
            return input("image lives in the wrong signature");
        }
        if gen >= self.images.len() {
            return input("generator index out of range");
        }
        self.images[gen] = Some(img);
        Ok(())
    }

    fn image(&self, gen: usize) -> Result<&FreeElement> {
        self.images
            .get(gen)
            .and_then(|o| o.as_ref())
            .ok_or_else(|| Error::Input(format!("generator {gen} has no assigned image")))
    }

    /// Linear substitution `x_from ↦ Σ coeff · x_to`, used for root vectors.
    pub fn linear(sig: Signature, subs: &[(usize, usize, Rational)]) -> Self {
        let mut m = GeneratorMap::new(sig, sig);
        for g in 0..sig.even {
            m.images[g] = Some(FreeElement::zero(sig));
        }
        for (from, to, c) in subs {
            let cur = m.images[*from].take().unwrap();
            m.images[*from] = Some(cur.add(&FreeElement::gen(sig, *to).scale(c)).unwrap());
        }
        m
    }
}

/// The algebra homomorphism extending `map`.
pub fn apply_hom(map: &GeneratorMap, e: &FreeElement) -> Result<FreeElement> {
    if e.signature() != map.source {
        return input("element is not in the source signature");
    }
    let mut cache: HashMap<Word, FreeElement> = HashMap::new();
    let mut out = FreeElement::zero(map.target);
    for (w, c) in e.terms() {
        let img = match cache.get(w) {
            Some(i) => i.clone(),
            None => {
                let mut acc = FreeElement::one(map.target);
                for l in &w.letters {
                    acc = acc.multiply(map.image(*l as usize)?)?;
                }
                for o in w.odd_indices() {
                    acc = acc.multiply(map.image(map.source.even + o)?)?;
                }
                cache.insert(w.clone(), acc.clone());
                acc
            }
        };
        out = out.add(&img.scale(c))?;
    }
    Ok(out)
}

/// The derivation extending `assign` by the Leibniz rule. Only even
/// generators are supported.
pub fn apply_derivation(assign: &GeneratorMap, e: &FreeElement) -> Result<FreeElement> {
    let sig = e.signature();
    if sig != assign.source || assign.source != assign.target {
        return input("derivation must map an algebra to itself");
    }
    let mut out = FreeElement::zero(sig);
    for (w, c) in e.terms() {
        if w.odd != 0 {
            return input("derivations on odd generators are not supported");
        }
        for (i, l) in w.letters.iter().enumerate() {
            let img = assign.image(*l as usize)?;
            if img.is_zero() {
                continue;
            }
            let left = FreeElement::from_letters(sig, &w.letters[..i]);
            let right = FreeElement::from_letters(sig, &w.letters[i + 1..]);
            out = out.add(&left.multiply(img)?.multiply(&right)?.scale(c))?;
        }
    }
    Ok(out)
}

/// Partial derivative `∂_l` as a derivation of `A_m`: `x_l ↦ 1`.
pub fn partial(sig: Signature, l: usize) -> GeneratorMap {
    let mut m = GeneratorMap::new(sig, sig);
    for g in 0..sig.even {
        m.images[g] = Some(if g == l { FreeElement::one(sig) } else { FreeElement::zero(sig) });
    }
    m
}

pub type SliceKey = SmallVec<[i16; 12]>;

/// How words are bucketed into finite-dimensional slices. The first key
/// component is always the total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    /// Total degree only.
    Degree,
    /// Total degree and symplectic weight on `A_{2n}`: `x_i ↦ +L_i` for
    /// `i < n`, `x_{i+n} ↦ -L_i`.
    SpWeight { n: usize },
    /// Full multidegree: one count per even generator, one bit per odd one.
    Multidegree { sig: Signature },
}

impl Grading {
    pub fn key_len(&self) -> usize {
        match self {
            Grading::Degree => 1,
            Grading::SpWeight { n } => 1 + n,
            Grading::Multidegree { sig } => 1 + sig.even + sig.odd,
        }
    }

    pub fn key(&self, w: &Word) -> Result<SliceKey> {
        let mut k: SliceKey = smallvec::smallvec![0; self.key_len()];
        k[0] = w.degree() as i16;
        match self {
            Grading::Degree => {}
            Grading::SpWeight { n } => {
                if w.odd != 0 {
                    return input("weight grading needs a purely even signature");
                }
                for l in &w.letters {
                    let l = *l as usize;
                    if l < *n {
                        k[1 + l] += 1;
                    } else if l < 2 * n {
                        k[1 + l - n] -= 1;
                    } else {
                        return input("letter outside A_2n");
                    }
                }
            }
            Grading::Multidegree { sig } => {
                for l in &w.letters {
                    k[1 + *l as usize] += 1;
                }
                for o in w.odd_indices() {
                    k[1 + sig.even + o] += 1;
                }
            }
        }
        Ok(k)
    }

    pub fn degree_key(&self, d: usize) -> SliceKey {
        let mut k: SliceKey = smallvec::smallvec![0; 1];
        k[0] = d as i16;
        k
    }

    /// Key of a weight slice for [`Grading::SpWeight`].
    pub fn weight_key(d: usize, weight: &[i32]) -> SliceKey {
        let mut k: SliceKey = SmallVec::new();
        k.push(d as i16);
        k.extend(weight.iter().map(|w| *w as i16));
        k
    }

    /// Whether some word has this key.
    pub fn feasible(&self, k: &SliceKey) -> bool {
        if k.len() != self.key_len() || k[0] < 0 {
            return false;
        }
        match self {
            Grading::Degree => true,
            Grading::SpWeight { .. } => {
                let l1: i32 = k[1..].iter().map(|x| (*x as i32).abs()).sum();
                l1 <= k[0] as i32 && (k[0] as i32 - l1) % 2 == 0
            }
            Grading::Multidegree { sig } => {
                k[1..].iter().all(|x| *x >= 0)
                    && k[1 + sig.even..].iter().all(|x| *x <= 1)
                    && k[1..].iter().map(|x| *x as i32).sum::<i32>() == k[0] as i32
            }
        }
    }

    /// All feasible keys of degree `d1` whose complement in `k` is feasible.
    pub fn split_keys(&self, k: &SliceKey, d1: usize) -> Vec<SliceKey> {
        let total = k[0] as usize;
        if d1 > total {
            return Vec::new();
        }
        match self {
            Grading::Degree => vec![self.degree_key(d1)],
            Grading::SpWeight { n } => {
                let mut out = Vec::new();
                let mut cur: SliceKey = smallvec::smallvec![0; 1 + n];
                cur[0] = d1 as i16;
                weight_boxes(&mut cur, 1, d1 as i32, &mut |c| {
                    let rest = sub_key(k, c);
                    if self.feasible(c) && self.feasible(&rest) {
                        out.push(c.clone());
                    }
                });
                out
            }
            Grading::Multidegree { .. } => {
                let mut out = Vec::new();
                let mut cur: SliceKey = smallvec::smallvec![0; k.len()];
                cur[0] = d1 as i16;
                bounded_compositions(&mut cur, 1, d1 as i16, k, &mut |c| out.push(c.clone()));
                out
            }
        }
    }

    /// Every feasible key of total degree `d`.
    pub fn keys_of_degree(&self, d: usize) -> Vec<SliceKey> {
        match self {
            Grading::Degree => vec![self.degree_key(d)],
            Grading::SpWeight { n } => {
                let mut out = Vec::new();
                let mut cur: SliceKey = smallvec::smallvec![0; 1 + n];
                cur[0] = d as i16;
                weight_boxes(&mut cur, 1, d as i32, &mut |c| {
                    if self.feasible(c) {
                        out.push(c.clone())
                    }
                });
                out
            }
            Grading::Multidegree { sig } => {
                let mut out = Vec::new();
                let mut cap: SliceKey = smallvec::smallvec![d as i16; self.key_len()];
                for o in 0..sig.odd {
                    cap[1 + sig.even + o] = 1;
                }
                let mut cur: SliceKey = smallvec::smallvec![0; self.key_len()];
                cur[0] = d as i16;
                bounded_compositions(&mut cur, 1, d as i16, &cap, &mut |c| out.push(c.clone()));
                out
            }
        }
    }

    /// Deterministic list of words with key `k`, in increasing word order.
    pub fn enumerate(&self, sig: Signature, k: &SliceKey) -> Vec<Word> {
        let mut out = Vec::new();
        if !self.feasible(k) {
            return out;
        }
        let d = k[0] as usize;
        match self {
            Grading::Degree => {
                // all words of degree d: split into odd subsets then even words
                for mask in 0u64..(1u64 << sig.odd) {
                    let m = mask as u32;
                    let od = m.count_ones() as usize;
                    if od > d {
                        continue;
                    }
                    let mut cur = Letters::new();
                    all_words(sig.even, d - od, &mut cur, &mut |l| out.push(Word { letters: l.clone(), odd: m }));
                }
            }
            Grading::SpWeight { n } => {
                if sig.odd != 0 || sig.even != 2 * n {
                    return out;
                }
                let target: Vec<i32> = k[1..].iter().map(|x| *x as i32).collect();
                let mut cur = Letters::new();
                let mut w = vec![0i32; *n];
                weight_words(*n, d, &target, &mut w, &mut cur, &mut |l| out.push(Word::even(l)));
            }
            Grading::Multidegree { sig: gsig } => {
                if *gsig != sig {
                    return out;
                }
                let mut counts: Vec<i32> = k[1..1 + sig.even].iter().map(|x| *x as i32).collect();
                let mut mask = 0u32;
                for o in 0..sig.odd {
                    if k[1 + sig.even + o] == 1 {
                        mask |= 1 << o;
                    }
                }
                let even_len = d - mask.count_ones() as usize;
                let mut cur = Letters::new();
                count_words(&mut counts, even_len, &mut cur, &mut |l| out.push(Word { letters: l.clone(), odd: mask }));
            }
        }
        out.sort();
        out
    }
}

pub fn sub_key(a: &SliceKey, b: &SliceKey) -> SliceKey {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

pub fn add_key(a: &SliceKey, b: &SliceKey) -> SliceKey {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn weight_boxes(cur: &mut SliceKey, pos: usize, budget: i32, f: &mut dyn FnMut(&SliceKey)) {
    if pos == cur.len() {
        f(cur);
        return;
    }
    for v in -budget..=budget {
        cur[pos] = v as i16;
        weight_boxes(cur, pos + 1, budget - v.abs(), f);
    }
    cur[pos] = 0;
}

fn bounded_compositions(cur: &mut SliceKey, pos: usize, remaining: i16, cap: &SliceKey, f: &mut dyn FnMut(&SliceKey)) {
    if pos == cur.len() {
        if remaining == 0 {
            f(cur);
        }
        return;
    }
    let tail_cap: i16 = cap[pos + 1..].iter().sum();
    for v in 0..=remaining.min(cap[pos]) {
        if remaining - v > tail_cap {
            continue;
        }
        cur[pos] = v;
        bounded_compositions(cur, pos + 1, remaining - v, cap, f);
    }
    cur[pos] = 0;
}

fn all_words(m: usize, d: usize, cur: &mut Letters, f: &mut dyn FnMut(&Letters)) {
    if cur.len() == d {
        f(cur);
        return;
    }
    for l in 0..m {
        cur.push(l as u8);
        all_words(m, d, cur, f);
        cur.pop();
    }
}

fn weight_words(n: usize, d: usize, target: &[i32], w: &mut Vec<i32>, cur: &mut Letters, f: &mut dyn FnMut(&Letters)) {
    let remaining = (d - cur.len()) as i32;
    let dist: i32 = target.iter().zip(w.iter()).map(|(t, x)| (t - x).abs()).sum();
    if dist > remaining || (remaining - dist) % 2 != 0 {
        return;
    }
    if remaining == 0 {
        f(cur);
        return;
    }
    for l in 0..2 * n {
        let (i, s) = if l < n { (l, 1) } else { (l - n, -1) };
        w[i] += s;
        cur.push(l as u8);
        weight_words(n, d, target, w, cur, f);
        cur.pop();
        w[i] -= s;
    }
}

fn count_words(counts: &mut Vec<i32>, len: usize, cur: &mut Letters, f: &mut dyn FnMut(&Letters)) {
    if cur.len() == len {
        if counts.iter().all(|c| *c == 0) {
            f(cur);
        }
        return;
    }
    for l in 0..counts.len() {
        if counts[l] > 0 {
            counts[l] -= 1;
            cur.push(l as u8);
            count_words(counts, len, cur, f);
            cur.pop();
            counts[l] += 1;
        }
    }
}

/// An enumerated slice: the word basis of one key, with a reverse index.
#[derive(Debug)]
pub struct GradedSlice {
    pub key: SliceKey,
    pub words: Vec<Word>,
    index: HashMap<Word, u32>,
}

impl GradedSlice {
    pub fn new(sig: Signature, grading: &Grading, key: SliceKey) -> Self {
        let words = grading.enumerate(sig, &key);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        GradedSlice { key, words, index }
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).map(|i| *i as usize)
    }

    /// Coordinates of `e` in this slice; fails if a term lies elsewhere.
    pub fn vector(&self, e: &FreeElement) -> Result<SparseVec> {
        let mut items = Vec::with_capacity(e.len());
        for (w, c) in e.terms() {
            match self.index_of(w) {
                Some(i) => items.push((i, c.clone())),
                None => return input(format!("word {w:?} is outside the slice {:?}", self.key)),
            }
        }
        Ok(SparseVec::new(items))
    }

    pub fn element(&self, sig: Signature, v: &SparseVec) -> FreeElement {
        let mut e = FreeElement::zero(sig);
        for (i, c) in v.iter() {
            e.add_term(self.words[i].clone(), c.clone());
        }
        e
    }
}

/// Convenience: slice enumeration as a free function.
pub fn enumerate_slice(sig: Signature, degree: usize, weight: Option<&[i32]>) -> GradedSlice {
    match weight {
        None => GradedSlice::new(sig, &Grading::Degree, Grading::Degree.degree_key(degree)),
        Some(w) => {
            let g = Grading::SpWeight { n: w.len() };
            GradedSlice::new(sig, &g, Grading::weight_key(degree, w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(m: usize) -> Signature {
        Signature::free(m)
    }

    fn x(sig: Signature, i: usize) -> FreeElement {
        FreeElement::gen(sig, i)
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn multiply_examples() {
        let s = a(2);
        let p = x(s, 0).multiply(&x(s, 1)).unwrap();
        assert_eq!(p, FreeElement::from_letters(s, &[0, 1]));
        let b = Signature::mixed(2, 3);
        let z1 = FreeElement::odd_gen(b, 1);
        let z2 = FreeElement::odd_gen(b, 2);
        assert!(z1.multiply(&z1).unwrap().is_zero());
        let z12 = z1.multiply(&z2).unwrap();
        assert_eq!(z2.multiply(&z1).unwrap(), z12.scale(&q(-1)));
        // odd letters commute with even ones
        let e = FreeElement::gen(b, 0);
        assert_eq!(e.multiply(&z1).unwrap(), z1.multiply(&e).unwrap());
        assert!(x(s, 0).multiply(&z1).is_err());
    }

    #[test]
    fn bracket_examples() {
        let s = a(2);
        let b = x(s, 0).bracket(&x(s, 1)).unwrap();
        let expect = FreeElement::from_letters(s, &[0, 1]).sub(&FreeElement::from_letters(s, &[1, 0])).unwrap();
        assert_eq!(b, expect);
        assert!(b.bracket(&b).unwrap().is_zero());
        let nested = x(s, 0).bracket(&b).unwrap();
        let mut expect = FreeElement::from_letters(s, &[0, 0, 1]);
        expect.add_term(Word::even(&[0, 1, 0]), q(-2));
        expect.add_term(Word::even(&[1, 0, 0]), q(1));
        assert_eq!(nested, expect);
    }

    #[test]
    fn omega_examples() {
        let w1 = omega_element(1).unwrap();
        let half = Rational::new(1, 2);
        let mut e = FreeElement::zero(a(2));
        e.add_term(Word::even(&[0, 1]), half.clone());
        e.add_term(Word::even(&[1, 0]), -&half);
        assert_eq!(w1, e);
        let w2 = omega_element(2).unwrap();
        assert_eq!(w2.len(), 4);
        assert_eq!(w2.coeff(&Word::even(&[1, 3])), half);
        assert_eq!(w2.coeff(&Word::even(&[3, 1])), -&half);
        let g = Grading::SpWeight { n: 2 };
        assert_eq!(w2.key(&g).unwrap().unwrap().as_slice(), &[2, 0, 0]);
        assert!(omega_element(0).is_err());
    }

    #[test]
    fn identity_hom_and_derivations() {
        let s = a(2);
        let mut id = GeneratorMap::new(s, s);
        id.set(0, x(s, 0)).unwrap();
        id.set(1, x(s, 1)).unwrap();
        let b = x(s, 0).bracket(&x(s, 1)).unwrap();
        assert_eq!(apply_hom(&id, &b).unwrap(), b);
        let d1 = partial(s, 0);
        let w = FreeElement::from_letters(s, &[0, 1]);
        assert_eq!(apply_derivation(&d1, &w).unwrap(), x(s, 1));
        // D_u for u = x1^2 on A_2: x2 ↦ 2 x1, x1 ↦ 0
        let mut du = GeneratorMap::new(s, s);
        du.set(0, FreeElement::zero(s)).unwrap();
        du.set(1, x(s, 0).scale(&q(2))).unwrap();
        assert_eq!(apply_derivation(&du, &x(s, 1)).unwrap(), x(s, 0).scale(&q(2)));
        let missing = GeneratorMap::new(s, s);
        assert!(apply_derivation(&missing, &x(s, 0)).is_err());
    }

    #[test]
    fn slice_enumeration() {
        let s = a(2);
        assert_eq!(enumerate_slice(s, 2, None).dim(), 4);
        let w0 = enumerate_slice(s, 2, Some(&[0]));
        assert_eq!(w0.words, vec![Word::even(&[0, 1]), Word::even(&[1, 0])]);
        let b = Signature::mixed(2, 5);
        let g = Grading::Multidegree { sig: b };
        let key: SliceKey = smallvec::smallvec![7, 1, 1, 1, 1, 1, 1, 1];
        let sl = GradedSlice::new(b, &g, key);
        assert_eq!(sl.dim(), 2);
        assert_eq!(sl.words[0].letters.as_slice(), &[0, 1]);
        // the weight slices of a degree partition the degree slice
        let g = Grading::SpWeight { n: 2 };
        let total: usize = g.keys_of_degree(4).iter().map(|k| g.enumerate(a(4), k).len()).sum();
        assert_eq!(total, 256);
    }

    #[test]
    fn json_round_trip() {
        let b = Signature::mixed(2, 3);
        let e = FreeElement::gen(b, 0)
            .multiply(&FreeElement::odd_gen(b, 2))
            .unwrap()
            .multiply(&FreeElement::odd_gen(b, 0))
            .unwrap()
            .scale(&Rational::new(3, 2));
        let back = FreeElement::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
    }

    fn arb_element(m: usize) -> impl Strategy<Value = FreeElement> {
        prop::collection::vec((prop::collection::vec(0..m as u8, 0..4), -3i64..=3), 0..4).prop_map(move |ts| {
            let mut e = FreeElement::zero(Signature::free(m));
            for (l, c) in ts {
                e.add_term(Word::even(&l), Rational::from_int(c));
            }
            e
        })
    }

    fn arb_super() -> impl Strategy<Value = FreeElement> {
        prop::collection::vec((prop::collection::vec(0..2u8, 0..3), 0u32..16, -2i64..=2), 0..4).prop_map(|ts| {
            let s = Signature::mixed(2, 4);
            let mut e = FreeElement::zero(s);
            for (l, m, c) in ts {
                e.add_term(Word { letters: l.into_iter().collect(), odd: m }, Rational::from_int(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn associativity(a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
            prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        }

        #[test]
        fn super_associativity(a in arb_super(), b in arb_super(), c in arb_super()) {
            prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        }

        #[test]
        fn jacobi_and_antisymmetry(a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
            prop_assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().scale(&Rational::from_int(-1)));
            let j = a.bracket(&b.bracket(&c).unwrap()).unwrap()
                .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap()).unwrap()
                .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap()).unwrap();
            prop_assert!(j.is_zero());
        }

        #[test]
        fn hom_is_multiplicative(a in arb_element(3), b in arb_element(3), imgs in prop::collection::vec(arb_element(2), 3)) {
            let mut m = GeneratorMap::new(Signature::free(3), Signature::free(2));
            for (i, e) in imgs.into_iter().enumerate() {
                m.set(i, e).unwrap();
            }
            let lhs = apply_hom(&m, &a.multiply(&b).unwrap()).unwrap();
            let rhs = apply_hom(&m, &a).unwrap().multiply(&apply_hom(&m, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn leibniz(a in arb_element(3), b in arb_element(3), imgs in prop::collection::vec(arb_element(3), 3)) {
            let s = Signature::free(3);
            let mut m = GeneratorMap::new(s, s);
            for (i, e) in imgs.into_iter().enumerate() {
                m.set(i, e).unwrap();
            }
            let lhs = apply_derivation(&m, &a.multiply(&b).unwrap()).unwrap();
            let rhs = apply_derivation(&m, &a).unwrap().multiply(&b).unwrap()
                .add(&a.multiply(&apply_derivation(&m, &b).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
