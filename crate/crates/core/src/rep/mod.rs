//! Finite-dimensional representation theory of `gl_2n` and `sp_2n`:
//! partitions, Littlewood–Richardson coefficients, branching from `gl_2n`
//! to `sp_2n`, and Weyl dimensions.
//!
//! Two branching computations live here on purpose. [`restriction`] goes
//! through LR coefficients and the modification rule for symplectic
//! characters; [`restriction_by_peeling`] expands the `gl_2n` character on
//! the `sp_2n` torus and peels off symplectic tableau characters. They share
//! no code beyond tableau bookkeeping, so each checks the other.

mod factors;
mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{input, Error, Result};

pub use factors::{
    coinduced_dim, free_b3_components, monomial_count, predicted_dims, Decomposition, FactorDescriptor, PredictedRow,
};
pub use roots::{
    apply_root_vector, distinguished_weight, highest_weight, positive_roots, weight_of, RootVector, SpTarget,
};

/// An `sp_2n` weight in the `L_i` basis.
pub type SpWeight = Vec<i32>;

/// A partition with strictly positive, weakly decreasing parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return input(format!("parts {parts:?} are not weakly decreasing"));
        }
        if parts.contains(&0) {
            return input("zero part inside a partition");
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition(vec![1; k])
    }

    /// `(a, 1^b)`.
    pub fn hook(a: usize, b: usize) -> Self {
        let mut p = vec![a];
        p.extend(std::iter::repeat_n(1, b));
        Partition(p)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_column(&self) -> bool {
        self.0.iter().all(|p| *p == 1)
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.part(0);
        Partition((0..w).map(|c| self.0.iter().filter(|p| **p > c).count()).collect())
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Every part occurs an even number of times.
    pub fn has_paired_parts(&self) -> bool {
        self.len() % 2 == 0 && self.0.chunks(2).all(|c| c[0] == c[1])
    }

    /// Dominant weight of the same shape, padded to length `n`.
    pub fn weight(&self, n: usize) -> SpWeight {
        (0..n).map(|i| self.part(i) as i32).collect()
    }

    /// Bracket form `[2,1,1]`, used for `gl` modules.
    pub fn gl(&self) -> GlLabel<'_> {
        GlLabel(self)
    }

    /// Parses `(2,1,1)`, `[2,1,1]` or `2,1,1`; `()`, `[]` and `0` are empty.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() || inner == "0" {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s)
    }
}

fn join(p: &[usize]) -> String {
    p.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub struct GlLabel<'a>(&'a Partition);

impl fmt::Display for GlLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.0 .0))
    }
}

/// Partitions of `size` with at most `rows` rows, in reverse lexicographic
/// order.
pub fn partitions(size: usize, rows: usize) -> Vec<Partition> {
    fn go(rem: usize, max: usize, rows: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, size, rows, &mut Vec::new(), &mut out);
    out
}

/// The Littlewood–Richardson coefficient `c^μ_{η λ}`: the number of skew
/// tableaux of shape `μ/η` and content `λ` whose reverse reading word is a
/// lattice word.
pub fn lr_coefficient(eta: &Partition, lambda: &Partition, mu: &Partition) -> u64 {
    if eta.size() + lambda.size() != mu.size() || !mu.contains(eta) || !mu.contains(lambda) {
        return 0;
    }
    // cells of μ/η in reading order: rows top to bottom, right to left
    let cells: Vec<(usize, usize)> =
        (0..mu.len()).flat_map(|r| (eta.part(r)..mu.part(r)).rev().map(move |c| (r, c))).collect();
    let mut filling: Vec<Vec<usize>> = (0..mu.len()).map(|r| vec![0; mu.part(r)]).collect();
    let mut counts = vec![0usize; lambda.len() + 1];
    let mut total = 0u64;
    lr_fill(&cells, 0, eta, lambda, &mut filling, &mut counts, &mut total);
    total
}

fn lr_fill(
    cells: &[(usize, usize)],
    pos: usize,
    eta: &Partition,
    lambda: &Partition,
    filling: &mut [Vec<usize>],
    counts: &mut [usize],
    total: &mut u64,
) {
    let Some(&(r, c)) = cells.get(pos) else {
        *total += 1;
        return;
    };
    // weakly increasing rows: bounded by the entry to the right
    let hi = if c + 1 < filling[r].len() { filling[r][c + 1] } else { lambda.len() };
    // strictly increasing columns: above the entry on top, if it is in the skew shape
    let lo = if r > 0 && c >= eta.part(r - 1) { filling[r - 1][c] + 1 } else { 1 };
    for v in lo..=hi {
        if counts[v] >= lambda.part(v - 1) || (v > 1 && counts[v] + 1 > counts[v - 1]) {
            continue;
        }
        filling[r][c] = v;
        counts[v] += 1;
        lr_fill(cells, pos + 1, eta, lambda, filling, counts, total);
        counts[v] -= 1;
    }
    filling[r][c] = 0;
}

/// `dim` of the `gl_m` module `[μ]` by the hook-content formula.
pub fn gl_dim(mu: &Partition, m: usize) -> u64 {
    if mu.len() > m {
        return 0;
    }
    let conj = mu.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (r, &row) in mu.parts().iter().enumerate() {
        for c in 0..row {
            num *= (m + c - r) as u64;
            den *= ((row - c) + (conj.part(c) - r) - 1) as u64;
        }
    }
    (num / den).to_u64().expect("dimension fits in u64")
}

/// `dim` of the `sp_2n` module `λ` by the Weyl dimension formula, as a
/// product over positive roots `L_i ± L_j` and `2L_i`.
pub fn sp_dim(lambda: &Partition, n: usize) -> u64 {
    if lambda.len() > n {
        return 0;
    }
    let l: Vec<i64> = (0..n).map(|i| lambda.part(i) as i64 + (n - i) as i64).collect();
    let rho: Vec<i64> = (0..n).map(|i| (n - i) as i64).collect();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        num *= l[i] as u64;
        den *= rho[i] as u64;
        for j in i + 1..n {
            num *= ((l[i] - l[j]) * (l[i] + l[j])) as u64;
            den *= ((rho[i] - rho[j]) * (rho[i] + rho[j])) as u64;
        }
    }
    (num / den).to_u64().expect("dimension fits in u64")
}

/// Rewrites the universal symplectic character `sp_ν` with `ℓ(ν) > n` as
/// `± sp_λ` or zero: repeatedly strip a boundary strip of length
/// `2ℓ(ν) - 2n - 2` starting at the foot of the first column, with sign
/// `(-1)^{columns of the strip}`.
pub fn sp_modify(nu: &Partition, n: usize) -> Option<(i64, Partition)> {
    let mut shape = nu.parts().to_vec();
    let mut sign = 1i64;
    while shape.len() > n {
        let p = shape.len();
        let h = 2 * p - 2 * n - 2;
        if h == 0 {
            return None;
        }
        // walk the rim from (p-1, 0): right while possible, otherwise up
        let (mut r, mut c) = (p - 1, 0usize);
        let mut removed = vec![0usize; p];
        let mut cols = std::collections::BTreeSet::new();
        for step in 0..h {
            removed[r] += 1;
            cols.insert(c);
            if step + 1 == h {
                break;
            }
            if c + 1 < shape[r] {
                c += 1;
            } else if r == 0 {
                return None;
            } else {
                r -= 1;
            }
        }
        // the strip must leave a partition: in each touched row the removed
        // cells must be the right end of the row
        let mut next = Vec::with_capacity(p);
        for (row, len) in shape.iter().enumerate() {
            if removed[row] > *len {
                return None;
            }
            next.push(len - removed[row]);
        }
        let last_row = r;
        if c + 1 < shape[last_row] {
            return None;
        }
        while next.last() == Some(&0) {
            next.pop();
        }
        if next.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        if cols.len() % 2 == 1 {
            sign = -sign;
        }
        shape = next;
    }
    Some((sign, Partition(shape)))
}

fn check_rows(lambda: Option<&Partition>, mu: &Partition, n: usize) -> Result<()> {
    if n == 0 {
        return input("n must be positive");
    }
    if mu.len() > 2 * n {
        return input(format!("gl_{} module {} has too many rows", 2 * n, mu.gl()));
    }
    if let Some(l) = lambda {
        if l.len() > n {
            return input(format!("sp_{} module {l} has too many rows", 2 * n));
        }
    }
    Ok(())
}

/// The literal sum `Σ_η c^μ_{ηλ}` over `η` with paired parts, without
/// modification. It equals the true multiplicity when `ℓ(μ) ≤ n`.
pub fn restriction_mult_unmodified(lambda: &Partition, mu: &Partition, n: usize) -> Result<u64> {
    check_rows(Some(lambda), mu, n)?;
    if lambda.size() > mu.size() {
        return Ok(0);
    }
    let rest = mu.size() - lambda.size();
    Ok(partitions(rest, 2 * n)
        .iter()
        .filter(|eta| eta.has_paired_parts())
        .map(|eta| lr_coefficient(eta, lambda, mu))
        .sum())
}

/// Branching `gl_2n → sp_2n` of `[μ]` through LR coefficients and
/// modification: `λ ↦ N_{λμ}`, omitting zeros.
pub fn restriction(mu: &Partition, n: usize) -> Result<BTreeMap<Partition, u64>> {
    check_rows(None, mu, n)?;
    let mut acc: BTreeMap<Partition, i64> = BTreeMap::new();
    for e in (0..=mu.size()).step_by(2) {
        for eta in partitions(e, 2 * n).into_iter().filter(Partition::has_paired_parts) {
            if !mu.contains(&eta) {
                continue;
            }
            for nu in partitions(mu.size() - e, 2 * n) {
                let c = lr_coefficient(&eta, &nu, mu) as i64;
                if c == 0 {
                    continue;
                }
                if let Some((sign, lambda)) = sp_modify(&nu, n) {
                    *acc.entry(lambda).or_insert(0) += sign * c;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (lambda, m) in acc {
        match m {
            0 => {}
            m if m > 0 => {
                out.insert(lambda, m as u64);
            }
            _ => return Err(Error::Precondition(format!("negative multiplicity {m} for {lambda} in {}", mu.gl()))),
        }
    }
    Ok(out)
}

/// `N_{λμ}`, the multiplicity of `λ` in the restriction of `[μ]`.
pub fn restriction_mult(lambda: &Partition, mu: &Partition, n: usize) -> Result<u64> {
    check_rows(Some(lambda), mu, n)?;
    Ok(restriction(mu, n)?.get(lambda).copied().unwrap_or(0))
}

/// Weight multiset of a module on the `sp_2n` torus.
pub type Character = BTreeMap<SpWeight, i64>;

/// Semistandard tableaux of shape `shape` over `0..alphabet` satisfying
/// `row_floor(r) <= entry`, folded into a character via `weight`.
fn tableau_character(
    shape: &Partition,
    alphabet: usize,
    row_floor: impl Fn(usize) -> usize,
    n: usize,
    weight: impl Fn(usize) -> (usize, i32),
) -> Character {
    let cells: Vec<(usize, usize)> = (0..shape.len()).flat_map(|r| (0..shape.part(r)).map(move |c| (r, c))).collect();
    let mut t: Vec<Vec<usize>> = (0..shape.len()).map(|r| vec![0; shape.part(r)]).collect();
    let mut chr = Character::new();
    let mut w = vec![0i32; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        cells: &[(usize, usize)],
        pos: usize,
        alphabet: usize,
        t: &mut [Vec<usize>],
        w: &mut [i32],
        chr: &mut Character,
        row_floor: &dyn Fn(usize) -> usize,
        weight: &dyn Fn(usize) -> (usize, i32),
    ) {
        let Some(&(r, c)) = cells.get(pos) else {
            *chr.entry(w.to_vec()).or_insert(0) += 1;
            return;
        };
        let mut lo = row_floor(r);
        if c > 0 {
            lo = lo.max(t[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(t[r - 1][c] + 1);
        }
        for v in lo..alphabet {
            t[r][c] = v;
            let (i, s) = weight(v);
            w[i] += s;
            go(cells, pos + 1, alphabet, t, w, chr, row_floor, weight);
            w[i] -= s;
        }
    }
    go(&cells, 0, alphabet, &mut t, &mut w, &mut chr, &row_floor, &weight);
    chr
}

/// Character of `[μ]` restricted to the `sp_2n` torus: `x_i` has weight
/// `L_i` and `x_{i+n}` weight `-L_i`.
pub fn gl_character(mu: &Partition, n: usize) -> Character {
    tableau_character(mu, 2 * n, |_| 0, n, |v| if v < n { (v, 1) } else { (v - n, -1) })
}

/// Character of the `sp_2n` module `λ` from symplectic tableaux: entries
/// `1 < 1̄ < 2 < 2̄ < …`, and row `r` only holds entries `≥ r`.
pub fn sp_character(lambda: &Partition, n: usize) -> Character {
    tableau_character(lambda, 2 * n, |r| 2 * r, n, |v| (v / 2, if v % 2 == 0 { 1 } else { -1 }))
}

/// Branching `gl_2n → sp_2n` by peeling: repeatedly take the
/// lexicographically largest weight, which is a highest weight of some
/// constituent, and subtract that constituent's character.
pub fn restriction_by_peeling(mu: &Partition, n: usize) -> Result<BTreeMap<Partition, u64>> {
    check_rows(None, mu, n)?;
    let mut chr = gl_character(mu, n);
    let mut out = BTreeMap::new();
    loop {
        chr.retain(|_, m| *m != 0);
        let Some((top, &m)) = chr.iter().next_back() else { break };
        let top = top.clone();
        let dominant = top.windows(2).all(|w| w[0] >= w[1]) && top.last().is_none_or(|x| *x >= 0);
        if m < 0 || !dominant {
            return Err(Error::Precondition(format!("peeling stalled at weight {top:?}")));
        }
        let lambda = Partition::new(top.iter().map(|x| *x as usize).collect())?;
        for (w, k) in sp_character(&lambda, n) {
            *chr.entry(w).or_insert(0) -= m * k;
        }
        out.insert(lambda, m as u64);
    }
    Ok(out)
}
