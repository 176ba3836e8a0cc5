//! Explicit vectors in `B_3(A_2n)` and the tools that certify them.
//!
//! Every bracket slot below is an even form, lifted to `A_2n` through
//! [`FsMap::lift`]. Two lifts of the same form differ by an element of
//! `M_3`, and `[M_3, A] ⊆ L_4`, so the resulting `B_3` classes do not depend
//! on the lift.

mod theta;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{apply_derivation, partial, FreeElement, Grading, Signature, SliceKey};
use crate::error::{input, Error, Result};
use crate::forms::{a_form, liouville, omega_power, p_form, q_form, FsMap, PolyForm};
use crate::lcs::{Engine, Filtration, Ideal};
use crate::linalg::{kernel, reduce, SparseVec};
use crate::par;
use crate::rep::{apply_root_vector, positive_roots, RootVector, SpWeight};
use crate::scalar::Rational;

pub use theta::{exact_ratio, ThetaProbe};

/// Which construction produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CandidateKind {
    V,
    XBar,
    YBar,
    ZBar,
    Solved,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CandidateKind::V => "v",
            CandidateKind::XBar => "xbar",
            CandidateKind::YBar => "ybar",
            CandidateKind::ZBar => "zbar",
            CandidateKind::Solved => "solved",
        };
        f.write_str(s)
    }
}

/// A homogeneous element of `L_3`, with its slice recorded.
#[derive(Clone, Debug)]
pub struct B3Candidate {
    pub kind: CandidateKind,
    pub k: usize,
    pub s: usize,
    pub element: FreeElement,
    pub degree: usize,
    pub weight: SpWeight,
}

/// How two classes in `B_3` compare.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `a ≡ b`.
    Equal,
    /// `a ≡ c·b` with `c ≠ 1`, both nonzero.
    Proportional(Rational),
    Different,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Equal => f.write_str("equal"),
            Relation::Proportional(c) => write!(f, "proportional ({c})"),
            Relation::Different => f.write_str("different"),
        }
    }
}

/// What the derivatives `∂_l v` of a solution must satisfy.
#[derive(Clone, Debug)]
pub enum DerivativeRule {
    /// No condition.
    Free,
    /// `∂_l v ≡ 0` for every `l`.
    Vanish,
    /// `∂_l v ≡ λ r_l` for a common scalar `λ`; one target per `l = 1..=2n`.
    Prescribed(Vec<FreeElement>),
}

/// A solution of [`B3Lab::solve_distinguished`]: the representative and, for
/// prescribed derivatives, the common scalar `λ`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub element: FreeElement,
    pub scale: Rational,
}

/// Constructions in `A_2n` for a fixed `n`, together with the engine that
/// certifies them.
pub struct B3Lab {
    n: usize,
    sig: Signature,
    engine: Engine,
    fs: FsMap,
    omega: Arc<Ideal>,
}

fn odd(k: usize) -> Result<()> {
    if k % 2 == 0 {
        return input(format!("k must be odd (k = {k})"));
    }
    Ok(())
}

impl B3Lab {
    pub fn new(n: usize) -> Result<Self> {
        B3Lab::with_engine(n, Engine::symplectic(n))
    }

    /// Uses a caller-supplied engine, which must be graded by symplectic
    /// weight on `A_2n`.
    pub fn with_engine(n: usize, engine: Engine) -> Result<Self> {
        if n == 0 {
            return input("n must be positive");
        }
        if engine.signature() != Signature::free(2 * n) || *engine.grading() != (Grading::SpWeight { n }) {
            return input("the engine must be the weight-graded A_2n");
        }
        Ok(B3Lab { n, sig: Signature::free(2 * n), engine, fs: FsMap::new(2 * n), omega: Arc::new(Ideal::omega(n)?) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// The ideal generated by `ω`.
    pub fn omega_ideal(&self) -> &Arc<Ideal> {
        &self.omega
    }

    fn m(&self) -> usize {
        2 * self.n
    }

    pub fn x(&self, i: usize) -> FreeElement {
        FreeElement::gen(self.sig, i - 1)
    }

    /// Lift of an even form.
    pub fn lift(&self, f: &PolyForm) -> Result<FreeElement> {
        self.fs.lift(f)
    }

    /// `[lift a, lift b]`; both slots must be even forms.
    pub fn bracket_forms(&self, a: &PolyForm, b: &PolyForm) -> Result<FreeElement> {
        if !a.is_even() || !b.is_even() {
            return input("bracket slots must be even forms");
        }
        self.lift(a)?.bracket(&self.lift(b)?)
    }

    fn wpow(&self, s: usize) -> PolyForm {
        omega_power(self.n, s)
    }

    fn dx(&self, i: usize) -> PolyForm {
        PolyForm::dvar(self.m(), i - 1)
    }

    /// `φ_s(u ⊗ v) = Σ_i [x_i u, v dx_{i+n} ω^s] - [x_{i+n} u, v dx_i ω^s]`
    /// for `u` even and `v` odd.
    pub fn phi(&self, s: usize, u: &PolyForm, v: &PolyForm) -> Result<FreeElement> {
        if !u.is_even() {
            return input("phi needs an even first argument");
        }
        if v.is_zero() || u.is_zero() {
            return Ok(FreeElement::zero(self.sig));
        }
        if v.form_degree().is_none_or(|d| d % 2 == 0) {
            return input("phi needs an odd second argument");
        }
        let n = self.n;
        let w = self.wpow(s);
        let mut out = FreeElement::zero(self.sig);
        for i in 1..=n {
            let a = self.bracket_forms(&u.times_var(i - 1), &v.wedge(&self.dx(i + n)).wedge(&w))?;
            let b = self.bracket_forms(&u.times_var(i + n - 1), &v.wedge(&self.dx(i)).wedge(&w))?;
            out = out.add(&a)?.sub(&b)?;
        }
        Ok(out)
    }

    /// `ψ_s(v) = Σ_i [ω^s x_{i+n}, d(v x_i)] - [ω^s x_i, d(v x_{i+n})]`
    /// for `v` odd.
    pub fn psi(&self, s: usize, v: &PolyForm) -> Result<FreeElement> {
        if v.is_zero() {
            return Ok(FreeElement::zero(self.sig));
        }
        if v.form_degree().is_none_or(|d| d % 2 == 0) {
            return input("psi needs an odd argument");
        }
        let n = self.n;
        let w = self.wpow(s);
        let mut out = FreeElement::zero(self.sig);
        for i in 1..=n {
            let a = self.bracket_forms(&w.times_var(i + n - 1), &v.times_var(i - 1).d())?;
            let b = self.bracket_forms(&w.times_var(i - 1), &v.times_var(i + n - 1).d())?;
            out = out.add(&a)?.sub(&b)?;
        }
        Ok(out)
    }

    /// Wraps `e` after checking that it is nonzero, homogeneous and in `L_3`.
    pub fn candidate(&self, kind: CandidateKind, k: usize, s: usize, e: FreeElement) -> Result<B3Candidate> {
        let Some((key, v)) = self.engine.locate(&e)? else {
            return Err(Error::Precondition(format!("{kind}_{{{k},{s}}} vanishes identically")));
        };
        if !self.engine.span(&Filtration::L(3), &key)?.contains(&v)? {
            return Err(Error::Precondition(format!("{kind}_{{{k},{s}}} is not in L3")));
        }
        Ok(B3Candidate {
            kind,
            k,
            s,
            element: e,
            degree: key[0] as usize,
            weight: key[1..].iter().map(|x| *x as i32).collect(),
        })
    }

    /// Whether `ξ = dx_1 ⋯ dx_{k-2s+1} ω^s` is a nonzero form.
    pub fn v_in_range(&self, k: usize, s: usize) -> bool {
        if k % 2 == 0 || 2 * s > k - 1 {
            return false;
        }
        let m = k - 2 * s + 1;
        m <= self.m() && (s == 0 || (m <= self.n && s <= self.n - m))
    }

    /// `v_{k,s} = [x_1, lift(dx_1 ⋯ dx_{k-2s+1} ω^s)]`.
    pub fn build_v(&self, k: usize, s: usize) -> Result<B3Candidate> {
        odd(k)?;
        if !self.v_in_range(k, s) {
            return input(format!("v_{{{k},{s}}} is outside the valid range for n = {}", self.n));
        }
        let xi = a_form(self.n, k - 2 * s + 1).wedge(&self.wpow(s));
        let e = self.x(1).bracket(&self.lift(&xi)?)?;
        self.candidate(CandidateKind::V, k, s, e)
    }

    fn check_ks(&self, k: usize, s: usize) -> Result<()> {
        odd(k)?;
        if k > self.n || 2 * s > k - 1 {
            return input(format!("need odd k <= n and 2s <= k - 1 (k = {k}, s = {s}, n = {})", self.n));
        }
        Ok(())
    }

    /// `x̄_{k,s} = φ_s(1 ⊗ a_{k-2s})`.
    pub fn build_xbar(&self, k: usize, s: usize) -> Result<B3Candidate> {
        self.check_ks(k, s)?;
        let e = self.phi(s, &PolyForm::one(self.m()), &a_form(self.n, k - 2 * s))?;
        self.candidate(CandidateKind::XBar, k, s, e)
    }

    fn ybar_element(&self, k: usize, s: usize) -> Result<FreeElement> {
        let n = self.n;
        let j = k - 2 * s;
        if j == n - 1 {
            // Σ_j [p̃_{j,n}, x_j ω^{s+1}] with p̃ the Euler antiderivative
            let mut out = FreeElement::zero(self.sig);
            for i in 1..=n {
                let pt = p_form(n, i, n).euler_antiderivative()?;
                out = out.add(&self.bracket_forms(&pt, &self.wpow(s + 1).times_var(i - 1))?)?;
            }
            return Ok(out);
        }
        let m = j + 1;
        let denom = Rational::from_int(k as i64 - 4 * s as i64);
        let mut phis = FreeElement::zero(self.sig);
        for i in 1..=m {
            phis = phis.add(&self.phi(s, &PolyForm::var(self.m(), i - 1), &p_form(n, i, m))?)?;
        }
        let first = phis.scale(&(&Rational::from_int(m as i64) / &denom));
        let second = self.psi(s, &q_form(n, m))?.scale(&denom.recip());
        first.sub(&second)
    }

    /// `ȳ_{k,s}`, by the branch matching `k - 2s` against `n - 1`.
    pub fn build_ybar(&self, k: usize, s: usize) -> Result<B3Candidate> {
        self.check_ks(k, s)?;
        let e = self.ybar_element(k, s)?;
        self.candidate(CandidateKind::YBar, k, s, e)
    }

    /// `z̄_{k,s}`, by the branch matching `k - 2s` against `1`; the other
    /// branch reads the `y_{k,s+1}` term as `ȳ_{k,s+1}`.
    pub fn build_zbar(&self, k: usize, s: usize) -> Result<B3Candidate> {
        self.check_ks(k, s)?;
        let n = self.n;
        let j = k - 2 * s;
        let y = liouville(n);
        let w = self.wpow(s);
        let e = if j == 1 {
            let mut out = FreeElement::zero(self.sig);
            for i in 1..=n {
                let a = self.bracket_forms(&PolyForm::var(self.m(), i - 1), &y.times_var(i + n - 1).d().wedge(&w))?;
                let b = self.bracket_forms(&PolyForm::var(self.m(), i + n - 1), &y.times_var(i - 1).d().wedge(&w))?;
                out = out.add(&a)?.sub(&b)?;
            }
            out
        } else {
            let den = Rational::from_int(j as i64 - 1);
            let c1 = &Rational::from_int(2 * n as i64 - 3 * j as i64 + 5) / &den;
            let c2 = &Rational::from_int(2 * (n as i64 - j as i64 + 2)) / &den;
            let yb = self.ybar_element(k, s + 1)?;
            let ph = self.phi(s, &PolyForm::one(self.m()), &q_form(n, j - 1).wedge(&y).d())?;
            yb.scale(&c1).sub(&ph.scale(&c2))?
        };
        self.candidate(CandidateKind::ZBar, k, s, e)
    }

    fn bottom_residual(&self, e: &FreeElement, ideal: Option<&Arc<Ideal>>) -> Result<Option<(SliceKey, SparseVec)>> {
        let Some((key, v)) = self.engine.locate(e)? else { return Ok(None) };
        let r = self.engine.span(&Filtration::L(4).plus(ideal), &key)?.residual(&v);
        Ok(Some((key, r)))
    }

    /// Whether `e ∈ L_4 + I`.
    pub fn class_is_zero(&self, e: &FreeElement, ideal: Option<&Arc<Ideal>>) -> Result<bool> {
        Ok(self.bottom_residual(e, ideal)?.is_none_or(|(_, r)| r.is_zero()))
    }

    /// Compares the classes of `a` and `b` modulo `L_4 + I`.
    pub fn relation(&self, a: &FreeElement, b: &FreeElement, ideal: Option<&Arc<Ideal>>) -> Result<Relation> {
        if self.class_is_zero(&a.sub(b)?, ideal)? {
            return Ok(Relation::Equal);
        }
        let ra = self.bottom_residual(a, ideal)?;
        let rb = self.bottom_residual(b, ideal)?;
        let (Some((ka, ra)), Some((kb, rb))) = (ra, rb) else { return Ok(Relation::Different) };
        if ka != kb || ra.is_zero() || rb.is_zero() || ra.leading() != rb.leading() {
            return Ok(Relation::Different);
        }
        let lead = ra.leading().unwrap();
        let c = &ra.get(lead) / &rb.get(lead);
        if ra.sub(&rb.scaled(&c)).is_zero() {
            Ok(Relation::Proportional(c))
        } else {
            Ok(Relation::Different)
        }
    }

    /// `∂_l e` for `1 ≤ l ≤ 2n`.
    pub fn partial(&self, l: usize, e: &FreeElement) -> Result<FreeElement> {
        apply_derivation(&partial(self.sig, l - 1), e)
    }

    /// `α_{k,s,m} = Σ_j [x_j, p_{j,k-2s+1} dx_m ω^s] - [ω^s x_m, a_{k-2s+1}]`.
    pub fn alpha(&self, k: usize, s: usize, m: usize) -> Result<FreeElement> {
        odd(k)?;
        if 2 * s > k - 1 || !(1..=self.m()).contains(&m) {
            return input("alpha needs 2s <= k - 1 and 1 <= m <= 2n");
        }
        let top = k - 2 * s + 1;
        let w = self.wpow(s);
        let mut out = FreeElement::zero(self.sig);
        for j in 1..=top.min(self.m()) {
            let slot = p_form(self.n, j, top).wedge(&self.dx(m)).wedge(&w);
            out = out.add(&self.bracket_forms(&PolyForm::var(self.m(), j - 1), &slot)?)?;
        }
        out.sub(&self.bracket_forms(&w.times_var(m - 1), &a_form(self.n, top))?)
    }

    /// `l [a ω^{s-k}, ω^k] - k [a ω^{s-l}, ω^l]`.
    pub fn omega_switch(&self, a: &FreeElement, l: usize, k: usize, s: usize) -> Result<FreeElement> {
        if k > s || l > s {
            return input("omega switch needs k, l <= s");
        }
        let w = crate::algebra::omega_element(self.n)?;
        let side = |p: usize, q: usize| -> Result<FreeElement> { a.multiply(&w.pow(s - p))?.bracket(&w.pow(p)).map(|e| e.scale(&Rational::from_int(q as i64))) };
        side(k, l)?.sub(&side(l, k)?)
    }

    /// `ψ_s(p_{l,k-2s+1}) - (2s+1) φ_s(1 ⊗ p_{l,k-2s+1})`.
    pub fn phi_psi_gap(&self, k: usize, s: usize, l: usize) -> Result<FreeElement> {
        odd(k)?;
        if 2 * s > k - 1 {
            return input("need 2s <= k - 1");
        }
        let p = p_form(self.n, l, k - 2 * s + 1);
        let lhs = self.psi(s, &p)?;
        let rhs = self.phi(s, &PolyForm::one(self.m()), &p)?.scale(&Rational::from_int(2 * s as i64 + 1));
        lhs.sub(&rhs)
    }

    /// Classes in `L_3 / (L_4 + I)` on one weight slice that are highest
    /// weight and obey `rule` for the derivatives.
    pub fn solve_distinguished(&self, weight: &[i32], degree: usize, rule: &DerivativeRule, ideal: Option<&Arc<Ideal>>) -> Result<Vec<Solution>> {
        if weight.len() != self.n {
            return input("weight has the wrong length");
        }
        let key = Grading::weight_key(degree, weight);
        if !self.engine.grading().feasible(&key) {
            return Ok(Vec::new());
        }
        let top = self.engine.span(&Filtration::L(3), &key)?;
        let bottom = self.engine.span(&Filtration::L(4).plus(ideal), &key)?;
        let residuals: Vec<SparseVec> = top.rows().iter().map(|r| bottom.residual(r)).collect();
        let comp = reduce(&residuals, top.ambient())?;
        if comp.rank() == 0 {
            return Ok(Vec::new());
        }
        let slice = self.engine.slice(&key)?;
        let unknowns: Vec<FreeElement> = comp.rows().iter().map(|r| slice.element(self.sig, r)).collect();

        let roots = positive_roots(self.n);
        let n_ops = roots.len() + if matches!(rule, DerivativeRule::Free) { 0 } else { self.m() };
        let op = |i: usize, e: &FreeElement| -> Result<FreeElement> {
            if i < roots.len() {
                apply_root_vector(&roots[i], e)
            } else {
                self.partial(i - roots.len() + 1, e)
            }
        };
        let mut columns: Vec<Vec<Option<(SliceKey, SparseVec)>>> = par::map(&unknowns, |e| {
            (0..n_ops).map(|i| self.bottom_residual(&op(i, e)?, ideal)).collect::<Result<Vec<_>>>()
        })
        .into_iter()
        .collect::<Result<_>>()?;
        if let DerivativeRule::Prescribed(targets) = rule {
            if targets.len() != self.m() {
                return input("one derivative target per coordinate is required");
            }
            let mut col = vec![None; roots.len()];
            for t in targets {
                col.push(self.bottom_residual(&t.scale(&Rational::from_int(-1)), ideal)?);
            }
            columns.push(col);
        }
        // lay out the codomain: one block per (operator, slice)
        let mut offsets: BTreeMap<(usize, SliceKey), usize> = BTreeMap::new();
        for col in &columns {
            for (i, r) in col.iter().enumerate() {
                if let Some((k, _)) = r {
                    offsets.entry((i, k.clone())).or_insert(0);
                }
            }
        }
        let mut total = 0;
        for ((_, k), off) in offsets.iter_mut() {
            *off = total;
            total += self.engine.slice(k)?.dim();
        }
        let images: Vec<SparseVec> = columns
            .iter()
            .map(|col| {
                SparseVec::new(col.iter().enumerate().flat_map(|(i, r)| match r {
                    Some((k, v)) => {
                        let off = offsets[&(i, k.clone())];
                        v.iter().map(|(j, c)| (off + j, c.clone())).collect::<Vec<_>>()
                    }
                    None => Vec::new(),
                }))
            })
            .collect();
        let sols = kernel(&images, total)?;
        let mut out = Vec::with_capacity(sols.len());
        for v in sols {
            let mut e = FreeElement::zero(self.sig);
            for (i, c) in v.iter() {
                if i < unknowns.len() {
                    e = e.add(&unknowns[i].scale(c))?;
                }
            }
            out.push(Solution { element: e, scale: v.get(unknowns.len()) });
        }
        Ok(out)
    }

    /// The right-hand sides `r_l` of `∂_l ȳ_{k,s} ≡ r_l`, `l = 1..=2n`.
    pub fn ybar_derivative_targets(&self, xbar: &FreeElement, k: usize, s: usize) -> Result<Vec<FreeElement>> {
        let j = k - 2 * s;
        (1..=self.m())
            .map(|l| {
                if l <= j {
                    Ok(apply_root_vector(&RootVector::XT(l, j + 1), xbar)?.scale(&Rational::from_int(-1)))
                } else if l == j + 1 {
                    Ok(xbar.clone())
                } else {
                    Ok(FreeElement::zero(self.sig))
                }
            })
            .collect()
    }

    /// The right-hand sides `r_l` of `∂_l z̄_{k,s} ≡ r_l`, `l = 1..=2n`.
    pub fn zbar_derivative_targets(&self, xbar: &FreeElement, k: usize, s: usize) -> Result<Vec<FreeElement>> {
        let n = self.n;
        let j = k - 2 * s;
        let c = Rational::from_int(n as i64 - j as i64 + 2);
        (1..=self.m())
            .map(|l| {
                if l < j {
                    let mut acc = FreeElement::zero(self.sig);
                    for i in j..=n {
                        let inner = apply_root_vector(&RootVector::XT(j, i), xbar)?;
                        acc = acc.sub(&apply_root_vector(&RootVector::YT(l, i), &inner)?)?;
                    }
                    Ok(acc)
                } else if l <= n {
                    Ok(apply_root_vector(&RootVector::YT(j, l), xbar)?.scale(&-c.clone()))
                } else if l - n < j {
                    Ok(FreeElement::zero(self.sig))
                } else {
                    Ok(apply_root_vector(&RootVector::XT(j, l - n), xbar)?.scale(&c))
                }
            })
            .collect()
    }
}
