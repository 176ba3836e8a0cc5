//! Polynomial differential forms on `C^m` with exact rational coefficients.
//!
//! A term is `c · x^a · dx_I` with `I` stored as a bitmask in increasing
//! order. Symplectic operations treat `m = 2n` with `x_i` paired to
//! `x_{i+n}` (0-based throughout).

mod fs;
mod lattice;
mod special;

pub use fs::{fedosov, FsMap};
pub use lattice::{
    closed_even_dims, differential_split_dims, factor_dim, lattice_dims, submodule_member, Factor, FormSlice, LatticeDims, Submodule,
};
pub use special::{a_form, distinguished, liouville, p_form, q_form, x_vec, y_vec, z_vec};

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use smallvec::SmallVec;

use crate::algebra::odd_merge_sign;
use crate::error::{input, Result};
use crate::scalar::Rational;

pub type Exponents = SmallVec<[u8; 8]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormMonomial {
    pub exps: Exponents,
    pub dx: u32,
}

impl FormMonomial {
    pub fn constant(m: usize) -> Self {
        FormMonomial { exps: smallvec::smallvec![0; m], dx: 0 }
    }

    pub fn form_degree(&self) -> usize {
        self.dx.count_ones() as usize
    }

    pub fn poly_degree(&self) -> usize {
        self.exps.iter().map(|e| *e as usize).sum()
    }

    pub fn total_degree(&self) -> usize {
        self.form_degree() + self.poly_degree()
    }

    /// Symplectic weight: `x_i`, `dx_i` carry `+L_i` for `i < n` and
    /// `-L_{i-n}` otherwise.
    pub fn weight(&self, n: usize) -> Vec<i32> {
        let mut w = vec![0i32; n];
        for (i, e) in self.exps.iter().enumerate() {
            let bump = *e as i32 + ((self.dx >> i) & 1) as i32;
            if i < n {
                w[i] += bump;
            } else {
                w[i - n] -= bump;
            }
        }
        w
    }
}

impl fmt::Debug for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.exps.as_slice(), bits(self.dx).collect::<Vec<_>>())
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// `(-1)^{#{j ∈ mask : j < i}}` as a boolean "negative".
fn below_parity(mask: u32, i: usize) -> bool {
    (mask & ((1u32 << i) - 1)).count_ones() % 2 == 1
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    m: usize,
    terms: BTreeMap<FormMonomial, Rational>,
}

impl PolyForm {
    pub fn zero(m: usize) -> Self {
        assert!(m <= 32, "at most 32 variables");
        PolyForm { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        let mut f = PolyForm::zero(m);
        f.add_term(FormMonomial::constant(m), c);
        f
    }

    pub fn one(m: usize) -> Self {
        PolyForm::constant(m, Rational::ONE)
    }

    /// The coordinate function `x_i`.
    pub fn var(m: usize, i: usize) -> Self {
        let mut mono = FormMonomial::constant(m);
        mono.exps[i] = 1;
        PolyForm::monomial(m, mono, Rational::ONE)
    }

    /// The one-form `dx_i`.
    pub fn dvar(m: usize, i: usize) -> Self {
        let mut mono = FormMonomial::constant(m);
        mono.dx = 1 << i;
        PolyForm::monomial(m, mono, Rational::ONE)
    }

    /// `dx_{i_1} ∧ … ∧ dx_{i_r}` in the given order.
    pub fn dx_product(m: usize, idx: &[usize]) -> Self {
        idx.iter().fold(PolyForm::one(m), |acc, i| acc.wedge(&PolyForm::dvar(m, *i)))
    }

    pub fn monomial(m: usize, mono: FormMonomial, c: Rational) -> Self {
        let mut f = PolyForm::zero(m);
        f.add_term(mono, c);
        f
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &FormMonomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: FormMonomial, c: Rational) {
        debug_assert_eq!(mono.exps.len(), self.m);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(q) => {
                *q += &c;
                if q.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.m, other.m, "forms on different spaces");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero(self.m);
        }
        PolyForm { m: self.m, terms: self.terms.iter().map(|(k, q)| (k.clone(), q * c)).collect() }
    }

    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.m, other.m, "forms on different spaces");
        let mut out = PolyForm::zero(self.m);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if a.dx & b.dx != 0 {
                    continue;
                }
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                let c = p * q;
                let c = if odd_merge_sign(a.dx, b.dx) { -c } else { c };
                out.add_term(FormMonomial { exps, dx: a.dx | b.dx }, c);
            }
        }
        out
    }

    /// Form degree if every term has the same one.
    pub fn form_degree(&self) -> Option<usize> {
        uniform(self.terms.keys().map(FormMonomial::form_degree))
    }

    pub fn total_degree(&self) -> Option<usize> {
        uniform(self.terms.keys().map(FormMonomial::total_degree))
    }

    /// True when every term has even form degree.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.form_degree() % 2 == 0)
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.m);
        for (mono, c) in &self.terms {
            for i in 0..self.m {
                let e = mono.exps[i];
                if e == 0 || mono.dx & (1 << i) != 0 {
                    continue;
                }
                let mut exps = mono.exps.clone();
                exps[i] -= 1;
                let coef = c * &Rational::from_int(e as i64);
                let coef = if below_parity(mono.dx, i) { -coef } else { coef };
                out.add_term(FormMonomial { exps, dx: mono.dx | (1 << i) }, coef);
            }
        }
        out
    }

    /// Contraction with the constant vector field `∂_i`.
    pub fn iota(&self, i: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.m);
        for (mono, c) in &self.terms {
            if mono.dx & (1 << i) == 0 {
                continue;
            }
            let c = if below_parity(mono.dx, i) { -c } else { c.clone() };
            out.add_term(FormMonomial { exps: mono.exps.clone(), dx: mono.dx & !(1 << i) }, c);
        }
        out
    }

    /// Multiplication by the coordinate `x_i`.
    pub fn times_var(&self, i: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.m);
        for (mono, c) in &self.terms {
            let mut exps = mono.exps.clone();
            exps[i] += 1;
            out.add_term(FormMonomial { exps, dx: mono.dx }, c.clone());
        }
        out
    }

    /// Contraction with the Euler field `Σ x_i ∂_i`.
    pub fn iota_euler(&self) -> PolyForm {
        (0..self.m).fold(PolyForm::zero(self.m), |acc, i| acc.add(&self.iota(i).times_var(i)))
    }

    /// Antiderivative of a closed homogeneous form: `ι_E(α) / deg α`,
    /// where the degree is the total degree.
    pub fn euler_antiderivative(&self) -> Result<PolyForm> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let Some(t) = self.total_degree().filter(|t| *t > 0) else {
            return input("antiderivative needs a homogeneous form of positive degree");
        };
        if !self.d().is_zero() {
            return input("antiderivative needs a closed form");
        }
        Ok(self.iota_euler().scale(&Rational::new(1, t as i64)))
    }

    /// Derivative of the coefficients along `∂_l`; `dx` factors are constant.
    pub fn partial(&self, l: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.exps[l];
            if e == 0 {
                continue;
            }
            let mut exps = mono.exps.clone();
            exps[l] -= 1;
            out.add_term(FormMonomial { exps, dx: mono.dx }, c * &Rational::from_int(e as i64));
        }
        out
    }

    /// Lie derivative along the linear field `x_a ∂_b`: the derivation
    /// sending `x_b ↦ x_a` and `dx_b ↦ dx_a`.
    pub fn lie_linear(&self, a: usize, b: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.exps[b];
            if e > 0 {
                let mut exps = mono.exps.clone();
                exps[b] -= 1;
                exps[a] += 1;
                out.add_term(FormMonomial { exps, dx: mono.dx }, c * &Rational::from_int(e as i64));
            }
            if mono.dx & (1 << b) != 0 {
                // replace dx_b by dx_a in place, then re-sort
                let rest = mono.dx & !(1 << b);
                if a != b && rest & (1 << a) != 0 {
                    continue;
                }
                let neg = below_parity(mono.dx, b) != below_parity(rest, a);
                let c = if neg { -c } else { c.clone() };
                out.add_term(FormMonomial { exps: mono.exps.clone(), dx: rest | (1 << a) }, c);
            }
        }
        out
    }

    /// Lie derivative along the polynomial vector field `Σ V_j ∂_j`, with
    /// each `V_j` a 0-form.
    pub fn lie_derivative(&self, field: &[PolyForm]) -> PolyForm {
        // Cartan: L_V = ι_V d + d ι_V
        let iv = |f: &PolyForm| {
            (0..self.m).fold(PolyForm::zero(self.m), |acc, j| acc.add(&field[j].wedge(&f.iota(j))))
        };
        iv(&self.d()).add(&iv(self).d())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| serde_json::json!([c.to_string(), k.exps.to_vec(), bits(k.dx).collect::<Vec<_>>()]))
                .collect(),
        )
    }

    /// Parses the JSON produced by [`PolyForm::to_json`]. Index sets may be
    /// unsorted; the sign of the sorting permutation is applied.
    pub fn from_json(m: usize, v: &serde_json::Value) -> Result<PolyForm> {
        #[derive(Deserialize)]
        struct Term(String, Vec<u8>, Vec<usize>);
        let terms: Vec<Term> = serde_json::from_value(v.clone())?;
        let mut out = PolyForm::zero(m);
        for Term(c, exps, idx) in terms {
            if exps.len() != m || idx.iter().any(|i| *i >= m) {
                return input("form term does not match the number of variables");
            }
            let c: Rational = c.parse()?;
            let mut mono = PolyForm::monomial(m, FormMonomial { exps: exps.into_iter().collect(), dx: 0 }, c);
            for i in idx {
                mono = mono.wedge(&PolyForm::dvar(m, i));
            }
            out = out.add(&mono);
        }
        Ok(out)
    }
}

fn uniform(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, e) in k.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", v + 1)?,
                    _ => write!(f, "x{}^{e}", v + 1)?,
                }
            }
            for j in bits(k.dx) {
                write!(f, "dx{}", j + 1)?;
            }
        }
        Ok(())
    }
}

/// The standard symplectic form `Σ dx_i ∧ dx_{i+n}` on `C^{2n}`.
pub fn omega_form(n: usize) -> PolyForm {
    let m = 2 * n;
    (0..n).fold(PolyForm::zero(m), |acc, i| acc.add(&PolyForm::dx_product(m, &[i, i + n])))
}

/// Contraction with the Poisson bivector, normalized so that
/// `ι_π(dx_i ∧ dx_{i+n}) = 1`.
pub fn iota_pi(alpha: &PolyForm) -> PolyForm {
    let n = alpha.vars() / 2;
    (0..n).fold(PolyForm::zero(alpha.vars()), |acc, i| acc.add(&alpha.iota(i).iota(i + n)))
}

/// The symplectic `sl_2` triple on forms: `E = ι_π`, `F = ω ∧ -`, and `H`
/// acting by `n - k` on `k`-forms.
#[derive(Clone, Copy, Debug)]
pub struct Sl2 {
    pub n: usize,
}

impl Sl2 {
    pub fn e(&self, a: &PolyForm) -> PolyForm {
        iota_pi(a)
    }

    pub fn f(&self, a: &PolyForm) -> PolyForm {
        omega_form(self.n).wedge(a)
    }

    pub fn h(&self, a: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(a.vars());
        for (k, c) in a.terms() {
            let w = self.n as i64 - k.form_degree() as i64;
            out.add_term(k.clone(), c * &Rational::from_int(w));
        }
        out
    }
}

/// Lefschetz decomposition `α = Σ_j ω^j ∧ β_j` with every `β_j` primitive.
/// Returns `[β_0, β_1, …]`.
pub fn lefschetz_decompose(alpha: &PolyForm, n: usize) -> Result<Vec<PolyForm>> {
    let m = alpha.vars();
    if m != 2 * n {
        return input("form does not live on C^2n");
    }
    if alpha.is_zero() {
        return Ok(vec![alpha.clone()]);
    }
    let Some(k) = alpha.form_degree() else { return input("form degree must be homogeneous") };
    if k > n {
        return input(format!("Lefschetz decomposition needs form degree <= n, got {k}"));
    }
    if k < 2 {
        return Ok(vec![alpha.clone()]);
    }
    // if Eα = Σ ω^j γ_j then β_{j+1} = γ_j / ((j+1)(n-k+j+2))
    let gammas = lefschetz_decompose(&iota_pi(alpha), n)?;
    let omega = omega_form(n);
    let mut betas = vec![PolyForm::zero(m)];
    let mut rest = alpha.clone();
    let mut wpow = PolyForm::one(m);
    for (j, g) in gammas.iter().enumerate() {
        let j1 = j as i64 + 1;
        let denom = j1 * (n as i64 - k as i64 + j1 + 1);
        let beta = g.scale(&Rational::new(1, denom));
        wpow = wpow.wedge(&omega);
        rest = rest.sub(&wpow.wedge(&beta));
        betas.push(beta);
    }
    betas[0] = rest;
    while betas.len() > 1 && betas.last().unwrap().is_zero() {
        betas.pop();
    }
    Ok(betas)
}

/// The primitive component `β_0` of the Lefschetz decomposition.
pub fn lefschetz_primitive(alpha: &PolyForm, n: usize) -> Result<PolyForm> {
    Ok(lefschetz_decompose(alpha, n)?.swap_remove(0))
}

/// `ω^j`, as a form.
pub fn omega_power(n: usize, j: usize) -> PolyForm {
    let w = omega_form(n);
    (0..j).fold(PolyForm::one(2 * n), |acc, _| acc.wedge(&w))
}

/// Components `V_j` of the Hamiltonian field `D_u = Σ_i (∂_i u ∂_{i+n} - ∂_{i+n} u ∂_i)`.
pub fn hamiltonian_field(u: &PolyForm) -> Vec<PolyForm> {
    let m = u.vars();
    let n = m / 2;
    let mut v = vec![PolyForm::zero(m); m];
    for i in 0..n {
        v[i + n] = u.partial(i);
        v[i] = u.partial(i + n).scale(&Rational::from_int(-1));
    }
    v
}

/// Poisson bracket `{u, v} = Σ_i ∂_i u ∂_{i+n} v - ∂_i v ∂_{i+n} u` of functions.
pub fn poisson(u: &PolyForm, v: &PolyForm) -> PolyForm {
    let n = u.vars() / 2;
    (0..n).fold(PolyForm::zero(u.vars()), |acc, i| {
        acc.add(&u.partial(i).wedge(&v.partial(i + n))).sub(&v.partial(i).wedge(&u.partial(i + n)))
    })
}

#[cfg(test)]
mod tests;
