//! The map `θ: A_2n → A_2 ⊗ Λ(z_0, …, z_2n)` with `θ(x_1) = e z_0 + f z_1`
//! and `θ(x_i) = z_i` for `i ≥ 2`. It sends `L_4` into `L_4`, so a
//! candidate whose image escapes `L_4` is nonzero in `B_3`.

use std::collections::BTreeMap;

use crate::algebra::{apply_hom, FreeElement, GeneratorMap, Grading, Signature, SliceKey};
use crate::error::{input, Result};
use crate::lcs::{Engine, Filtration};
use crate::scalar::Rational;

pub struct ThetaProbe {
    n: usize,
    target: Signature,
    map: GeneratorMap,
    engine: Engine,
}

impl ThetaProbe {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return input("n must be positive");
        }
        let source = Signature::free(2 * n);
        let target = Signature::mixed(2, 2 * n + 1);
        let mut map = GeneratorMap::new(source, target);
        let e = FreeElement::gen(target, 0).multiply(&FreeElement::odd_gen(target, 0))?;
        let f = FreeElement::gen(target, 1).multiply(&FreeElement::odd_gen(target, 1))?;
        map.set(0, e.add(&f)?)?;
        for i in 2..=2 * n {
            map.set(i - 1, FreeElement::odd_gen(target, i))?;
        }
        Ok(ThetaProbe { n, target, map, engine: Engine::new(target, Grading::Multidegree { sig: target }) })
    }

    pub fn target(&self) -> Signature {
        self.target
    }

    pub fn apply(&self, e: &FreeElement) -> Result<FreeElement> {
        apply_hom(&self.map, e)
    }

    /// Whether `θ(e)` lies outside `L_4(B)`; a `true` certifies `e ∉ L_4`.
    /// `θ(x_1)` mixes multidegrees, so each homogeneous part is tested.
    pub fn escapes_l4(&self, e: &FreeElement) -> Result<bool> {
        let img = self.apply(e)?;
        let mut parts: BTreeMap<SliceKey, FreeElement> = BTreeMap::new();
        for (w, c) in img.terms() {
            let key = self.engine.grading().key(w)?;
            parts.entry(key).or_insert_with(|| FreeElement::zero(self.target)).add_term(w.clone(), c.clone());
        }
        for part in parts.values() {
            if !self.engine.contains(&Filtration::L(4), part)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn z(&self, i: usize) -> FreeElement {
        FreeElement::odd_gen(self.target, i)
    }

    fn z_product(&self, idx: impl IntoIterator<Item = usize>) -> Result<FreeElement> {
        idx.into_iter().try_fold(FreeElement::one(self.target), |acc, i| acc.multiply(&self.z(i)))
    }

    /// `(Σ_{i≥2} z_i z_{i+n})^s`.
    fn tail_power(&self, s: usize) -> Result<FreeElement> {
        let mut base = FreeElement::zero(self.target);
        for i in 2..=self.n {
            base = base.add(&self.z_product([i, i + self.n])?)?;
        }
        Ok(base.pow(s))
    }

    fn ef(&self) -> Result<FreeElement> {
        FreeElement::gen(self.target, 0).bracket(&FreeElement::gen(self.target, 1))
    }

    /// `[e,f] z_0 ⋯ z_{k-2s+1} (Σ_{i≥2} z_i z_{i+n})^s`.
    pub fn v_shape(&self, k: usize, s: usize) -> Result<FreeElement> {
        let zs = self.z_product(0..=k - 2 * s + 1)?;
        self.ef()?.multiply(&zs)?.multiply(&self.tail_power(s)?)
    }

    /// `[e,f] z_0 ⋯ z_{k-2s} z_{1+n} (Σ_{i≥2} z_i z_{i+n})^s`.
    pub fn xbar_shape(&self, k: usize, s: usize) -> Result<FreeElement> {
        let zs = self.z_product((0..=k - 2 * s).chain([1 + self.n]))?;
        self.ef()?.multiply(&zs)?.multiply(&self.tail_power(s)?)
    }
}

/// The scalar `c` with `a = c·b` exactly, if there is one.
pub fn exact_ratio(a: &FreeElement, b: &FreeElement) -> Option<Rational> {
    let (w, cb) = b.terms().next()?;
    let c = &a.coeff(w) / cb;
    let diff = a.sub(&b.scale(&c)).ok()?;
    diff.is_zero().then_some(c)
}
