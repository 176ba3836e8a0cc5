//! The Fedosov product and the identification of `A_m / M_3` with even
//! forms under it.

use std::collections::HashMap;
use std::sync::Mutex;

use super::{FormMonomial, PolyForm};
use crate::algebra::{FreeElement, Letters, Signature, Word};
use crate::error::{input, Result};
use crate::scalar::Rational;

/// `a ∗ b = a ∧ b + da ∧ db` on even forms.
pub fn fedosov(a: &PolyForm, b: &PolyForm) -> Result<PolyForm> {
    if !a.is_even() || !b.is_even() {
        return input("Fedosov product is defined on even forms");
    }
    Ok(a.wedge(b).add(&a.d().wedge(&b.d())))
}

/// Homomorphism `A_m → (Ω^even, ∗)` sending `x_i ↦ x_i`, together with a
/// section of it. Both directions are memoized.
pub struct FsMap {
    m: usize,
    images: Mutex<HashMap<Letters, PolyForm>>,
    lifts: Mutex<HashMap<FormMonomial, FreeElement>>,
}

impl FsMap {
    pub fn new(m: usize) -> Self {
        FsMap { m, images: Mutex::new(HashMap::new()), lifts: Mutex::new(HashMap::new()) }
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    fn word_image(&self, letters: &[u8]) -> PolyForm {
        if let Some(f) = self.images.lock().unwrap().get(letters) {
            return f.clone();
        }
        let f = match letters.split_first() {
            None => PolyForm::one(self.m),
            Some((first, rest)) => {
                // x_i ∗ β = x_i β + dx_i ∧ dβ
                let beta = self.word_image(rest);
                let i = *first as usize;
                beta.times_var(i).add(&PolyForm::dvar(self.m, i).wedge(&beta.d()))
            }
        };
        self.images.lock().unwrap().insert(letters.iter().copied().collect(), f.clone());
        f
    }

    /// Image of a free element (even generators only).
    pub fn image(&self, e: &FreeElement) -> Result<PolyForm> {
        let sig = e.signature();
        if sig.odd != 0 || sig.even != self.m {
            return input("element is not in the free algebra on m generators");
        }
        let mut out = PolyForm::zero(self.m);
        for (w, c) in e.terms() {
            out = out.add(&self.word_image(&w.letters).scale(c));
        }
        Ok(out)
    }

    /// A free element whose image is `alpha`. Terms with polynomial
    /// coefficients are peeled with `lift(x_i β) = x_i · lift(β) - lift(dx_i ∧ dβ)`;
    /// constant `2r`-forms lift to `2^{-r} [x_{i1}, x_{i2}] ⋯ [x_{i(2r-1)}, x_{i(2r)}]`.
    pub fn lift(&self, alpha: &PolyForm) -> Result<FreeElement> {
        if alpha.vars() != self.m {
            return input("form lives on a different number of variables");
        }
        if !alpha.is_even() {
            return input("only even forms can be lifted");
        }
        let sig = Signature::free(self.m);
        let mut out = FreeElement::zero(sig);
        for (mono, c) in alpha.terms() {
            out = out.add(&self.lift_monomial(mono).scale(c))?;
        }
        Ok(out)
    }

    fn lift_monomial(&self, mono: &FormMonomial) -> FreeElement {
        if let Some(e) = self.lifts.lock().unwrap().get(mono) {
            return e.clone();
        }
        let sig = Signature::free(self.m);
        let e = match mono.exps.iter().position(|e| *e > 0) {
            Some(i) => {
                let mut exps = mono.exps.clone();
                exps[i] -= 1;
                let beta = PolyForm::monomial(self.m, FormMonomial { exps, dx: mono.dx }, Rational::ONE);
                let head = FreeElement::gen(sig, i).multiply(&self.lift_monomial_form(&beta)).expect("same signature");
                let corr = PolyForm::dvar(self.m, i).wedge(&beta.d());
                head.sub(&self.lift_form_unchecked(&corr)).expect("same signature")
            }
            None => {
                let idx: Vec<usize> = super::bits(mono.dx).collect();
                let mut acc = FreeElement::one(sig);
                for pair in idx.chunks(2) {
                    let b = FreeElement::gen(sig, pair[0]).bracket(&FreeElement::gen(sig, pair[1])).expect("same signature");
                    acc = acc.multiply(&b.scale(&Rational::new(1, 2))).expect("same signature");
                }
                acc
            }
        };
        self.lifts.lock().unwrap().insert(mono.clone(), e.clone());
        e
    }

    fn lift_monomial_form(&self, f: &PolyForm) -> FreeElement {
        let (mono, _) = f.terms().next().expect("single term");
        self.lift_monomial(mono)
    }

    fn lift_form_unchecked(&self, f: &PolyForm) -> FreeElement {
        let mut out = FreeElement::zero(Signature::free(self.m));
        for (mono, c) in f.terms() {
            out = out.add(&self.lift_monomial(mono).scale(c)).expect("same signature");
        }
        out
    }

    /// Image of a single word; exposed for callers that build elements
    /// word by word.
    pub fn word(&self, w: &Word) -> PolyForm {
        self.word_image(&w.letters)
    }
}
