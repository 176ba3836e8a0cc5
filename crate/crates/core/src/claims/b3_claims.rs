use std::sync::Arc;

use super::{Check, Outcome, VerifyOptions};
use crate::algebra::FreeElement;
use crate::b3::{exact_ratio, B3Candidate, B3Lab, DerivativeRule, Relation, ThetaProbe};
use crate::error::Result;
use crate::lcs::{Ideal, Quotient};
use crate::rep::{apply_root_vector, positive_roots, predicted_dims, Decomposition, SpWeight};
use crate::scalar::Rational;

fn lab(o: &VerifyOptions, n: usize) -> Result<B3Lab> {
    B3Lab::with_engine(n, o.engine(n))
}

fn rho(n: usize, k: usize) -> SpWeight {
    (0..n).map(|i| i32::from(i < k)).collect()
}

/// `(k, s)` with `k` odd, `k <= top` and `2s <= k - 1`.
fn ks_pairs(top: usize) -> Vec<(usize, usize)> {
    (1..=top).step_by(2).flat_map(|k| (0..=(k - 1) / 2).map(move |s| (k, s))).collect()
}

/// Highest weight modulo `L_4 + I`: every raising operator sends the class to zero.
fn highest_mod(lab: &B3Lab, e: &FreeElement, ideal: Option<&Arc<Ideal>>) -> Result<bool> {
    for r in positive_roots(lab.n()) {
        if !lab.class_is_zero(&apply_root_vector(&r, e)?, ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn derivatives_vanish(lab: &B3Lab, e: &FreeElement) -> Result<bool> {
    for l in 1..=2 * lab.n() {
        if !lab.class_is_zero(&lab.partial(l, e)?, None)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The common scalar `λ` with `∂_l e ≡ λ r_l` for every `l`, if there is one.
fn common_scalar(lab: &B3Lab, e: &FreeElement, targets: &[FreeElement]) -> Result<Option<Rational>> {
    let mut lambda: Option<Rational> = None;
    for (l, r) in (1..).zip(targets) {
        let got = lab.partial(l, e)?;
        if lab.class_is_zero(r, None)? {
            if !lab.class_is_zero(&got, None)? {
                return Ok(None);
            }
            continue;
        }
        let c = match lab.relation(&got, r, None)? {
            Relation::Equal => Rational::from_int(1),
            Relation::Proportional(c) => c,
            Relation::Different => return Ok(None),
        };
        if lambda.as_ref().is_some_and(|x| *x != c) {
            return Ok(None);
        }
        lambda = Some(c);
    }
    Ok(lambda)
}

fn tag(c: &B3Candidate) -> String {
    format!("n={} {}_({},{})", c.weight.len(), c.kind, c.k, c.s)
}

/// Dimension of the solution space on the candidate's slice, and whether
/// the candidate lies on it.
fn uniqueness(lab: &B3Lab, c: &B3Candidate, rule: &DerivativeRule, out: &mut Outcome) -> Result<()> {
    let sols = lab.solve_distinguished(&c.weight, c.degree, rule, None)?;
    out.push(Check::equal(format!("{} solution space dimension", tag(c)), 1, sols.len()));
    if let Some(sol) = sols.first() {
        let on_line = lab.relation(&c.element, &sol.element, None)? != Relation::Different;
        out.push(Check::holds(format!("{} spans the solution space", tag(c)), on_line));
    }
    Ok(())
}

fn theta_checks(probe: &ThetaProbe, c: &B3Candidate, shape: &FreeElement, out: &mut Outcome) -> Result<()> {
    out.push(Check::holds(format!("{} theta image escapes L4", tag(c)), probe.escapes_l4(&c.element)?));
    let ratio = exact_ratio(&probe.apply(&c.element)?, shape);
    out.push(Check::holds(format!("{} theta image is a nonzero multiple of the monomial", tag(c)), ratio.as_ref().is_some_and(|r| !r.is_zero())));
    if let Some(r) = ratio {
        out.note(format!("{}: theta image = {r} times the monomial", tag(c)));
    }
    Ok(())
}

pub(super) fn lemma_5_2(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[3]) {
        let lab = lab(o, n)?;
        let probe = ThetaProbe::new(n)?;
        for (k, s) in ks_pairs(2 * n - 1) {
            if !lab.v_in_range(k, s) || k + 2 > o.cap(5) {
                continue;
            }
            let v = lab.build_v(k, s)?;
            out.push(Check::holds(format!("{} nonzero in B3", tag(&v)), lab.engine().certify_nonzero(&v.element, 3, None)?));
            out.push(Check::holds(format!("{} highest weight modulo L4", tag(&v)), highest_mod(&lab, &v.element, None)?));
            out.push(Check::holds(format!("{} killed by every d_l modulo L4", tag(&v)), derivatives_vanish(&lab, &v.element)?));
            theta_checks(&probe, &v, &probe.v_shape(k, s)?, &mut out)?;
            if (k, s) == (1, 0) {
                uniqueness(&lab, &v, &DerivativeRule::Vanish, &mut out)?;
            }
        }
    }
    Ok(out)
}

pub(super) fn xbar_nonzero(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[3]) {
        let lab = lab(o, n)?;
        let probe = ThetaProbe::new(n)?;
        for (k, s) in ks_pairs(n) {
            if k + 2 > o.cap(5) {
                continue;
            }
            let x = lab.build_xbar(k, s)?;
            out.push(Check::holds(format!("{} nonzero in B3", tag(&x)), lab.engine().certify_nonzero(&x.element, 3, None)?));
            theta_checks(&probe, &x, &probe.xbar_shape(k, s)?, &mut out)?;
        }
    }
    Ok(out)
}

pub(super) fn cor_5_3(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2, 3], &[]) {
        let lab = lab(o, n)?;
        let w = lab.omega_ideal().clone();
        for (k, s) in ks_pairs(2 * n - 1) {
            if !lab.v_in_range(k, s) || k + 2 > o.cap(5) {
                continue;
            }
            let v = lab.build_v(k, s)?;
            let (key, vec) = lab.engine().locate(&v.element)?.expect("candidates are nonzero");
            let in_ideal = lab.engine().span_ideal(&w, &key)?.contains(&vec)?;
            let dies = lab.class_is_zero(&v.element, Some(&w))?;
            if s > 0 {
                out.push(Check::holds(format!("{} zero in B3 of the quotient", tag(&v)), dies));
                if !in_ideal {
                    out.note(format!("{}: zero modulo L4 + omega but not itself in the omega ideal", tag(&v)));
                }
            } else {
                out.push(Check::holds(format!("{} not in the omega ideal", tag(&v)), !in_ideal));
                if dies {
                    out.note(format!("{}: not in the omega ideal, yet zero in B3 of the quotient", tag(&v)));
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn thm_5_7(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[3]) {
        let lab = lab(o, n)?;
        for (k, s) in ks_pairs(n) {
            if k + 3 > o.cap(4) {
                continue;
            }
            let j = k - 2 * s;
            let x = lab.build_xbar(k, s)?;
            let y = lab.build_ybar(k, s)?;
            let z = lab.build_zbar(k, s)?;
            for (c, want) in [(&x, rho(n, j)), (&y, rho(n, j + 1)), (&z, rho(n, j - 1))] {
                out.push(Check::equal(format!("{} weight", tag(c)), want, c.weight.clone()));
                out.push(Check::holds(format!("{} highest weight modulo L4", tag(c)), highest_mod(&lab, &c.element, None)?));
                out.note(format!("{}: degree {}", tag(c), c.degree));
            }
            out.push(Check::holds(format!("{} killed by every d_l modulo L4", tag(&x)), derivatives_vanish(&lab, &x.element)?));
            let yt = lab.ybar_derivative_targets(&x.element, k, s)?;
            let zt = lab.zbar_derivative_targets(&x.element, k, s)?;
            for (c, targets) in [(&y, &yt), (&z, &zt)] {
                let lambda = common_scalar(&lab, &c.element, targets)?;
                out.push(Check::holds(format!("{} derivative table up to one common scalar", tag(c)), lambda.is_some()));
                if let Some(l) = lambda.filter(|l| !l.is_one()) {
                    out.note(format!("{}: d_l matches the table times {l}", tag(c)));
                }
            }
            uniqueness(&lab, &x, &DerivativeRule::Vanish, &mut out)?;
            uniqueness(&lab, &y, &DerivativeRule::Prescribed(yt), &mut out)?;
            uniqueness(&lab, &z, &DerivativeRule::Prescribed(zt), &mut out)?;
        }
    }
    Ok(out)
}

pub(super) fn lemma_5_8(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[]) {
        let lab = lab(o, n)?;
        for (k, s) in ks_pairs(o.cap(7).saturating_sub(3)) {
            for m in 1..=2 * n {
                let a = lab.alpha(k, s, m)?;
                out.push(Check::holds(format!("n={n} alpha_({k},{s},{m}) in L4"), lab.class_is_zero(&a, None)?));
            }
        }
    }
    Ok(out)
}

pub(super) fn lemma_5_9(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[]) {
        let lab = lab(o, n)?;
        let x = |i| lab.x(i);
        let words = [("x1", x(1)), ("x3", x(3)), ("x1x2", x(1).multiply(&x(2))?), ("x1x3", x(1).multiply(&x(3))?)];
        for s in 1..=3 {
            for (name, a) in &words {
                if a.degree().unwrap_or(0) + 2 * s > o.cap(7) {
                    continue;
                }
                for l in 1..=s {
                    for k in 1..=s {
                        let e = lab.omega_switch(a, l, k, s)?;
                        out.push(Check::holds(format!("n={n} a={name} (l,k,s)=({l},{k},{s}) in L4"), lab.class_is_zero(&e, None)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn lemma_5_10(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[]) {
        let lab = lab(o, n)?;
        for (k, s) in ks_pairs(o.cap(7).saturating_sub(3)) {
            for l in 1..=k - 2 * s + 1 {
                let g = lab.phi_psi_gap(k, s, l)?;
                out.push(Check::holds(format!("n={n} (k,s,l)=({k},{s},{l}) in L4"), lab.class_is_zero(&g, None)?));
            }
        }
    }
    Ok(out)
}

pub(super) fn upper_bound(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[]) {
        let e = o.engine(n);
        let w = Arc::new(Ideal::omega(n)?);
        // F_(1^k)/Y_k has the graded dimension of F_(1^k)/T_k plus Z_k/X_k,
        // so the source of the surjection is the B3 factor list
        for row in predicted_dims(n, &Decomposition::B3.factors(n), 0..=o.cap(6))? {
            let got = e.dim_in_degree(Quotient::B(3), row.degree, Some(&w))? as u64;
            out.push(Check::holds(format!("n={n} d={}: {got} <= {}", row.degree, row.total), got <= row.total));
        }
    }
    Ok(out)
}

pub(super) fn conj_5_12(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[3]) {
        let lab = lab(o, n)?;
        let w = lab.omega_ideal().clone();
        for k in (1..n).step_by(2) {
            let v = lab.build_v(k, 0)?;
            let z = lab.build_zbar(k, 0)?;
            for c in [&v, &z] {
                out.push(Check::holds(format!("{} nonzero modulo omega", tag(c)), lab.engine().certify_nonzero(&c.element, 3, Some(&w))?));
            }
        }
        // the factor list that would follow, reported for comparison only
        let rows = predicted_dims(n, &Decomposition::B3.factors(n), 3..=o.cap(5))?;
        let mut pairs = Vec::new();
        for row in rows {
            pairs.push((row.degree, lab.engine().dim_in_degree(Quotient::B(3), row.degree, Some(&w))?, row.total));
        }
        out.note(format!("n={n}: (degree, computed, conjectured) = {pairs:?}"));
    }
    Ok(out)
}
