use std::sync::Arc;

use super::{Check, Outcome, VerifyOptions};
use crate::algebra::{FreeElement, Grading, Signature};
use crate::error::Result;
use crate::forms::closed_even_dims;
use crate::lcs::{Engine, Filtration, Ideal, Quotient};
use crate::linalg::{intersection_basis, reduce};
use crate::rep::{apply_root_vector, coinduced_dim, free_b3_components, gl_dim, monomial_count, predicted_dims, Decomposition, Partition, RootVector};
use crate::scalar::Rational;

fn default_cap(n: usize) -> usize {
    match n {
        1 => 8,
        2 => 6,
        _ => 4,
    }
}

/// The predicted dimension of a quotient in degree `d`, where one is known:
/// a factor list for the symplectic quotient, the free `B_3` decomposition,
/// or closed forms for the free `B_2`.
pub fn prediction(q: Quotient, n: usize, omega: bool, d: usize) -> Result<Option<u64>> {
    let dec = match (q, omega) {
        (Quotient::ModM(3), true) => Decomposition::QuotientM3,
        (Quotient::B1Bar, true) => Decomposition::B1Bar,
        (Quotient::B(2), true) => Decomposition::B2,
        (Quotient::B(3), true) => Decomposition::B3,
        (Quotient::B(3), false) => {
            return Ok(Some(free_b3_components(n).iter().map(|(mu, off)| coinduced_dim(mu, n, *off, d)).sum()));
        }
        (Quotient::B(2), false) => return Ok(Some(closed_even_dims(n, d, false)? as u64)),
        _ => return Ok(None),
    };
    Ok(Some(predicted_dims(n, &dec.factors(n), d..=d)?[0].total))
}

fn factor_claim(o: &VerifyOptions, q: Quotient, dec: Decomposition) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2], &[]) {
        let engine = o.engine(n);
        let w = Arc::new(Ideal::omega(n)?);
        let rows = predicted_dims(n, &dec.factors(n), 0..=o.cap(default_cap(n)))?;
        let mut excess = Vec::new();
        for row in rows {
            let got = engine.dim_in_degree(q, row.degree, Some(&w))? as u64;
            excess.push(got as i64 - row.total as i64);
            out.push(Check::equal(format!("n={n} d={}", row.degree), row.total, got));
        }
        if excess.iter().any(|e| *e != 0) {
            out.note(format!("n={n}: computed minus predicted by degree = {excess:?}"));
            // the gap seen at n = 2 is a shifted copy of functions modulo constants
            let shifted: Vec<i64> = (0..excess.len())
                .map(|d| if d <= n { 0 } else { monomial_count(2 * n, d - n) as i64 })
                .collect();
            if shifted.iter().zip(&excess).all(|(a, b)| a.abs() == b.abs()) {
                out.note(format!("n={n}: the gap equals F(1^0)/X0 placed in degree {n}"));
            }
        }
    }
    Ok(out)
}

pub(super) fn thm_1_2(o: &VerifyOptions) -> Result<Outcome> {
    factor_claim(o, Quotient::ModM(3), Decomposition::QuotientM3)
}

pub(super) fn thm_1_3(o: &VerifyOptions) -> Result<Outcome> {
    factor_claim(o, Quotient::B1Bar, Decomposition::B1Bar)
}

pub(super) fn thm_1_4(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = factor_claim(o, Quotient::B(2), Decomposition::B2)?;
    if o.ns(&[1, 2], &[]).contains(&2) {
        // constant primitive 2-forms on C^4
        let got = o.engine(2).dim_in_degree(Quotient::B(2), 2, Some(&Arc::new(Ideal::omega(2)?)))?;
        out.push(Check::equal("n=2 first nonzero degree value", 5, got));
    }
    Ok(out)
}

pub(super) fn lemma_3_1(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2], &[]) {
        let e = o.engine(n);
        let w = Arc::new(Ideal::omega(n)?);
        for k in [2, 3] {
            for d in 0..=o.cap(5) {
                let (mut via_sums, mut via_meets) = (0, 0);
                for key in e.grading().keys_of_degree(d) {
                    via_sums += e.dim_b(k, &key, Some(&w))?;
                    let lk = e.span_l(k, &key)?;
                    let lk1 = e.span_l(k + 1, &key)?;
                    let i = e.span_ideal(&w, &key)?;
                    let a = intersection_basis(&lk, &i)?.rank();
                    let b = intersection_basis(&lk1, &i)?.rank();
                    via_meets += lk.rank() - lk1.rank() - (a - b);
                }
                out.push(Check::equal(format!("n={n} B{k} d={d}"), via_meets, via_sums));
            }
        }
    }
    Ok(out)
}

pub(super) fn cor_3_4(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2], &[]) {
        let e = o.engine(n);
        let w = Arc::new(Ideal::omega(n)?);
        for d in 0..=o.cap(6) {
            let free = e.dim_in_degree(Quotient::B(2), d, None)?;
            out.push(Check::equal(format!("n={n} d={d} free"), closed_even_dims(n, d, false)?, free));
            let quot = e.dim_in_degree(Quotient::B(2), d, Some(&w))?;
            out.push(Check::equal(format!("n={n} d={d} modulo omega"), closed_even_dims(n, d, true)?, quot));
        }
    }
    Ok(out)
}

pub(super) fn b3_free(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[2], &[]) {
        let m = 2 * n;
        let e = o.engine(n);
        if n == 2 {
            let got = [gl_dim(&Partition::hook(2, 1), 4), gl_dim(&Partition::hook(2, 3), 4)];
            out.push(Check::equal("gl4 dims of (2,1) and (2,1,1,1)", [20, 4], got));
        }
        for d in 3..=o.cap(6) {
            let predicted: u64 = free_b3_components(n).iter().map(|(mu, off)| coinduced_dim(mu, n, *off, d)).sum();
            let got = e.dim_in_degree(Quotient::B(3), d, None)? as u64;
            out.push(Check::equal(format!("n={n} d={d}"), predicted, got));
            if d == 3 {
                // free Lie algebra in degree 3
                let lie = (m * m * m - m) as u64 / 3;
                out.push(Check::equal(format!("n={n} d=3 free Lie count"), lie, got));
            }
        }
    }
    Ok(out)
}

fn all_roots(n: usize) -> Vec<RootVector> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(RootVector::H(i));
        out.push(RootVector::U(i));
        out.push(RootVector::UT(i));
        for j in 1..=n {
            if i != j {
                out.push(RootVector::X(i, j));
            }
            if i < j {
                out.push(RootVector::Y(i, j));
                out.push(RootVector::YT(i, j));
            }
        }
    }
    out
}

pub(super) fn invariants(o: &VerifyOptions) -> Result<Outcome> {
    let mut out = Outcome::default();
    for n in o.ns(&[1, 2], &[]) {
        let e = o.engine(n);
        let sig = Signature::free(2 * n);
        let top = o.cap(if n == 1 { 6 } else { 5 });
        let (mut nested, mut meet, mut canonical) = (true, true, true);
        for d in 0..=top {
            for key in e.grading().keys_of_degree(d) {
                for k in 1..=3 {
                    let l = e.span_l(k, &key)?;
                    let m = e.span(&Filtration::M(k), &key)?;
                    nested &= e.span_l(k + 1, &key)?.is_subspace_of(&l)?;
                    nested &= e.span(&Filtration::M(k + 1), &key)?.is_subspace_of(&m)?;
                    nested &= l.is_subspace_of(&m)?;
                }
                let l3 = e.span_l(3, &key)?;
                meet &= intersection_basis(&*e.span_l(2, &key)?, &*e.span(&Filtration::M(3), &key)?)? == *l3;
                let shuffled: Vec<_> = l3.rows().iter().rev().map(|r| r.scaled(&Rational::from_int(-3))).collect();
                canonical &= reduce(&shuffled, l3.ambient())? == *l3;
            }
        }
        out.push(Check::holds(format!("n={n} L(k+1) in L(k), M(k+1) in M(k), L(k) in M(k) up to degree {top}"), nested));
        out.push(Check::holds(format!("n={n} L2 cap M3 = L3 up to degree {top}"), meet));
        out.push(Check::holds(format!("n={n} row reduction is canonical up to degree {top}"), canonical));

        // [M3, A] in L4, tested on generators
        let top_m3 = top.min(if n == 1 { 6 } else { 5 });
        let mut bracket_ok = true;
        for d in 3..top_m3 {
            for key in e.grading().keys_of_degree(d) {
                let slice = e.slice(&key)?;
                for row in e.span(&Filtration::M(3), &key)?.rows() {
                    let m3 = slice.element(sig, row);
                    for i in 0..2 * n {
                        bracket_ok &= e.contains(&Filtration::L(4), &m3.bracket(&FreeElement::gen(sig, i))?)?;
                    }
                }
            }
        }
        out.push(Check::holds(format!("n={n} [M3, x_i] in L4 up to degree {top_m3}"), bracket_ok));

        // sp_2n preserves each L_k
        let top_sp = top.min(4);
        let roots = all_roots(n);
        let mut stable = true;
        for d in 2..=top_sp {
            for key in e.grading().keys_of_degree(d) {
                let slice = e.slice(&key)?;
                for k in [2, 3] {
                    for row in e.span_l(k, &key)?.rows() {
                        let x = slice.element(sig, row);
                        for r in &roots {
                            stable &= e.contains(&Filtration::L(k), &apply_root_vector(r, &x)?)?;
                        }
                    }
                }
            }
        }
        out.push(Check::holds(format!("n={n} sp_{} preserves L2 and L3 up to degree {top_sp}", 2 * n), stable));

        // weight slicing is a refinement of degree slicing
        let plain = Engine::new(sig, Grading::Degree);
        let mut same = true;
        for d in 0..=top.min(5) {
            for k in 2..=3 {
                let a = plain.span_l(k, &Grading::Degree.degree_key(d))?.rank();
                let b: usize = e.grading().keys_of_degree(d).iter().map(|key| e.span_l(k, key).map(|s| s.rank())).sum::<Result<_>>()?;
                same &= a == b;
            }
        }
        out.push(Check::holds(format!("n={n} weight and degree slicing agree"), same));
    }
    Ok(out)
}
