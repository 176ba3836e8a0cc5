use proptest::prelude::*;

use super::*;
use crate::algebra::{FreeElement, Signature};
use crate::scalar::Rational;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn x(m: usize, i: usize) -> PolyForm {
    PolyForm::var(m, i)
}

fn dx(m: usize, idx: &[usize]) -> PolyForm {
    PolyForm::dx_product(m, idx)
}

#[test]
fn exterior_derivative_examples() {
    assert_eq!(x(2, 0).wedge(&dx(2, &[1])).d(), dx(2, &[0, 1]));
    assert!(dx(4, &[0, 2]).d().is_zero());
    // d(x2 dx1) = dx2 ∧ dx1 = -dx1 ∧ dx2
    assert_eq!(x(2, 1).wedge(&dx(2, &[0])).d(), dx(2, &[0, 1]).scale(&q(-1)));
}

#[test]
fn q_family_identities() {
    for n in 1..=3 {
        for m in 1..=2 * n {
            // p_{m,m} = (-1)^m a_{m-1}
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(p_form(n, m, m), a_form(n, m - 1).scale(&q(sign)));
            // d q_m = -m a_m under these sign conventions
            assert_eq!(q_form(n, m).d(), a_form(n, m).scale(&q(-(m as i64))), "n={n} m={m}");
            for l in 1..=2 * n {
                let expect = if l <= m { p_form(n, l, m) } else { PolyForm::zero(2 * n) };
                assert_eq!(q_form(n, m).partial(l - 1), expect);
            }
        }
    }
}

#[test]
fn iota_pi_examples() {
    for n in 1..=3 {
        assert_eq!(iota_pi(&omega_form(n)), PolyForm::constant(2 * n, q(n as i64)));
    }
    assert!(iota_pi(&dx(4, &[0, 1])).is_zero());
    assert_eq!(iota_pi(&dx(4, &[0, 2])), PolyForm::one(4));
}

#[test]
fn distinguished_vector_contractions() {
    for n in 2..=3 {
        let w = omega_form(n);
        let y = liouville(n);
        assert_eq!(y.d(), w);
        for k in 2..=n {
            let ykm2 = y_vec(n, k as isize - 2);
            let c = q(n as i64 - k as i64 + 2);
            assert_eq!(iota_pi(&w.wedge(&ykm2)), ykm2.scale(&c));
            assert_eq!(iota_pi(&y.wedge(&x_vec(n, k - 1))), ykm2.scale(&Rational::new(1, 2)));
            let coeff = (n as i64 - k as i64 + 1) * (k as i64 - 3 - 2 * n as i64);
            assert_eq!(iota_pi(&z_vec(n, k).d()), x_vec(n, k - 1).scale(&q(coeff)), "n={n} k={k}");
        }
    }
    let (x1, y1, _) = distinguished(2, 1).unwrap();
    assert_eq!(x1, dx(4, &[0]));
    let expect = x(4, 1).wedge(&dx(4, &[0])).sub(&x(4, 0).wedge(&dx(4, &[1])));
    assert_eq!(y1, expect);
    assert_eq!(y1.partial(1), x1);
    assert!(distinguished(2, 3).is_err());
    assert!(distinguished(2, 0).is_err());
}

#[test]
fn fedosov_examples() {
    let m = 2;
    let a = fedosov(&x(m, 0), &x(m, 1)).unwrap();
    let b = fedosov(&x(m, 1), &x(m, 0)).unwrap();
    assert_eq!(a.sub(&b).scale(&Rational::new(1, 2)), dx(m, &[0, 1]));
    assert_eq!(fedosov(&x(m, 0), &x(m, 0)).unwrap(), x(m, 0).wedge(&x(m, 0)));
    assert!(fedosov(&dx(m, &[0]), &x(m, 0)).is_err());
    for n in 1..=3 {
        let fs = FsMap::new(2 * n);
        let w = crate::algebra::omega_element(n).unwrap();
        assert_eq!(fs.image(&w).unwrap(), omega_form(n));
    }
}

#[test]
fn lift_examples() {
    let fs = FsMap::new(2);
    let sig = Signature::free(2);
    let half = Rational::new(1, 2);
    let b = FreeElement::gen(sig, 0).bracket(&FreeElement::gen(sig, 1)).unwrap().scale(&half);
    assert_eq!(fs.lift(&dx(2, &[0, 1])).unwrap(), b);
    assert_eq!(fs.lift(&PolyForm::one(2)).unwrap(), FreeElement::one(sig));
    assert!(fs.lift(&dx(2, &[0])).is_err());
    // x1 x2 lifts to the symmetrization
    let sym = FreeElement::from_letters(sig, &[0, 1]).add(&FreeElement::from_letters(sig, &[1, 0])).unwrap().scale(&half);
    assert_eq!(fs.lift(&x(2, 0).wedge(&x(2, 1))).unwrap(), sym);
}

#[test]
fn lefschetz_examples() {
    assert!(lefschetz_primitive(&omega_form(2), 2).unwrap().is_zero());
    assert_eq!(lefschetz_primitive(&dx(4, &[0, 1]), 2).unwrap(), dx(4, &[0, 1]));
    let a = dx(4, &[0, 2]);
    let expect = a.sub(&omega_form(2).scale(&Rational::new(1, 2)));
    assert_eq!(lefschetz_primitive(&a, 2).unwrap(), expect);
    assert!(lefschetz_primitive(&dx(4, &[0, 1, 2]), 2).is_err());
}

#[test]
fn lattice_examples() {
    // F_0 is all polynomials
    for d in 0..=4 {
        let monos = FormSlice::all(2, 0, d).iter().map(|s| s.dim()).sum::<usize>();
        assert_eq!(lattice_dims(2, 0, d).unwrap().f, monos);
    }
    // constant primitive 2-forms on C^4
    let l = lattice_dims(2, 2, 2).unwrap();
    assert_eq!((l.f, l.x), (5, 5));
    // dim F = dim Ω^k - dim ω∧Ω^{k-2}
    for d in 2..=5 {
        let omega_k: usize = FormSlice::all(3, 2, d - 2).iter().map(|s| s.dim()).sum();
        let omega_k2: usize = FormSlice::all(3, 0, d - 2).iter().map(|s| s.dim()).sum();
        assert_eq!(lattice_dims(3, 2, d).unwrap().f, omega_k - omega_k2);
    }
}

#[test]
fn membership_examples() {
    for n in 2..=3 {
        for k in 1..n {
            let (xv, yv, zv) = distinguished(n, k).unwrap();
            assert!(submodule_member(&xv, Submodule::X, n).unwrap());
            assert!(submodule_member(&yv, Submodule::Y, n).unwrap());
            assert!(!submodule_member(&yv, Submodule::X, n).unwrap());
            assert!(submodule_member(&zv, Submodule::Z, n).unwrap());
            assert!(!submodule_member(&zv, Submodule::Y, n).unwrap());
            assert!(submodule_member(&zv, Submodule::T, n).unwrap());
        }
    }
    assert!(matches!(
        submodule_member(&omega_form(2), Submodule::X, 2),
        Err(crate::error::Error::Precondition(_))
    ));
}

#[test]
fn json_round_trip() {
    let f = x(4, 1).wedge(&dx(4, &[3, 0])).scale(&Rational::new(-2, 3)).add(&PolyForm::one(4));
    assert_eq!(PolyForm::from_json(4, &f.to_json()).unwrap(), f);
}

#[test]
fn poisson_bracket_matches_commutator_of_fields() {
    let m = 4;
    let u = x(m, 0).wedge(&x(m, 2)).wedge(&x(m, 1));
    let v = x(m, 3).wedge(&x(m, 3)).add(&x(m, 0));
    let test = x(m, 0).wedge(&x(m, 1)).wedge(&dx(m, &[2, 3])).add(&x(m, 3).wedge(&dx(m, &[1])));
    let du = hamiltonian_field(&u);
    let dv = hamiltonian_field(&v);
    let lhs = test.lie_derivative(&dv).lie_derivative(&du).sub(&test.lie_derivative(&du).lie_derivative(&dv));
    let rhs = test.lie_derivative(&hamiltonian_field(&poisson(&u, &v)));
    assert_eq!(lhs, rhs);
    // Hamiltonian fields preserve ω
    assert!(omega_form(2).lie_derivative(&du).is_zero());
}

fn arb_form(n: usize, even_only: bool) -> impl Strategy<Value = PolyForm> {
    let m = 2 * n;
    prop::collection::vec((prop::collection::vec(0u8..3, m), 0u32..(1 << m), -3i64..=3), 0..5).prop_map(move |ts| {
        let mut f = PolyForm::zero(m);
        for (e, mask, c) in ts {
            let mask = if even_only && mask.count_ones() % 2 == 1 { mask & (mask - 1) } else { mask };
            f.add_term(FormMonomial { exps: e.into_iter().collect(), dx: mask }, Rational::from_int(c));
        }
        f
    })
}

fn form_degree_part(f: &PolyForm, k: usize) -> PolyForm {
    let mut out = PolyForm::zero(f.vars());
    for (mono, c) in f.terms() {
        if mono.form_degree() == k {
            out.add_term(mono.clone(), c.clone());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_is_zero(f in arb_form(2, false)) {
        prop_assert!(f.d().d().is_zero());
    }

    #[test]
    fn sl2_relations(n in 1usize..=3, seed in arb_form(3, false)) {
        let m = 2 * n;
        let mut f = PolyForm::zero(m);
        for (mono, c) in seed.terms() {
            let exps = mono.exps[..m].iter().copied().collect();
            f.add_term(FormMonomial { exps, dx: mono.dx & ((1 << m) - 1) }, c.clone());
        }
        let s = Sl2 { n };
        let ef = s.e(&s.f(&f)).sub(&s.f(&s.e(&f)));
        prop_assert_eq!(ef, s.h(&f));
        let he = s.h(&s.e(&f)).sub(&s.e(&s.h(&f)));
        prop_assert_eq!(he, s.e(&f).scale(&q(2)));
        let hf = s.h(&s.f(&f)).sub(&s.f(&s.h(&f)));
        prop_assert_eq!(hf, s.f(&f).scale(&q(-2)));
    }

    #[test]
    fn fedosov_associative(a in arb_form(1, true), b in arb_form(1, true), c in arb_form(1, true)) {
        let l = fedosov(&fedosov(&a, &b).unwrap(), &c).unwrap();
        let r = fedosov(&a, &fedosov(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn fedosov_associative_four_vars(a in arb_form(2, true), b in arb_form(2, true), c in arb_form(2, true)) {
        let l = fedosov(&fedosov(&a, &b).unwrap(), &c).unwrap();
        let r = fedosov(&a, &fedosov(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn lift_round_trip(f in arb_form(2, true)) {
        let fs = FsMap::new(4);
        prop_assert_eq!(fs.image(&fs.lift(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn lefschetz_reassembles(f in arb_form(3, false), k in 0usize..=3) {
        let n = 3;
        let a = form_degree_part(&f, k);
        let betas = lefschetz_decompose(&a, n).unwrap();
        let mut sum = PolyForm::zero(2 * n);
        for (j, b) in betas.iter().enumerate() {
            prop_assert!(iota_pi(b).is_zero());
            sum = sum.add(&omega_power(n, j).wedge(b));
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn euler_antiderivative_inverts_d(f in arb_form(2, false)) {
        let closed = f.d();
        for t in 1..=8 {
            let mut part = PolyForm::zero(4);
            for (mono, c) in closed.terms() {
                if mono.total_degree() == t {
                    part.add_term(mono.clone(), c.clone());
                }
            }
            if !part.is_zero() {
                prop_assert_eq!(part.euler_antiderivative().unwrap().d(), part);
            }
        }
    }
}
