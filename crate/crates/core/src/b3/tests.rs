use super::*;
use crate::algebra::omega_element;
use crate::forms::omega_form;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

#[test]
fn v_one_zero_is_the_bracket_of_generators() {
    let lab = B3Lab::new(2).unwrap();
    let v = lab.build_v(1, 0).unwrap();
    let inner = lab.x(1).bracket(&lab.x(2)).unwrap().scale(&Rational::new(1, 2));
    assert_eq!(v.element, lab.x(1).bracket(&inner).unwrap());
    assert_eq!(v.degree, 3);
    assert_eq!(v.weight, vec![2, 1]);
}

#[test]
fn bracket_slots_must_be_even() {
    let lab = B3Lab::new(2).unwrap();
    let one = PolyForm::one(4);
    let dx1 = PolyForm::dvar(4, 0);
    assert!(matches!(lab.bracket_forms(&one, &dx1), Err(Error::Input(_))));
    assert!(matches!(lab.phi(0, &one, &omega_form(2)), Err(Error::Input(_))));
    assert!(matches!(lab.phi(0, &dx1, &dx1), Err(Error::Input(_))));
    assert!(matches!(lab.psi(0, &omega_form(2)), Err(Error::Input(_))));
    // every construction goes through bracket_forms, so building succeeds
    // only if each slot is even
    for n in 2..=3 {
        let lab = B3Lab::new(n).unwrap();
        assert!(lab.build_xbar(1, 0).is_ok());
        assert!(lab.build_ybar(1, 0).is_ok());
        assert!(lab.build_zbar(1, 0).is_ok());
    }
}

#[test]
fn classes_do_not_depend_on_the_lift() {
    let lab = B3Lab::new(2).unwrap();
    let xi = a_form(2, 2);
    let lift = lab.lift(&xi).unwrap();
    // x_3 [x_1, [x_1, x_4]] lies in M_3 and has the same weight and degree
    let m3 = lab.x(3).multiply(&lab.x(1).bracket(&lab.x(1).bracket(&lab.x(4)).unwrap()).unwrap()).unwrap();
    assert!(lab.engine().contains(&Filtration::M(3), &m3).unwrap());
    let v = lab.x(1).bracket(&lift).unwrap();
    let w = lab.x(1).bracket(&lift.add(&m3).unwrap()).unwrap();
    assert_ne!(v, w);
    assert_eq!(lab.relation(&v, &w, None).unwrap(), Relation::Equal);
}

#[test]
fn invalid_parameters_are_rejected() {
    let lab = B3Lab::new(2).unwrap();
    assert!(matches!(lab.build_v(2, 0), Err(Error::Input(_))));
    assert!(matches!(lab.build_v(3, 1), Err(Error::Input(_))));
    assert!(matches!(lab.build_xbar(3, 0), Err(Error::Input(_))));
    assert!(matches!(lab.build_zbar(1, 1), Err(Error::Input(_))));
    assert!(lab.v_in_range(3, 0));
    assert!(!lab.v_in_range(5, 0));
    assert!(B3Lab::with_engine(2, Engine::symplectic(1)).is_err());
    let zero = FreeElement::zero(lab.signature());
    assert!(matches!(lab.candidate(CandidateKind::Solved, 1, 0, zero), Err(Error::Precondition(_))));
    assert!(matches!(lab.candidate(CandidateKind::Solved, 1, 0, lab.x(1)), Err(Error::Precondition(_))));
}

#[test]
fn theta_image_of_omega() {
    let probe = ThetaProbe::new(2).unwrap();
    let sig = probe.target();
    let z = |i| FreeElement::odd_gen(sig, i);
    let e = FreeElement::gen(sig, 0);
    let f = FreeElement::gen(sig, 1);
    let expect = e
        .multiply(&z(0))
        .unwrap()
        .multiply(&z(3))
        .unwrap()
        .add(&f.multiply(&z(1)).unwrap().multiply(&z(3)).unwrap())
        .unwrap()
        .add(&z(2).multiply(&z(4)).unwrap())
        .unwrap();
    assert_eq!(probe.apply(&omega_element(2).unwrap()).unwrap(), expect);
}

#[test]
fn theta_certifies_the_first_vectors() {
    let lab = B3Lab::new(2).unwrap();
    let probe = ThetaProbe::new(2).unwrap();
    let v = lab.build_v(1, 0).unwrap();
    let xb = lab.build_xbar(1, 0).unwrap();
    let rv = exact_ratio(&probe.apply(&v.element).unwrap(), &probe.v_shape(1, 0).unwrap()).unwrap();
    let rx = exact_ratio(&probe.apply(&xb.element).unwrap(), &probe.xbar_shape(1, 0).unwrap()).unwrap();
    assert!(!rv.is_zero() && !rx.is_zero());
    assert!(probe.escapes_l4(&v.element).unwrap());
    assert!(probe.escapes_l4(&xb.element).unwrap());
    assert!(!probe.escapes_l4(&lab.x(1).bracket(&lab.x(2)).unwrap().bracket(&lab.x(1).bracket(&lab.x(3)).unwrap()).unwrap()).unwrap());
}

#[test]
fn xbar_is_nonzero_but_dies_modulo_omega() {
    let lab = B3Lab::new(2).unwrap();
    let xb = lab.build_xbar(1, 0).unwrap();
    assert_eq!((xb.degree, xb.weight.clone()), (3, vec![1, 0]));
    assert!(!lab.class_is_zero(&xb.element, None).unwrap());
    assert!(lab.class_is_zero(&xb.element, Some(lab.omega_ideal())).unwrap());
    for l in 1..=4 {
        assert!(lab.class_is_zero(&lab.partial(l, &xb.element).unwrap(), None).unwrap());
    }
}

#[test]
fn ybar_derivatives_match_the_table() {
    let lab = B3Lab::new(2).unwrap();
    let xb = lab.build_xbar(1, 0).unwrap();
    let yb = lab.build_ybar(1, 0).unwrap();
    assert_eq!((yb.degree, yb.weight.clone()), (4, vec![1, 1]));
    let targets = lab.ybar_derivative_targets(&xb.element, 1, 0).unwrap();
    for l in 1..=4 {
        let got = lab.partial(l, &yb.element).unwrap();
        assert_eq!(lab.relation(&got, &targets[l - 1], None).unwrap(), Relation::Equal, "l={l}");
    }
}

#[test]
fn zbar_derivatives_match_the_table_up_to_one_scalar() {
    let lab = B3Lab::new(2).unwrap();
    let xb = lab.build_xbar(1, 0).unwrap();
    let zb = lab.build_zbar(1, 0).unwrap();
    let targets = lab.zbar_derivative_targets(&xb.element, 1, 0).unwrap();
    let rels: Vec<Relation> = (1..=4).map(|l| lab.relation(&lab.partial(l, &zb.element).unwrap(), &targets[l - 1], None).unwrap()).collect();
    assert!(matches!(rels[0], Relation::Equal | Relation::Proportional(_)));
    assert!(rels.iter().all(|r| *r == rels[0]), "{rels:?}");
}

#[test]
fn solution_spaces_are_lines() {
    let lab = B3Lab::new(2).unwrap();
    let v = lab.build_v(1, 0).unwrap();
    let sols = lab.solve_distinguished(&v.weight, v.degree, &DerivativeRule::Vanish, None).unwrap();
    assert_eq!(sols.len(), 1);
    assert_ne!(lab.relation(&v.element, &sols[0].element, None).unwrap(), Relation::Different);

    let xb = lab.build_xbar(1, 0).unwrap();
    let yb = lab.build_ybar(1, 0).unwrap();
    let rule = DerivativeRule::Prescribed(lab.ybar_derivative_targets(&xb.element, 1, 0).unwrap());
    let sols = lab.solve_distinguished(&yb.weight, yb.degree, &rule, None).unwrap();
    assert_eq!(sols.len(), 1);
    assert_ne!(lab.relation(&yb.element, &sols[0].element, None).unwrap(), Relation::Different);

    assert!(lab.solve_distinguished(&[4, 4], 3, &DerivativeRule::Free, None).unwrap().is_empty());
    assert!(lab.solve_distinguished(&[1, 0], 1, &DerivativeRule::Free, None).unwrap().is_empty());
    assert!(lab.solve_distinguished(&[1], 3, &DerivativeRule::Free, None).is_err());
}

#[test]
fn first_lemma_elements_lie_in_l4() {
    let lab = B3Lab::new(2).unwrap();
    for m in 1..=4 {
        assert!(lab.class_is_zero(&lab.alpha(1, 0, m).unwrap(), None).unwrap(), "m={m}");
    }
    let a = lab.alpha(3, 1, 2).unwrap();
    assert!(!a.is_zero());
    assert!(lab.class_is_zero(&a, None).unwrap());
    let gap = lab.phi_psi_gap(3, 1, 1).unwrap();
    assert!(!gap.is_zero());
    assert!(lab.class_is_zero(&gap, None).unwrap());
}

#[test]
fn omega_switch_examples() {
    let lab = B3Lab::new(2).unwrap();
    let e = lab.omega_switch(&lab.x(1), 1, 2, 2).unwrap();
    assert!(!e.is_zero());
    assert!(lab.class_is_zero(&e, None).unwrap());
    assert!(lab.omega_switch(&lab.x(1), 2, 2, 2).unwrap().is_zero());
    assert!(lab.omega_switch(&lab.x(1), 3, 1, 2).is_err());
}

#[test]
fn phi_and_psi_are_linear() {
    let lab = B3Lab::new(2).unwrap();
    let v = p_form(2, 1, 2);
    let twice = lab.phi(0, &PolyForm::one(4), &v.scale(&q(2))).unwrap();
    assert_eq!(twice, lab.phi(0, &PolyForm::one(4), &v).unwrap().scale(&q(2)));
    assert!(lab.psi(1, &PolyForm::zero(4)).unwrap().is_zero());
}
