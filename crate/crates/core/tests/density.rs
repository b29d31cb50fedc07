use std::collections::BTreeMap;
use std::f64::consts::PI;

use forge_core::algebra::evaluate_series;
use forge_core::characters::Character;
use forge_core::density::{approximate_functional, kronecker_t, DensityOptions, KroneckerInstance, Strategy};
use forge_core::semigroup::{LogIntegers, SemigroupBasis, SemigroupElement};
use forge_core::{FloatElement, WeightFn};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn inst(betas: &[f64], targets: &[Complex64], theta: f64, budget: u64) -> KroneckerInstance {
    KroneckerInstance { betas: betas.to_vec(), targets: targets.iter().map(|&z| z.into()).collect(), theta, budget }
}

fn recheck(betas: &[f64], targets: &[Complex64], t: f64) -> Vec<f64> {
    betas.iter().zip(targets).map(|(b, z)| (Complex64::from_polar(1.0, -b * t) - z).norm()).collect()
}

#[test]
fn kronecker_single_generator() {
    let r = kronecker_t(&inst(&[1.0], &[c(-1.0, 0.0)], 1e-9, 10)).unwrap();
    assert!((r.t.rem_euclid(2.0 * PI) - PI).abs() < 1e-14);
    assert!(r.errors[0] < 1e-15);

    let r = kronecker_t(&inst(&[2.0], &[c(0.0, 1.0)], 1e-9, 10)).unwrap();
    assert!((r.t.rem_euclid(PI) - 3.0 * PI / 4.0).abs() < 1e-14);
    assert!(recheck(&[2.0], &[c(0.0, 1.0)], r.t)[0] < 1e-15);
}

#[test]
fn kronecker_log_two_log_three() {
    let betas = [2f64.ln(), 3f64.ln()];
    let targets = [c(-1.0, 0.0), c(1.0, 0.0)];
    let r = kronecker_t(&inst(&betas, &targets, 1e-2, 1_000_000)).unwrap();
    assert!(r.success);
    let errs = recheck(&betas, &targets, r.t);
    assert!(errs.iter().all(|&e| e < 1e-2));
    for (a, b) in errs.iter().zip(&r.errors) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn kronecker_budget_is_monotone() {
    let betas = [2f64.ln(), 3f64.ln(), 5f64.ln()];
    let targets = [c(0.0, 1.0), c(-1.0, 0.0), Complex64::from_polar(1.0, 2.0)];
    let mut last = f64::INFINITY;
    for budget in [1, 10, 100, 1000, 10_000] {
        let r = kronecker_t(&inst(&betas, &targets, 1e-6, budget)).unwrap();
        let worst = r.errors.iter().cloned().fold(0.0, f64::max);
        assert!(worst <= last);
        last = worst;
    }
}

fn reported_error_holds(a: &FloatElement, psi: &Character, s: Complex64, reported: f64) {
    let hs = evaluate_series(a, &[s], &WeightFn::One, 1.0).unwrap().value;
    assert!(((hs - psi.functional(a).unwrap()).norm() - reported).abs() <= 1e-12);
}

#[test]
fn character_from_a_point_is_recovered() {
    let li = LogIntegers::new(30);
    let a = FloatElement::from_terms(li.basis().clone(), [2, 3, 10, 21].map(|n| (li.element(n).unwrap(), c(1.0, -0.5)))).unwrap();
    let s0 = c(0.7, 3.1);
    let psi = Character::from_s(li.basis().clone(), &[s0]).unwrap();
    let r = approximate_functional(&a, &psi, 1e-3, &DensityOptions::default()).unwrap();
    assert!(r.success);
    assert_eq!(r.strategy, Strategy::FromS);
    assert!(r.achieved_error < 1e-12);
}

#[test]
fn naturals_delta_one_closed_form() {
    let basis = SemigroupBasis::naturals();
    let a = FloatElement::from_terms(basis.clone(), [(SemigroupElement::free([(0, 1)]), c(1.0, 0.0))]).unwrap();
    let z = c(0.3, -0.4);
    let psi = Character::explicit(basis.clone(), BTreeMap::from([(0, z)])).unwrap();
    let r = approximate_functional(&a, &psi, 1e-2, &DensityOptions::default()).unwrap();
    let s: Complex64 = r.s.into();
    assert!((s - (-z.ln())).norm() < 1e-12);
    assert!(r.achieved_error < 1e-15);
    reported_error_holds(&a, &psi, s, r.achieved_error);
}

#[test]
fn log_integers_two_three_six() {
    let li = LogIntegers::new(6);
    let a = FloatElement::from_terms(li.basis().clone(), [2, 3, 6].map(|n| (li.element(n).unwrap(), c(1.0, 0.0)))).unwrap();
    let values = BTreeMap::from([(0, c(-0.5, 0.0)), (1, c(1.0 / 3.0, 0.0)), (2, c(0.2, 0.0))]);
    let psi = Character::explicit(li.basis().clone(), values).unwrap();
    let theta = 1e-2;
    let r = approximate_functional(&a, &psi, theta, &DensityOptions::default()).unwrap();
    assert!(r.success);
    let s: Complex64 = r.s.into();
    assert!((s.re - 1.0).abs() < 1e-9);
    // 2^{-s} + 3^{-s} + 6^{-s} against -1/2 + 1/3 - 1/6
    let direct = (-s * 2f64.ln()).exp() + (-s * 3f64.ln()).exp() + (-s * 6f64.ln()).exp();
    assert!((direct - c(-1.0 / 3.0, 0.0)).norm() < 3.0 * theta);
    reported_error_holds(&a, &psi, s, r.achieved_error);
}

#[test]
fn density_budget_is_monotone_and_deterministic() {
    let li = LogIntegers::new(20);
    let a = FloatElement::from_terms(li.basis().clone(), [2, 3, 5, 15, 20].map(|n| (li.element(n).unwrap(), c(0.5, 0.25)))).unwrap();
    let values = BTreeMap::from([(0, c(0.1, 0.6)), (1, c(-0.5, 0.1)), (2, c(0.3, -0.3)), (3, c(0.0, 0.9)), (4, c(-0.2, -0.2)), (5, c(0.4, 0.0)), (6, c(0.0, 0.1)), (7, c(0.7, 0.0))]);
    let psi = Character::explicit(li.basis().clone(), values).unwrap();
    let mut last = f64::INFINITY;
    for budget in [100, 1_000, 10_000, 100_000] {
        let opts = DensityOptions { budget, seed: 3, ..DensityOptions::default() };
        let r = approximate_functional(&a, &psi, 1e-9, &opts).unwrap();
        assert!(r.achieved_error <= last);
        last = r.achieved_error;
        let again = approximate_functional(&a, &psi, 1e-9, &opts).unwrap();
        assert_eq!(r.achieved_error.to_bits(), again.achieved_error.to_bits());
        reported_error_holds(&a, &psi, r.s.into(), r.achieved_error);
    }
}
