//! Kronecker phase alignment and the search for `s` with `ã(s) ≈ h_ψ(a)`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::evaluate_series;
use crate::characters::{Character, CharacterError, Provenance};
use crate::json::ComplexJson;
use crate::semigroup::{Mode, SemigroupElement};
use crate::weights::WeightFn;
use crate::FloatElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("betas and targets differ in length or are empty")]
    Dimension,
    #[error("beta {0} is not positive")]
    NonPositiveBeta(usize),
    #[error("target {0} is not unimodular")]
    NotUnimodular(usize),
    #[error("theta must be positive")]
    Theta,
    #[error("only one-dimensional embeddings are searched")]
    Dimensionality,
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("{0}")]
    Algebra(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerInstance {
    pub betas: Vec<f64>,
    pub targets: Vec<ComplexJson>,
    pub theta: f64,
    /// Maximal number of candidate `t` values examined.
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerReport {
    pub t: f64,
    /// `|e^{-iβ_κ t} − z_κ|`, recomputed.
    pub errors: Vec<f64>,
    pub success: bool,
    pub steps: u64,
}

fn phase_errors(betas: &[f64], targets: &[Complex64], t: f64) -> Vec<f64> {
    betas.iter().zip(targets).map(|(b, z)| (Complex64::from_polar(1.0, -b * t) - z).norm()).collect()
}

/// `t` with `|e^{-iβ_κ t} − z_κ| < θ` for all `κ`.
///
/// The first coordinate is matched exactly by `t₀ = −arg(z₁)/β₁`; the search
/// then walks the lattice `t₀ + 2πn/β₁` with `n = 0, 1, −1, 2, −2, …`
/// keeping the best point seen, so a larger budget never does worse.
pub fn kronecker_t(inst: &KroneckerInstance) -> Result<KroneckerReport, DensityError> {
    let k = inst.betas.len();
    if k == 0 || inst.targets.len() != k {
        return Err(DensityError::Dimension);
    }
    if !(inst.theta > 0.0) {
        return Err(DensityError::Theta);
    }
    if let Some(i) = inst.betas.iter().position(|&b| !(b > 0.0)) {
        return Err(DensityError::NonPositiveBeta(i));
    }
    let targets: Vec<Complex64> = inst.targets.iter().map(|&z| z.into()).collect();
    if let Some(i) = targets.iter().position(|z| (z.norm() - 1.0).abs() > 1e-9) {
        return Err(DensityError::NotUnimodular(i));
    }
    let period = 2.0 * PI / inst.betas[0];
    let t0 = (-targets[0].arg() / inst.betas[0]).rem_euclid(period);
    let score = |t: f64| phase_errors(&inst.betas, &targets, t).into_iter().fold(0.0, f64::max);
    let mut best = (score(t0), t0);
    let mut steps = 1u64;
    let mut n = 1i64;
    while best.0 >= inst.theta && steps < inst.budget.max(1) {
        for t in [t0 + n as f64 * period, t0 - n as f64 * period] {
            if steps >= inst.budget {
                break;
            }
            steps += 1;
            let e = score(t);
            if e < best.0 {
                best = (e, t);
            }
        }
        n += 1;
    }
    let errors = phase_errors(&inst.betas, &targets, best.1);
    Ok(KroneckerReport { t: best.1, success: best.0 < inst.theta, errors, steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOptions {
    /// Budget in term evaluations of the truncated series.
    pub budget: u64,
    pub seed: u64,
    /// Defaults to `40 / min β`.
    pub sigma_max: Option<f64>,
    /// Range `[−t_range, t_range]` of random Newton starts.
    pub t_range: f64,
    pub newton_iters: u32,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions { budget: 1_000_000, seed: 0, sigma_max: None, t_range: 1e4, newton_iters: 60 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    FromS,
    ClosedForm,
    Kronecker,
    Newton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySearchReport {
    pub s: ComplexJson,
    /// `|ã(s) − h_ψ(a)|` over the full support, recomputed.
    pub achieved_error: f64,
    pub target_value: ComplexJson,
    pub gamma_used: Vec<SemigroupElement>,
    /// ℓ¹ mass of `a` outside `Γ`.
    pub tail_error: f64,
    pub theta: f64,
    /// `achieved_error < 3θ`.
    pub success: bool,
    pub strategy: Strategy,
    pub evaluations: u64,
}

struct Truncated {
    lambdas: Vec<f64>,
    coeffs: Vec<Complex64>,
    target: Complex64,
}

impl Truncated {
    fn value(&self, s: Complex64) -> Complex64 {
        self.lambdas.iter().zip(&self.coeffs).map(|(l, c)| c * (-s * l).exp()).sum::<Complex64>() - self.target
    }

    fn value_and_derivative(&self, s: Complex64) -> (Complex64, Complex64) {
        let mut f = -self.target;
        let mut df = Complex64::new(0.0, 0.0);
        for (l, c) in self.lambdas.iter().zip(&self.coeffs) {
            let term = c * (-s * l).exp();
            f += term;
            df -= term * l;
        }
        (f, df)
    }
}

struct Incumbent {
    err: f64,
    s: Complex64,
    strategy: Strategy,
}

impl Incumbent {
    /// Lowest error, then lowest `σ`, then lowest `|t|`.
    fn offer(&mut self, err: f64, s: Complex64, strategy: Strategy) {
        let key = |e: f64, z: Complex64| (e, z.re, z.im.abs());
        let (a, b) = (key(err, s), key(self.err, self.s));
        if a.0 < b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2)) {
            *self = Incumbent { err, s, strategy };
        }
    }
}

/// Searches `s ∈ ℍ̄` with `|ã(s) − h_ψ(a)| < 3θ`.
///
/// `Γ` is the shortest magnitude-ordered prefix of the support with ℓ¹ tail
/// below `θ`; the search drives `|ã_Γ(s) − h_ψ(a_Γ)|` below `θ`. Closed
/// forms cover `ψ = ψ_{s₀}` and single-generator supports, a Kronecker walk
/// covers characters whose moduli share one `σ`, and damped complex Newton
/// from seeded random starts covers the rest. The reported error is
/// recomputed from scratch.
pub fn approximate_functional(
    a: &FloatElement,
    psi: &Character,
    theta: f64,
    opts: &DensityOptions,
) -> Result<DensitySearchReport, DensityError> {
    if !(theta > 0.0) {
        return Err(DensityError::Theta);
    }
    let basis = a.basis().clone();
    if basis.dim() != 1 {
        return Err(DensityError::Dimensionality);
    }
    let target_value = psi.functional(a)?;

    let graded = a.graded_support();
    let total: f64 = graded.iter().map(|(_, _, c)| c.norm()).sum();
    let mut kept = 0;
    let mut tail = total;
    while tail >= theta && kept < graded.len() {
        tail -= graded[kept].2.norm();
        kept += 1;
    }
    let tail_error: f64 = graded[kept..].iter().map(|(_, _, c)| c.norm()).sum();
    let gamma: Vec<SemigroupElement> = graded[..kept].iter().map(|(_, k, _)| (*k).clone()).collect();
    let mut target_gamma = Complex64::new(0.0, 0.0);
    for (_, k, c) in &graded[..kept] {
        target_gamma += **c * psi.apply(k)?;
    }
    let problem = Truncated {
        lambdas: graded[..kept].iter().map(|(m, _, _)| *m).collect(),
        coeffs: graded[..kept].iter().map(|(_, _, c)| **c).collect(),
        target: target_gamma,
    };

    let min_beta = basis
        .generators()
        .iter()
        .map(|g| g.value[0])
        .filter(|&b| b > 0.0)
        .fold(f64::INFINITY, f64::min);
    let sigma_max = opts.sigma_max.unwrap_or(40.0 / min_beta);
    let mut evals = 0u64;
    let cost = problem.lambdas.len().max(1) as u64;
    let mut best = Incumbent { err: f64::INFINITY, s: Complex64::new(sigma_max, 0.0), strategy: Strategy::Newton };
    let try_point = |s: Complex64, strategy: Strategy, best: &mut Incumbent, evals: &mut u64| {
        *evals += cost;
        best.offer(problem.value(s).norm(), s, strategy);
    };
    try_point(Complex64::new(sigma_max, 0.0), Strategy::Newton, &mut best, &mut evals);

    // generators actually used by Γ
    let used: BTreeSet<u32> = match basis.mode() {
        Mode::Free => gamma.iter().flat_map(|e| e.exponents().into_iter().flat_map(|m| m.keys().copied())).collect(),
        Mode::Embedded => BTreeSet::new(),
    };

    if let Provenance::FromS { s } = psi.provenance() {
        try_point(s[0].into(), Strategy::FromS, &mut best, &mut evals);
    } else if basis.mode() == Mode::Free {
        let betas: Vec<f64> = used.iter().map(|&id| basis.generator(id).expect("own id").value[0]).collect();
        let zs: Vec<Complex64> = used.iter().map(|id| psi.values()[id]).collect();
        if zs.len() == 1 {
            let s = if zs[0].norm() == 0.0 { Complex64::new(sigma_max, 0.0) } else { -zs[0].ln() / betas[0] };
            try_point(s, Strategy::ClosedForm, &mut best, &mut evals);
        } else if !zs.is_empty() && zs.iter().all(|z| z.norm() > 0.0) {
            let sigmas: Vec<f64> = zs.iter().zip(&betas).map(|(z, b)| -z.norm().ln() / b).collect();
            let sigma = sigmas[0];
            if sigmas.iter().all(|x| (x - sigma).abs() <= 1e-12 * sigma.abs().max(1.0)) {
                // walk the lattice matching the first phase exactly, scoring by value
                let period = 2.0 * PI / betas[0];
                let t0 = -zs[0].arg() / betas[0];
                let mut n = 0i64;
                while best.err >= theta && evals + 2 * cost <= opts.budget / 2 {
                    for t in [t0 + n as f64 * period, t0 - n as f64 * period] {
                        try_point(Complex64::new(sigma.max(0.0), t), Strategy::Kronecker, &mut best, &mut evals);
                    }
                    n += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let newton_cost = cost * 2;
    // large |t| loses phase accuracy
    let t_limit = 10.0 * opts.t_range;
    let mut start = Some(best.s);
    while best.err >= theta && evals + newton_cost <= opts.budget {
        let mut s = start.take().unwrap_or_else(|| {
            Complex64::new(rng.gen_range(0.0..=sigma_max.min(10.0 / min_beta)), rng.gen_range(-opts.t_range..=opts.t_range))
        });
        for _ in 0..opts.newton_iters {
            if evals + newton_cost > opts.budget {
                break;
            }
            let (f, df) = problem.value_and_derivative(s);
            evals += newton_cost;
            best.offer(f.norm(), s, Strategy::Newton);
            if f.norm() < theta * 1e-3 || df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            let mut damp = 1.0;
            let mut moved = false;
            for _ in 0..8 {
                let mut next = s - step * damp;
                next.re = next.re.clamp(0.0, sigma_max);
                next.im = next.im.clamp(-t_limit, t_limit);
                evals += cost;
                if problem.value(next).norm() < f.norm() {
                    s = next;
                    moved = true;
                    break;
                }
                damp *= 0.5;
            }
            if !moved {
                break;
            }
        }
        try_point(s, Strategy::Newton, &mut best, &mut evals);
    }

    let achieved = evaluate_series(a, &[best.s], &WeightFn::One, 0.0)
        .map_err(|e| DensityError::Algebra(e.to_string()))?
        .value;
    let achieved_error = (achieved - target_value).norm();
    Ok(DensitySearchReport {
        s: best.s.into(),
        achieved_error,
        target_value: target_value.into(),
        gamma_used: gamma,
        tail_error,
        theta,
        success: achieved_error < 3.0 * theta,
        strategy: best.strategy,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{LogIntegers, SemigroupBasis};
    use std::collections::BTreeMap;

    fn inst(betas: &[f64], targets: &[Complex64], theta: f64, budget: u64) -> KroneckerInstance {
        KroneckerInstance { betas: betas.to_vec(), targets: targets.iter().map(|&z| z.into()).collect(), theta, budget }
    }

    #[test]
    fn kronecker_closed_form() {
        let r = kronecker_t(&inst(&[1.0], &[Complex64::new(-1.0, 0.0)], 1e-9, 10)).unwrap();
        assert!((r.t - PI).abs() < 1e-15);
        assert!(r.errors[0] < 1e-15 && r.success);
        let r = kronecker_t(&inst(&[2.0], &[Complex64::new(0.0, 1.0)], 1e-9, 10)).unwrap();
        assert!(((r.t + PI / 4.0).rem_euclid(PI)).abs() < 1e-15);
        assert!(r.errors[0] < 1e-15);
    }

    #[test]
    fn kronecker_two_logs() {
        let betas = [2f64.ln(), 3f64.ln()];
        let r = kronecker_t(&inst(&betas, &[Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)], 1e-2, 1_000_000)).unwrap();
        assert!(r.success);
        // independent re-evaluation
        for (b, z) in betas.iter().zip([-1.0, 1.0]) {
            assert!((Complex64::from_polar(1.0, -b * r.t) - z).norm() < 1e-2);
        }
        let small = kronecker_t(&inst(&betas, &[Complex64::new(0.6, 0.8), Complex64::new(0.0, -1.0)], 1e-6, 50)).unwrap();
        let large = kronecker_t(&inst(&betas, &[Complex64::new(0.6, 0.8), Complex64::new(0.0, -1.0)], 1e-6, 5000)).unwrap();
        let worst = |r: &KroneckerReport| r.errors.iter().cloned().fold(0.0, f64::max);
        assert!(worst(&large) <= worst(&small));
        assert!(kronecker_t(&inst(&betas, &[Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)], 1e-2, 10)).is_err());
    }

    #[test]
    fn from_s_character_is_exact() {
        let li = LogIntegers::new(30);
        let terms = [(2u64, 1.0), (3, -2.0), (10, 0.5)].map(|(n, c)| (li.element(n).unwrap(), Complex64::new(c, 0.0)));
        let a = FloatElement::from_terms(li.basis().clone(), terms).unwrap();
        let psi = Character::from_s(li.basis().clone(), &[Complex64::new(0.3, 7.0)]).unwrap();
        let r = approximate_functional(&a, &psi, 1e-3, &DensityOptions::default()).unwrap();
        assert_eq!(r.strategy, Strategy::FromS);
        assert!(r.achieved_error < 1e-14);
    }

    #[test]
    fn single_generator_closed_form() {
        let n = SemigroupBasis::naturals();
        let a = FloatElement::delta(n.clone(), SemigroupElement::free([(0, 1)]), Complex64::new(1.0, 0.0));
        let z = Complex64::new(0.3, -0.4);
        let psi = Character::explicit(n, BTreeMap::from([(0, z)])).unwrap();
        let r = approximate_functional(&a, &psi, 1e-6, &DensityOptions::default()).unwrap();
        let s: Complex64 = r.s.into();
        assert!((s - (-z.ln())).norm() < 1e-15);
        assert!(r.achieved_error < 1e-15);
    }

    #[test]
    fn consistent_moduli_use_kronecker() {
        let li = LogIntegers::new(10);
        let terms = [(2u64, 1.0), (3, 1.0), (6, 1.0)].map(|(n, c)| (li.element(n).unwrap(), Complex64::new(c, 0.0)));
        let a = FloatElement::from_terms(li.basis().clone(), terms).unwrap();
        let mut values: BTreeMap<u32, Complex64> = BTreeMap::new();
        values.insert(0, Complex64::new(-0.5, 0.0));
        values.insert(1, Complex64::new(1.0 / 3.0, 0.0));
        for g in li.basis().generators().iter().skip(2) {
            values.insert(g.id, Complex64::new(0.0, 0.0));
        }
        let psi = Character::explicit(li.basis().clone(), values).unwrap();
        let r = approximate_functional(&a, &psi, 1e-2, &DensityOptions::default()).unwrap();
        assert!(r.success, "{r:?}");
        let s: Complex64 = r.s.into();
        assert!((s.re - 1.0).abs() < 1e-12);
        let direct = evaluate_series(&a, &[s], &WeightFn::One, 0.0).unwrap().value;
        assert!(((direct - psi.functional(&a).unwrap()).norm() - r.achieved_error).abs() < 1e-12);
    }

    #[test]
    fn tiny_budget_reports_best_found() {
        let li = LogIntegers::new(30);
        let terms = [(1u64, 0.2), (2, 1.0), (3, -1.0), (5, 0.7), (6, 0.4)]
            .map(|(n, c)| (li.element(n).unwrap(), Complex64::new(c, 0.1)));
        let a = FloatElement::from_terms(li.basis().clone(), terms).unwrap();
        let values = li.basis().generators().iter().map(|g| (g.id, Complex64::from_polar(0.9, g.id as f64))).collect();
        let psi = Character::explicit(li.basis().clone(), values).unwrap();
        let opts = DensityOptions { budget: 10, ..DensityOptions::default() };
        let r = approximate_functional(&a, &psi, 1e-4, &opts).unwrap();
        assert!(r.achieved_error.is_finite());
        assert!(r.evaluations <= 10 + 5);
    }
}
