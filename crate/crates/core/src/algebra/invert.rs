use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraElement, AlgebraError};
use crate::scalar::Coeff;
use crate::semigroup::SemigroupElement;
use crate::weights::WeightFn;

/// Default cap on the number of graded elements visited by [`graded_invert`].
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannCertificate {
    /// `‖a − a(0)ε‖_w / |a(0)|`.
    pub q: f64,
    /// Highest power `J` kept in the series.
    pub terms: usize,
    /// `q^{J+1} / ((1 − q)|a(0)|)`, a bound on the weighted norm of the discarded tail.
    pub tail_bound: f64,
}

/// Inverse via the Neumann series `a(0)^{-1} Σ_j (ε − a/a(0))^{∗j}`.
///
/// Applies only when `q = ‖a − a(0)ε‖_w / |a(0)| < 1`; a failure here says the
/// series does not converge in norm, not that `a` is singular.
pub fn neumann_invert<C: Coeff>(
    a: &AlgebraElement<C>,
    w: &WeightFn,
    tol: f64,
    max_terms: usize,
) -> Result<(AlgebraElement<C>, NeumannCertificate), AlgebraError> {
    if !(tol > 0.0) {
        return Err(AlgebraError::Invalid("tolerance must be positive".into()));
    }
    let a0 = a.constant_term();
    if a0.is_exact_zero() {
        return Err(AlgebraError::Singular);
    }
    let a0_abs = a0.modulus();
    let unit = AlgebraElement::unit(a.basis().clone());
    let rest = a.sub(&unit.scale(&a0))?;
    let q = rest.weighted_norm(w) / a0_abs;
    if q >= 1.0 {
        return Err(AlgebraError::NeumannInapplicable { q });
    }
    let tail = |j: usize| q.powi(j as i32 + 1) / ((1.0 - q) * a0_abs);
    let mut terms = 0usize;
    while q > 0.0 && tail(terms) >= tol {
        terms += 1;
        if terms > max_terms {
            return Err(AlgebraError::MaxTermsExceeded { needed: terms, max: max_terms });
        }
    }
    let inv_a0 = C::one() / a0;
    let x = rest.scale(&-inv_a0.clone());
    let mut power = unit.clone();
    power.truncation = a.truncation;
    let mut sum = power.clone();
    for _ in 0..terms {
        power = power.convolve(&x)?;
        sum = sum.add(&power)?;
    }
    let tail_bound = if q == 0.0 { 0.0 } else { tail(terms) };
    Ok((sum.scale(&inv_a0), NeumannCertificate { q, terms, tail_bound }))
}

#[derive(Debug, Clone, PartialEq)]
struct GradedKey {
    mag: f64,
    elem: SemigroupElement,
}

impl Eq for GradedKey {}

impl PartialOrd for GradedKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GradedKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mag.total_cmp(&other.mag).then_with(|| self.elem.cmp(&other.elem))
    }
}

/// The unique `b` supported in `{|λ|₁ ≤ T}` with `(a ∗ b)(λ) = ε(λ)` there.
///
/// Elements of the monoid generated by the support of `a` are visited in
/// increasing magnitude (ties broken by the element order) and
/// `b(λ) = (ε(λ) − Σ_{λ'≠0} a(λ') b(λ − λ')) / a(0)`.
pub fn graded_invert<C: Coeff>(a: &AlgebraElement<C>, t: f64, cap: usize) -> Result<AlgebraElement<C>, AlgebraError> {
    let basis = a.basis().clone();
    let zero = basis.zero();
    let a0 = a.constant_term();
    if a0.is_exact_zero() {
        return Err(AlgebraError::Singular);
    }
    let inv_a0 = C::one() / a0;
    let steps: Vec<(f64, &SemigroupElement, &C)> =
        a.graded_support().into_iter().filter(|(_, k, _)| !k.is_zero()).collect();
    let limit = t * (1.0 + 1e-12);

    let mut pending: BTreeMap<GradedKey, C> = BTreeMap::new();
    pending.insert(GradedKey { mag: 0.0, elem: zero }, C::zero());
    let mut out: BTreeMap<SemigroupElement, C> = BTreeMap::new();
    let mut visited = 0usize;
    while let Some((key, acc)) = pending.pop_first() {
        visited += 1;
        if visited > cap {
            return Err(AlgebraError::EnumerationCap { cap });
        }
        let eps = if key.elem.is_zero() { C::one() } else { C::zero() };
        let b = (eps - acc) * inv_a0.clone();
        if b.is_exact_zero() {
            continue;
        }
        for &(m, step, coeff) in &steps {
            if key.mag + m > limit {
                break;
            }
            let next = key.elem.checked_add(step)?;
            let mag = basis.magnitude(&next);
            if mag > limit {
                continue;
            }
            let slot = pending.entry(GradedKey { mag, elem: next }).or_insert_with(C::zero);
            *slot = slot.clone() + coeff.clone() * b.clone();
        }
        out.insert(key.elem, b);
    }
    Ok(AlgebraElement::from_parts(basis, out, Some(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, ComplexQ, Q};
    use crate::semigroup::{LogIntegers, SemigroupBasis};
    use crate::{ExactElement, FloatElement};
    use num_complex::Complex64 as C64;
    use num_traits::Zero;

    fn at(n: u64) -> SemigroupElement {
        SemigroupElement::free([(0, n)])
    }

    #[test]
    fn neumann_examples() {
        let two = FloatElement::from_naturals(vec![C64::new(2.0, 0.0)]);
        let (inv, cert) = neumann_invert(&two, &WeightFn::One, 1e-12, 100).unwrap();
        assert_eq!(cert.q, 0.0);
        assert_eq!(inv.coeff(&at(0)), C64::new(0.5, 0.0));

        let a = FloatElement::from_naturals(vec![C64::new(2.0, 0.0), C64::new(-1.0, 0.0)]);
        let (inv, cert) = neumann_invert(&a, &WeightFn::One, 1e-13, 200).unwrap();
        assert_eq!(cert.q, 0.5);
        assert!(cert.tail_bound < 1e-13);
        for n in 0..30 {
            assert!((inv.coeff(&at(n)).re - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
        }
        let resid = a.convolve(&inv).unwrap().sub(&FloatElement::unit(a.basis().clone())).unwrap();
        assert!(resid.weighted_norm(&WeightFn::One) < 1e-13 * a.weighted_norm(&WeightFn::One));

        let bad = FloatElement::from_naturals(vec![C64::new(1.0, 0.0), C64::new(1.2, 0.0)]);
        assert!(matches!(
            neumann_invert(&bad, &WeightFn::One, 1e-9, 100),
            Err(AlgebraError::NeumannInapplicable { q }) if (q - 1.2).abs() < 1e-12
        ));
        assert!(matches!(neumann_invert(&a, &WeightFn::One, 1e-13, 5), Err(AlgebraError::MaxTermsExceeded { .. })));
    }

    #[test]
    fn graded_geometric_series_is_exact() {
        let a = ExactElement::exact_naturals(vec![qi(2), qi(-1)]);
        let inv = graded_invert(&a, 20.0, DEFAULT_ENUMERATION_CAP).unwrap();
        for n in 0..=20u64 {
            assert_eq!(inv.coeff(&at(n)).re, q(1, 1 << (n + 1)));
        }
        assert!(inv.coeff(&at(21)).re.is_zero());
    }

    #[test]
    fn graded_inverse_of_truncated_ones() {
        // 1/(1 + z + z^2 + ...) = 1 - z as formal series
        let a = ExactElement::exact_naturals(vec![qi(1); 11]);
        let inv = graded_invert(&a, 10.0, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(inv.support_len(), 2);
        assert_eq!(inv.coeff(&at(0)).re, qi(1));
        assert_eq!(inv.coeff(&at(1)).re, qi(-1));
        let unit = ExactElement::unit(SemigroupBasis::naturals());
        assert_eq!(graded_invert(&unit, 5.0, 100).unwrap().coeffs(), unit.coeffs());
    }

    #[test]
    fn graded_inverse_gives_mobius() {
        let li = LogIntegers::new(100);
        let ones = (1..=100u64).map(|n| (li.element(n).unwrap(), ComplexQ::new(qi(1), Q::zero())));
        let a = ExactElement::from_terms(li.basis().clone(), ones).unwrap();
        let inv = graded_invert(&a, 100f64.ln(), DEFAULT_ENUMERATION_CAP).unwrap();
        let mu = |n: u64| inv.coeff(&li.element(n).unwrap()).re;
        assert_eq!(mu(2), qi(-1));
        assert_eq!(mu(4), qi(0));
        assert_eq!(mu(6), qi(1));
        assert_eq!(mu(30), qi(-1));
    }

    #[test]
    fn singular_and_cap_errors() {
        let a = ExactElement::exact_naturals(vec![qi(0), qi(1)]);
        assert_eq!(graded_invert(&a, 5.0, 100), Err(AlgebraError::Singular));
        let b = ExactElement::exact_naturals(vec![qi(1), qi(1)]);
        assert_eq!(graded_invert(&b, 50.0, 10), Err(AlgebraError::EnumerationCap { cap: 10 }));
    }

    #[test]
    fn inverse_stays_in_sub_semigroup() {
        // a supported on the sub-monoid generated by log 2 inside log N
        let li = LogIntegers::new(10);
        let terms = [(1u64, 3i64), (2, 1), (8, -1)]
            .map(|(n, c)| (li.element(n).unwrap(), C64::new(c as f64, 0.0)));
        let a = FloatElement::from_terms(li.basis().clone(), terms).unwrap();
        let inv = graded_invert(&a, 200f64.ln(), DEFAULT_ENUMERATION_CAP).unwrap();
        for k in inv.coeffs().keys() {
            assert!(k.exponents().unwrap().keys().all(|&id| id == 0));
        }
    }

    #[test]
    fn graded_and_neumann_agree() {
        let a = FloatElement::from_naturals(vec![C64::new(3.0, 1.0), C64::new(-1.0, 0.5), C64::new(0.25, 0.0)]);
        let (n, _) = neumann_invert(&a, &WeightFn::One, 1e-14, 500).unwrap();
        let g = graded_invert(&a, 25.0, DEFAULT_ENUMERATION_CAP).unwrap();
        for k in 0..=25 {
            assert!((n.coeff(&at(k)) - g.coeff(&at(k))).norm() < 1e-12);
        }
    }
}
