//! Multiplicative functions on a free multiplicative semigroup generated by
//! a prime system: Dirichlet convolution, Euler factors, prime-local
//! inversion and the local/global decomposition of `a = (∗ a_p) ∗ b ∗ h`.
//!
//! A function is stored by its prime-power values `f(p^k)` for `p^k ≤ x`;
//! everything else follows from multiplicativity and `f(1) = 1`.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{disk_certificate, DiskCertificate};
use crate::scalar::{format_q, parse_q, Coeff, Q};
use crate::sieve;
use crate::weights::WeightFn;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithmeticError {
    #[error("functions live on different prime systems")]
    SystemMismatch,
    #[error("primes must be increasing and > 1, truncation x must be >= 1")]
    BadSystem,
    #[error("{0} is not a prime of the system")]
    UnknownPrime(f64),
    #[error("bad value {0:?}")]
    BadValue(String),
    #[error("no p0 <= x/2 satisfies both estimates; blocked at prime {blocking_prime}")]
    Unachievable { blocking_prime: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeSpec {
    /// Rational primes with integer truncation.
    Rational { x: u64 },
    Beurling { primes: Vec<f64>, x: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSystem {
    spec: PrimeSpec,
    primes: Vec<f64>,
    integers: Option<Vec<u64>>,
    depth: Vec<u32>,
    x: f64,
}

/// An element `n = Π p_i^{k_i} ≤ x` of the semigroup.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub value: f64,
    /// Integer value for rational systems.
    pub n: Option<u64>,
    pub factors: Vec<(usize, u32)>,
}

impl PrimeSystem {
    pub fn rational(x: u64) -> Arc<Self> {
        Self::new(PrimeSpec::Rational { x: x.max(1) }).expect("rational systems are valid")
    }

    pub fn beurling(primes: Vec<f64>, x: f64) -> Result<Arc<Self>, ArithmeticError> {
        Self::new(PrimeSpec::Beurling { primes, x })
    }

    pub fn new(spec: PrimeSpec) -> Result<Arc<Self>, ArithmeticError> {
        let sys = match &spec {
            PrimeSpec::Rational { x } => {
                let ints = sieve::primes_up_to(*x);
                let depth = ints
                    .iter()
                    .map(|&p| {
                        let (mut k, mut q) = (0, p);
                        while q <= *x {
                            k += 1;
                            q = match q.checked_mul(p) {
                                Some(v) => v,
                                None => break,
                            };
                        }
                        k
                    })
                    .collect();
                PrimeSystem {
                    primes: ints.iter().map(|&p| p as f64).collect(),
                    integers: Some(ints),
                    depth,
                    x: *x as f64,
                    spec: spec.clone(),
                }
            }
            PrimeSpec::Beurling { primes, x } => {
                if !(*x >= 1.0) || primes.iter().any(|&p| !(p > 1.0)) || primes.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ArithmeticError::BadSystem);
                }
                let kept: Vec<f64> = primes.iter().copied().filter(|&p| p <= *x).collect();
                let depth = kept.iter().map(|&p| ((x.ln() / p.ln()) * (1.0 + 1e-12)).floor() as u32).collect();
                PrimeSystem { primes: kept, integers: None, depth, x: *x, spec: spec.clone() }
            }
        };
        Ok(Arc::new(sys))
    }

    pub fn spec(&self) -> &PrimeSpec {
        &self.spec
    }

    pub fn primes(&self) -> &[f64] {
        &self.primes
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn is_rational(&self) -> bool {
        self.integers.is_some()
    }

    /// Largest `k` with `p_i^k ≤ x`.
    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn index_of(&self, p: f64) -> Option<usize> {
        let i = self.primes.partition_point(|&q| q < p - 1e-9 * p);
        (i < self.primes.len() && (self.primes[i] - p).abs() <= 1e-9 * p).then_some(i)
    }

    /// Exponent vector of an integer `n ≤ x` (rational systems only).
    pub fn factor(&self, n: u64) -> Option<Vec<(usize, u32)>> {
        let ints = self.integers.as_ref()?;
        if n == 0 || n as f64 > self.x {
            return None;
        }
        sieve::factorize(n).into_iter().map(|(p, k)| ints.binary_search(&p).ok().map(|i| (i, k))).collect()
    }

    /// All elements `n ≤ x`, sorted by value.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        let mut factors = Vec::new();
        self.walk(0, 1.0, 1, &mut factors, &mut out);
        out.sort_by(|a, b| a.value.total_cmp(&b.value));
        out
    }

    fn walk(&self, from: usize, value: f64, n: u64, factors: &mut Vec<(usize, u32)>, out: &mut Vec<Element>) {
        out.push(Element { value, n: self.integers.as_ref().map(|_| n), factors: factors.clone() });
        for i in from..self.primes.len() {
            let (p, pi) = (self.primes[i], self.integers.as_ref().map_or(0, |v| v[i]));
            if !self.fits(value * p, n.checked_mul(pi)) {
                break;
            }
            let (mut v, mut m) = (value, n);
            for k in 1..=self.depth[i] {
                v *= p;
                m = m.saturating_mul(pi);
                if !self.fits(v, Some(m)) {
                    break;
                }
                factors.push((i, k));
                self.walk(i + 1, v, m, factors, out);
                factors.pop();
            }
        }
    }

    fn fits(&self, value: f64, n: Option<u64>) -> bool {
        match (&self.integers, n) {
            (Some(_), Some(n)) => n as f64 <= self.x && n <= self.x as u64,
            (Some(_), None) => false,
            (None, _) => value <= self.x * (1.0 + 1e-12),
        }
    }
}

/// `f(p_i^k)` for `1 ≤ k ≤ depth(i)`; `f(1) = 1` implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeFunction<C> {
    system: Arc<PrimeSystem>,
    local: Vec<Vec<C>>,
}

impl<C: Coeff> MultiplicativeFunction<C> {
    pub fn from_fn(system: Arc<PrimeSystem>, mut f: impl FnMut(usize, u32) -> C) -> Self {
        let local = (0..system.primes.len()).map(|i| (1..=system.depth[i]).map(|k| f(i, k)).collect()).collect();
        MultiplicativeFunction { system, local }
    }

    /// `f(p^k) = g(p)^k`.
    pub fn completely_multiplicative(system: Arc<PrimeSystem>, mut g: impl FnMut(usize) -> C) -> Self {
        let local = (0..system.primes.len())
            .map(|i| {
                let base = g(i);
                let mut acc = C::one();
                (1..=system.depth[i])
                    .map(|_| {
                        acc = acc.clone() * base.clone();
                        acc.clone()
                    })
                    .collect()
            })
            .collect();
        MultiplicativeFunction { system, local }
    }

    pub fn epsilon(system: Arc<PrimeSystem>) -> Self {
        Self::from_fn(system, |_, _| C::zero())
    }

    pub fn one(system: Arc<PrimeSystem>) -> Self {
        Self::from_fn(system, |_, _| C::one())
    }

    pub fn mobius(system: Arc<PrimeSystem>) -> Self {
        Self::from_fn(system, |_, k| if k == 1 { -C::one() } else { C::zero() })
    }

    pub fn system(&self) -> &Arc<PrimeSystem> {
        &self.system
    }

    /// `[f(p_i), f(p_i²), …]`.
    pub fn local(&self, i: usize) -> &[C] {
        &self.local[i]
    }

    /// `f(p_i^k)`, zero past the truncation.
    pub fn value(&self, i: usize, k: u32) -> C {
        match k {
            0 => C::one(),
            _ => self.local[i].get(k as usize - 1).cloned().unwrap_or_else(C::zero),
        }
    }

    pub fn eval(&self, factors: &[(usize, u32)]) -> C {
        factors.iter().fold(C::one(), |acc, &(i, k)| acc * self.value(i, k))
    }

    /// `f(n)` for an integer `n ≤ x` of a rational system.
    pub fn at(&self, n: u64) -> Option<C> {
        self.system.factor(n).map(|f| self.eval(&f))
    }

    /// `f(n)` for every element `n ≤ x`, in increasing order.
    pub fn materialize(&self) -> Vec<(Element, C)> {
        self.system.elements().into_iter().map(|e| {
            let v = self.eval(&e.factors);
            (e, v)
        }).collect()
    }

    /// `[f(0), f(1), …, f(x)]` with `f(0) = 0`, for rational systems.
    pub fn table(&self) -> Option<Vec<C>> {
        self.system.integers.as_ref()?;
        let x = self.system.x as usize;
        let mut t = vec![C::zero(); x + 1];
        for (e, v) in self.materialize() {
            t[e.n.expect("rational") as usize] = v;
        }
        Some(t)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self, ArithmeticError> {
        self.check(other)?;
        Ok(self.zip_local(other, |a, b| a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect()))
    }

    fn check(&self, other: &Self) -> Result<(), ArithmeticError> {
        if Arc::ptr_eq(&self.system, &other.system) || self.system == other.system {
            Ok(())
        } else {
            Err(ArithmeticError::SystemMismatch)
        }
    }

    fn zip_local(&self, other: &Self, f: impl Fn(&[C], &[C]) -> Vec<C>) -> Self {
        let local = self.local.iter().zip(&other.local).map(|(a, b)| f(a, b)).collect();
        MultiplicativeFunction { system: self.system.clone(), local }
    }

    pub fn to_complex(&self) -> MultiplicativeFunction<Complex64> {
        MultiplicativeFunction {
            system: self.system.clone(),
            local: self.local.iter().map(|l| l.iter().map(C::to_complex64).collect()).collect(),
        }
    }
}

fn local_convolve<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let coeff = |v: &[C], k: usize| if k == 0 { C::one() } else { v[k - 1].clone() };
    (1..=a.len())
        .map(|k| (0..=k).fold(C::zero(), |acc, j| acc + coeff(a, j) * coeff(b, k - j)))
        .collect()
}

fn local_inverse<C: Coeff>(a: &[C]) -> Vec<C> {
    let mut g: Vec<C> = Vec::with_capacity(a.len());
    for k in 1..=a.len() {
        let mut s = a[k - 1].clone();
        for j in 1..k {
            s = s + a[j - 1].clone() * g[k - j - 1].clone();
        }
        g.push(-s);
    }
    g
}

/// `(f ∗ g)(p^k) = Σ_{j≤k} f(p^j) g(p^{k−j})`, computed prime by prime.
pub fn dirichlet_convolve<C: Coeff>(
    f: &MultiplicativeFunction<C>,
    g: &MultiplicativeFunction<C>,
) -> Result<MultiplicativeFunction<C>, ArithmeticError> {
    f.check(g)?;
    Ok(f.zip_local(g, local_convolve))
}

/// Formal inverse: `g(p^k) = −Σ_{j=1..k} f(p^j) g(p^{k−j})`.
pub fn invert_multiplicative<C: Coeff>(f: &MultiplicativeFunction<C>) -> MultiplicativeFunction<C> {
    MultiplicativeFunction { system: f.system.clone(), local: f.local.iter().map(|l| local_inverse(l)).collect() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalCertificate {
    pub prime: f64,
    pub disk: DiskCertificate,
}

/// Lower bounds for `min |ã_p|` over `Re s ≥ 0`, i.e. over `|p^{−s}| ≤ 1`,
/// for the truncated local polynomials `1 + Σ f(p^k) z^k`.
pub fn certify_local_invertibility<C: Coeff>(
    f: &MultiplicativeFunction<C>,
    radial: usize,
    angular: usize,
) -> Vec<LocalCertificate> {
    f.system
        .primes
        .iter()
        .enumerate()
        .map(|(i, &prime)| {
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            coeffs.extend(f.local[i].iter().map(C::to_complex64));
            LocalCertificate { prime, disk: disk_certificate(&coeffs, radial, angular) }
        })
        .collect()
}

/// `1 + Σ_{k ≤ kmax} f(p^k) p^{−ks}`, using the stored `k ≤ depth(p)`.
pub fn euler_factor<C: Coeff>(f: &MultiplicativeFunction<C>, prime: usize, s: Complex64, kmax: u32) -> Complex64 {
    let p = f.system.primes[prime];
    let z = (-s * p.ln()).exp();
    let mut zk = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(1.0, 0.0);
    for c in f.local[prime].iter().take(kmax as usize) {
        zk *= z;
        sum += c.to_complex64() * zk;
    }
    sum
}

/// Heuristic reading of a partial-sum sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    ConvergentTrend,
    DivergentTrend,
    Inconclusive,
}

/// Compares the increments over `(x/4, x/2]` and `(x/2, x]`; a ratio at most
/// 3/4 reads as convergent, at least 0.95 as divergent.
pub fn doubling_trend(samples: &[(f64, f64)], x: f64) -> Trend {
    let window = |lo: f64, hi: f64| samples.iter().filter(|(v, _)| *v > lo && *v <= hi).map(|(_, t)| t).sum::<f64>();
    let (first, second) = (window(x / 4.0, x / 2.0), window(x / 2.0, x));
    if first == 0.0 {
        return if second == 0.0 { Trend::ConvergentTrend } else { Trend::Inconclusive };
    }
    match second / first {
        r if r <= 0.75 => Trend::ConvergentTrend,
        r if r >= 0.95 => Trend::DivergentTrend,
        _ => Trend::Inconclusive,
    }
}

fn omega(w: &WeightFn, value: f64) -> f64 {
    w.eval(value.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GOmegaReport {
    /// `Σ_{p ≤ x} |f(p)|² ω(p)²`.
    pub sum_sq: f64,
    /// `Σ_{p^k ≤ x, k ≥ 2} |f(p^k)| ω(p^k)`.
    pub sum_hi: f64,
    pub trend_sq: Trend,
    pub trend_hi: Trend,
    /// Trends come from finitely many terms and decide nothing.
    pub heuristic: bool,
}

pub fn g_omega_membership<C: Coeff>(f: &MultiplicativeFunction<C>, w: &WeightFn) -> GOmegaReport {
    let sys = &f.system;
    let mut sq = Vec::new();
    let mut hi = Vec::new();
    for (i, &p) in sys.primes.iter().enumerate() {
        let mut pk = 1.0;
        for (k, c) in f.local[i].iter().enumerate() {
            pk *= p;
            if k == 0 {
                let t = c.modulus() * omega(w, p);
                sq.push((p, t * t));
            } else {
                hi.push((pk, c.modulus() * omega(w, pk)));
            }
        }
    }
    GOmegaReport {
        sum_sq: sq.iter().map(|t| t.1).sum(),
        sum_hi: hi.iter().map(|t| t.1).sum(),
        trend_sq: doubling_trend(&sq, sys.x),
        trend_hi: doubling_trend(&hi, sys.x),
        heuristic: true,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P3Decomposition<C> {
    /// Largest local prime; `None` when no local factor is split off.
    pub p0: Option<f64>,
    /// `a_p`, agreeing with `a` at powers of `p` and trivial elsewhere.
    pub local: Vec<(f64, MultiplicativeFunction<C>)>,
    pub b: MultiplicativeFunction<C>,
    pub h: MultiplicativeFunction<C>,
    pub certificates: P3Certificates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P3Certificates {
    /// `max_{p > p₀} |a(p)| ω(p)`.
    pub max_prime_term: f64,
    /// `Σ_{p > p₀, k ≥ 2} |h(p^k)| ω(p^k)`.
    pub h_tail: f64,
    pub h_vanishes_at_primes: bool,
    pub reconstruction_exact: bool,
    pub b_inverse_is_mu_b: bool,
    /// `Σ_{p^k ≤ x, k ≥ 2} |h⁻¹(p^k)| ω(p^k)`.
    pub h_inverse_sum: f64,
    /// Only `n ≤ x` were inspected.
    pub truncation_limited: bool,
}

/// Splits `a = (∗_{p ≤ p₀} a_p) ∗ b ∗ h` with the smallest `p₀` such that
/// `|a(p)| ω(p) ≤ 1/2` for `p > p₀` and `Σ_{p > p₀, k ≥ 2} |h(p^k)| ω(p^k) ≤ 1/2`
/// on the available data. Candidates are restricted to `p₀ ≤ x/2`.
pub fn decompose_p3<C: Coeff>(
    a: &MultiplicativeFunction<C>,
    w: &WeightFn,
) -> Result<P3Decomposition<C>, ArithmeticError> {
    let sys = a.system.clone();
    let n = sys.primes.len();
    let h_all: Vec<Vec<C>> = a.local.iter().map(|l| local_h(l)).collect();
    let prime_term: Vec<f64> = (0..n).map(|i| a.value(i, 1).modulus() * omega(w, sys.primes[i])).collect();
    let hi_term: Vec<f64> = (0..n)
        .map(|i| {
            let p = sys.primes[i];
            h_all[i].iter().enumerate().skip(1).map(|(k, c)| c.modulus() * omega(w, p.powi(k as i32 + 1))).sum()
        })
        .collect();
    // number of local primes needed by each estimate
    let need_prime = prime_term.iter().rposition(|&t| t > 0.5).map_or(0, |i| i + 1);
    let mut suffix = 0.0;
    let mut need_hi = 0;
    for i in (0..n).rev() {
        suffix += hi_term[i];
        if suffix > 0.5 {
            need_hi = i + 1;
            break;
        }
    }
    let m = need_prime.max(need_hi);
    if m > 0 && sys.primes[m - 1] > sys.x / 2.0 {
        let limit = sys.primes.partition_point(|&p| p <= sys.x / 2.0);
        let blocking = (limit..n)
            .find(|&i| prime_term[i] > 0.5)
            .or_else(|| (limit..n).rev().find(|&i| hi_term[i] > 0.0))
            .unwrap_or(m - 1);
        return Err(ArithmeticError::Unachievable { blocking_prime: sys.primes[blocking] });
    }

    let local: Vec<(f64, MultiplicativeFunction<C>)> = (0..m)
        .map(|j| {
            let f = MultiplicativeFunction::from_fn(sys.clone(), |i, k| if i == j { a.value(i, k) } else { C::zero() });
            (sys.primes[j], f)
        })
        .collect();
    let b = MultiplicativeFunction::from_fn(sys.clone(), |i, k| {
        if i < m {
            C::zero()
        } else {
            (0..k).fold(C::one(), |acc, _| acc * a.value(i, 1))
        }
    });
    let h = MultiplicativeFunction::from_fn(sys.clone(), |i, k| if i < m { C::zero() } else { h_all[i][k as usize - 1].clone() });

    let mut rebuilt = b.clone();
    for (_, f) in &local {
        rebuilt = dirichlet_convolve(&rebuilt, f)?;
    }
    rebuilt = dirichlet_convolve(&rebuilt, &h)?;
    let reconstruction_exact = rebuilt.materialize().iter().zip(a.materialize()).all(|((_, x), (_, y))| *x == y);
    let mu_b = MultiplicativeFunction::mobius(sys.clone()).pointwise_mul(&b)?;
    let b_inverse_is_mu_b = invert_multiplicative(&b) == mu_b;
    let h_inv = invert_multiplicative(&h);
    let h_inverse_sum = (0..n)
        .map(|i| {
            let p = sys.primes[i];
            h_inv.local[i].iter().enumerate().skip(1).map(|(k, c)| c.modulus() * omega(w, p.powi(k as i32 + 1))).sum::<f64>()
        })
        .sum();
    let certificates = P3Certificates {
        max_prime_term: prime_term[m..].iter().cloned().fold(0.0, f64::max),
        h_tail: hi_term[m..].iter().sum(),
        h_vanishes_at_primes: (0..n).all(|i| h.value(i, 1).is_exact_zero()),
        reconstruction_exact,
        b_inverse_is_mu_b,
        h_inverse_sum,
        truncation_limited: true,
    };
    Ok(P3Decomposition { p0: m.checked_sub(1).map(|i| sys.primes[i]), local, b, h, certificates })
}

/// `h(p^k) = a(p^k) − a(p^{k−1}) a(p)`.
fn local_h<C: Coeff>(a: &[C]) -> Vec<C> {
    (1..=a.len())
        .map(|k| {
            let prev = if k == 1 { C::one() } else { a[k - 2].clone() };
            a[k - 1].clone() - prev * a[0].clone()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaRelated<C> {
    pub h: MultiplicativeFunction<C>,
    /// `Σ_{n ≤ x} |h(n)| ω(n)`.
    pub partial_norm: f64,
    pub trend: Trend,
}

/// `h = a ∗ b⁻¹` with its partial `ω`-norm.
pub fn omega_related<C: Coeff>(
    a: &MultiplicativeFunction<C>,
    b: &MultiplicativeFunction<C>,
    w: &WeightFn,
) -> Result<OmegaRelated<C>, ArithmeticError> {
    let h = dirichlet_convolve(a, &invert_multiplicative(b))?;
    let terms: Vec<(f64, f64)> = h.materialize().into_iter().map(|(e, c)| (e.value, c.modulus() * omega(w, e.value))).collect();
    let trend = doubling_trend(&terms, h.system.x);
    Ok(OmegaRelated { partial_norm: terms.iter().map(|t| t.1).sum(), trend, h })
}

/// Rule for prime powers not listed in a [`FunctionSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fill {
    #[default]
    Zero,
    One,
    Mobius,
    /// `f(p^k) = f(p)^k`.
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimePowerValue {
    pub p: f64,
    pub k: u32,
    /// Rational `"num/den"`.
    pub value: String,
}

/// JSON description of an exact multiplicative function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(default)]
    pub values: Vec<PrimePowerValue>,
    #[serde(default)]
    pub default: Fill,
}

impl FunctionSpec {
    pub fn build(&self, system: Arc<PrimeSystem>) -> Result<MultiplicativeFunction<Q>, ArithmeticError> {
        let mut given: Vec<Vec<Option<Q>>> = (0..system.primes.len()).map(|i| vec![None; system.depth[i] as usize]).collect();
        for v in &self.values {
            let i = system.index_of(v.p).ok_or(ArithmeticError::UnknownPrime(v.p))?;
            let q = parse_q(&v.value).ok_or_else(|| ArithmeticError::BadValue(v.value.clone()))?;
            if v.k == 0 {
                return Err(ArithmeticError::BadValue(format!("k = 0 at p = {}", v.p)));
            }
            if let Some(slot) = given[i].get_mut(v.k as usize - 1) {
                *slot = Some(q);
            }
        }
        Ok(MultiplicativeFunction::from_fn(system, |i, k| {
            if let Some(q) = &given[i][k as usize - 1] {
                return q.clone();
            }
            match self.default {
                Fill::Zero => Q::zero(),
                Fill::One => Q::one(),
                Fill::Mobius => if k == 1 { -Q::one() } else { Q::zero() },
                Fill::Power => {
                    let base = given[i].first().cloned().flatten().unwrap_or_else(Q::zero);
                    (0..k).fold(Q::one(), |acc, _| acc * &base)
                }
            }
        }))
    }

    /// Lists every nonzero prime-power value.
    pub fn from_function(f: &MultiplicativeFunction<Q>) -> Self {
        let mut values = Vec::new();
        for (i, &p) in f.system.primes.iter().enumerate() {
            for (k, v) in f.local[i].iter().enumerate() {
                if !v.is_zero() {
                    values.push(PrimePowerValue { p, k: k as u32 + 1, value: format_q(v) });
                }
            }
        }
        FunctionSpec { values, default: Fill::Zero }
    }
}
