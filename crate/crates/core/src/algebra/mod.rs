//! The weighted convolution algebra `𝒜_w(Λ)`.
//!
//! Elements are finitely supported maps `Λ → C` over a [`SemigroupBasis`],
//! generic over the coefficient backend [`Coeff`]. Optional truncation at a
//! magnitude `T` keeps supports finite under repeated convolution; mass that
//! falls past `T` is recorded in [`AlgebraElement::dropped_mass`].

mod invert;
mod series;

pub use invert::{graded_invert, neumann_invert, NeumannCertificate, DEFAULT_ENUMERATION_CAP};
pub use series::{
    compose_series, disk_certificate, evaluate_series, invertibility_witness, pairing, CompositionCertificate, DiskCertificate,
    PowerSeries, SeriesKind, SeriesValue, TailBound, WitnessGrid, WitnessReport,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::{Coeff, ComplexQ, Q};
use crate::semigroup::{SemigroupBasis, SemigroupElement, SemigroupError};
use crate::weights::WeightFn;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("elements live over different bases")]
    BasisMismatch,
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("neumann inapplicable: q = {q} >= 1")]
    NeumannInapplicable { q: f64 },
    #[error("element is singular: coefficient at 0 vanishes")]
    Singular,
    #[error("term budget exceeded: {needed} terms needed, {max} allowed")]
    MaxTermsExceeded { needed: usize, max: usize },
    #[error("enumeration of the graded support exceeded the cap of {cap} elements")]
    EnumerationCap { cap: usize },
    #[error("composition norm condition fails: ||a - c0 e||_w = {norm} >= radius {radius}")]
    CompositionOutOfRadius { norm: f64, radius: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// A finitely supported element of `𝒜_w(Λ)`.
#[derive(Debug, Clone)]
pub struct AlgebraElement<C: Coeff> {
    basis: Arc<SemigroupBasis>,
    coeffs: BTreeMap<SemigroupElement, C>,
    truncation: Option<f64>,
    dropped_mass: f64,
}

impl<C: Coeff + PartialEq> PartialEq for AlgebraElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.coeffs == other.coeffs && self.truncation == other.truncation
    }
}

impl<C: Coeff> AlgebraElement<C> {
    pub fn zero(basis: Arc<SemigroupBasis>) -> Self {
        AlgebraElement { basis, coeffs: BTreeMap::new(), truncation: None, dropped_mass: 0.0 }
    }

    /// The unit `ε = δ₀`.
    pub fn unit(basis: Arc<SemigroupBasis>) -> Self {
        let zero = basis.zero();
        Self::delta(basis, zero, C::one())
    }

    /// `c · δ_λ`.
    pub fn delta(basis: Arc<SemigroupBasis>, at: SemigroupElement, c: C) -> Self {
        let mut e = Self::zero(basis);
        if !c.is_exact_zero() {
            e.coeffs.insert(at, c);
        }
        e
    }

    /// Builds an element from `(λ, coefficient)` pairs; repeated keys are summed
    /// and zero coefficients dropped.
    pub fn from_terms<I>(basis: Arc<SemigroupBasis>, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (SemigroupElement, C)>,
    {
        let mut coeffs: BTreeMap<SemigroupElement, C> = BTreeMap::new();
        for (k, c) in terms {
            basis.validate(&k)?;
            let slot = coeffs.entry(k).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        coeffs.retain(|_, c| !c.is_exact_zero());
        Ok(AlgebraElement { basis, coeffs, truncation: None, dropped_mass: 0.0 })
    }

    /// Element on `ℕ₀` with `coeffs[n]` at `n`.
    pub fn from_naturals(coeffs: Vec<C>) -> Self {
        let basis = SemigroupBasis::naturals();
        let terms = coeffs.into_iter().enumerate().map(|(n, c)| (SemigroupElement::free([(0, n as u64)]), c));
        Self::from_terms(basis, terms).expect("naturals basis accepts every exponent")
    }

    pub fn with_truncation(mut self, t: f64) -> Self {
        self.truncation = Some(t);
        self.apply_truncation();
        self
    }

    fn apply_truncation(&mut self) {
        if let Some(t) = self.truncation {
            let basis = self.basis.clone();
            let mut dropped = 0.0;
            self.coeffs.retain(|k, c| {
                let keep = basis.magnitude(k) <= t;
                if !keep {
                    dropped += c.modulus();
                }
                keep
            });
            self.dropped_mass += dropped;
        }
    }

    pub fn basis(&self) -> &Arc<SemigroupBasis> {
        &self.basis
    }

    pub fn truncation(&self) -> Option<f64> {
        self.truncation
    }

    /// ℓ¹ mass of coefficients discarded by truncation so far.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    pub fn coeffs(&self) -> &BTreeMap<SemigroupElement, C> {
        &self.coeffs
    }

    pub fn coeff(&self, at: &SemigroupElement) -> C {
        self.coeffs.get(at).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient at the identity `a(0)`.
    pub fn constant_term(&self) -> C {
        self.coeff(&self.basis.zero())
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_basis(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(AlgebraError::BasisMismatch)
        }
    }

    fn min_truncation(&self, other: &Self) -> Option<f64> {
        match (self.truncation, other.truncation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_basis(other)?;
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let slot = coeffs.entry(k.clone()).or_insert_with(C::zero);
            *slot = slot.clone() + c.clone();
        }
        coeffs.retain(|_, c| !c.is_exact_zero());
        let mut out = AlgebraElement {
            basis: self.basis.clone(),
            coeffs,
            truncation: self.min_truncation(other),
            dropped_mass: self.dropped_mass + other.dropped_mass,
        };
        out.apply_truncation();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, alpha: &C) -> Self {
        let mut coeffs = BTreeMap::new();
        if !alpha.is_exact_zero() {
            for (k, c) in &self.coeffs {
                let v = c.clone() * alpha.clone();
                if !v.is_exact_zero() {
                    coeffs.insert(k.clone(), v);
                }
            }
        }
        AlgebraElement {
            basis: self.basis.clone(),
            coeffs,
            truncation: self.truncation,
            dropped_mass: self.dropped_mass * alpha.modulus(),
        }
    }

    /// Semigroup convolution `c(λ) = Σ_{λ'+λ''=λ} a(λ') b(λ'')`.
    ///
    /// Terms past the smaller truncation are dropped and their mass recorded.
    pub fn convolve(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_basis(other)?;
        let trunc = self.min_truncation(other);
        let mut coeffs: BTreeMap<SemigroupElement, C> = BTreeMap::new();
        let mut dropped = 0.0;
        let bmags: Vec<(f64, &SemigroupElement, &C)> =
            other.coeffs.iter().map(|(k, c)| (self.basis.magnitude(k), k, c)).collect();
        for (ka, ca) in &self.coeffs {
            let ma = self.basis.magnitude(ka);
            for &(mb, kb, cb) in &bmags {
                let prod = ca.clone() * cb.clone();
                if let Some(t) = trunc {
                    if ma + mb > t * (1.0 + 1e-12) {
                        dropped += prod.modulus();
                        continue;
                    }
                }
                let k = ka.checked_add(kb)?;
                let slot = coeffs.entry(k).or_insert_with(C::zero);
                *slot = slot.clone() + prod;
            }
        }
        coeffs.retain(|_, c| !c.is_exact_zero());
        let mut out = AlgebraElement { basis: self.basis.clone(), coeffs, truncation: trunc, dropped_mass: dropped };
        out.apply_truncation();
        Ok(out)
    }

    /// `j`-fold convolution power (`a^{∗0} = ε`).
    pub fn pow(&self, j: u32) -> Result<Self, AlgebraError> {
        let mut acc = Self::unit(self.basis.clone());
        acc.truncation = self.truncation;
        for _ in 0..j {
            acc = acc.convolve(self)?;
        }
        Ok(acc)
    }

    /// `‖a‖_w = Σ |a(λ)| w(λ)`.
    pub fn weighted_norm(&self, w: &WeightFn) -> f64 {
        self.coeffs.iter().map(|(k, c)| c.modulus() * w.eval(self.basis.magnitude(k))).sum()
    }

    /// Lossy conversion to the double-precision complex backend.
    pub fn to_float(&self) -> AlgebraElement<Complex64> {
        AlgebraElement {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.to_complex64())).collect(),
            truncation: self.truncation,
            dropped_mass: self.dropped_mass,
        }
    }

    /// Support sorted by magnitude, ties broken by the element order.
    pub fn graded_support(&self) -> Vec<(f64, &SemigroupElement, &C)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(k, c)| (self.basis.magnitude(k), k, c)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        v
    }

    pub(crate) fn from_parts(
        basis: Arc<SemigroupBasis>,
        coeffs: BTreeMap<SemigroupElement, C>,
        truncation: Option<f64>,
    ) -> Self {
        let mut e = AlgebraElement { basis, coeffs, truncation, dropped_mass: 0.0 };
        e.coeffs.retain(|_, c| !c.is_exact_zero());
        e.apply_truncation();
        e
    }
}

impl AlgebraElement<ComplexQ> {
    /// Exact element on `ℕ₀` with real rational coefficients.
    pub fn exact_naturals(coeffs: Vec<Q>) -> Self {
        Self::from_naturals(coeffs.into_iter().map(|q| ComplexQ::new(q, Q::from_integer(0.into()))).collect())
    }
}
