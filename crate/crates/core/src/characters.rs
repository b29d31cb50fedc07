//! Bounded characters `ψ: Λ → ℂ` and the functionals `h_ψ(a) = Σ a(λ)ψ(λ)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{pairing, AlgebraElement};
use crate::json::ComplexJson;
use crate::scalar::Coeff;
use crate::semigroup::{Mode, SemigroupBasis, SemigroupElement};
use crate::weights::WeightFn;

/// Slack on `|z_β| ≤ 1` absorbing round-off in computed unimodular values.
pub const MODULUS_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error("Re s_{index} = {re} < 0")]
    LeftHalfSpace { index: usize, re: f64 },
    #[error("s has {got} coordinates, basis has {want}")]
    Dimension { got: usize, want: usize },
    #[error("generator {id} has |z| = {modulus} > 1")]
    Unbounded { id: u32, modulus: f64 },
    #[error("generator {0} has no value")]
    MissingGenerator(u32),
    #[error("value given for unknown generator {0}")]
    UnknownGenerator(u32),
    #[error("explicit characters need a free basis")]
    NotFree,
    #[error("character and element live over different bases")]
    BasisMismatch,
    #[error("element is not a factorized exponent vector")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    FromS { s: Vec<ComplexJson> },
    Explicit,
    Extended,
}

/// A character stored by its generator values `z_β = ψ(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    basis: Arc<SemigroupBasis>,
    values: BTreeMap<u32, Complex64>,
    provenance: Provenance,
}

/// Serialized form of a [`Character`]; the basis travels separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterData {
    pub values: BTreeMap<u32, ComplexJson>,
    pub provenance: Provenance,
}

impl Character {
    /// `ψ_s(λ) = e^{-λ·s}`.
    pub fn from_s(basis: Arc<SemigroupBasis>, s: &[Complex64]) -> Result<Self, CharacterError> {
        if s.len() != basis.dim() {
            return Err(CharacterError::Dimension { got: s.len(), want: basis.dim() });
        }
        if let Some((index, si)) = s.iter().enumerate().find(|(_, si)| si.re < 0.0) {
            return Err(CharacterError::LeftHalfSpace { index, re: si.re });
        }
        let values = basis
            .generators()
            .iter()
            .map(|g| {
                let e = basis.generator_element(g.id).expect("own generator");
                (g.id, pairing(&basis, &e, s))
            })
            .collect();
        let provenance = Provenance::FromS { s: s.iter().map(|&z| z.into()).collect() };
        Ok(Character { basis, values, provenance })
    }

    /// A character on a free basis given by one value per generator.
    pub fn explicit(basis: Arc<SemigroupBasis>, values: BTreeMap<u32, Complex64>) -> Result<Self, CharacterError> {
        Self::with_provenance(basis, values, Provenance::Explicit)
    }

    pub(crate) fn with_provenance(
        basis: Arc<SemigroupBasis>,
        values: BTreeMap<u32, Complex64>,
        provenance: Provenance,
    ) -> Result<Self, CharacterError> {
        if basis.mode() != Mode::Free {
            return Err(CharacterError::NotFree);
        }
        for g in basis.generators() {
            let z = values.get(&g.id).ok_or(CharacterError::MissingGenerator(g.id))?;
            if z.norm() > 1.0 + MODULUS_SLACK || !z.norm().is_finite() {
                return Err(CharacterError::Unbounded { id: g.id, modulus: z.norm() });
            }
        }
        if let Some(&id) = values.keys().find(|id| basis.generator(**id).is_none()) {
            return Err(CharacterError::UnknownGenerator(id));
        }
        Ok(Character { basis, values, provenance })
    }

    pub fn from_data(basis: Arc<SemigroupBasis>, data: CharacterData) -> Result<Self, CharacterError> {
        match data.provenance {
            Provenance::FromS { s } => {
                let s: Vec<Complex64> = s.into_iter().map(Into::into).collect();
                Self::from_s(basis, &s)
            }
            p => Self::with_provenance(basis, data.values.into_iter().map(|(k, v)| (k, v.into())).collect(), p),
        }
    }

    pub fn data(&self) -> CharacterData {
        CharacterData {
            values: self.values.iter().map(|(&k, &v)| (k, v.into())).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn basis(&self) -> &Arc<SemigroupBasis> {
        &self.basis
    }

    pub fn values(&self) -> &BTreeMap<u32, Complex64> {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn s(&self) -> Option<Vec<Complex64>> {
        match &self.provenance {
            Provenance::FromS { s } => Some(s.iter().map(|&z| z.into()).collect()),
            _ => None,
        }
    }

    /// `ψ(λ)`: `e^{-λ·s}` for `ψ_s`, otherwise `Π z_β^{ν_β}`.
    pub fn apply(&self, lambda: &SemigroupElement) -> Result<Complex64, CharacterError> {
        self.basis.validate(lambda).map_err(|_| CharacterError::BasisMismatch)?;
        if let Some(s) = self.s() {
            return Ok(pairing(&self.basis, lambda, &s));
        }
        let exps = lambda.exponents().ok_or(CharacterError::NotApplicable)?;
        Ok(exps.iter().fold(Complex64::new(1.0, 0.0), |acc, (id, &nu)| acc * self.values[id].powu(nu as u32)))
    }

    /// `h_ψ(a) = Σ a(λ) ψ(λ)`, summed in the element order of the support.
    pub fn functional<C: Coeff>(&self, a: &AlgebraElement<C>) -> Result<Complex64, CharacterError> {
        if !Arc::ptr_eq(&self.basis, a.basis()) && *self.basis != **a.basis() {
            return Err(CharacterError::BasisMismatch);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, c) in a.coeffs() {
            sum += c.to_complex64() * self.apply(k)?;
        }
        Ok(sum)
    }

    /// Generator test `|z_β| ≤ 1` plus the sampled check `|ψ(λ)| ≤ w(λ)`.
    pub fn is_w_bounded(&self, w: &WeightFn, samples: &[SemigroupElement]) -> bool {
        self.values.values().all(|z| z.norm() <= 1.0 + MODULUS_SLACK)
            && samples.iter().all(|l| match self.apply(l) {
                Ok(v) => v.norm() <= w.eval_element(&self.basis, l) * (1.0 + MODULUS_SLACK),
                Err(_) => false,
            })
    }
}
