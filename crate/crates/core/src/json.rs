//! JSON encodings shared across modules.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraError;
use crate::scalar::{format_q, parse_q, q_from_f64, ComplexQ, Q};
use crate::semigroup::{SemigroupBasis, SemigroupElement};
use crate::{ExactElement, FloatElement};

/// `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}


/// A real coefficient part: a JSON number or an exact `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Float(f64),
    Exact(String),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::Float(0.0)
    }
}

impl Scalar {
    fn to_f64(&self) -> Result<f64, AlgebraError> {
        match self {
            Scalar::Float(x) => Ok(*x),
            Scalar::Exact(s) => parse_q(s)
                .map(|q| crate::scalar::q_to_f64(&q))
                .ok_or_else(|| AlgebraError::Invalid(format!("bad rational {s:?}"))),
        }
    }

    fn to_q(&self) -> Result<Q, AlgebraError> {
        match self {
            Scalar::Float(x) => q_from_f64(*x).ok_or_else(|| AlgebraError::Invalid(format!("non-finite {x}"))),
            Scalar::Exact(s) => parse_q(s).ok_or_else(|| AlgebraError::Invalid(format!("bad rational {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub element: SemigroupElement,
    pub re: Scalar,
    #[serde(default)]
    pub im: Scalar,
}

/// `{"basis": .., "coeffs": [{"element", "re", "im"}], "truncation": T}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub basis: SemigroupBasis,
    pub coeffs: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
}

impl ElementJson {
    pub fn from_float(a: &FloatElement) -> Self {
        let coeffs = a
            .coeffs()
            .iter()
            .map(|(k, c)| TermJson { element: k.clone(), re: Scalar::Float(c.re), im: Scalar::Float(c.im) })
            .collect();
        ElementJson { basis: (**a.basis()).clone(), coeffs, truncation: a.truncation() }
    }

    pub fn from_exact(a: &ExactElement) -> Self {
        let coeffs = a
            .coeffs()
            .iter()
            .map(|(k, c)| TermJson {
                element: k.clone(),
                re: Scalar::Exact(format_q(&c.re)),
                im: Scalar::Exact(format_q(&c.im)),
            })
            .collect();
        ElementJson { basis: (**a.basis()).clone(), coeffs, truncation: a.truncation() }
    }

    pub fn to_float(&self) -> Result<FloatElement, AlgebraError> {
        self.to_float_in(Arc::new(self.basis.clone()))
    }

    /// Reuses `basis` (which must equal the encoded one) so that elements
    /// decoded separately can be combined.
    pub fn to_float_in(&self, basis: Arc<SemigroupBasis>) -> Result<FloatElement, AlgebraError> {
        self.check_basis(&basis)?;
        let terms = self
            .coeffs
            .iter()
            .map(|t| Ok((t.element.clone(), Complex64::new(t.re.to_f64()?, t.im.to_f64()?))))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let a = FloatElement::from_terms(basis, terms)?;
        Ok(match self.truncation {
            Some(t) => a.with_truncation(t),
            None => a,
        })
    }

    pub fn to_exact(&self) -> Result<ExactElement, AlgebraError> {
        self.to_exact_in(Arc::new(self.basis.clone()))
    }

    pub fn to_exact_in(&self, basis: Arc<SemigroupBasis>) -> Result<ExactElement, AlgebraError> {
        self.check_basis(&basis)?;
        let terms = self
            .coeffs
            .iter()
            .map(|t| Ok((t.element.clone(), ComplexQ::new(t.re.to_q()?, t.im.to_q()?))))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let a = ExactElement::from_terms(basis, terms)?;
        Ok(match self.truncation {
            Some(t) => a.with_truncation(t),
            None => a,
        })
    }

    fn check_basis(&self, basis: &SemigroupBasis) -> Result<(), AlgebraError> {
        if *basis == self.basis {
            Ok(())
        } else {
            Err(AlgebraError::BasisMismatch)
        }
    }
}

