//! Weighted convolution algebras of general Dirichlet series over finitely
//! generated additive semigroups, with exact rational cone machinery and a
//! calculus of multiplicative arithmetic functions.
//!
//! The numeric core is generic over [`scalar::Coeff`]; the aliases below fix
//! the two backends used throughout.

pub mod algebra;
pub mod arithmetic;
pub mod characters;
pub mod cones;
pub mod density;
pub mod extension;
pub mod json;
pub mod linalg;
pub mod scalar;
pub mod semigroup;
pub mod sieve;
pub mod weights;

use num_complex::Complex64;

pub use algebra::{AlgebraElement, AlgebraError};
pub use scalar::{Coeff, ComplexQ, Q};
pub use semigroup::{SemigroupBasis, SemigroupElement};
pub use weights::WeightFn;

/// Double-precision complex coefficients.
pub type FloatElement = AlgebraElement<Complex64>;
/// Exact rational complex coefficients.
pub type ExactElement = AlgebraElement<ComplexQ>;
