//! Weight functions `w: Λ → (0,∞)` and admissibility diagnostics.
//!
//! Every weight here depends on an element only through its magnitude
//! `|λ|₁`, so the diagnostics take magnitudes as samples. The checks are
//! samplers: they can refute a property on the given data, never prove it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::{SemigroupBasis, SemigroupElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight table needs at least one point, starting at 0")]
    EmptyTable,
    #[error("weight table must start at magnitude 0 with positive values and increasing magnitudes")]
    BadTable,
    #[error("polynomial exponent must be nonnegative")]
    NegativeExponent,
}

/// Piecewise-linear weight through user points, normalized so that `w(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct WeightTable {
    points: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for WeightTable {
    type Error = WeightError;
    fn try_from(mut points: Vec<(f64, f64)>) -> Result<Self, WeightError> {
        if points.is_empty() {
            return Err(WeightError::EmptyTable);
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points[0].0 != 0.0
            || points.iter().any(|p| !(p.1 > 0.0 && p.1.is_finite() && p.0.is_finite()))
            || points.windows(2).any(|w| w[0].0 == w[1].0)
        {
            return Err(WeightError::BadTable);
        }
        let w0 = points[0].1;
        for p in &mut points {
            p.1 /= w0;
        }
        Ok(WeightTable { points })
    }
}

impl From<WeightTable> for Vec<(f64, f64)> {
    fn from(t: WeightTable) -> Self {
        t.points
    }
}

impl WeightTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, WeightError> {
        Self::try_from(points)
    }

    fn eval(&self, x: f64) -> Evaluation {
        let pts = &self.points;
        let last = pts[pts.len() - 1];
        if x <= 0.0 {
            return Evaluation { value: pts[0].1, clamped: x < 0.0 };
        }
        if x >= last.0 {
            return Evaluation { value: last.1, clamped: x > last.0 };
        }
        let i = pts.partition_point(|p| p.0 <= x);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        Evaluation { value: y0 + (y1 - y0) * (x - x0) / (x1 - x0), clamped: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// Set when a table weight was queried outside its range and clamped.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightFn {
    One,
    /// `(1 + |λ|₁)^c`.
    Poly { c: f64 },
    /// `e^{-ρ|λ|₁}`; not admissible for `ρ > 0`.
    Exp { rho: f64 },
    Product { parts: Vec<WeightFn> },
    Table { points: WeightTable },
}

impl WeightFn {
    pub fn poly(c: f64) -> Result<Self, WeightError> {
        if c < 0.0 || c.is_nan() {
            return Err(WeightError::NegativeExponent);
        }
        Ok(WeightFn::Poly { c })
    }

    /// Weight at magnitude `x = |λ|₁`, with clamping reported.
    pub fn eval_report(&self, x: f64) -> Evaluation {
        match self {
            WeightFn::One => Evaluation { value: 1.0, clamped: false },
            WeightFn::Poly { c } => Evaluation { value: (1.0 + x).powf(*c), clamped: false },
            WeightFn::Exp { rho } => Evaluation { value: (-rho * x).exp(), clamped: false },
            WeightFn::Product { parts } => parts.iter().fold(Evaluation { value: 1.0, clamped: false }, |acc, p| {
                let e = p.eval_report(x);
                Evaluation { value: acc.value * e.value, clamped: acc.clamped || e.clamped }
            }),
            WeightFn::Table { points } => points.eval(x),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_report(x).value
    }

    pub fn eval_element(&self, basis: &SemigroupBasis, e: &SemigroupElement) -> f64 {
        self.eval(basis.magnitude(e))
    }

    /// Condition (a): `w ≥ 1` on every sample.
    pub fn check_condition_a(&self, samples: &[f64]) -> bool {
        samples.iter().all(|&x| self.eval(x) >= 1.0)
    }

    /// Condition (b) via the infimum criterion: `inf_k w(kx)^{1/k} ≤ 1 + tol` for `k ≤ max_k`.
    pub fn check_condition_b(&self, x: f64, max_k: u32, tol: f64) -> ConditionBReport {
        let mut roots = Vec::with_capacity(max_k as usize);
        let mut overflow = false;
        for k in 1..=max_k {
            let w = self.eval(f64::from(k) * x);
            if !w.is_finite() {
                overflow = true;
                break;
            }
            roots.push(w.powf(1.0 / f64::from(k)));
        }
        let min_root = roots.iter().copied().fold(f64::INFINITY, f64::min);
        ConditionBReport { passed: !overflow && min_root <= 1.0 + tol, min_root, overflow, roots }
    }

    /// `w(x + y) ≤ w(x) w(y)` on all pairs, with relative slack `1e-12`.
    pub fn check_submultiplicative(&self, pairs: &[(f64, f64)]) -> bool {
        pairs.iter().all(|&(x, y)| self.eval(x + y) <= self.eval(x) * self.eval(y) * (1.0 + 1e-12))
    }

    /// Supremum of `w(x) e^{-θx}` over the samples.
    pub fn check_growth_bound(&self, theta: f64, samples: &[f64]) -> GrowthReport {
        let mut sorted: Vec<f64> = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut sup = f64::NEG_INFINITY;
        let mut argmax = f64::NAN;
        for &x in &sorted {
            let v = self.eval(x) * (-theta * x).exp();
            if v > sup {
                sup = v;
                argmax = x;
            }
        }
        let unbounded_trend = sorted.len() > 1 && sorted.last() == Some(&argmax);
        GrowthReport { sup, argmax, unbounded_trend }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionBReport {
    pub passed: bool,
    pub min_root: f64,
    pub overflow: bool,
    /// `w(kx)^{1/k}` for `k = 1, 2, …`.
    pub roots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub sup: f64,
    pub argmax: f64,
    /// The supremum sits at the largest sample, suggesting growth beyond the range.
    pub unbounded_trend: bool,
}
