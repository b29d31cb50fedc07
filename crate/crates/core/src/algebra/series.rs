//! Series evaluation `ã(s) = Σ a(λ) e^{-λ·s}`, invertibility witnesses and
//! composition with power series.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AlgebraElement, AlgebraError};
use crate::scalar::Coeff;
use crate::semigroup::{Mode, SemigroupBasis, SemigroupElement};
use crate::weights::WeightFn;
use crate::FloatElement;

/// `e^{-λ·s}` for the embedded value of `λ`.
pub fn pairing(basis: &SemigroupBasis, lambda: &SemigroupElement, s: &[Complex64]) -> Complex64 {
    let v = basis.embedded_value(lambda);
    let exponent: Complex64 = v.iter().zip(s).map(|(x, si)| si * *x).sum();
    (-exponent).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub cutoff: f64,
    pub bound: f64,
    pub weight: WeightFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    /// Sum over the whole support.
    pub value: Complex64,
    /// Sum over the support with `|λ|₁ < cutoff`.
    pub head: Complex64,
    /// Bound on `|value − head|`, present only on the closed right half-space.
    pub tail: Option<TailBound>,
}

/// Evaluates `ã(s)` and bounds the contribution of terms with `|λ|₁ ≥ cutoff`
/// by `(1/w(cutoff)) Σ_{|λ|₁ ≥ cutoff} |a(λ)| w(λ)`.
///
/// The tail bound assumes `w` is nondecreasing in `|λ|₁`.
pub fn evaluate_series<C: Coeff>(
    a: &AlgebraElement<C>,
    s: &[Complex64],
    w: &WeightFn,
    cutoff: f64,
) -> Result<SeriesValue, AlgebraError> {
    let basis = a.basis();
    if s.len() != basis.dim() {
        return Err(AlgebraError::Invalid(format!("s has {} coordinates, basis has {}", s.len(), basis.dim())));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut head = Complex64::new(0.0, 0.0);
    let mut tail_mass = 0.0;
    for (k, c) in a.coeffs() {
        let term = c.to_complex64() * pairing(basis, k, s);
        value += term;
        let mag = basis.magnitude(k);
        if mag < cutoff {
            head += term;
        } else {
            tail_mass += c.modulus() * w.eval(mag);
        }
    }
    let tail = s
        .iter()
        .all(|si| si.re >= 0.0)
        .then(|| TailBound { cutoff, bound: tail_mass / w.eval(cutoff), weight: w.clone() });
    Ok(SeriesValue { value, head, tail })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessGrid {
    pub sigma_max: f64,
    pub t_max: f64,
    pub n_sigma: usize,
    pub n_t: usize,
    /// Radial resolution of the closed-disk grid (only used for `ℕ₀`).
    pub disk_radial: usize,
    pub disk_angular: usize,
}

impl Default for WitnessGrid {
    fn default() -> Self {
        WitnessGrid { sigma_max: 10.0, t_max: 50.0, n_sigma: 21, n_t: 201, disk_radial: 128, disk_angular: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskCertificate {
    pub min_modulus: f64,
    pub argmin: Complex64,
    /// Every point of the closed unit disk lies within `mesh` of a grid point.
    pub mesh: f64,
    /// `Σ n |a(n)|`, a Lipschitz constant of the polynomial on the disk.
    pub lipschitz: f64,
    pub lower_bound: f64,
    /// `lower_bound > 0`: the polynomial has no zero on the closed disk.
    pub certified: bool,
}

/// Certified lower bound for `min |p(z)|` on `|z| ≤ 1`, `p(z) = Σ coeffs[n] z^n`.
pub fn disk_certificate(coeffs: &[Complex64], radial: usize, angular: usize) -> DiskCertificate {
    let radial = radial.max(1);
    let angular = angular.max(1);
    let horner = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let mut min_modulus = f64::INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    for i in 0..=radial {
        let rho = i as f64 / radial as f64;
        let count = if i == 0 { 1 } else { angular };
        for j in 0..count {
            let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / angular as f64);
            let m = horner(z).norm();
            if m < min_modulus {
                min_modulus = m;
                argmin = z;
            }
        }
    }
    let mesh = 0.5 / radial as f64 + PI / angular as f64;
    let lipschitz: f64 = coeffs.iter().enumerate().map(|(n, c)| n as f64 * c.norm()).sum();
    let lower_bound = min_modulus - lipschitz * mesh;
    DiskCertificate { min_modulus, argmin, mesh, lipschitz, lower_bound, certified: lower_bound > 0.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub min_modulus: f64,
    pub argmin: Vec<Complex64>,
    pub samples: usize,
    /// Rigorous disk certificate, present when `Λ = ℕ₀`.
    pub disk: Option<DiskCertificate>,
}

fn is_naturals(basis: &SemigroupBasis) -> bool {
    basis.mode() == Mode::Free
        && basis.dim() == 1
        && basis.generators().len() == 1
        && basis.generators()[0].value == [1.0]
}

const MAX_WITNESS_SAMPLES: usize = 4_000_000;

/// Samples `|ã(s)|` over a grid in the closed right half-space `ℍ̄^r`.
///
/// This is evidence, not a decision: only for `ℕ₀` is a rigorous lower bound
/// on the closed disk `z = e^{-s}` produced.
pub fn invertibility_witness<C: Coeff>(a: &AlgebraElement<C>, grid: &WitnessGrid) -> Result<WitnessReport, AlgebraError> {
    let basis = a.basis();
    let r = basis.dim();
    let axis: Vec<Complex64> = (0..grid.n_sigma.max(1))
        .flat_map(|i| {
            let sigma = if grid.n_sigma > 1 { grid.sigma_max * i as f64 / (grid.n_sigma - 1) as f64 } else { 0.0 };
            (0..grid.n_t.max(1)).map(move |j| {
                let t = if grid.n_t > 1 { -grid.t_max + 2.0 * grid.t_max * j as f64 / (grid.n_t - 1) as f64 } else { 0.0 };
                Complex64::new(sigma, t)
            })
        })
        .collect();
    let total = axis.len().checked_pow(r as u32).filter(|&n| n <= MAX_WITNESS_SAMPLES).ok_or_else(|| {
        AlgebraError::Invalid(format!("witness grid has more than {MAX_WITNESS_SAMPLES} samples"))
    })?;
    let terms: Vec<(Vec<f64>, Complex64)> =
        a.coeffs().iter().map(|(k, c)| (basis.embedded_value(k), c.to_complex64())).collect();
    let mut min_modulus = f64::INFINITY;
    let mut argmin = vec![Complex64::new(0.0, 0.0); r];
    let mut s = vec![Complex64::new(0.0, 0.0); r];
    for idx in 0..total {
        let mut rem = idx;
        for si in s.iter_mut() {
            *si = axis[rem % axis.len()];
            rem /= axis.len();
        }
        let v: Complex64 = terms
            .iter()
            .map(|(lam, c)| {
                let e: Complex64 = lam.iter().zip(&s).map(|(x, si)| si * *x).sum();
                c * (-e).exp()
            })
            .sum();
        if v.norm() < min_modulus {
            min_modulus = v.norm();
            argmin.clone_from(&s);
        }
    }
    let disk = is_naturals(basis).then(|| {
        let deg = a.coeffs().keys().filter_map(|k| k.exponents().map(|m| m.get(&0).copied().unwrap_or(0))).max().unwrap_or(0);
        let mut poly = vec![Complex64::new(0.0, 0.0); deg as usize + 1];
        for (k, c) in a.coeffs() {
            let n = k.exponents().and_then(|m| m.get(&0).copied()).unwrap_or(0);
            poly[n as usize] = c.to_complex64();
        }
        disk_certificate(&poly, grid.disk_radial, grid.disk_angular)
    });
    Ok(WitnessReport { min_modulus, argmin, samples: total, disk })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SeriesKind {
    Identity,
    Exp,
    /// `1/z`, expanded about a nonzero center.
    Reciprocal,
    /// Principal logarithm, expanded about a nonzero center.
    Log,
    /// Explicit coefficients in powers of `z − center`.
    Polynomial { coeffs: Vec<Complex64> },
}

/// A holomorphic function given by its Taylor expansion about `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    #[serde(flatten)]
    pub kind: SeriesKind,
    pub center: Complex64,
}

impl PowerSeries {
    pub fn new(kind: SeriesKind, center: Complex64) -> Result<Self, AlgebraError> {
        if matches!(kind, SeriesKind::Reciprocal | SeriesKind::Log) && center.norm() == 0.0 {
            return Err(AlgebraError::Invalid("expansion center must be nonzero".into()));
        }
        Ok(PowerSeries { kind, center })
    }

    pub fn radius(&self) -> f64 {
        match self.kind {
            SeriesKind::Reciprocal | SeriesKind::Log => self.center.norm(),
            _ => f64::INFINITY,
        }
    }

    pub fn coefficient(&self, k: usize) -> Complex64 {
        let c0 = self.center;
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            SeriesKind::Identity => match k {
                0 => c0,
                1 => one,
                _ => Complex64::new(0.0, 0.0),
            },
            SeriesKind::Exp => c0.exp() / (1..=k).map(|i| i as f64).product::<f64>(),
            SeriesKind::Reciprocal => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / c0.powi(k as i32 + 1)
            }
            SeriesKind::Log => {
                if k == 0 {
                    c0.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (k as f64 * c0.powi(k as i32))
                }
            }
            SeriesKind::Polynomial { coeffs } => coeffs.get(k).copied().unwrap_or_default(),
        }
    }

    /// Bound on `Σ_{k > K} |f_k| r^k`.
    pub fn tail_bound(&self, k: usize, r: f64) -> f64 {
        let kf = k as f64;
        match &self.kind {
            SeriesKind::Identity => {
                if k >= 1 {
                    0.0
                } else {
                    r
                }
            }
            SeriesKind::Polynomial { coeffs } => {
                coeffs.iter().enumerate().skip(k + 1).map(|(j, c)| c.norm() * r.powi(j as i32)).sum()
            }
            SeriesKind::Exp => {
                if r >= kf + 2.0 {
                    return f64::INFINITY;
                }
                let lead = (1..=k + 1).fold(self.center.exp().norm(), |acc, i| acc * r / i as f64);
                lead / (1.0 - r / (kf + 2.0))
            }
            SeriesKind::Reciprocal => {
                let m = self.center.norm();
                (r / m).powi(k as i32 + 1) / (m * (1.0 - r / m))
            }
            SeriesKind::Log => {
                let x = r / self.center.norm();
                x.powi(k as i32 + 1) / ((kf + 1.0) * (1.0 - x))
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SeriesKind::Identity => z,
            SeriesKind::Exp => z.exp(),
            SeriesKind::Reciprocal => 1.0 / z,
            SeriesKind::Log => z.ln(),
            SeriesKind::Polynomial { coeffs } => {
                let d = z - self.center;
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * d + c)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionCertificate {
    /// `‖a − c₀ε‖_w`.
    pub norm: f64,
    pub radius: f64,
    pub terms: usize,
    /// Weighted-norm bound on the discarded part of the series.
    pub tail_bound: f64,
}

/// `c = Σ_k f_k (a − c₀ε)^{∗k}`, so that `c̃ = f ∘ ã`.
///
/// Requires the norm-ball condition `‖a − c₀ε‖_w < R`, which is sufficient but
/// stronger than a spectral condition.
pub fn compose_series(
    f: &PowerSeries,
    a: &FloatElement,
    w: &WeightFn,
    tol: f64,
    max_terms: usize,
) -> Result<(FloatElement, CompositionCertificate), AlgebraError> {
    let unit = FloatElement::unit(a.basis().clone());
    let d = a.sub(&unit.scale(&f.center))?;
    let norm = d.weighted_norm(w);
    let radius = f.radius();
    if norm >= radius {
        return Err(AlgebraError::CompositionOutOfRadius { norm, radius });
    }
    let mut terms = 0usize;
    while f.tail_bound(terms, norm) >= tol {
        terms += 1;
        if terms > max_terms {
            return Err(AlgebraError::MaxTermsExceeded { needed: terms, max: max_terms });
        }
    }
    let mut power = unit.clone();
    power.truncation = a.truncation();
    let mut sum = power.scale(&f.coefficient(0));
    for k in 1..=terms {
        power = power.convolve(&d)?;
        sum = sum.add(&power.scale(&f.coefficient(k)))?;
    }
    let tail_bound = f.tail_bound(terms, norm);
    Ok((sum, CompositionCertificate { norm, radius, terms, tail_bound }))
}
