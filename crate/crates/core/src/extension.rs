//! Extension of a bounded character from a finite set `Γ` of rational
//! vectors to a free monoid `[B] ⊇ Γ` with `B` ℚ-independent.
//!
//! Moduli are handled in the log domain by a rational functional `ζ`, zeros
//! by a separating functional `θ`, and `B` is the dual basis of a rational
//! basis of `Γ*` adapted to `ζ` and `θ`. Phases are fitted separately.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cones::{self, ConeError, RationalCone};
use crate::json::ComplexJson;
use crate::linalg;
use crate::scalar::{q_from_f64, q_to_f64, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("Γ is empty")]
    Empty,
    #[error("Γ vectors have inconsistent dimensions or ψ has the wrong length")]
    Dimension,
    #[error("Γ contains the zero vector at index {0}")]
    ZeroInGamma(usize),
    #[error("|ψ(γ_{index})| = {modulus} > 1")]
    Unbounded { index: usize, modulus: f64 },
    #[error("moduli are not multiplicatively consistent (relative residual {residual:e})")]
    InconsistentModuli { residual: f64 },
    #[error("zeros of ψ are inconsistent: 0 lies in conv(π(Γ₀))")]
    InconsistentZeros,
    #[error("0 lies in the convex hull of Γ")]
    NotPointed,
    #[error("Γ does not span the coordinate space")]
    NotSpanning,
    #[error("θ vanishes on a zero of ψ")]
    ThetaVanishes,
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterExtensionProblem {
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub gamma: Vec<Vec<Q>>,
    pub psi: Vec<ComplexJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionOptions {
    /// `|ψ(γ)| ≤ zero_tol` counts as a zero of `ψ`.
    pub zero_tol: f64,
    /// `-ln|ψ(γ)| ≤ snap_tol` counts as modulus one.
    pub snap_tol: f64,
    /// Relative tolerance of the multiplicative consistency check on moduli.
    pub consistency_tol: f64,
    /// Largest `|m|` tried for the `2π m` ambiguity of each phase.
    pub phase_multiple_bound: i64,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions { zero_tol: 0.0, snap_tol: 1e-12, consistency_tol: 1e-9, phase_multiple_bound: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarSplit {
    /// `ψ₁(γ) = |ψ(γ)|`.
    pub moduli: Vec<f64>,
    /// `ψ₂(γ) = ψ(γ)/|ψ(γ)|` on `Γ′`, `None` on `Γ₀`.
    pub phases: Vec<Option<ComplexJson>>,
}

impl PolarSplit {
    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.phases.len()).filter(|&i| self.phases[i].is_some()).collect()
    }

    pub fn zeros(&self) -> Vec<usize> {
        (0..self.phases.len()).filter(|&i| self.phases[i].is_none()).collect()
    }
}

pub fn polar_split(psi: &[Complex64], zero_tol: f64) -> PolarSplit {
    let moduli: Vec<f64> = psi.iter().map(|z| z.norm()).collect();
    let phases = psi.iter().zip(&moduli).map(|(z, &m)| (m > zero_tol).then(|| (z / m).into())).collect();
    PolarSplit { moduli, phases }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusFunctional {
    /// `ρ′`, rational, vanishing on the orthogonal complement of `V′`.
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub rho: Vec<Q>,
    /// Indices (into the input) whose values fixed `ρ′`.
    pub anchors: Vec<usize>,
    /// Largest relative misfit `|ρ′(γ) + ln ψ₁(γ)|` over the input.
    pub residual: f64,
}

/// The rational functional `ρ′` with `ρ′(γ) = −ln ψ₁(γ)` on `Γ′`.
///
/// Log-moduli are converted exactly to dyadic rationals; values at most
/// `snap_tol` are set to zero and used first, so `ρ′` vanishes exactly on
/// their span.
pub fn modulus_functional(
    gamma_prime: &[Vec<Q>],
    moduli: &[f64],
    dim: usize,
    opts: &ExtensionOptions,
) -> Result<ModulusFunctional, ExtensionError> {
    if gamma_prime.len() != moduli.len() || gamma_prime.iter().any(|g| g.len() != dim) {
        return Err(ExtensionError::Dimension);
    }
    let logs: Vec<f64> = moduli.iter().map(|m| (-m.ln()).max(0.0)).collect();
    let snapped: Vec<Q> = logs
        .iter()
        .map(|&v| if v <= opts.snap_tol { Q::zero() } else { q_from_f64(v).expect("finite log-modulus") })
        .collect();
    let mut order: Vec<usize> = (0..gamma_prime.len()).filter(|&i| snapped[i].is_zero()).collect();
    order.extend((0..gamma_prime.len()).filter(|&i| !snapped[i].is_zero()));
    let ordered: Vec<Vec<Q>> = order.iter().map(|&i| gamma_prime[i].clone()).collect();
    let anchors: Vec<usize> = linalg::independent_subset(&ordered).into_iter().map(|k| order[k]).collect();

    let rho = if anchors.is_empty() {
        vec![Q::zero(); dim]
    } else {
        // minimal-norm solution: ρ′ = Gᵀ (G Gᵀ)⁻¹ v
        let g: Vec<Vec<Q>> = anchors.iter().map(|&i| gamma_prime[i].clone()).collect();
        let gram: Vec<Vec<Q>> = g.iter().map(|a| g.iter().map(|b| linalg::dot(a, b)).collect()).collect();
        let inv = linalg::inverse(&gram).expect("independent rows have an invertible Gram matrix");
        let v: Vec<Q> = anchors.iter().map(|&i| snapped[i].clone()).collect();
        let y = linalg::mat_vec(&inv, &v);
        (0..dim).map(|k| g.iter().zip(&y).fold(Q::zero(), |acc, (row, yi)| acc + &row[k] * yi)).collect()
    };
    let mut residual: f64 = 0.0;
    for (gp, &v) in gamma_prime.iter().zip(&logs) {
        let fit = q_to_f64(&linalg::dot(&rho, gp));
        residual = residual.max((fit - v).abs() / v.abs().max(1.0));
    }
    if residual > opts.consistency_tol {
        return Err(ExtensionError::InconsistentModuli { residual });
    }
    Ok(ModulusFunctional { rho, anchors, residual })
}

/// A rational `θ` with `θ(α) > 0` on `Γ₀` and `θ = 0` on `V′ = span(v_prime)`.
///
/// `Γ₀` is projected to exact quotient coordinates `V/V′` (using standard
/// basis vectors as complement), separated there and pulled back.
pub fn zero_set_separation(gamma_zero: &[Vec<Q>], v_prime: &[Vec<Q>], dim: usize) -> Result<Vec<Q>, ExtensionError> {
    if gamma_zero.is_empty() {
        return Ok(vec![Q::zero(); dim]);
    }
    let mut frame: Vec<Vec<Q>> = linalg::independent_subset(v_prime).into_iter().map(|i| v_prime[i].clone()).collect();
    let k = frame.len();
    for j in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[j] = Q::one();
        frame.push(e);
        if linalg::rank(&frame) < frame.len() {
            frame.pop();
        }
    }
    // coefficients in the frame: columns of the frame matrix, inverted
    let cols = linalg::transpose(&frame, dim);
    let inv = linalg::inverse(&cols).expect("frame is a basis");
    let proj: Vec<Vec<Q>> = inv[k..].to_vec();
    let images: Vec<Vec<Q>> = gamma_zero.iter().map(|a| linalg::mat_vec(&proj, a)).collect();
    if images.iter().any(|x| x.is_empty()) {
        return Err(ExtensionError::InconsistentZeros);
    }
    let chi = match cones::separate(&images) {
        Ok(chi) => chi,
        Err(ConeError::ZeroInHull { .. }) => return Err(ExtensionError::InconsistentZeros),
        Err(e) => return Err(e.into()),
    };
    Ok((0..dim).map(|c| proj.iter().zip(&chi).fold(Q::zero(), |acc, (row, x)| acc + &row[c] * x)).collect())
}

/// `ζ = ρ′ + cθ` with the smallest integer `c ≥ 0` making `ζ ≥ 0` on `Γ₀`.
pub fn combine_zeta(rho: &[Q], theta: &[Q], gamma_zero: &[Vec<Q>]) -> Result<(Vec<Q>, BigInt), ExtensionError> {
    let mut c = BigInt::zero();
    for a in gamma_zero {
        let t = linalg::dot(theta, a);
        if !t.is_positive() {
            return Err(ExtensionError::ThetaVanishes);
        }
        let need = (-linalg::dot(rho, a) / t).ceil().to_integer();
        c = c.max(need);
    }
    let cq = Q::from_integer(c.clone());
    Ok((linalg::add(rho, &linalg::scale(theta, &cq)), c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualBasis {
    /// `β*₁, …, β*_k ∈ Γ*`, a ℚ-basis of the dual space.
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub dual: Vec<Vec<Q>>,
    /// `β₁, …, β_k` with `β*_i(β_j) = δ_ij`, rescaled so that `Γ ⊆ [B]`.
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub basis: Vec<Vec<Q>>,
    /// `γ = Σ_κ ν_κ β_κ` for each `γ ∈ Γ`.
    pub exponents: Vec<Vec<u64>>,
    /// `θ = Σ t_κ β*_κ` with `t ≥ 0`.
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub theta_coeffs: Vec<Q>,
    /// `ζ = Σ z_κ β*_κ` with `z ≥ 0`; equivalently `z_κ = ζ(β_κ)`.
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub zeta_coeffs: Vec<Q>,
}

/// Chooses `β*` in `Γ*` with `θ` and `ζ` in its nonnegative cone and returns
/// the rescaled dual basis `B`. `Γ` must span the coordinate space.
pub fn build_dual_basis(gamma: &[Vec<Q>], zeta: &[Q], theta: &[Q]) -> Result<DualBasis, ExtensionError> {
    let dim = zeta.len();
    if gamma.iter().any(|g| g.len() != dim) || theta.len() != dim {
        return Err(ExtensionError::Dimension);
    }
    if linalg::rank(gamma) < dim {
        return Err(ExtensionError::NotSpanning);
    }
    let star = cones::dual_cone(dim, gamma)?;
    let rays = cones::extreme_rays(&star.cone)?;
    let theta_zero = linalg::is_zero_vec(theta);

    let mut dual: Vec<Vec<Q>> = Vec::new();
    if linalg::is_zero_vec(zeta) {
        if !theta_zero {
            dual.push(theta.to_vec());
        }
    } else {
        let all = RationalCone::new(dim, &rays)?;
        let face: Vec<Vec<Q>> = cones::minimal_face_containing(&all, zeta)?.into_iter().map(|i| rays[i].clone()).collect();
        let face_cone = RationalCone::new(dim, &face)?;
        if theta_zero || face_cone.contains(theta) {
            let b1 = (!theta_zero).then_some(theta);
            dual = cones::basis_through_point(&face, zeta, b1)?;
        } else {
            dual = cones::basis_through_point(&face, zeta, None)?;
            dual.push(theta.to_vec());
        }
    }
    for r in &rays {
        dual.push(r.clone());
        if linalg::rank(&dual) < dual.len() {
            dual.pop();
        }
    }
    debug_assert_eq!(dual.len(), dim);

    // β_j is column j of (β*)⁻¹
    let inv = linalg::inverse(&dual).expect("dual basis is a basis");
    let mut basis = linalg::transpose(&inv, dim);
    let mut exps_q: Vec<Vec<Q>> = gamma.iter().map(|g| linalg::mat_vec(&dual, g)).collect();
    for k in 0..dim {
        let l = exps_q.iter().fold(BigInt::one(), |acc, e| acc.lcm(e[k].denom()));
        let lq = Q::from_integer(l);
        basis[k] = linalg::scale(&basis[k], &lq.recip());
        dual[k] = linalg::scale(&dual[k], &lq);
        for e in exps_q.iter_mut() {
            e[k] = &e[k] * &lq;
        }
    }
    let exponents = exps_q
        .iter()
        .map(|e| {
            e.iter()
                .map(|x| {
                    debug_assert!(x.is_integer() && !x.is_negative());
                    x.to_integer().to_u64().ok_or(ExtensionError::ExponentOverflow)
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<u64>>, _>>()?;
    let theta_coeffs = linalg::mat_vec(&basis, theta);
    let zeta_coeffs = linalg::mat_vec(&basis, zeta);
    Ok(DualBasis { dual, basis, exponents, theta_coeffs, zeta_coeffs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseStatus {
    /// Phases fitted exactly (up to float round-off) on `Γ′`.
    Fitted,
    /// No fit found within the multiple bound; phases solve only an
    /// independent subset of the constraints.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterExtensionResult {
    /// `B` in the input coordinates.
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub basis: Vec<Vec<Q>>,
    pub exponent_maps: Vec<Vec<u64>>,
    /// `φ(β_κ)`.
    pub phi: Vec<ComplexJson>,
    /// Basis of `V = span(Γ)` in which `ζ`, `θ` and `β*` are expressed.
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub frame: Vec<Vec<Q>>,
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub zeta: Vec<Q>,
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub theta: Vec<Q>,
    pub c: String,
    pub dual: DualBasis,
    pub phase_status: PhaseStatus,
    /// Largest `|φ(γ) − ψ(γ)|` over `Γ`.
    pub max_error: f64,
}

impl CharacterExtensionResult {
    /// `φ(γ) = Π φ(β_κ)^{ν_κ}` for an exponent vector.
    pub fn evaluate(&self, nu: &[u64]) -> Complex64 {
        self.phi
            .iter()
            .zip(nu)
            .fold(Complex64::new(1.0, 0.0), |acc, (z, &n)| acc * Complex64::from(*z).powu(n as u32))
    }
}

/// Runs the whole pipeline: polar split, modulus functional, separation of
/// the zero set, `ζ`, the dual basis and the phase fit.
pub fn extend_character(
    problem: &CharacterExtensionProblem,
    opts: &ExtensionOptions,
) -> Result<CharacterExtensionResult, ExtensionError> {
    let gamma_in = &problem.gamma;
    let d = gamma_in.first().ok_or(ExtensionError::Empty)?.len();
    if gamma_in.iter().any(|g| g.len() != d) || problem.psi.len() != gamma_in.len() {
        return Err(ExtensionError::Dimension);
    }
    if let Some(i) = gamma_in.iter().position(|g| linalg::is_zero_vec(g)) {
        return Err(ExtensionError::ZeroInGamma(i));
    }
    let psi: Vec<Complex64> = problem.psi.iter().map(|&z| z.into()).collect();
    if let Some((index, z)) = psi.iter().enumerate().find(|(_, z)| z.norm() > 1.0 + 1e-12) {
        return Err(ExtensionError::Unbounded { index, modulus: z.norm() });
    }
    if cones::conv_q_contains_zero(gamma_in)?.contains_zero() {
        return Err(ExtensionError::NotPointed);
    }

    // coordinates of Γ in a basis of V = span(Γ)
    let frame: Vec<Vec<Q>> = linalg::independent_subset(gamma_in).into_iter().map(|i| gamma_in[i].clone()).collect();
    let m = frame.len();
    let frame_cols = linalg::transpose(&frame, d);
    let gamma: Vec<Vec<Q>> =
        gamma_in.iter().map(|g| linalg::solve(&frame_cols, g, m).expect("γ lies in span(Γ)")).collect();

    let split = polar_split(&psi, opts.zero_tol);
    let nz = split.nonzero();
    let zs = split.zeros();
    let gp: Vec<Vec<Q>> = nz.iter().map(|&i| gamma[i].clone()).collect();
    let g0: Vec<Vec<Q>> = zs.iter().map(|&i| gamma[i].clone()).collect();
    let moduli: Vec<f64> = nz.iter().map(|&i| split.moduli[i]).collect();

    let modulus = modulus_functional(&gp, &moduli, m, opts)?;
    let theta = zero_set_separation(&g0, &gp, m)?;
    let (zeta, c) = combine_zeta(&modulus.rho, &theta, &g0)?;
    let dual = build_dual_basis(&gamma, &zeta, &theta)?;

    let basis: Vec<Vec<Q>> = dual.basis.iter().map(|b| linalg::mat_vec(&frame_cols, b)).collect();

    let phases: Vec<f64> = nz.iter().map(|&i| Complex64::from(split.phases[i].unwrap()).arg()).collect();
    let rows: Vec<Vec<Q>> = nz.iter().map(|&i| dual.exponents[i].iter().map(|&e| Q::from_integer(e.into())).collect()).collect();
    let (tau, phase_status) = fit_phases(&rows, &phases, m, opts.phase_multiple_bound);

    let phi: Vec<ComplexJson> = (0..m)
        .map(|k| {
            if dual.theta_coeffs[k].is_positive() {
                Complex64::new(0.0, 0.0).into()
            } else {
                Complex64::from_polar((-q_to_f64(&dual.zeta_coeffs[k])).exp(), tau[k]).into()
            }
        })
        .collect();
    let mut result = CharacterExtensionResult {
        basis,
        exponent_maps: dual.exponents.clone(),
        phi,
        frame,
        zeta,
        theta,
        c: c.to_string(),
        dual,
        phase_status,
        max_error: 0.0,
    };
    result.max_error = result
        .exponent_maps
        .iter()
        .zip(&psi)
        .map(|(nu, z)| (result.evaluate(nu) - z).norm())
        .fold(0.0, f64::max);
    Ok(result)
}

/// Real `τ` with `N τ ≡ a (mod 2π)` for an integer matrix `N`.
///
/// An independent set of rows fixes `τ` once its `2π` multiples are chosen;
/// multiples up to `bound` are tried in order of size until every other row
/// is satisfied modulo `2π`.
fn fit_phases(rows: &[Vec<Q>], a: &[f64], k: usize, bound: i64) -> (Vec<f64>, PhaseStatus) {
    if rows.is_empty() {
        return (vec![0.0; k], PhaseStatus::Fitted);
    }
    let indep = linalg::independent_subset(rows);
    let base: Vec<Vec<Q>> = indep.iter().map(|&i| rows[i].clone()).collect();
    // other rows as rational combinations of the independent ones
    let base_t = linalg::transpose(&base, k);
    let others: Vec<(usize, Vec<f64>)> = (0..rows.len())
        .filter(|i| !indep.contains(i))
        .map(|i| {
            let c = linalg::solve(&base_t, &rows[i], base.len()).expect("row in span");
            (i, c.iter().map(q_to_f64).collect())
        })
        .collect();
    let solve_tau = |m: &[i64]| -> Vec<f64> {
        let rhs: Vec<Q> =
            indep.iter().zip(m).map(|(&i, &mi)| q_from_f64(a[i] + 2.0 * PI * mi as f64).expect("finite")).collect();
        linalg::solve(&base, &rhs, k).expect("independent rows").iter().map(q_to_f64).collect()
    };
    let fits = |m: &[i64]| {
        others.iter().all(|(j, c)| {
            let val: f64 = indep.iter().zip(m).zip(c).map(|((&i, &mi), ci)| ci * (a[i] + 2.0 * PI * mi as f64)).sum();
            let turns = (val - a[*j]) / (2.0 * PI);
            (turns - turns.round()).abs() < 1e-9
        })
    };
    let n = indep.len();
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        candidates = candidates
            .into_iter()
            .flat_map(|p| (-bound..=bound).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    candidates.sort_by_key(|m| (m.iter().map(|x| x.abs()).max().unwrap_or(0), m.iter().map(|x| x.abs()).sum::<i64>(), m.clone()));
    match candidates.iter().find(|m| fits(m)) {
        Some(m) => (solve_tau(m), PhaseStatus::Fitted),
        None => (solve_tau(&vec![0; n]), PhaseStatus::Heuristic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::semigroup::check_q_independence;

    fn v(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| qi(a)).collect()
    }

    fn cj(re: f64, im: f64) -> ComplexJson {
        ComplexJson { re, im }
    }

    #[test]
    fn polar_split_examples() {
        let s = polar_split(&[Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)], 0.0);
        assert_eq!(s.moduli, vec![0.5, 0.0, 1.0]);
        assert_eq!(s.phases, vec![Some(cj(-1.0, 0.0)), None, Some(cj(0.0, 1.0))]);
        assert_eq!(s.zeros(), vec![1]);
    }

    #[test]
    fn modulus_functional_examples() {
        let o = ExtensionOptions::default();
        let r = modulus_functional(&[v(&[1, 0]), v(&[0, 1])], &[1.0, 1.0], 2, &o).unwrap();
        assert_eq!(r.rho, v(&[0, 0]));
        let r = modulus_functional(&[v(&[1, 0]), v(&[0, 1])], &[0.5, 1.0 / 3.0], 2, &o).unwrap();
        assert!((q_to_f64(&r.rho[0]) - 2f64.ln()).abs() < 1e-15);
        assert!((q_to_f64(&r.rho[1]) - 3f64.ln()).abs() < 1e-15);
        let r = modulus_functional(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])], &[0.5, 1.0 / 3.0, 1.0 / 6.0], 2, &o).unwrap();
        assert!((q_to_f64(&r.rho[1]) - 3f64.ln()).abs() < 1e-12);
        assert!(matches!(
            modulus_functional(&[v(&[1]), v(&[2])], &[0.5, 0.5], 1, &o),
            Err(ExtensionError::InconsistentModuli { .. })
        ));
    }

    #[test]
    fn zero_set_examples() {
        assert_eq!(zero_set_separation(&[], &[v(&[1, 0])], 2).unwrap(), v(&[0, 0]));
        assert_eq!(zero_set_separation(&[v(&[1, 0]), v(&[0, 1])], &[], 2).unwrap(), v(&[1, 1]));
        let t = zero_set_separation(&[v(&[1, 0])], &[v(&[1, 1])], 2).unwrap();
        assert_eq!(t, v(&[1, -1]));
        assert_eq!(zero_set_separation(&[v(&[2, 2])], &[v(&[1, 1])], 2), Err(ExtensionError::InconsistentZeros));
    }

    #[test]
    fn combine_zeta_examples() {
        let (z, c) = combine_zeta(&v(&[1, 2]), &v(&[0, 0]), &[]).unwrap();
        assert_eq!((z, c), (v(&[1, 2]), BigInt::zero()));
        let (_, c) = combine_zeta(&v(&[-3]), &v(&[2]), &[v(&[1])]).unwrap();
        assert_eq!(c, BigInt::from(2));
        let (_, c) = combine_zeta(&v(&[3]), &v(&[2]), &[v(&[1])]).unwrap();
        assert_eq!(c, BigInt::zero());
    }

    #[test]
    fn dual_basis_examples() {
        let g = [v(&[1, 0]), v(&[0, 1])];
        let d = build_dual_basis(&g, &v(&[0, 0]), &v(&[0, 0])).unwrap();
        assert!(check_q_independence(&d.dual));
        let d = build_dual_basis(&g, &[q(1, 2), qi(3)], &v(&[0, 0])).unwrap();
        let mut b = d.basis.clone();
        b.sort();
        assert_eq!(b, vec![v(&[0, 1]), v(&[1, 0])]);
        let d = build_dual_basis(&g, &v(&[0, 0]), &v(&[1, 1])).unwrap();
        assert!(linalg::positively_parallel(&d.dual[0], &v(&[1, 1])));
    }

    #[test]
    fn extension_examples() {
        let o = ExtensionOptions::default();
        let p = CharacterExtensionProblem { gamma: vec![v(&[1]), v(&[2])], psi: vec![cj(0.5, 0.0), cj(0.25, 0.0)] };
        let r = extend_character(&p, &o).unwrap();
        assert_eq!(r.basis, vec![v(&[1])]);
        assert!((Complex64::from(r.phi[0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(r.exponent_maps, vec![vec![1], vec![2]]);

        let p = CharacterExtensionProblem { gamma: vec![v(&[1])], psi: vec![cj(0.0, 0.0)] };
        let r = extend_character(&p, &o).unwrap();
        assert!(r.theta[0].is_positive());
        assert_eq!(Complex64::from(r.phi[0]), Complex64::new(0.0, 0.0));
        assert_eq!(r.max_error, 0.0);

        // phases with a relation: γ3 = γ1 + γ2
        let z1 = Complex64::from_polar(0.9, 2.5);
        let z2 = Complex64::from_polar(0.7, 2.0);
        let p = CharacterExtensionProblem {
            gamma: vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, 1])],
            psi: vec![z1.into(), z2.into(), (z1 * z2).into(), (z1 * z1 * z2).into()],
        };
        let r = extend_character(&p, &o).unwrap();
        assert_eq!(r.phase_status, PhaseStatus::Fitted);
        assert!(r.max_error < 1e-12, "{}", r.max_error);

        // not spanning: Γ on a line in ℚ²
        let p = CharacterExtensionProblem { gamma: vec![v(&[2, 2]), v(&[3, 3])], psi: vec![cj(0.25, 0.0), cj(0.125, 0.0)] };
        let r = extend_character(&p, &o).unwrap();
        assert_eq!(r.basis, vec![v(&[1, 1])]);
        assert!(r.max_error < 1e-15);
    }

    #[test]
    fn zero_and_modulus_mix() {
        // B0 = {(1,0),(0,1)}, φ0 = (0, 0.5i): every γ with a positive first exponent is a zero
        let p = CharacterExtensionProblem {
            gamma: vec![v(&[1, 1]), v(&[0, 2]), v(&[3, 0])],
            psi: vec![cj(0.0, 0.0), cj(-0.25, 0.0), cj(0.0, 0.0)],
        };
        let r = extend_character(&p, &ExtensionOptions::default()).unwrap();
        assert!(check_q_independence(&r.basis));
        assert!(r.max_error < 1e-12);
        assert!(r.phi.iter().all(|z| Complex64::from(*z).norm() <= 1.0 + 1e-12));
    }
}
