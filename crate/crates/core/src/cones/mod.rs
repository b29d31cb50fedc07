//! Exact rational convex geometry: convex hulls, polyhedral cones, duals,
//! faces, separation and the basis-through-point construction.
//!
//! Vectors and functionals are plain `Vec<Q>`; a functional `ρ` acts on `x` by
//! the dot product.

pub mod fm;
pub mod lp;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::Q;
use lp::LpResult;

pub type RationalVector = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("empty input")]
    Empty,
    #[error("vectors have inconsistent dimensions")]
    Dimension,
    #[error("0 lies in the rational convex hull")]
    ZeroInHull { coeffs: Vec<Q> },
    #[error("sign pattern {0:?} is missing")]
    MissingPattern(Vec<i8>),
    #[error("vector {0} has a zero entry")]
    ZeroEntry(usize),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("point is not in the cone")]
    NotInCone,
    #[error("point is not in the relative interior of the face")]
    NotRelativeInterior,
    #[error("b1 must be a nonzero vector of the face")]
    BadFirstVector,
}

/// `cone(E) = Σ ℚ₀⁺ e`, stored reduced: nonzero primitive generators, no two
/// positively parallel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCone {
    pub dim: usize,
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub generators: Vec<RationalVector>,
}

impl RationalCone {
    pub fn new(dim: usize, gens: &[RationalVector]) -> Result<Self, ConeError> {
        if gens.iter().any(|g| g.len() != dim) {
            return Err(ConeError::Dimension);
        }
        let mut generators: Vec<RationalVector> = Vec::new();
        for g in gens {
            if linalg::is_zero_vec(g) {
                continue;
            }
            let p = linalg::primitive(g);
            if !generators.contains(&p) {
                generators.push(p);
            }
        }
        Ok(RationalCone { dim, generators })
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        lp::cone_combination(&self.generators, x).is_some()
    }

    /// `C ∩ −C = {0}`, i.e. no nontrivial nonnegative combination vanishes.
    pub fn is_pointed(&self) -> bool {
        self.generators.is_empty() || !matches!(conv_q_contains_zero(&self.generators), Ok(HullTest::Contains { .. }))
    }

    /// Mutual containment of generators.
    pub fn same_cone(&self, other: &RationalCone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }
}

fn check_dims(e: &[RationalVector]) -> Result<usize, ConeError> {
    let d = e.first().ok_or(ConeError::Empty)?.len();
    if e.iter().any(|x| x.len() != d) {
        return Err(ConeError::Dimension);
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HullTest {
    /// Convex coefficients `q ≥ 0`, `Σ q = 1`, `Σ q_i x_i = 0`.
    Contains {
        #[serde(with = "crate::scalar::serde_q::vec")]
        coeffs: Vec<Q>,
    },
    /// A functional with `ρ(x) ≥ 1` on every input, certifying `0 ∉ conv(E)`.
    Separated {
        #[serde(with = "crate::scalar::serde_q::vec")]
        rho: Vec<Q>,
    },
}

impl HullTest {
    pub fn contains_zero(&self) -> bool {
        matches!(self, HullTest::Contains { .. })
    }
}

/// Decides `0 ∈ conv_ℚ(E)` by exact LP feasibility.
pub fn conv_q_contains_zero(e: &[RationalVector]) -> Result<HullTest, ConeError> {
    let d = check_dims(e)?;
    let n = e.len();
    let mut rows: Vec<Vec<Q>> = (0..d).map(|k| e.iter().map(|x| x[k].clone()).collect()).collect();
    rows.push(vec![Q::one(); n]);
    let mut rhs = vec![Q::zero(); d];
    rhs.push(Q::one());
    if let Some(coeffs) = lp::feasible(&rows, &rhs, n) {
        return Ok(HullTest::Contains { coeffs });
    }
    let rho = separation_lp(e, d).expect("LP feasible when 0 is outside the hull");
    Ok(HullTest::Separated { rho })
}

/// `min ‖ρ‖₁` subject to `ρ(x_i) ≥ 1`, with `ρ = ρ⁺ − ρ⁻`.
fn separation_lp(e: &[RationalVector], d: usize) -> Option<Vec<Q>> {
    let n = e.len();
    let cols = 2 * d + n;
    let rows: Vec<Vec<Q>> = e
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = Vec::with_capacity(cols);
            r.extend(x.iter().cloned());
            r.extend(x.iter().map(|v| -v));
            r.extend((0..n).map(|k| if k == i { -Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let mut cost = vec![Q::one(); 2 * d];
    cost.extend(vec![Q::zero(); n]);
    match lp::minimize(&rows, &vec![Q::one(); n], &cost) {
        LpResult::Optimal { x, .. } => Some((0..d).map(|k| &x[k] - &x[d + k]).collect()),
        _ => None,
    }
}

/// A rational `ρ` with `ρ(x) ≥ 1` for all `x ∈ E`.
pub fn separate(e: &[RationalVector]) -> Result<Vec<Q>, ConeError> {
    match conv_q_contains_zero(e)? {
        HullTest::Separated { rho } => Ok(rho),
        HullTest::Contains { coeffs } => Err(ConeError::ZeroInHull { coeffs }),
    }
}

/// Fourier–Motzkin decision of whether `{ρ : ρ(x) ≥ 1 ∀x ∈ E}` is nonempty.
pub fn separable_fm(e: &[RationalVector]) -> bool {
    fm::feasible(e, &vec![Q::one(); e.len()])
}

/// Convex coefficients with `Σ q_u u = 0`, built by eliminating the last
/// coordinate pairwise and recursing. Each sign pattern uses the lowest-index
/// vector carrying it.
pub fn sign_lemma_witness(u: &[RationalVector]) -> Result<Vec<Q>, ConeError> {
    let n = check_dims(u)?;
    if let Some(i) = u.iter().position(|x| x.iter().any(Zero::is_zero)) {
        return Err(ConeError::ZeroEntry(i));
    }
    // each working vector carries its coefficients over u
    let mut work: Vec<(Vec<Q>, Vec<Q>)> = u
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut c = vec![Q::zero(); u.len()];
            c[i] = Q::one();
            (x.clone(), c)
        })
        .collect();
    let pattern = |x: &[Q], len: usize| -> Vec<i8> { x[..len].iter().map(|v| if v.is_positive() { 1 } else { -1 }).collect() };
    for len in (1..=n).rev() {
        let mut next = Vec::new();
        for bits in 0..1u64 << (len - 1) {
            let prefix: Vec<i8> = (0..len - 1).map(|j| if bits >> (len - 2 - j) & 1 == 1 { -1 } else { 1 }).collect();
            let find = |last: i8| {
                let mut p = prefix.clone();
                p.push(last);
                work.iter().find(|(x, _)| pattern(x, len) == p).ok_or(ConeError::MissingPattern(p))
            };
            let (xp, cp) = find(1)?;
            let (xn, cn) = find(-1)?;
            // t xp + (1 - t) xn has zero in coordinate len-1
            let a = &xp[len - 1];
            let b = -&xn[len - 1];
            let t = &b / (a + &b);
            let s = a / (a + &b);
            next.push((linalg::add(&linalg::scale(xp, &t), &linalg::scale(xn, &s)), linalg::add(&linalg::scale(cp, &t), &linalg::scale(cn, &s))));
        }
        work = next;
    }
    Ok(work.pop().expect("one vector remains").1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCone {
    pub cone: RationalCone,
    /// Basis of the lineality space `{ρ : ρ(E) = 0}`; empty when `E` spans.
    #[serde(with = "crate::scalar::serde_q::vec_vec")]
    pub lineality: Vec<RationalVector>,
}

/// Generators of `E* = {ρ : ρ(x) ≥ 0 ∀x ∈ E}` by double description: start
/// from the rays `±e_i` of the whole space, add one inequality at a time,
/// combine every positive ray with every negative one and prune redundant
/// rays by exact LP.
pub fn dual_cone(dim: usize, e: &[RationalVector]) -> Result<DualCone, ConeError> {
    if e.iter().any(|x| x.len() != dim) {
        return Err(ConeError::Dimension);
    }
    let mut rays: Vec<Vec<Q>> = Vec::new();
    for i in 0..dim {
        for sign in [1, -1] {
            let mut v = vec![Q::zero(); dim];
            v[i] = Q::from_integer(sign.into());
            rays.push(v);
        }
    }
    for a in e {
        if linalg::is_zero_vec(a) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| linalg::dot(a, r)).collect();
        let mut next: Vec<Vec<Q>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&vals).filter(|(_, v)| v.is_positive()) {
            for (n, vn) in rays.iter().zip(&vals).filter(|(_, v)| v.is_negative()) {
                let r = linalg::sub(&linalg::scale(n, vp), &linalg::scale(p, vn));
                if !linalg::is_zero_vec(&r) {
                    next.push(r);
                }
            }
        }
        rays = prune(&RationalCone::new(dim, &next)?.generators);
    }
    let rows: Vec<Vec<Q>> = e.to_vec();
    let lineality = if rows.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect()
    } else {
        linalg::kernel(&rows, dim)
    };
    Ok(DualCone { cone: RationalCone::new(dim, &rays)?, lineality })
}

/// Drops generators lying in the cone of the remaining ones.
fn prune(gens: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut kept: Vec<Vec<Q>> = gens.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Vec<Q>> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        if lp::cone_combination(&others, &kept[i]).is_some() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Generators spanning the extreme rays of a pointed cone.
pub fn extreme_rays(c: &RationalCone) -> Result<Vec<RationalVector>, ConeError> {
    if !c.is_pointed() {
        return Err(ConeError::NotPointed);
    }
    Ok(prune(&c.generators))
}

/// The minimal face of `C` containing `x`, as indices into `C.generators`.
///
/// Generator `g_j` belongs to the face iff `x = Σ λ_i g_i` with `λ ≥ 0` and
/// `λ_j > 0` is possible; `x` then lies in the relative interior of the
/// cone generated by the returned subset.
pub fn minimal_face_containing(c: &RationalCone, x: &[Q]) -> Result<Vec<usize>, ConeError> {
    if x.len() != c.dim {
        return Err(ConeError::Dimension);
    }
    if !c.contains(x) {
        return Err(ConeError::NotInCone);
    }
    let rows: Vec<Vec<Q>> = (0..c.dim).map(|k| c.generators.iter().map(|g| g[k].clone()).collect()).collect();
    let n = c.generators.len();
    let mut face = Vec::new();
    for j in 0..n {
        let cost: Vec<Q> = (0..n).map(|i| if i == j { -Q::one() } else { Q::zero() }).collect();
        match lp::minimize(&rows, x, &cost) {
            LpResult::Optimal { value, .. } if value.is_negative() => face.push(j),
            LpResult::Unbounded => face.push(j),
            _ => {}
        }
    }
    Ok(face)
}

/// A ℚ-basis `b₁, …, b_ℓ` of `span(F)` made of vectors of `F` with `η` in
/// the real cone of the basis; `b₁` is the given vector when one is supplied.
///
/// `F` must be pointed and `η` in its relative interior. The construction
/// walks from `b₁` through `η` to the relative boundary of the slice
/// `{y ∈ F : χ(y) = 1}` (with `χ` separating `F` from 0), recurses on the
/// face hit there and completes with extreme rays.
pub fn basis_through_point(
    face: &[RationalVector],
    eta: &[Q],
    b1: Option<&[Q]>,
) -> Result<Vec<RationalVector>, ConeError> {
    let dim = eta.len();
    let f = RationalCone::new(dim, face)?;
    let rays = extreme_rays(&f)?;
    if let Some(b) = b1 {
        if b.len() != dim || linalg::is_zero_vec(b) || !f.contains(b) {
            return Err(ConeError::BadFirstVector);
        }
    }
    if linalg::is_zero_vec(eta) {
        let mut start: Vec<Vec<Q>> = b1.map(|b| vec![b.to_vec()]).unwrap_or_default();
        return Ok(extend_basis(&mut start, &rays));
    }
    let relint = RationalCone::new(dim, &rays)?;
    if minimal_face_containing(&relint, eta)?.len() != rays.len() {
        return Err(ConeError::NotRelativeInterior);
    }
    let b1: Vec<Q> = match b1 {
        Some(b) => b.to_vec(),
        None => rays[0].clone(),
    };
    let mut out = vec![b1.clone()];
    if linalg::positively_parallel(&b1, eta) || rays.len() == 1 {
        return Ok(extend_basis(&mut out, &rays));
    }
    let chi = separate(&rays).map_err(|_| ConeError::NotPointed)?;
    let b1n = linalg::scale(&b1, &linalg::dot(&chi, &b1).recip());
    let etan = linalg::scale(eta, &linalg::dot(&chi, eta).recip());
    // max t with b1n + t (etan - b1n) ∈ F: Σ λ_i r_i - t (etan - b1n) = b1n
    let dir = linalg::sub(&etan, &b1n);
    let n = rays.len();
    let rows: Vec<Vec<Q>> = (0..dim)
        .map(|k| {
            let mut r: Vec<Q> = rays.iter().map(|g| g[k].clone()).collect();
            r.push(-dir[k].clone());
            r
        })
        .collect();
    let mut cost = vec![Q::zero(); n];
    cost.push(-Q::one());
    let t_max = match lp::minimize(&rows, &b1n, &cost) {
        LpResult::Optimal { x, .. } => x[n].clone(),
        _ => return Err(ConeError::NotRelativeInterior),
    };
    if t_max <= Q::one() {
        return Err(ConeError::NotRelativeInterior);
    }
    let d = linalg::add(&b1n, &linalg::scale(&dir, &t_max));
    let sub_face: Vec<Vec<Q>> = minimal_face_containing(&relint, &d)?.into_iter().map(|i| rays[i].clone()).collect();
    out.extend(basis_through_point(&sub_face, &d, None)?);
    Ok(extend_basis(&mut out, &rays))
}

/// Appends vectors from `pool` until `start` spans `span(pool)`.
fn extend_basis(start: &mut Vec<Vec<Q>>, pool: &[Vec<Q>]) -> Vec<Vec<Q>> {
    for r in pool {
        start.push(r.clone());
        if linalg::rank(start) < start.len() {
            start.pop();
        }
    }
    std::mem::take(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::semigroup::check_q_independence;

    fn v(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| qi(a)).collect()
    }

    fn same_rays(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
        a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| linalg::positively_parallel(x, y)))
    }

    #[test]
    fn hull_examples() {
        let t = conv_q_contains_zero(&[v(&[1]), v(&[-1])]).unwrap();
        assert_eq!(t, HullTest::Contains { coeffs: vec![q(1, 2), q(1, 2)] });
        assert!(!conv_q_contains_zero(&[v(&[1, 0]), v(&[0, 1])]).unwrap().contains_zero());
        let t = conv_q_contains_zero(&[v(&[2, -1]), v(&[-1, 2]), v(&[-1, -1])]).unwrap();
        assert_eq!(t, HullTest::Contains { coeffs: vec![q(1, 3); 3] });
    }

    #[test]
    fn separation_examples() {
        assert_eq!(separate(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), v(&[1, 1]));
        assert_eq!(separate(&[v(&[1])]).unwrap(), v(&[1]));
        let e = [v(&[2, 1]), v(&[1, 3]), v(&[5, -1])];
        let rho = separate(&e).unwrap();
        assert!(e.iter().all(|x| linalg::dot(&rho, x) >= qi(1)));
        assert!(matches!(separate(&[v(&[1]), v(&[-2])]), Err(ConeError::ZeroInHull { .. })));
        assert!(separable_fm(&e));
        assert!(!separable_fm(&[v(&[1]), v(&[-2])]));
    }

    #[test]
    fn sign_lemma_examples() {
        assert_eq!(sign_lemma_witness(&[v(&[2]), v(&[-3])]).unwrap(), vec![q(3, 5), q(2, 5)]);
        let u = [v(&[1, 1]), v(&[1, -1]), v(&[-1, 1]), v(&[-1, -1])];
        assert_eq!(sign_lemma_witness(&u).unwrap(), vec![q(1, 4); 4]);
        assert_eq!(sign_lemma_witness(&u[..3]), Err(ConeError::MissingPattern(vec![-1, -1])));
        assert_eq!(sign_lemma_witness(&[v(&[0, 1])]), Err(ConeError::ZeroEntry(0)));
    }

    #[test]
    fn dual_examples() {
        let d = dual_cone(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(same_rays(&d.cone.generators, &[v(&[1, 0]), v(&[0, 1])]));
        assert!(d.lineality.is_empty());
        let d = dual_cone(2, &[v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert!(same_rays(&d.cone.generators, &[v(&[1, 1]), v(&[1, -1])]));
        let d = dual_cone(2, &[]).unwrap();
        assert_eq!(d.lineality.len(), 2);
        assert!(d.cone.contains(&v(&[-3, 7])));
        let d = dual_cone(2, &[v(&[1, 0])]).unwrap();
        assert_eq!(d.lineality, vec![v(&[0, 1])]);
        assert!(d.cone.contains(&v(&[0, -1])) && !d.cone.contains(&v(&[-1, 0])));
    }

    #[test]
    fn extreme_ray_examples() {
        let c = RationalCone::new(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(extreme_rays(&c).unwrap(), vec![v(&[1, 0]), v(&[0, 1])]);
        let c = RationalCone::new(2, &[v(&[1, 0])]).unwrap();
        assert_eq!(extreme_rays(&c).unwrap(), vec![v(&[1, 0])]);
        let c = RationalCone::new(2, &[v(&[1, 0]), v(&[-1, 0])]).unwrap();
        assert_eq!(extreme_rays(&c), Err(ConeError::NotPointed));
    }

    #[test]
    fn face_examples() {
        let c = RationalCone::new(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(minimal_face_containing(&c, &v(&[0, 0])).unwrap().is_empty());
        assert_eq!(minimal_face_containing(&c, &v(&[1, 0])).unwrap(), vec![0]);
        assert_eq!(minimal_face_containing(&c, &v(&[2, 3])).unwrap(), vec![0, 1]);
        assert_eq!(minimal_face_containing(&c, &v(&[-1, 3])), Err(ConeError::NotInCone));
        let c = RationalCone::new(3, &[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])]).unwrap();
        assert_eq!(minimal_face_containing(&c, &v(&[1, 1, 2])).unwrap(), vec![0, 1]);
        assert_eq!(minimal_face_containing(&c, &v(&[0, 0, 1])).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn basis_through_point_examples() {
        let b = basis_through_point(&[v(&[1, 1])], &v(&[2, 2]), None).unwrap();
        assert_eq!(b, vec![v(&[1, 1])]);
        let quadrant = [v(&[1, 0]), v(&[0, 1])];
        let b = basis_through_point(&quadrant, &v(&[1, 1]), Some(&v(&[1, 0]))).unwrap();
        assert_eq!(b, vec![v(&[1, 0]), v(&[0, 1])]);
        let b = basis_through_point(&quadrant, &v(&[0, 0]), Some(&v(&[1, 1]))).unwrap();
        assert_eq!(b[0], v(&[1, 1]));
        assert_eq!(b.len(), 2);
        assert_eq!(
            basis_through_point(&quadrant, &v(&[1, 0]), None),
            Err(ConeError::NotRelativeInterior)
        );

        // square pyramid: eta in the interior, b1 an interior point of a facet
        let pyr = [v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])];
        let eta = v(&[1, 2, 7]);
        let b1 = v(&[1, 1, 2]);
        let b = basis_through_point(&pyr, &eta, Some(&b1)).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], b1);
        assert!(check_q_independence(&b));
        assert!(lp::cone_combination(&b, &eta).is_some());
        let f = RationalCone::new(3, &pyr).unwrap();
        assert!(b.iter().all(|x| f.contains(x)));
    }
}
