//! Finitely generated additive subsemigroups of `[0,∞)^r` and their elements.
//!
//! Two representations are supported. In *free* mode the generators are
//! ℚ-linearly independent and an element is identified by its exponent
//! vector; the real embedding (for example `log p`) is only used for
//! ordering and evaluation. In *embedded* mode generators and elements carry
//! exact rational coordinates, so equality and membership are decidable.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::{q_to_f64, serde_q, Q};
use crate::sieve;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemigroupError {
    #[error("element does not belong to this basis")]
    BasisMismatch,
    #[error("generator {0} lacks exact rational coordinates")]
    MissingExact(u32),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Free,
    Embedded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub id: u32,
    /// Real embedding, one entry per coordinate.
    pub value: Vec<f64>,
    #[serde(with = "serde_q::opt_vec", default)]
    pub exact: Option<Vec<Q>>,
    #[serde(default)]
    pub label: String,
}

impl Generator {
    pub fn exact(id: u32, coords: Vec<Q>, label: impl Into<String>) -> Self {
        Generator { id, value: coords.iter().map(q_to_f64).collect(), exact: Some(coords), label: label.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BasisRepr {
    mode: Mode,
    r: usize,
    generators: Vec<Generator>,
}

/// A finite generating set of an additive monoid `Λ ⊆ [0,∞)^r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisRepr", into = "BasisRepr")]
pub struct SemigroupBasis {
    mode: Mode,
    dim: usize,
    generators: Vec<Generator>,
}

impl TryFrom<BasisRepr> for SemigroupBasis {
    type Error = SemigroupError;
    fn try_from(r: BasisRepr) -> Result<Self, Self::Error> {
        SemigroupBasis::new(r.mode, r.r, r.generators)
    }
}

impl From<SemigroupBasis> for BasisRepr {
    fn from(b: SemigroupBasis) -> Self {
        BasisRepr { mode: b.mode, r: b.dim, generators: b.generators }
    }
}

/// An element of `Λ`: an exponent map (free mode) or exact coordinates (embedded mode).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemigroupElement {
    Free(BTreeMap<u32, u64>),
    Embedded(Vec<Q>),
}

impl SemigroupElement {
    /// Builds a free element, dropping zero exponents.
    pub fn free<I: IntoIterator<Item = (u32, u64)>>(exps: I) -> Self {
        let mut m = BTreeMap::new();
        for (id, e) in exps {
            if e > 0 {
                *m.entry(id).or_insert(0) += e;
            }
        }
        SemigroupElement::Free(m)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SemigroupElement::Free(m) => m.is_empty(),
            SemigroupElement::Embedded(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn exponents(&self) -> Option<&BTreeMap<u32, u64>> {
        match self {
            SemigroupElement::Free(m) => Some(m),
            SemigroupElement::Embedded(_) => None,
        }
    }

    /// Sum of two elements of the same kind (no basis check).
    pub fn checked_add(&self, other: &Self) -> Result<Self, SemigroupError> {
        match (self, other) {
            (SemigroupElement::Free(a), SemigroupElement::Free(b)) => {
                let mut m = a.clone();
                for (id, e) in b {
                    *m.entry(*id).or_insert(0) += e;
                }
                Ok(SemigroupElement::Free(m))
            }
            (SemigroupElement::Embedded(a), SemigroupElement::Embedded(b)) if a.len() == b.len() => {
                Ok(SemigroupElement::Embedded(linalg::add(a, b)))
            }
            _ => Err(SemigroupError::BasisMismatch),
        }
    }

    /// `k`-fold multiple.
    pub fn times(&self, k: u64) -> Self {
        match self {
            SemigroupElement::Free(m) => SemigroupElement::free(m.iter().map(|(&id, &e)| (id, e * k))),
            SemigroupElement::Embedded(v) => {
                let kq = Q::from_integer(k.into());
                SemigroupElement::Embedded(linalg::scale(v, &kq))
            }
        }
    }
}

impl SemigroupBasis {
    pub fn new(mode: Mode, dim: usize, generators: Vec<Generator>) -> Result<Self, SemigroupError> {
        if dim == 0 {
            return Err(SemigroupError::InvalidBasis("dimension must be positive".into()));
        }
        let mut ids = std::collections::BTreeSet::new();
        for g in &generators {
            if !ids.insert(g.id) {
                return Err(SemigroupError::InvalidBasis(format!("duplicate generator id {}", g.id)));
            }
            if g.value.len() != dim {
                return Err(SemigroupError::InvalidBasis(format!("generator {} has wrong dimension", g.id)));
            }
            if g.value.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || g.value.iter().all(|x| *x == 0.0) {
                return Err(SemigroupError::InvalidBasis(format!(
                    "generator {} must be nonnegative with a positive coordinate",
                    g.id
                )));
            }
            if let Some(ex) = &g.exact {
                if ex.len() != dim || ex.iter().any(|x| x.is_negative()) {
                    return Err(SemigroupError::InvalidBasis(format!("generator {} has bad exact coordinates", g.id)));
                }
            }
        }
        if mode == Mode::Embedded {
            if let Some(g) = generators.iter().find(|g| g.exact.is_none()) {
                return Err(SemigroupError::MissingExact(g.id));
            }
        }
        let basis = SemigroupBasis { mode, dim, generators };
        if mode == Mode::Free {
            if let Some(vs) = basis.exact_generators() {
                if !check_q_independence(&vs) {
                    return Err(SemigroupError::InvalidBasis("free generators are not Q-independent".into()));
                }
            }
        }
        Ok(basis)
    }

    /// `ℕ₀` as a free semigroup on the single generator `1`.
    pub fn naturals() -> Arc<Self> {
        Arc::new(
            SemigroupBasis::new(Mode::Free, 1, vec![Generator::exact(0, vec![Q::from_integer(1.into())], "1")])
                .expect("valid"),
        )
    }

    /// `log ℕ` restricted to the given primes, generator `i` being `log primes[i]`.
    pub fn log_primes(primes: &[u64]) -> Arc<Self> {
        let gens = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| Generator { id: i as u32, value: vec![(p as f64).ln()], exact: None, label: format!("log {p}") })
            .collect();
        Arc::new(SemigroupBasis::new(Mode::Free, 1, gens).expect("valid"))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: u32) -> Option<&Generator> {
        match self.generators.get(id as usize) {
            Some(g) if g.id == id => Some(g),
            _ => self.generators.iter().find(|g| g.id == id),
        }
    }

    /// All exact generator coordinates, if every generator has them.
    pub fn exact_generators(&self) -> Option<Vec<Vec<Q>>> {
        self.generators.iter().map(|g| g.exact.clone()).collect()
    }

    pub fn zero(&self) -> SemigroupElement {
        match self.mode {
            Mode::Free => SemigroupElement::Free(BTreeMap::new()),
            Mode::Embedded => SemigroupElement::Embedded(vec![Q::zero(); self.dim]),
        }
    }

    /// The element `β` for generator `id`.
    pub fn generator_element(&self, id: u32) -> Result<SemigroupElement, SemigroupError> {
        let g = self.generator(id).ok_or(SemigroupError::BasisMismatch)?;
        Ok(match self.mode {
            Mode::Free => SemigroupElement::free([(id, 1)]),
            Mode::Embedded => SemigroupElement::Embedded(g.exact.clone().expect("embedded generators are exact")),
        })
    }

    /// Checks that an element is expressed in this basis.
    pub fn validate(&self, e: &SemigroupElement) -> Result<(), SemigroupError> {
        match (self.mode, e) {
            (Mode::Free, SemigroupElement::Free(m)) => {
                if m.keys().all(|id| self.generator(*id).is_some()) && m.values().all(|&v| v > 0) {
                    Ok(())
                } else {
                    Err(SemigroupError::BasisMismatch)
                }
            }
            (Mode::Embedded, SemigroupElement::Embedded(v)) => {
                if v.len() == self.dim && v.iter().all(|x| !x.is_negative()) {
                    Ok(())
                } else {
                    Err(SemigroupError::BasisMismatch)
                }
            }
            _ => Err(SemigroupError::BasisMismatch),
        }
    }

    /// The semigroup operation.
    pub fn add(&self, a: &SemigroupElement, b: &SemigroupElement) -> Result<SemigroupElement, SemigroupError> {
        self.validate(a)?;
        self.validate(b)?;
        a.checked_add(b)
    }

    /// Real embedding `Σ ν_β value(β)` (free) or the coordinates (embedded).
    pub fn embedded_value(&self, e: &SemigroupElement) -> Vec<f64> {
        match e {
            SemigroupElement::Free(m) => {
                let mut v = vec![0.0; self.dim];
                for (id, &k) in m {
                    if let Some(g) = self.generator(*id) {
                        for (vi, gi) in v.iter_mut().zip(&g.value) {
                            *vi += k as f64 * gi;
                        }
                    }
                }
                v
            }
            SemigroupElement::Embedded(c) => c.iter().map(q_to_f64).collect(),
        }
    }

    /// `|λ|₁`, the sum of the embedded coordinates.
    pub fn magnitude(&self, e: &SemigroupElement) -> f64 {
        self.embedded_value(e).iter().sum()
    }

    /// Exact coordinates of an element, when the generators involved are exact.
    pub fn exact_coords(&self, e: &SemigroupElement) -> Result<Vec<Q>, SemigroupError> {
        match e {
            SemigroupElement::Embedded(c) => Ok(c.clone()),
            SemigroupElement::Free(m) => {
                let mut v = vec![Q::zero(); self.dim];
                for (id, &k) in m {
                    let g = self.generator(*id).ok_or(SemigroupError::BasisMismatch)?;
                    let ex = g.exact.as_ref().ok_or(SemigroupError::MissingExact(*id))?;
                    let kq = Q::from_integer(k.into());
                    for (vi, gi) in v.iter_mut().zip(ex) {
                        *vi += &kq * gi;
                    }
                }
                Ok(v)
            }
        }
    }

    /// Finds `ν` with `target = Σ ν_κ β_κ`.
    ///
    /// For ℚ-independent generators the representation is unique and found by an
    /// exact solve; otherwise exponents up to `bound` are searched exhaustively.
    pub fn membership(&self, target: &[Q], bound: u64) -> Result<Option<BTreeMap<u32, u64>>, SemigroupError> {
        let gens = self.exact_generators().ok_or_else(|| {
            SemigroupError::MissingExact(self.generators.iter().find(|g| g.exact.is_none()).map(|g| g.id).unwrap_or(0))
        })?;
        if target.len() != self.dim {
            return Err(SemigroupError::BasisMismatch);
        }
        if gens.is_empty() {
            return Ok(linalg::is_zero_vec(target).then(BTreeMap::new));
        }
        if check_q_independence(&gens) {
            let cols = linalg::transpose(&gens, self.dim);
            let Some(x) = linalg::solve(&cols, target, gens.len()) else {
                return Ok(None);
            };
            if x.iter().any(|c| c.is_negative() || !c.is_integer()) {
                return Ok(None);
            }
            let map = self
                .generators
                .iter()
                .zip(&x)
                .filter(|(_, c)| !c.is_zero())
                .map(|(g, c)| (g.id, c.to_integer().try_into().unwrap_or(u64::MAX)))
                .collect();
            return Ok(Some(map));
        }
        let mut exps = vec![0u64; gens.len()];
        if search_combination(&gens, 0, target.to_vec(), bound, &mut exps) {
            let map = self
                .generators
                .iter()
                .zip(&exps)
                .filter(|(_, &e)| e > 0)
                .map(|(g, &e)| (g.id, e))
                .collect();
            Ok(Some(map))
        } else {
            Ok(None)
        }
    }

    /// True when every generator has exact coordinates and they are ℚ-independent.
    pub fn is_q_independent(&self) -> bool {
        self.exact_generators().is_some_and(|g| check_q_independence(&g))
    }
}

fn search_combination(gens: &[Vec<Q>], i: usize, rest: Vec<Q>, bound: u64, exps: &mut [u64]) -> bool {
    if linalg::is_zero_vec(&rest) {
        exps[i..].iter_mut().for_each(|e| *e = 0);
        return true;
    }
    if i == gens.len() {
        return false;
    }
    let mut cur = rest;
    for e in 0..=bound {
        if cur.iter().any(|x| x.is_negative()) {
            break;
        }
        exps[i] = e;
        if search_combination(gens, i + 1, cur.clone(), bound, exps) {
            return true;
        }
        cur = linalg::sub(&cur, &gens[i]);
    }
    exps[i] = 0;
    false
}

/// Exact ℚ-linear independence test by rank.
pub fn check_q_independence(vectors: &[Vec<Q>]) -> bool {
    linalg::rank(vectors) == vectors.len()
}

/// `log ℕ` truncated at `x`: a free basis over the primes `p <= x` with
/// helpers translating between integers and exponent maps.
#[derive(Debug, Clone)]
pub struct LogIntegers {
    basis: Arc<SemigroupBasis>,
    primes: Vec<u64>,
}

impl LogIntegers {
    pub fn new(x: u64) -> Self {
        let primes = sieve::primes_up_to(x.max(2));
        LogIntegers { basis: SemigroupBasis::log_primes(&primes), primes }
    }

    pub fn basis(&self) -> &Arc<SemigroupBasis> {
        &self.basis
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `log n` as an exponent map, if every prime factor of `n` is in the basis.
    pub fn element(&self, n: u64) -> Option<SemigroupElement> {
        if n == 0 {
            return None;
        }
        let mut exps = Vec::new();
        for (p, k) in sieve::factorize(n) {
            let idx = self.primes.binary_search(&p).ok()?;
            exps.push((idx as u32, u64::from(k)));
        }
        Some(SemigroupElement::free(exps))
    }

    pub fn integer(&self, e: &SemigroupElement) -> Option<u64> {
        let m = e.exponents()?;
        let mut n: u64 = 1;
        for (&id, &k) in m {
            let p = *self.primes.get(id as usize)?;
            n = n.checked_mul(p.checked_pow(u32::try_from(k).ok()?)?)?;
        }
        Some(n)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    exponents: Option<BTreeMap<u32, u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default, with = "serde_q::opt_vec")]
    coords: Option<Vec<Q>>,
}

impl Serialize for SemigroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            SemigroupElement::Free(m) => ElementRepr { exponents: Some(m.clone()), coords: None },
            SemigroupElement::Embedded(v) => ElementRepr { exponents: None, coords: Some(v.clone()) },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemigroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        match (r.exponents, r.coords) {
            (Some(m), None) => Ok(SemigroupElement::free(m)),
            (None, Some(c)) => Ok(SemigroupElement::Embedded(c)),
            _ => Err(serde::de::Error::custom("element needs exactly one of \"exponents\" or \"coords\"")),
        }
    }
}
