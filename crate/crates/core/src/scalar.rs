//! Coefficient backends.
//!
//! Algebra elements and multiplicative functions are generic over [`Coeff`].
//! Two backends matter in practice: double-precision complex numbers for
//! analysis and exact rational complex numbers for identity checks.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex32, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Exact rational complex number.
pub type ComplexQ = Complex<BigRational>;

/// A field of coefficients usable in the convolution algebra.
pub trait Coeff: Num + Clone + Neg<Output = Self> + Debug + Send + Sync + 'static {
    /// True when arithmetic in this backend is exact.
    const EXACT: bool;

    /// Modulus as a float, used for norms and tail bounds.
    fn modulus(&self) -> f64;

    fn to_complex64(&self) -> Complex64;

    /// Embeds an exact rational into the backend (rounding for float backends).
    fn from_rational(q: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Q::from_integer(BigInt::from(n)))
    }

    /// Exact zero test for exact backends; plain `== 0` for floats.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn from_rational(q: &Q) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Coeff for f32 {
    const EXACT: bool = false;
    fn modulus(&self) -> f64 {
        f64::from(self.abs())
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(f64::from(*self), 0.0)
    }
    fn from_rational(q: &Q) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

impl Coeff for Q {
    const EXACT: bool = true;
    fn modulus(&self) -> f64 {
        q_to_f64(self).abs()
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
    fn from_rational(q: &Q) -> Self {
        Complex64::new(q_to_f64(q), 0.0)
    }
}

impl Coeff for Complex32 {
    const EXACT: bool = false;
    fn modulus(&self) -> f64 {
        f64::from(self.norm())
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
    fn from_rational(q: &Q) -> Self {
        Complex32::new(q.to_f32().unwrap_or(f32::NAN), 0.0)
    }
}

impl Coeff for ComplexQ {
    const EXACT: bool = true;
    fn modulus(&self) -> f64 {
        let re = q_to_f64(&self.re);
        let im = q_to_f64(&self.im);
        re.hypot(im)
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    fn from_rational(q: &Q) -> Self {
        ComplexQ::new(q.clone(), Q::zero())
    }
}

/// Converts a rational to the nearest float, also for huge numerators and
/// denominators where `BigRational::to_f64` would overflow its parts.
pub fn q_to_f64(q: &Q) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let shift = (n - d).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        q / Q::from_integer(BigInt::one() << shift as usize)
    } else {
        q * Q::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Exact rational value of a finite float (every finite float is dyadic).
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"num/den"`, `"num"` or a decimal string such as `"0.25"` (read exactly).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let v = Q::new(n, d);
    Some(if neg { -v } else { v })
}

/// Canonical `"num/den"` text (denominator omitted when it is one).
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapters for rationals written as `"num/den"` strings.
pub mod serde_q {
    use super::{format_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod vec {
        use super::super::{format_q, parse_q, Q};
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_q(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
                .collect()
        }
    }

    pub mod opt_vec {
        use super::super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super::vec")] Vec<Q>);

        pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref().map(|v| Wrap(v.clone())).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }

    pub mod vec_vec {
        use super::super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super::vec")] Vec<Q>);

        pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|r| Wrap(r.clone())).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
            Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("1/3"), Some(q(1, 3)));
        assert_eq!(parse_q("-4/6"), Some(q(-2, 3)));
        assert_eq!(parse_q("7"), Some(qi(7)));
        assert_eq!(parse_q("0.25"), Some(q(1, 4)));
        assert_eq!(parse_q("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
        assert_eq!(format_q(&q(6, 4)), "3/2");
        assert_eq!(format_q(&qi(-2)), "-2");
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Q::new(BigInt::one() << 2000usize, (BigInt::one() << 1999usize) + 1);
        assert!((q_to_f64(&big) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64;
        assert_eq!(q_to_f64(&q_from_f64(x).unwrap()), x);
    }
}
