//! Numeric modes.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two implementations are
//! provided: [`Rational`] (arbitrary precision, exact) and `f64` (tolerance-based).
//! Generated fixtures use the exact mode so that sphere-boundary membership and
//! distance ties are decided without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Exact => f.write_str("exact"),
            NumericMode::Float => f.write_str("float"),
        }
    }
}

/// A coordinate field: either exact rationals or finite floats.
pub trait Scalar: Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const MODE: NumericMode;

    /// Hash key used by point indices. Exact scalars key on themselves; floats are
    /// quantized and looked up in adjacent cells as well.
    type Key: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Exact conversion of a finite double (`None` for NaN/inf).
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Nearest rational with denominator at most `max_den`, accepted only if within `eps`.
    /// Exact scalars return themselves.
    fn rationalize(&self, max_den: u64, eps: f64) -> Option<Rational>;
    /// Square root when it lies in the field (always, for floats).
    fn sqrt_exact(&self) -> Option<Self>;
    fn floor(&self) -> Self;
    fn round(&self) -> Self;
    fn key(&self, cell: f64) -> Self::Key;
    fn adjacent_keys(key: &Self::Key) -> Vec<Self::Key>;
    fn total_cmp(&self, other: &Self) -> Ordering;
    fn parse_text(s: &str) -> Result<Self, Error>;
    /// Text form that parses back to the identical value.
    fn to_text(&self) -> String;

    fn is_exact() -> bool {
        Self::MODE == NumericMode::Exact
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn is_finite_value(&self) -> bool {
        self.to_f64().is_finite() || Self::is_exact()
    }
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::Exact;
    type Key = Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles large numerators/denominators without overflow.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn rationalize(&self, _max_den: u64, _eps: f64) -> Option<Rational> {
        Some(self.clone())
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Rational::new(rn, rd))
        } else {
            None
        }
    }

    fn floor(&self) -> Self {
        num_rational::Ratio::floor(self)
    }

    fn round(&self) -> Self {
        num_rational::Ratio::round(self)
    }

    fn key(&self, _cell: f64) -> Self::Key {
        self.clone()
    }

    fn adjacent_keys(key: &Self::Key) -> Vec<Self::Key> {
        vec![key.clone()]
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn parse_text(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;
    type Key = i64;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn rationalize(&self, max_den: u64, eps: f64) -> Option<Rational> {
        let q = best_rational(*self, max_den)?;
        ((Scalar::to_f64(&q) - self).abs() <= eps).then_some(q)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn round(&self) -> Self {
        f64::round(*self)
    }

    fn key(&self, cell: f64) -> Self::Key {
        (self / cell).round() as i64
    }

    fn adjacent_keys(key: &Self::Key) -> Vec<Self::Key> {
        vec![key - 1, *key, key + 1]
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn parse_text(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.contains('/') {
            let q = parse_rational(t)?;
            return Ok(Scalar::to_f64(&q));
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Parse(format!("non-finite value: {s:?}")))
        }
    }

    fn to_text(&self) -> String {
        // Display on f64 is the shortest representation that round-trips.
        format!("{self}")
    }
}

/// Parses `p/q`, integers and finite decimals (optionally with exponent) exactly.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(numer);
    if scale >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}

/// Best rational approximation with bounded denominator (continued fractions).
fn best_rational(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let q = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if negative { -q } else { q })
}

/// Sign of `p + c * sqrt(e)` for `e >= 0`, decided exactly in the exact mode.
pub(crate) fn sign_with_root<S: Scalar>(p: &S, c: &S, e: &S) -> Ordering {
    if !S::is_exact() {
        let v = p.to_f64() + c.to_f64() * e.to_f64().max(0.0).sqrt();
        return v.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
    }
    let zero = S::zero();
    let sp = p.partial_cmp(&zero).unwrap_or(Ordering::Equal);
    if e.is_zero() || c.is_zero() {
        return sp;
    }
    let sc = c.partial_cmp(&zero).unwrap_or(Ordering::Equal);
    if sp == Ordering::Equal || sp == sc {
        return sc;
    }
    // Opposite signs: compare magnitudes p^2 against c^2 e.
    let lhs = p.clone() * p.clone();
    let rhs = c.clone() * c.clone() * e.clone();
    match lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal) {
        Ordering::Greater => sp,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}
