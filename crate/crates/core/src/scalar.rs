//! Exact nonnegative rationals and the numeric backend abstraction.
//!
//! Every certified quantity in the crate is a [`Scalar`]. The [`Entry`] trait
//! lets the enumeration and bound code run over either exact rationals or
//! plain `f64` (fast, not certified).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::JsrError;

/// Exact nonnegative rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

/// Rounding direction for decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Rounding {
    pub fn as_str(self) -> &'static str {
        match self {
            Rounding::Down => "down",
            Rounding::Up => "up",
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, reduced. Rejects negative values and a zero denominator.
    pub fn from_ratio(num: BigInt, den: BigInt) -> Result<Self, JsrError> {
        if den.is_zero() {
            return Err(JsrError::InvalidScalar("zero denominator".into()));
        }
        let r = BigRational::new(num, den);
        Self::from_rational(r)
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Result<Self, JsrError> {
        if r.is_negative() {
            return Err(JsrError::NegativeEntry(r.to_string()));
        }
        Ok(Scalar(r))
    }

    /// Exact value of a finite nonnegative float.
    pub fn from_f64(x: f64) -> Result<Self, JsrError> {
        if !x.is_finite() || x < 0.0 {
            return Err(JsrError::InvalidScalar(format!(
                "{x} is not a finite nonnegative float"
            )));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        BigRational::from_float(x)
            .map(Scalar)
            .ok_or_else(|| JsrError::InvalidScalar(format!("{x}")))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Scalar(Pow::pow(&self.0, exp))
    }

    pub fn recip(&self) -> Self {
        Scalar(self.0.recip())
    }

    /// `self - other` when nonnegative.
    pub fn checked_sub(&self, other: &Scalar) -> Option<Scalar> {
        let d = &self.0 - &other.0;
        (!d.is_negative()).then_some(Scalar(d))
    }

    pub fn abs_diff(&self, other: &Scalar) -> Scalar {
        Scalar((&self.0 - &other.0).abs())
    }

    /// Arithmetic mean of two values.
    pub fn midpoint(&self, other: &Scalar) -> Scalar {
        Scalar((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        match self.0.to_f64() {
            Some(x) if x.is_finite() => x,
            _ => {
                // outside f64 range: go through the logarithm
                self.log2().exp2()
            }
        }
    }

    /// Largest `f64` not above `self`.
    pub fn to_f64_down(&self) -> f64 {
        let mut x = self.to_f64();
        while x > 0.0 && Scalar::from_f64(x).map_or(true, |s| s > *self) {
            x = x.next_down();
        }
        x.max(0.0)
    }

    /// Smallest `f64` not below `self` (may be `+inf`).
    pub fn to_f64_up(&self) -> f64 {
        let mut x = self.to_f64();
        while x.is_finite() && Scalar::from_f64(x).is_ok_and(|s| s < *self) {
            x = x.next_up();
        }
        x
    }

    /// Base-2 logarithm, accurate to roughly f64 precision for any magnitude.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_log2(self.0.numer().magnitude()) - big_log2(self.0.denom().magnitude())
    }

    pub fn ln(&self) -> f64 {
        self.log2() * std::f64::consts::LN_2
    }

    /// Decimal rendering with `digits` significant digits, rounded in the given
    /// direction so the printed number never crosses the exact value.
    pub fn to_sig_string(&self, digits: usize, dir: Rounding) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let ten = BigRational::from_integer(BigInt::from(10));
        // initial exponent guess, corrected exactly below
        let mut exp = (self.log2() * std::f64::consts::LOG10_2).floor() as i64;
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                Pow::pow(&ten, e as u32)
            } else {
                Pow::pow(&ten, (-e) as u32).recip()
            }
        };
        while pow10(exp) > self.0 {
            exp -= 1;
        }
        while pow10(exp + 1) <= self.0 {
            exp += 1;
        }
        let limit = Pow::pow(&BigInt::from(10), digits as u32);
        let (mantissa, exp) = loop {
            let scaled = &self.0 * pow10(digits as i64 - 1 - exp);
            let m = match dir {
                Rounding::Down => scaled.floor().to_integer(),
                Rounding::Up => scaled.ceil().to_integer(),
            };
            if m >= limit {
                // ceil carried into a new decade
                let (q, r) = m.div_rem(&BigInt::from(10));
                if r.is_zero() {
                    break (q, exp + 1);
                }
                exp += 1;
                continue;
            }
            break (m, exp);
        };
        render_decimal(&mantissa.to_string(), exp, digits)
    }
}

fn render_decimal(digits_str: &str, exp: i64, digits: usize) -> String {
    debug_assert_eq!(digits_str.len(), digits);
    let trimmed = digits_str.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    if (-6..21).contains(&exp) {
        let point = exp + 1;
        let s = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), trimmed)
        } else if point as usize >= trimmed.len() {
            format!("{}{}", trimmed, "0".repeat(point as usize - trimmed.len()))
        } else {
            let (a, b) = trimmed.split_at(point as usize);
            format!("{a}.{b}")
        };
        s
    } else {
        let (a, b) = trimmed.split_at(1);
        if b.is_empty() {
            format!("{a}e{exp}")
        } else {
            format!("{a}.{b}e{exp}")
        }
    }
}

fn big_log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(1.0);
    top.log2() + shift as f64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = JsrError;

    /// Accepts `p`, `p/q`, and finite decimals such as `0.125` or `1.5e-3`.
    /// Decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || JsrError::InvalidScalar(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let num = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            return Self::from_ratio(num, den);
        }
        parse_decimal(t).ok_or_else(bad).and_then(Self::from_rational)
    }
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(&digits).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp as i64 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(num, Pow::pow(&ten, (-scale) as u32))
    };
    Some(value)
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scalar::from_str(&s).map_err(serde::de::Error::custom)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 + &rhs.0)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 * &rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 / &rhs.0)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 / rhs.0)
    }
}

impl From<u64> for Scalar {
    fn from(n: u64) -> Self {
        Scalar::from_integer(n)
    }
}

/// Numeric backend for matrix entries.
///
/// `Scalar` is exact and certified; `f64` trades certification for speed.
/// Implementors must keep values nonnegative.
pub trait Entry: Clone + PartialOrd + fmt::Debug + Send + Sync + 'static {
    /// Whether results computed in this backend are certified.
    const CERTIFIED: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn pow(&self, exp: u32) -> Self;
    fn from_usize(n: usize) -> Self;
    /// Conversion of an iteration vector component; exact for `Scalar`.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational value of this entry.
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(x: &Scalar) -> Self;
    fn total_cmp(&self, other: &Self) -> Ordering;
}

impl Entry for Scalar {
    const CERTIFIED: bool = true;

    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn pow(&self, exp: u32) -> Self {
        Scalar::pow(self, exp)
    }
    fn from_usize(n: usize) -> Self {
        Scalar::from_integer(n as u64)
    }
    fn from_f64(x: f64) -> Self {
        Scalar::from_f64(x).expect("finite nonnegative iterate")
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
    fn to_scalar(&self) -> Scalar {
        self.clone()
    }
    fn from_scalar(x: &Scalar) -> Self {
        x.clone()
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Entry for f64 {
    const CERTIFIED: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn pow(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        if self.is_finite() {
            Scalar::from_f64(*self).unwrap_or_else(|_| Scalar::zero())
        } else {
            Scalar::from_f64(f64::MAX).expect("finite")
        }
    }
    fn from_scalar(x: &Scalar) -> Self {
        x.to_f64()
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

/// Directed conversion of a positive sign integer to a rational; used by root code.
pub(crate) fn scalar_from_biguint(n: BigUint) -> Scalar {
    Scalar(BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_and_decimal_forms() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("0.1".parse::<Scalar>().unwrap(), Scalar::ratio(1, 10));
        assert_eq!("1.5e-3".parse::<Scalar>().unwrap(), Scalar::ratio(3, 2000));
        assert_eq!("2E2".parse::<Scalar>().unwrap(), Scalar::from_integer(200));
        assert_eq!("10".parse::<Scalar>().unwrap(), Scalar::from_integer(10));
        assert_eq!(".5".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("-0".parse::<Scalar>().unwrap(), Scalar::zero());
    }

    #[test]
    fn rejects_negative_and_garbage() {
        assert!(matches!("-1/2".parse::<Scalar>(), Err(JsrError::NegativeEntry(_))));
        assert!(matches!("-0.5".parse::<Scalar>(), Err(JsrError::NegativeEntry(_))));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("1.2.3".parse::<Scalar>().is_err());
    }

    #[test]
    fn canonical_form() {
        let s = Scalar::from_ratio(BigInt::from(4), BigInt::from(-8)).err();
        assert!(s.is_some());
        let s = Scalar::from_ratio(BigInt::from(-4), BigInt::from(-8)).unwrap();
        assert_eq!(s.to_string(), "1/2");
        assert_eq!(s.denom(), &BigInt::from(2));
    }

    #[test]
    fn directed_f64_conversion() {
        let third = Scalar::ratio(1, 3);
        let lo = third.to_f64_down();
        let hi = third.to_f64_up();
        assert!(Scalar::from_f64(lo).unwrap() <= third);
        assert!(Scalar::from_f64(hi).unwrap() >= third);
        assert!(lo < hi);
        let half = Scalar::ratio(1, 2);
        assert_eq!(half.to_f64_down(), 0.5);
        assert_eq!(half.to_f64_up(), 0.5);
    }

    #[test]
    fn directed_decimal_strings() {
        let third = Scalar::ratio(1, 3);
        assert_eq!(third.to_sig_string(5, Rounding::Down), "0.33333");
        assert_eq!(third.to_sig_string(5, Rounding::Up), "0.33334");
        let x = Scalar::ratio(99999, 1000);
        assert_eq!(x.to_sig_string(3, Rounding::Up), "100");
        assert_eq!(x.to_sig_string(3, Rounding::Down), "99.9");
        assert_eq!(Scalar::from_integer(2).to_sig_string(15, Rounding::Up), "2");
        let tiny = Scalar::ratio(1, 40000).pow(3);
        assert_eq!(tiny.to_sig_string(3, Rounding::Down), "1.56e-14");
        assert_eq!(tiny.to_sig_string(3, Rounding::Up), "1.57e-14");
    }

    #[test]
    fn log2_of_huge_values() {
        let big = Scalar::from_integer(3).pow(2000);
        let expected = 2000.0 * 3f64.log2();
        assert!((big.log2() - expected).abs() < 1e-9 * expected);
        assert!((big.recip().log2() + expected).abs() < 1e-9 * expected);
    }
}
