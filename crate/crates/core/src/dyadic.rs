//! Exact dyadic rationals `mantissa * 2^exponent` and a few helpers on
//! [`BigRational`] shared by the engines.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for every dimension and measure.
pub type ExactRational = BigRational;

/// `mantissa * 2^exponent`, normalized so the mantissa is odd (or zero with exponent 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactDyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl ExactDyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = ExactDyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        ExactDyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        ExactDyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    /// `2^exponent`
    pub fn pow2(exponent: i64) -> Self {
        ExactDyadic { mantissa: BigInt::one(), exponent }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz as usize;
            self.exponent += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// If the value is `±2^k`, returns `k`.
    pub fn log2_exact(&self) -> Option<i64> {
        if self.mantissa.is_one() {
            Some(self.exponent)
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let m = BigRational::from_integer(self.mantissa.clone());
        m * pow2_rational(self.exponent)
    }

    /// Converts a rational whose denominator is a power of two.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let den = q.denom();
        let bits = den.bits();
        if bits == 0 || (den.clone() & (den - BigInt::one())) != BigInt::zero() {
            return None;
        }
        Some(Self::new(q.numer().clone(), -(bits as i64 - 1)))
    }

    /// Binary expansion of `|self|` truncated after `bits` fractional digits, e.g. `0.0101`.
    pub fn binary_string(&self, bits: usize) -> String {
        rational_binary_string(&self.to_rational(), bits)
    }
}

impl PartialOrd for ExactDyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactDyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        a.cmp(&b)
    }
}

impl Add for &ExactDyadic {
    type Output = ExactDyadic;
    fn add(self, rhs: &ExactDyadic) -> ExactDyadic {
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &rhs.mantissa << (rhs.exponent - e) as usize;
        ExactDyadic::new(a + b, e)
    }
}

impl Add for ExactDyadic {
    type Output = ExactDyadic;
    fn add(self, rhs: ExactDyadic) -> ExactDyadic {
        &self + &rhs
    }
}

impl Neg for ExactDyadic {
    type Output = ExactDyadic;
    fn neg(self) -> ExactDyadic {
        ExactDyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Sub for &ExactDyadic {
    type Output = ExactDyadic;
    fn sub(self, rhs: &ExactDyadic) -> ExactDyadic {
        self + &(-rhs.clone())
    }
}

impl Mul for &ExactDyadic {
    type Output = ExactDyadic;
    fn mul(self, rhs: &ExactDyadic) -> ExactDyadic {
        ExactDyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul for ExactDyadic {
    type Output = ExactDyadic;
    fn mul(self, rhs: ExactDyadic) -> ExactDyadic {
        &self * &rhs
    }
}

impl std::iter::Sum for ExactDyadic {
    fn sum<I: Iterator<Item = ExactDyadic>>(iter: I) -> Self {
        iter.fold(ExactDyadic::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for ExactDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DyadicRepr {
    mantissa: String,
    exponent: i64,
}

impl Serialize for ExactDyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DyadicRepr { mantissa: self.mantissa.to_string(), exponent: self.exponent }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactDyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DyadicRepr::deserialize(d)?;
        let m: BigInt = r.mantissa.parse().map_err(serde::de::Error::custom)?;
        Ok(ExactDyadic::new(m, r.exponent))
    }
}

/// `2^e` as a rational.
pub fn pow2_rational(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new_raw(BigInt::one(), p)
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `num/den` with the sign on the numerator; integers print without a denominator.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serializes a rational as its exact `num/den` string.
pub fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Binary expansion of `|q|` (sign prefixed) truncated, not rounded, after `bits` digits.
pub fn rational_binary_string(q: &BigRational, bits: usize) -> String {
    let neg = q.is_negative();
    let q = q.abs();
    let (int, rem) = q.numer().div_rem(q.denom());
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int.to_str_radix(2));
    if bits > 0 {
        out.push('.');
        let scaled = (rem << bits) / q.denom();
        let digits = scaled.to_str_radix(2);
        for _ in digits.len()..bits {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

/// Floor of `log2 |q|` for nonzero `q`.
pub fn floor_log2(q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let n = q.numer().abs();
    let d = q.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= n/d < 2^(e+1) after at most one adjustment
    let cmp = |e: i64| {
        let lhs = if e >= 0 { d.clone() << e as usize } else { d.clone() };
        let rhs = if e >= 0 { n.clone() } else { n.clone() << (-e) as usize };
        lhs.cmp(&rhs)
    };
    if cmp(e) == Ordering::Greater {
        e -= 1;
    }
    Some(e)
}

/// Rational upper approximation of `sqrt(q)` for `q >= 0`, accurate to `2^-bits`.
pub fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    if q.is_zero() || q.is_negative() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << (2 * bits) as usize;
    let x = (q.numer() * &scale).div_ceil(q.denom());
    let mag = x.magnitude();
    let mut r: BigUint = mag.sqrt();
    if &(&r * &r) < mag {
        r += 1u32;
    }
    BigRational::new(BigInt::from_biguint(Sign::Plus, r), BigInt::one() << bits as usize)
}

/// Lossy decimal rendering, labelled approximate wherever it is shown.
pub fn approx_f64(q: &BigRational) -> f64 {
    let e = floor_log2(q).unwrap_or(0);
    let shifted = q * pow2_rational(-e);
    shifted.to_f64().unwrap_or(f64::NAN) * 2f64.powi(e.clamp(-1070, 1020) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_even_mantissa() {
        let d = ExactDyadic::new(BigInt::from(12), -4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), -2);
        assert_eq!(d.to_rational(), rational(3, 4));
    }

    #[test]
    fn rational_round_trip() {
        let q = rational(-5, 32);
        let d = ExactDyadic::from_rational(&q).unwrap();
        assert_eq!(d.to_rational(), q);
        assert!(ExactDyadic::from_rational(&rational(1, 3)).is_none());
    }

    #[test]
    fn serde_shape() {
        let d = ExactDyadic::pow2(-19);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"mantissa":"1","exponent":-19}"#);
        let back: ExactDyadic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn binary_strings() {
        assert_eq!(rational_binary_string(&rational(5, 8), 3), "0.101");
        assert_eq!(rational_binary_string(&rational(1, 3), 6), "0.010101");
        assert_eq!(floor_log2(&rational(3, 261121)), Some(-17));
        assert_eq!(floor_log2(&rational(1, 4)), Some(-2));
    }

    #[test]
    fn sqrt_is_upper_bound() {
        let q = rational(2, 1);
        let r = sqrt_upper(&q, 30);
        assert!(&r * &r >= q);
        assert!((&r - pow2_rational(-30)) * (&r - pow2_rational(-30)) < q);
    }
}
