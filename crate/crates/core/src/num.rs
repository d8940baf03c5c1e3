//! Exact rationals, the shared numeric tolerances, and a small scalar trait
//! so validators run unchanged over `f64` LP output and exact witnesses.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used for all instance data.
pub type Rational = Ratio<i128>;

/// Absolute tolerance for constraint satisfaction of floating LP points.
pub const CONSTRAINT_TOL: f64 = 1e-7;
/// Zero test for pivots and floating comparisons.
pub const PIVOT_TOL: f64 = 1e-9;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn floor(r: &Rational) -> i128 {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// Floor of a float that snaps values within `PIVOT_TOL` of an integer.
pub fn snapped_floor(v: f64) -> i128 {
    let r = v.round();
    if (v - r).abs() <= PIVOT_TOL {
        r as i128
    } else {
        v.floor() as i128
    }
}

/// Ceiling of a float that snaps values within `PIVOT_TOL` of an integer.
pub fn snapped_ceil(v: f64) -> i128 {
    let r = v.round();
    if (v - r).abs() <= PIVOT_TOL {
        r as i128
    } else {
        v.ceil() as i128
    }
}

/// Best rational approximation with a bounded denominator (continued fractions).
pub fn approx_rational(v: f64, max_den: i128) -> Rational {
    if !v.is_finite() {
        return Rational::zero();
    }
    let neg = v < 0.0;
    let mut x = v.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a as f64;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::zero();
    }
    let r = Rational::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse '{0}' as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `"3"`, `"-3/4"`, `"0.125"` or `"1.5e-3"` into an exact rational.
/// Decimal text is read digit by digit, so `"0.1"` becomes exactly 1/10.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err())?;
        let d: i128 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let mut value = Rational::from_integer(digits.parse::<i128>().map_err(|_| err())?);
    let shift = exp - fp.len() as i32;
    let ten = Rational::from_integer(10);
    if shift.abs() > 36 {
        return Err(err());
    }
    for _ in 0..shift.abs() {
        value = if shift > 0 { value * ten } else { value / ten };
    }
    Ok(if neg { -value } else { value })
}

/// `"7"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators, used to scale rationals to integers.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1i128, |acc, r| acc.lcm(r.denom()))
}

/// Arithmetic shared by the exact and the floating validators.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: &Rational) -> Self;
    /// Slack allowed in feasibility checks: 1e-7 for floats, 0 for rationals.
    fn tolerance() -> Self;
    fn to_f64(&self) -> f64;
    /// Floor, snapping floats that sit within 1e-9 of an integer.
    fn floor_int(&self) -> i128;
    fn ceil_int(&self) -> i128;
    fn from_int(n: i128) -> Self {
        Self::from_rational(&Rational::from_integer(n))
    }
    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn tolerance() -> Self {
        CONSTRAINT_TOL
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn floor_int(&self) -> i128 {
        snapped_floor(*self)
    }
    fn ceil_int(&self) -> i128 {
        snapped_ceil(*self)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        *r
    }
    fn tolerance() -> Self {
        Rational::zero()
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn floor_int(&self) -> i128 {
        floor(self)
    }
    fn ceil_int(&self) -> i128 {
        ceil(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

pub fn max_rational(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_rational(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
