//! Scalar values produced by set functions.
//!
//! Combinatorial families evaluate to exact rationals so that equalities such
//! as `f(A ∪ B) = f(A) + f(B)` can be tested without rounding. Entropy and
//! real-valued similarities evaluate to `f64`. Mixing the two, or overflowing
//! the 128-bit rational range, degrades the result to floating point.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedSub, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Whether a value was computed in exact rational arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Floating,
}

impl Exactness {
    pub fn combine(self, other: Exactness) -> Exactness {
        match (self, other) {
            (Exactness::Exact, Exactness::Exact) => Exactness::Exact,
            _ => Exactness::Floating,
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => f.write_str("exact"),
            Exactness::Floating => f.write_str("floating"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub const ZERO: Value = Value::Exact(Ratio::new_raw(0, 1));

    pub fn int(n: i128) -> Value {
        Value::Exact(Rational::from_integer(n))
    }

    pub fn ratio(numer: i128, denom: i128) -> Value {
        Value::Exact(Rational::new(numer, denom))
    }

    pub fn exactness(&self) -> Exactness {
        match self {
            Value::Exact(_) => Exactness::Exact,
            Value::Float(_) => Exactness::Floating,
        }
    }

    pub fn as_exact(&self) -> Option<Rational> {
        match self {
            Value::Exact(r) => Some(*r),
            Value::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Float(x) => *x,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_negative(),
            Value::Float(x) => *x < 0.0,
        }
    }

    pub fn max(self, other: Value) -> Value {
        match self.partial_cmp(&other) {
            Some(Ordering::Less) => other,
            _ => self,
        }
    }

    /// Parse `3`, `-2`, `0.125`, `1e-3` or `3/8` as an exact rational.
    pub fn parse_exact(text: &str) -> Result<Value> {
        parse_rational(text).map(Value::Exact)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::BadNumber(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: i128 = if all_digits.is_empty() {
        0
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let pow10 = |k: u32| 10i128.checked_pow(k).ok_or_else(bad);
    let value = if scale >= 0 {
        numer = numer.checked_mul(pow10(scale as u32)?).ok_or_else(bad)?;
        Rational::from_integer(numer)
    } else {
        Rational::new(numer, pow10((-scale) as u32)?)
    };
    Ok(if negative { -value } else { value })
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => match a.checked_add(&b) {
                Some(c) => Value::Exact(c),
                None => Value::Float(rational_to_f64(&a) + rational_to_f64(&b)),
            },
            (a, b) => Value::Float(a.to_f64() + b.to_f64()),
        }
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => match a.checked_sub(&b) {
                Some(c) => Value::Exact(c),
                None => Value::Float(rational_to_f64(&a) - rational_to_f64(&b)),
            },
            (a, b) => Value::Float(a.to_f64() - b.to_f64()),
        }
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(-a),
            Value::Float(x) => Value::Float(-x),
        }
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, v| acc + v)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Some(a.cmp(b)),
            (a, b) => a.to_f64().partial_cmp(&b.to_f64()),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Value {
        Value::Float(x)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Value {
        Value::int(n as i128)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) if x.is_finite() => {
                let text = format!("{x:.10}");
                let text = text.trim_end_matches('0').trim_end_matches('.');
                f.write_str(if text == "-0" { "0" } else { text })
            }
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Exact values serialize as fraction strings, floating values as JSON numbers.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Exact(_) => serializer.serialize_str(&self.to_string()),
            Value::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

/// Equality regime for comparing set-function values.
///
/// Two exact values are compared exactly. Otherwise `x` and `y` are equal when
/// `|x - y| <= rel * max(1, |x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Tolerance {
        Tolerance { rel }
    }

    fn slack(&self, x: f64, y: f64) -> f64 {
        self.rel * 1f64.max(x.abs()).max(y.abs())
    }

    pub fn eq(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Exact(x), Value::Exact(y)) => x == y,
            _ => {
                let (x, y) = (a.to_f64(), b.to_f64());
                (x - y).abs() <= self.slack(x, y)
            }
        }
    }

    /// `a <= b` up to tolerance.
    pub fn le(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Exact(x), Value::Exact(y)) => x <= y,
            _ => {
                let (x, y) = (a.to_f64(), b.to_f64());
                x <= y + self.slack(x, y)
            }
        }
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        self.eq(a, &Value::ZERO)
    }
}
