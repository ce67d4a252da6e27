//! Scalar fields the tensor algebra runs over.
//!
//! Two modes share one abstraction: exact rationals for dimension counts and
//! golden identities, and `f64` for anything produced by numerical geometry.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar.
///
/// `i128` numerators and denominators are ample for the systems handled here
/// (n <= 8); arithmetic overflow panics because overflow checks are enabled in
/// every build profile of this workspace.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" | "float64" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn to_f64(self) -> f64;
    fn is_zero(self) -> bool;

    fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }

    /// JSON rendering: numbers for floats, `"num/den"` strings for rationals.
    fn to_json(self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(q: Rational) -> Self {
        rational_to_f64(q)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn to_json(self) -> serde_json::Value {
        serde_json::Number::from_f64(self).map_or(serde_json::Value::Null, serde_json::Value::Number)
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(x) => x.as_f64(),
            serde_json::Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        <Ratio<i128> as Zero>::zero()
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_f64(self) -> f64 {
        rational_to_f64(self)
    }
    fn is_zero(self) -> bool {
        Zero::is_zero(&self)
    }
    fn abs_f64(self) -> f64 {
        rational_to_f64(self.abs())
    }
    fn to_json(self) -> serde_json::Value {
        serde_json::Value::String(format_rational(&self))
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(x) => x.as_i64().map(|i| Ratio::from_integer(i as i128)),
            _ => None,
        }
    }
}

fn rational_to_f64(q: Rational) -> f64 {
    ToPrimitive::to_f64(&q).unwrap_or_else(|| *q.numer() as f64 / *q.denom() as f64)
}

/// Formats a rational as `num/den` (always with an explicit denominator).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        }
        None => s.parse::<i128>().ok().map(Ratio::from_integer),
    }
}
