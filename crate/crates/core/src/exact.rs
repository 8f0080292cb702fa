//! Exact rationals and numbers of the form `(a + b√2)/c`.
//!
//! All comparisons are done in integer arithmetic; `√2` never appears as a
//! float outside of display helpers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("arithmetic overflow in exact comparison")]
    Overflow,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A positive rational `numerator/denominator` in lowest terms, used for
/// word exponents `|u| / period`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct Exponent {
    num: u64,
    den: u64,
}

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Self, ExactError> {
        if den == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        let g = gcd(num as u128, den as u128).max(1) as u64;
        Ok(Exponent { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Self {
        Exponent { num: n, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl TryFrom<(u64, u64)> for Exponent {
    type Error = ExactError;

    fn try_from((n, d): (u64, u64)) -> Result<Self, Self::Error> {
        Exponent::new(n, d)
    }
}

impl From<Exponent> for (u64, u64) {
    fn from(e: Exponent) -> Self {
        (e.num, e.den)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Exponent {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => Exponent::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => Ok(Exponent::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Sign of `lhs - rhs·√2` with exact integers.
pub fn cmp_with_sqrt2_multiple(lhs: i128, rhs: i128) -> Result<Ordering, ExactError> {
    use Ordering::*;
    match (lhs.signum(), rhs.signum()) {
        (0, 0) => Ok(Equal),
        (l, r) if l >= 0 && r <= 0 => Ok(Greater),
        (l, r) if l <= 0 && r >= 0 => Ok(Less),
        (l, _) => {
            let l2 = lhs.checked_mul(lhs).ok_or(ExactError::Overflow)?;
            let r2 = rhs.checked_mul(rhs).and_then(|v| v.checked_mul(2)).ok_or(ExactError::Overflow)?;
            // Both positive: compare squares. Both negative: reversed.
            Ok(if l > 0 { l2.cmp(&r2) } else { r2.cmp(&l2) })
        }
    }
}

/// `(a + b√2)/c` with `c > 0` and `gcd(a, b, c) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64, i64)", into = "(i64, i64, i64)")]
pub struct SurdThreshold {
    a: i64,
    b: i64,
    c: i64,
}

impl TryFrom<(i64, i64, i64)> for SurdThreshold {
    type Error = ExactError;

    fn try_from((a, b, c): (i64, i64, i64)) -> Result<Self, Self::Error> {
        SurdThreshold::new(a, b, c)
    }
}

impl From<SurdThreshold> for (i64, i64, i64) {
    fn from(s: SurdThreshold) -> Self {
        s.parts()
    }
}

impl SurdThreshold {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ExactError> {
        if c == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        let (a, b, c) = if c < 0 { (-a, -b, -c) } else { (a, b, c) };
        let g = gcd(gcd(a.unsigned_abs() as u128, b.unsigned_abs() as u128), c as u128) as i64;
        Ok(SurdThreshold { a: a / g, b: b / g, c: c / g })
    }

    /// `2 + √2/2 = (4 + √2)/2`.
    pub fn rich_binary() -> Self {
        SurdThreshold { a: 4, b: 1, c: 2 }
    }

    pub fn parts(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / self.c as f64
    }

    /// Ordering of the rational `num/den` against this value.
    pub fn cmp_rational(&self, num: i128, den: i128) -> Result<Ordering, ExactError> {
        if den == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        // num/den vs (a + b√2)/c  <=>  num·c - den·a vs den·b·√2
        let lhs = num
            .checked_mul(self.c as i128)
            .and_then(|v| v.checked_sub(den.checked_mul(self.a as i128)?))
            .ok_or(ExactError::Overflow)?;
        let rhs = den.checked_mul(self.b as i128).ok_or(ExactError::Overflow)?;
        cmp_with_sqrt2_multiple(lhs, rhs)
    }
}

impl fmt::Display for SurdThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < 0 { '-' } else { '+' };
        write!(f, "({}{}{}sqrt2)/{}", self.a, sign, self.b.unsigned_abs(), self.c)
    }
}

impl FromStr for SurdThreshold {
    type Err = ExactError;

    /// Accepts `A+Bsqrt2/C`, `(A+Bsqrt2)/C`, `A-Bsqrt2` and similar forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        let (body, c) = match compact.rsplit_once('/') {
            Some((body, c)) => (body, c.parse::<i64>().map_err(|_| bad())?),
            None => (compact.as_str(), 1),
        };
        let body = body.strip_suffix("sqrt2").ok_or_else(bad)?;
        let split = body.rfind(['+', '-']).filter(|&i| i > 0).ok_or_else(bad)?;
        let a = body[..split].parse::<i64>().map_err(|_| bad())?;
        let b_text = &body[split..];
        let b = match b_text {
            "+" => 1,
            "-" => -1,
            _ => b_text.parse::<i64>().map_err(|_| bad())?,
        };
        SurdThreshold::new(a, b, c)
    }
}

/// Exact ordering of an exponent against a surd threshold.
pub fn compare_to_surd(e: Exponent, t: SurdThreshold) -> Result<Ordering, ExactError> {
    t.cmp_rational(e.num as i128, e.den as i128)
}
