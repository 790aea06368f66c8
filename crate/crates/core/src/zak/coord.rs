use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, ToPrimitive};

use super::ZakError;
use crate::xprec::Real;

/// A phase-space coordinate, kept as an exact rational whenever possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coord {
    Exact(Rational64),
    Approx(f64),
}

impl Coord {
    pub fn exact(num: i64, den: i64) -> Self {
        Coord::Exact(Rational64::new(num, den))
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Coord::Exact(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Coord::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coord::Approx(v) => v,
        }
    }

    pub fn to_real<T: Real>(self) -> T {
        match self {
            Coord::Exact(r) => T::from_ratio(*r.numer(), *r.denom()),
            Coord::Approx(v) => T::from_f64(v),
        }
    }

    pub fn floor(self) -> i64 {
        match self {
            Coord::Exact(r) => r.floor().to_integer(),
            Coord::Approx(v) => v.floor() as i64,
        }
    }

    /// Representative in `[0, 1)`.
    pub fn fract(self) -> Coord {
        match self {
            Coord::Exact(r) => Coord::Exact(r - r.floor()),
            Coord::Approx(v) => {
                let f = v - v.floor();
                Coord::Approx(if f >= 1.0 { 0.0 } else { f })
            }
        }
    }

    pub fn checked_mul(self, o: Coord) -> Option<Coord> {
        match (self, o) {
            (Coord::Exact(a), Coord::Exact(b)) => a.checked_mul(&b).map(Coord::Exact),
            _ => None,
        }
    }

    /// Product, falling back to floating point on overflow.
    pub fn mul(self, o: Coord) -> Coord {
        self.checked_mul(o)
            .unwrap_or_else(|| Coord::Approx(self.to_f64() * o.to_f64()))
    }

    pub fn div(self, o: Coord) -> Coord {
        match (self, o) {
            (Coord::Exact(a), Coord::Exact(b)) if *b.numer() != 0 => {
                a.checked_mul(&b.recip()).map(Coord::Exact)
            }
            _ => None,
        }
        .unwrap_or_else(|| Coord::Approx(self.to_f64() / o.to_f64()))
    }
}

impl From<i64> for Coord {
    fn from(n: i64) -> Self {
        Coord::Exact(Rational64::from_integer(n))
    }
}

impl From<Rational64> for Coord {
    fn from(r: Rational64) -> Self {
        Coord::Exact(r)
    }
}

impl From<f64> for Coord {
    fn from(v: f64) -> Self {
        Coord::Approx(v)
    }
}

impl Add for Coord {
    type Output = Coord;

    fn add(self, o: Coord) -> Coord {
        match (self, o) {
            (Coord::Exact(a), Coord::Exact(b)) => a.checked_add(&b).map(Coord::Exact),
            _ => None,
        }
        .unwrap_or_else(|| Coord::Approx(self.to_f64() + o.to_f64()))
    }
}

impl Sub for Coord {
    type Output = Coord;

    fn sub(self, o: Coord) -> Coord {
        match (self, o) {
            (Coord::Exact(a), Coord::Exact(b)) => a.checked_sub(&b).map(Coord::Exact),
            _ => None,
        }
        .unwrap_or_else(|| Coord::Approx(self.to_f64() - o.to_f64()))
    }
}

impl Neg for Coord {
    type Output = Coord;

    fn neg(self) -> Coord {
        match self {
            Coord::Exact(r) => Coord::Exact(-r),
            Coord::Approx(v) => Coord::Approx(-v),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Exact(r) => write!(f, "{r}"),
            Coord::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Coord {
    type Err = ZakError;

    /// `p/q` and short decimal literals are exact; anything else that
    /// parses as a float is approximate.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ZakError::ParseCoord(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Coord::exact(n, d));
        }
        if let Some(r) = exact_decimal(t) {
            return Ok(Coord::Exact(r));
        }
        let v: f64 = t.parse().map_err(|_| err())?;
        if v.is_finite() {
            Ok(Coord::Approx(v))
        } else {
            Err(err())
        }
    }
}

fn exact_decimal(t: &str) -> Option<Rational64> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let r = Rational64::new(digits, den);
    Some(if neg { -r } else { r })
}
