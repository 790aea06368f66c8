//! Extended-precision scalar arithmetic.
//!
//! Three working precisions are provided, all built on IEEE binary64:
//!
//! | tier   | type            | mantissa bits |
//! |--------|-----------------|---------------|
//! | native | [`f64`]         | 53            |
//! | double | [`DoubleDouble`]| 106           |
//! | quad   | [`QuadDouble`]  | 212           |
//!
//! Double-word and quad-word values are unevaluated sums of non-overlapping
//! doubles manipulated with error-free transformations. The constants π and
//! ln 2 are computed once from integer arctangent series and cached, so no
//! host math library is consulted for them.

mod complex;
mod consts;
mod dd;
mod decimal;
mod qd;

use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

pub use complex::XComplex;
pub use dd::DoubleDouble;
pub use qd::QuadDouble;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XprecError {
    #[error("unsupported working precision: {0} bits (expected 53, 106 or 212)")]
    UnsupportedPrecision(u32),
    #[error("exp({0}) overflows")]
    Overflow(f64),
    #[error("exp({0}) underflows to zero")]
    Underflow(f64),
    #[error("invalid decimal literal {0:?}")]
    Parse(String),
}

/// Working precision tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Precision {
    Bits53,
    Bits106,
    Bits212,
}

impl Precision {
    pub const ALL: [Precision; 3] = [Precision::Bits53, Precision::Bits106, Precision::Bits212];

    pub fn from_bits(bits: u32) -> Result<Self, XprecError> {
        match bits {
            53 => Ok(Precision::Bits53),
            106 => Ok(Precision::Bits106),
            212 => Ok(Precision::Bits212),
            other => Err(XprecError::UnsupportedPrecision(other)),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::Bits53 => 53,
            Precision::Bits106 => 106,
            Precision::Bits212 => 212,
        }
    }

    /// Unit roundoff `2^-bits`.
    pub fn unit_roundoff(self) -> f64 {
        (-(self.bits() as f64)).exp2()
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

impl FromStr for Precision {
    type Err = XprecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: u32 = s.trim().parse().map_err(|_| XprecError::Parse(s.to_string()))?;
        Precision::from_bits(bits)
    }
}

/// Runs `$body` with the type alias `$t` bound to the scalar type of `$prec`.
#[macro_export]
macro_rules! with_precision {
    ($prec:expr, $t:ident => $body:expr) => {
        match $prec {
            $crate::xprec::Precision::Bits53 => {
                #[allow(dead_code)]
                type $t = f64;
                $body
            }
            $crate::xprec::Precision::Bits106 => {
                #[allow(dead_code)]
                type $t = $crate::xprec::DoubleDouble;
                $body
            }
            $crate::xprec::Precision::Bits212 => {
                #[allow(dead_code)]
                type $t = $crate::xprec::QuadDouble;
                $body
            }
        }
    };
}

/// Real scalar with a fixed working precision.
pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + Display
    + Default
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    const PRECISION: Precision;

    /// Exact conversion.
    fn from_f64(x: f64) -> Self;
    /// Round to the nearest double (leading limb plus correction).
    fn to_f64(self) -> f64;
    /// Non-overlapping limbs, most significant first. Their exact sum is the value.
    fn limbs(self) -> Vec<f64>;

    fn pi() -> Self;
    fn ln2() -> Self;

    fn sqrt(self) -> Self;
    /// `e^self`; underflow returns zero and overflow returns +inf.
    fn exp(self) -> Self;
    /// Exact multiplication by `2^e`.
    fn mul_pow2(self, e: i32) -> Self;
    fn floor(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// Exact for every `i64`.
    fn from_i64(n: i64) -> Self {
        if n.unsigned_abs() <= 1 << 53 {
            Self::from_f64(n as f64)
        } else {
            let hi = (n >> 32) << 32;
            Self::from_f64(hi as f64) + Self::from_f64((n - hi) as f64)
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `w^{1/4}` for a positive integer `w`.
    fn quarter_root(w: u64) -> Self {
        quarter_root(w)
    }

    /// `e^self`, reporting underflow and overflow instead of saturating.
    fn exp_checked(self) -> Result<Self, XprecError> {
        let x = self.to_f64();
        if x > 709.78 {
            return Err(XprecError::Overflow(x));
        }
        if x < -745.13 {
            return Err(XprecError::Underflow(x));
        }
        Ok(self.exp())
    }

    /// Unit roundoff of the working precision.
    fn epsilon() -> f64 {
        Self::PRECISION.unit_roundoff()
    }

    /// `(sin 2πθ, cos 2πθ)` with θ measured in turns.
    fn sin_cos_turns(self) -> (Self, Self) {
        sin_cos_turns(self)
    }

    /// Parses a decimal literal such as `-1.25e-3`, rounding once into the
    /// working precision.
    fn parse_decimal(s: &str) -> Result<Self, XprecError> {
        decimal::parse(s)
    }

    /// Scientific notation with `digits` significant digits, produced from
    /// the exact binary value.
    fn to_sci_string(self, digits: usize) -> String {
        decimal::to_sci_string(&self.limbs(), digits)
    }
}

/// `w^{1/4}` to working precision.
pub fn quarter_root<T: Real>(w: u64) -> T {
    assert!(w >= 1, "quarter_root requires a positive integer");
    let r = exact_isqrt(w).and_then(exact_isqrt);
    match r {
        Some(root) => T::from_i64(root as i64),
        None => {
            let v = if w <= 1 << 53 {
                T::from_f64(w as f64)
            } else {
                T::from_i64(w as i64)
            };
            v.sqrt().sqrt()
        }
    }
}

fn exact_isqrt(n: u64) -> Option<u64> {
    let r = num_integer::Roots::sqrt(&n);
    (r * r == n).then_some(r)
}

/// Generic `exp` by Cody-Waite reduction `x = k ln2 + r`, `|r| <= ln2/2`, followed
/// by a Taylor series whose length is fixed by a tail bound.
pub(crate) fn exp_series<T: Real>(x: T) -> T {
    let xf = x.to_f64();
    if xf.is_nan() {
        return x;
    }
    if xf > 709.79 {
        return T::from_f64(f64::INFINITY);
    }
    if xf < -745.2 {
        return T::zero();
    }
    if xf == 0.0 && x == T::zero() {
        return T::one();
    }
    let k = (xf / std::f64::consts::LN_2).round();
    let mut r = x;
    for &limb in consts::ln2_limbs() {
        let (p, e) = eft::two_prod(k, limb);
        r -= T::from_f64(p);
        r -= T::from_f64(e);
    }
    // |r| <= ln2/2 + tiny. The remainder after n terms is at most
    // 2 |r|^{n+1} / (n+1)!, so stop once that drops below 2^-(bits+8).
    let rf = r.to_f64().abs().max(1e-300);
    let target = -((T::PRECISION.bits() + 8) as f64) * std::f64::consts::LN_2;
    let mut n = 1usize;
    let mut log_term = rf.ln();
    while log_term + std::f64::consts::LN_2 > target {
        n += 1;
        log_term += rf.ln() - (n as f64).ln();
        if n > 200 {
            break;
        }
    }
    // Horner: 1 + r(1 + r/2(1 + r/3(...)))
    let mut acc = T::one();
    for j in (1..=n).rev() {
        acc = T::one() + r * acc / T::from_f64(j as f64);
    }
    scale_pow2(acc, k as i64)
}

fn scale_pow2<T: Real>(x: T, k: i64) -> T {
    // Split so that each step stays inside the normal exponent range of f64.
    let mut out = x;
    let mut rem = k;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        out = out.mul_pow2(step as i32);
        rem -= step;
    }
    out
}

/// `(sin 2πθ, cos 2πθ)`; θ is reduced to the nearest octant before a Taylor
/// expansion on `|2πθ| <= π/4`.
pub fn sin_cos_turns<T: Real>(theta: T) -> (T, T) {
    // Reduce to t in [-1/16, 1/16] turns plus an octant index j (t + j/8).
    let eighths = theta.mul_pow2(3);
    let j_real = (eighths + T::from_f64(0.5)).floor();
    let t = (eighths - j_real).mul_pow2(-3);
    let j = (j_real.to_f64().rem_euclid(8.0)) as u8;
    let angle = t * T::pi().mul_pow2(1);
    let (s, c) = sin_cos_small(angle);
    rotate_octants(s, c, j)
}

/// `(sin, cos)` of the angle advanced by `j` eighths of a turn.
fn rotate_octants<T: Real>(s: T, c: T, j: u8) -> (T, T) {
    let h = T::from_f64(0.5).sqrt();
    match j {
        0 => (s, c),
        1 => ((s + c) * h, (c - s) * h),
        2 => (c, -s),
        3 => ((c - s) * h, -(c + s) * h),
        4 => (-s, -c),
        5 => (-(s + c) * h, (s - c) * h),
        6 => (-c, s),
        _ => ((s - c) * h, (c + s) * h),
    }
}

fn sin_cos_small<T: Real>(a: T) -> (T, T) {
    let af = a.to_f64().abs();
    if af == 0.0 && a == T::zero() {
        return (T::zero(), T::one());
    }
    let a2 = a * a;
    let target = -((T::PRECISION.bits() + 8) as f64) * std::f64::consts::LN_2;
    let mut n = 1usize;
    let mut log_term = af.ln();
    while log_term > target && n < 200 {
        n += 1;
        log_term += af.ln() - (n as f64).ln();
    }
    let n = n + 2;
    // sin a = a (1 - a^2/(2*3) (1 - a^2/(4*5) (...)))
    let odd_top = n | 1;
    let mut s = T::one();
    let mut j = odd_top;
    while j >= 3 {
        s = T::one() - a2 * s / T::from_f64(((j - 1) * j) as f64);
        j -= 2;
    }
    let s = a * s;
    let mut c = T::one();
    let mut j = odd_top + 1;
    while j >= 2 {
        c = T::one() - a2 * c / T::from_f64(((j - 1) * j) as f64);
        j -= 2;
    }
    (s, c)
}

/// Error-free transformations on binary64.
pub mod eft {
    /// `a + b = s + e` exactly, assuming `|a| >= |b|` or `a == 0`.
    #[inline]
    pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let e = b - (s - a);
        (s, e)
    }

    /// `a + b = s + e` exactly.
    #[inline]
    pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        (s, e)
    }

    /// `a * b = p + e` exactly.
    #[inline]
    pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        (p, e)
    }
}

/// A real number tagged with the working precision it was computed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XReal {
    Native(f64),
    Double(DoubleDouble),
    Quad(QuadDouble),
}

impl XReal {
    pub fn precision(&self) -> Precision {
        match self {
            XReal::Native(_) => Precision::Bits53,
            XReal::Double(_) => Precision::Bits106,
            XReal::Quad(_) => Precision::Bits212,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            XReal::Native(v) => v,
            XReal::Double(v) => v.to_f64(),
            XReal::Quad(v) => v.to_f64(),
        }
    }

    pub fn to_sci_string(&self, digits: usize) -> String {
        match *self {
            XReal::Native(v) => v.to_sci_string(digits),
            XReal::Double(v) => v.to_sci_string(digits),
            XReal::Quad(v) => v.to_sci_string(digits),
        }
    }

    /// Digits that are meaningful at this precision.
    pub fn natural_digits(&self) -> usize {
        (self.precision().bits() as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(self.natural_digits()))
    }
}

impl From<f64> for XReal {
    fn from(v: f64) -> Self {
        XReal::Native(v)
    }
}

impl From<DoubleDouble> for XReal {
    fn from(v: DoubleDouble) -> Self {
        XReal::Double(v)
    }
}

impl From<QuadDouble> for XReal {
    fn from(v: QuadDouble) -> Self {
        XReal::Quad(v)
    }
}

/// Conversion of a working-precision scalar into the tagged form.
pub trait IntoXReal {
    fn into_xreal(self) -> XReal;
}

impl<T: Real> IntoXReal for T {
    fn into_xreal(self) -> XReal {
        let limbs = self.limbs();
        match T::PRECISION {
            Precision::Bits53 => XReal::Native(limbs[0]),
            Precision::Bits106 => XReal::Double(DoubleDouble::from_limbs(limbs[0], limbs[1])),
            Precision::Bits212 => {
                XReal::Quad(QuadDouble::from_limbs([limbs[0], limbs[1], limbs[2], limbs[3]]))
            }
        }
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Bits53;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn limbs(self) -> Vec<f64> {
        vec![self]
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn ln2() -> Self {
        std::f64::consts::LN_2
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn exp(self) -> Self {
        f64::exp(self)
    }

    fn mul_pow2(self, e: i32) -> Self {
        self * (e as f64).exp2()
    }

    fn floor(self) -> Self {
        f64::floor(self)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn sin_cos_turns(self) -> (Self, Self) {
        let j = (self * 8.0).round();
        let (s, c) = (std::f64::consts::TAU * (self - j / 8.0)).sin_cos();
        rotate_octants(s, c, j.rem_euclid(8.0) as u8)
    }
}
