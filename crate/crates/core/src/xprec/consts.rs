//! Mathematical constants from integer arctangent series in binary fixed point.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Fractional bits of the fixed-point computations; well beyond five limbs.
const FRAC_BITS: u64 = 400;

/// `atan(1/x)` (or `atanh(1/x)` when `hyperbolic`) scaled by `2^FRAC_BITS`.
fn arctan_inv(x: u32, hyperbolic: bool) -> BigInt {
    let one = BigInt::one() << FRAC_BITS;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x; // 1/x^(2k+1)
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if hyperbolic || k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub(crate) fn pi_fixed() -> BigInt {
    16 * arctan_inv(5, false) - 4 * arctan_inv(239, false)
}

/// ln 2 as `2 atanh(1/3)`.
pub(crate) fn ln2_fixed() -> BigInt {
    2 * arctan_inv(3, true)
}

pub(crate) fn pi_limbs() -> &'static [f64; 5] {
    static PI: OnceLock<[f64; 5]> = OnceLock::new();
    PI.get_or_init(|| split_into_limbs(&pi_fixed(), FRAC_BITS as i64))
}

pub(crate) fn ln2_limbs() -> &'static [f64; 5] {
    static LN2: OnceLock<[f64; 5]> = OnceLock::new();
    LN2.get_or_init(|| split_into_limbs(&ln2_fixed(), FRAC_BITS as i64))
}

/// Greedy round-to-nearest decomposition of `v * 2^-frac_bits` into
/// non-overlapping doubles, most significant first.
pub(crate) fn split_into_limbs<const N: usize>(v: &BigInt, frac_bits: i64) -> [f64; N] {
    let mut out = [0.0; N];
    let mut rem = v.clone();
    for limb in out.iter_mut() {
        if rem.is_zero() {
            break;
        }
        let bits = rem.abs().bits() as i64;
        let shift = (bits - 53).max(0);
        let mag = rem.abs();
        let m: BigInt = if shift > 0 {
            (&mag + (BigInt::one() << (shift - 1) as u64)) >> shift as u64
        } else {
            mag
        };
        let m = if rem.sign() == Sign::Minus { -m } else { m };
        let mf = bigint_small_to_f64(&m);
        *limb = mf * ((shift - frac_bits) as f64).exp2();
        rem -= m << shift as u64;
    }
    out
}

/// Exact conversion for integers of at most 54 bits.
fn bigint_small_to_f64(m: &BigInt) -> f64 {
    let (sign, digits) = m.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0) as f64;
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}
