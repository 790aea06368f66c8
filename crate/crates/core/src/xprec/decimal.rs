//! Exact binary-to-decimal formatting and decimal parsing for multi-limb values.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::consts::split_into_limbs;
use super::{Real, XprecError};

/// Exact sum of the limbs as `n * 2^e`.
fn limbs_to_dyadic(limbs: &[f64]) -> (BigInt, i64) {
    let parts: Vec<(i64, i64)> = limbs
        .iter()
        .filter(|l| **l != 0.0)
        .map(|&l| decode(l))
        .collect();
    let Some(min_exp) = parts.iter().map(|p| p.1).min() else {
        return (BigInt::zero(), 0);
    };
    let mut n = BigInt::zero();
    for (m, e) in parts {
        n += BigInt::from(m) << (e - min_exp) as u64;
    }
    (n, min_exp)
}

/// `x = m * 2^e` with integer `m`.
fn decode(x: f64) -> (i64, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1 << 52)), exp - 1075)
    }
}

pub(crate) fn to_sci_string(limbs: &[f64], digits: usize) -> String {
    let digits = digits.max(1);
    let lead = limbs[0];
    if !lead.is_finite() {
        return format!("{lead}");
    }
    let (n, e) = limbs_to_dyadic(limbs);
    if n.is_zero() {
        return format!("{:.*}e0", digits - 1, 0.0);
    }
    let negative = n.is_negative();
    let n = n.abs();
    let mut d10 = lead.abs().log10().floor() as i64;
    let ten = BigInt::from(10u32);
    let (q, d10) = loop {
        let s = digits as i64 - 1 - d10;
        let mut num = n.clone();
        let mut den = BigInt::one();
        if e >= 0 {
            num <<= e as u64;
        } else {
            den <<= (-e) as u64;
        }
        if s >= 0 {
            num *= num_traits::pow(ten.clone(), s as usize);
        } else {
            den *= num_traits::pow(ten.clone(), (-s) as usize);
        }
        let q: BigInt = (2 * num + &den) / (2 * den);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        if q >= &lower * &ten {
            d10 += 1;
        } else if q < lower {
            d10 -= 1;
        } else {
            break (q, d10);
        }
    };
    let s = q.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&s[..1]);
    if digits > 1 {
        out.push('.');
        out.push_str(&s[1..]);
    }
    out.push('e');
    out.push_str(&d10.to_string());
    out
}

pub(crate) fn parse<T: Real>(s: &str) -> Result<T, XprecError> {
    let err = || XprecError::Parse(s.to_string());
    let t = s.trim();
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut m: BigInt = digits.parse().map_err(|_| err())?;
    if negative {
        m = -m;
    }
    let exp10 = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if exp10 >= 0 {
        bigint_to_real::<T>(&(m * num_traits::pow(ten, exp10 as usize)))
    } else {
        bigint_to_real::<T>(&m) / bigint_to_real::<T>(&num_traits::pow(ten, (-exp10) as usize))
    };
    Ok(value)
}

fn bigint_to_real<T: Real>(v: &BigInt) -> T {
    let limbs: [f64; 6] = split_into_limbs(v, 0);
    limbs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &l| acc + T::from_f64(l))
}
