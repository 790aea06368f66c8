use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::consts::{ln2_limbs, pi_limbs};
use super::dd::assign_ops;
use super::eft::{quick_two_sum, two_prod, two_sum};
use super::{exp_series, Precision, Real};

/// Unevaluated sum of four non-overlapping doubles, most significant first.
///
/// Addition, multiplication and division follow the accurate (IEEE-style)
/// variants of the Hida-Li-Bailey quad-double algorithms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadDouble([f64; 4]);

#[inline]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    let (b, c) = two_sum(t2, t3);
    (a, b, c)
}

fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, 0.0, 0.0, 0.0];
    }
    let (s0, c3) = quick_two_sum(c2, c3);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);

    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
        }
    }
    [s0, s1, s2, s3]
}

fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, 0.0, 0.0, 0.0];
    }
    let (s0, c4) = quick_two_sum(c3, c4);
    let (s0, c3) = quick_two_sum(c2, s0);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);

    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    [s0, s1, s2, s3]
}

/// Accumulates `c` into the running pair `(a, b)`; returns a finished
/// component when one falls out, otherwise 0.
#[inline]
fn quick_three_accum(a: &mut f64, b: &mut f64, c: f64) -> f64 {
    let (s, bb) = two_sum(*b, c);
    let (s, aa) = two_sum(*a, s);
    let za = aa != 0.0;
    let zb = bb != 0.0;
    if za && zb {
        *a = aa;
        *b = bb;
        return s;
    }
    if !zb {
        *b = aa;
        *a = s;
    } else {
        *b = bb;
        *a = s;
    }
    0.0
}

impl QuadDouble {
    pub fn from_limbs(limbs: [f64; 4]) -> Self {
        QuadDouble(renorm4(limbs[0], limbs[1], limbs[2], limbs[3]))
    }

    pub fn limb(self, i: usize) -> f64 {
        self.0[i]
    }

    fn from_five(l: &[f64; 5]) -> Self {
        QuadDouble(renorm5(l[0], l[1], l[2], l[3], l[4]))
    }
}

impl Add for QuadDouble {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        let a = self.0;
        let b = b.0;
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
        let mut x = [0.0f64; 4];

        let take = |i: &mut usize, j: &mut usize| -> f64 {
            if *i >= 4 {
                *j += 1;
                b[*j - 1]
            } else if *j >= 4 {
                *i += 1;
                a[*i - 1]
            } else if a[*i].abs() > b[*j].abs() {
                *i += 1;
                a[*i - 1]
            } else {
                *j += 1;
                b[*j - 1]
            }
        };

        let u = take(&mut i, &mut j);
        let v = take(&mut i, &mut j);
        let (mut u, mut v) = quick_two_sum(u, v);

        while k < 4 {
            if i >= 4 && j >= 4 {
                x[k] = u;
                if k < 3 {
                    k += 1;
                    x[k] = v;
                }
                break;
            }
            let t = take(&mut i, &mut j);
            let s = quick_three_accum(&mut u, &mut v, t);
            if s != 0.0 {
                x[k] = s;
                k += 1;
            }
        }

        for &ai in &a[i.min(4)..] {
            x[3] += ai;
        }
        for &bj in &b[j.min(4)..] {
            x[3] += bj;
        }
        QuadDouble(renorm4(x[0], x[1], x[2], x[3]))
    }
}

impl Sub for QuadDouble {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for QuadDouble {
    type Output = Self;

    fn neg(self) -> Self {
        QuadDouble([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul for QuadDouble {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let a = self.0;
        let b = b.0;
        let (p0, q0) = two_prod(a[0], b[0]);

        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);

        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);

        let (p6, q6) = two_prod(a[0], b[3]);
        let (p7, q7) = two_prod(a[1], b[2]);
        let (p8, q8) = two_prod(a[2], b[1]);
        let (p9, q9) = two_prod(a[3], b[0]);

        // O(eps) terms
        let (p1, p2, q0) = three_sum(p1, p2, q0);

        // O(eps^2): six-three sum of p2, q1, q2, p3, p4, p5
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let mut s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        s2 += t0 + t1;

        // O(eps^3): nine-two sum of q0, s1, q3, q4, q5, p6, p7, p8, p9
        let (q0, q3) = two_sum(q0, q3);
        let (q4, q5) = two_sum(q4, q5);
        let (p6, p7) = two_sum(p6, p7);
        let (p8, p9) = two_sum(p8, p9);
        let (t0, mut t1) = two_sum(q0, q4);
        t1 += q3 + q5;
        let (r0, mut r1) = two_sum(p6, p8);
        r1 += p7 + p9;
        let (q3, mut q4) = two_sum(t0, r0);
        q4 += t1 + r1;
        let (t0, mut t1) = two_sum(q3, s1);
        t1 += q4;

        // O(eps^4)
        t1 += a[1] * b[3] + a[2] * b[2] + a[3] * b[1] + q6 + q7 + q8 + q9 + s2;

        QuadDouble(renorm5(p0, p1, s0, t0, t1))
    }
}

impl Div for QuadDouble {
    type Output = Self;

    fn div(self, b: Self) -> Self {
        let q0 = self.0[0] / b.0[0];
        let mut r = self - b * Self::from_f64(q0);
        let q1 = r.0[0] / b.0[0];
        r -= b * Self::from_f64(q1);
        let q2 = r.0[0] / b.0[0];
        r -= b * Self::from_f64(q2);
        let q3 = r.0[0] / b.0[0];
        r -= b * Self::from_f64(q3);
        let q4 = r.0[0] / b.0[0];
        QuadDouble(renorm5(q0, q1, q2, q3, q4))
    }
}

assign_ops!(QuadDouble);

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i])? {
                Ordering::Equal => continue,
                ord => return Some(ord),
            }
        }
        Some(Ordering::Equal)
    }
}

impl fmt::Display for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(64);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl Real for QuadDouble {
    const PRECISION: Precision = Precision::Bits212;

    fn from_f64(x: f64) -> Self {
        QuadDouble([x, 0.0, 0.0, 0.0])
    }

    fn to_f64(self) -> f64 {
        self.0[0] + self.0[1]
    }

    fn limbs(self) -> Vec<f64> {
        self.0.to_vec()
    }

    fn pi() -> Self {
        Self::from_five(pi_limbs())
    }

    fn ln2() -> Self {
        Self::from_five(ln2_limbs())
    }

    fn sqrt(self) -> Self {
        let a0 = self.0[0];
        if a0 <= 0.0 {
            return if a0 == 0.0 {
                Self::zero()
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        // Newton on 1/sqrt(a), then one correction step on sqrt(a) itself.
        let half = Self::from_f64(0.5);
        let h = self.mul_pow2(-1);
        let mut r = Self::from_f64(1.0 / a0.sqrt());
        for _ in 0..3 {
            r += (half - h * (r * r)) * r;
        }
        let y = self * r;
        y + (self - y * y) * r.mul_pow2(-1)
    }

    fn exp(self) -> Self {
        exp_series(self)
    }

    fn mul_pow2(self, e: i32) -> Self {
        let s = (e as f64).exp2();
        QuadDouble([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }

    fn floor(self) -> Self {
        let mut x = [self.0[0].floor(), 0.0, 0.0, 0.0];
        if x[0] == self.0[0] {
            x[1] = self.0[1].floor();
            if x[1] == self.0[1] {
                x[2] = self.0[2].floor();
                if x[2] == self.0[2] {
                    x[3] = self.0[3].floor();
                }
            }
            return QuadDouble(renorm4(x[0], x[1], x[2], x[3]));
        }
        QuadDouble(x)
    }

    fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_cancels_exactly() {
        let a = QuadDouble::from_limbs([1.0, 1e-20, 1e-40, 1e-60]);
        let d = a - a;
        assert_eq!(d, QuadDouble::zero());
        let b = a - QuadDouble::one();
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn division_round_trip() {
        let a = QuadDouble::from_f64(7.0);
        let b = QuadDouble::from_f64(3.0);
        let q = a / b;
        let back = q * b - a;
        assert!(back.abs().to_f64() < 1e-62);
    }

    #[test]
    fn sqrt_three_squared() {
        let r = QuadDouble::from_f64(3.0).sqrt();
        assert!((r * r - QuadDouble::from_f64(3.0)).abs().to_f64() < 1e-62);
    }
}
