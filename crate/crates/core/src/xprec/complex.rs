use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::Real;

/// Complex number over a working-precision real type.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XComplex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> XComplex<T> {
    pub fn new(re: T, im: T) -> Self {
        XComplex { re, im }
    }

    pub fn zero() -> Self {
        XComplex::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        XComplex::new(T::one(), T::zero())
    }

    pub fn from_real(re: T) -> Self {
        XComplex::new(re, T::zero())
    }

    /// `e^{2πiθ}` for θ in turns.
    pub fn cis_turns(theta: T) -> Self {
        let (s, c) = theta.sin_cos_turns();
        XComplex::new(c, s)
    }

    pub fn conj(self) -> Self {
        XComplex::new(self.re, -self.im)
    }

    pub fn scale(self, s: T) -> Self {
        XComplex::new(self.re * s, self.im * s)
    }

    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    /// Modulus, scaled to avoid spurious underflow of tiny components.
    pub fn abs(self) -> T {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big == T::zero() {
            return T::zero();
        }
        let r = small / big;
        big * (T::one() + r * r).sqrt()
    }

    pub fn to_f64(self) -> XComplex<f64> {
        XComplex::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<T: Real> Add for XComplex<T> {
    type Output = Self;

    #[inline]
    fn add(self, o: Self) -> Self {
        XComplex::new(self.re + o.re, self.im + o.im)
    }
}

impl<T: Real> AddAssign for XComplex<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl<T: Real> Sub for XComplex<T> {
    type Output = Self;

    #[inline]
    fn sub(self, o: Self) -> Self {
        XComplex::new(self.re - o.re, self.im - o.im)
    }
}

impl<T: Real> Neg for XComplex<T> {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        XComplex::new(-self.re, -self.im)
    }
}

impl<T: Real> Mul for XComplex<T> {
    type Output = Self;

    #[inline]
    fn mul(self, o: Self) -> Self {
        XComplex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}
