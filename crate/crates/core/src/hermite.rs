//! Hermite functions `h_n(x) = c_n^{-1/2} e^{πx²} (d/dx)^n e^{-2πx²}` and
//! finite combinations of them.
//!
//! The sign convention keeps the bare Rodrigues derivative, so `h_n` is
//! `(-1)^n` times the usual positive-leading family. Zero sets and frame
//! bounds do not depend on the sign of a window.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::xprec::Real;

/// Largest supported order.
pub const MAX_ORDER: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermiteError {
    #[error("Hermite order {0} exceeds the supported maximum {MAX_ORDER}")]
    UnsupportedOrder(u32),
    #[error("window has no nonzero terms")]
    EmptyWindow,
    #[error("order {0} appears more than once in the window")]
    DuplicateOrder(u32),
    #[error("coefficient for order {0} is not finite")]
    NonFiniteCoefficient(u32),
    #[error("cannot parse window `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteOrder(u32);

impl HermiteOrder {
    pub fn new(n: u32) -> Result<Self, HermiteError> {
        if n > MAX_ORDER {
            return Err(HermiteError::UnsupportedOrder(n));
        }
        Ok(HermiteOrder(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for HermiteOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Even or odd symmetry of a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Finite combination `Σ c_k h_{n_k}` with strictly increasing orders and
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteWindow {
    terms: Vec<(HermiteOrder, f64)>,
    eigenclass: Option<u8>,
}

impl HermiteWindow {
    /// Sorts the terms by order and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (u32, f64)>) -> Result<Self, HermiteError> {
        let mut out: Vec<(HermiteOrder, f64)> = Vec::new();
        for (n, c) in terms {
            let order = HermiteOrder::new(n)?;
            if !c.is_finite() {
                return Err(HermiteError::NonFiniteCoefficient(n));
            }
            if out.iter().any(|(o, _)| *o == order) {
                return Err(HermiteError::DuplicateOrder(n));
            }
            if c != 0.0 {
                out.push((order, c));
            }
        }
        if out.is_empty() {
            return Err(HermiteError::EmptyWindow);
        }
        out.sort_by_key(|t| t.0);
        let eigenclass = classify_orders(out.iter().map(|t| t.0));
        Ok(HermiteWindow {
            terms: out,
            eigenclass,
        })
    }

    pub fn single(n: u32) -> Result<Self, HermiteError> {
        HermiteWindow::new([(n, 1.0)])
    }

    pub fn terms(&self) -> &[(HermiteOrder, f64)] {
        &self.terms
    }

    pub fn max_order(&self) -> u32 {
        self.terms.last().map(|t| t.0.get()).unwrap_or(0)
    }

    /// `j` such that the window lies in the `(-i)^j` eigenspace of the
    /// Fourier transform, if all orders agree mod 4.
    pub fn eigenclass(&self) -> Option<u8> {
        self.eigenclass
    }

    pub fn parity(&self) -> Option<Parity> {
        let first = self.terms[0].0.get() % 2;
        if self.terms.iter().all(|t| t.0.get() % 2 == first) {
            Some(if first == 0 { Parity::Even } else { Parity::Odd })
        } else {
            None
        }
    }

    /// Sum of |coefficients|.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.1.abs()).sum()
    }

    pub fn eval<T: Real>(&self, x: T) -> T {
        WindowEvaluator::new(self).eval(x)
    }
}

fn classify_orders(orders: impl Iterator<Item = HermiteOrder>) -> Option<u8> {
    let mut class = None;
    for o in orders {
        let j = (o.get() % 4) as u8;
        match class {
            None => class = Some(j),
            Some(c) if c != j => return None,
            _ => {}
        }
    }
    class
}

pub fn classify_eigenspace(w: &HermiteWindow) -> Option<u8> {
    w.eigenclass()
}

impl fmt::Display for HermiteWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [(n, c)] = self.terms.as_slice() {
            if *c == 1.0 {
                return write!(f, "{n}");
            }
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}:{c}")?;
        }
        Ok(())
    }
}

impl FromStr for HermiteWindow {
    type Err = HermiteError;

    /// `n` for a single function, or `n0:c0,n1:c1,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || HermiteError::Parse(s.to_string());
        let s = s.trim();
        if !s.contains(':') {
            let n: u32 = s.parse().map_err(|_| err())?;
            return HermiteWindow::single(n);
        }
        let mut terms = Vec::new();
        for part in s.split(',') {
            let (n, c) = part.split_once(':').ok_or_else(err)?;
            let n: u32 = n.trim().parse().map_err(|_| err())?;
            let c: f64 = c.trim().parse().map_err(|_| err())?;
            terms.push((n, c));
        }
        HermiteWindow::new(terms)
    }
}

/// Three-term recurrence evaluator with the per-order constants precomputed
/// at working precision.
#[derive(Debug, Clone)]
pub struct WindowEvaluator<T> {
    /// Window coefficient for each order up to the maximum, sign-corrected.
    coeffs: Vec<T>,
    /// `2 sqrt(π/(n+1))`.
    alpha: Vec<T>,
    /// `sqrt(n/(n+1))`.
    beta: Vec<T>,
    h0_scale: T,
    pi: T,
}

impl<T: Real> WindowEvaluator<T> {
    pub fn new(w: &HermiteWindow) -> Self {
        let nmax = w.max_order() as usize;
        let mut coeffs = vec![T::zero(); nmax + 1];
        for (n, c) in w.terms() {
            let n = n.get() as usize;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[n] = T::from_f64(sign * c);
        }
        let pi = T::pi();
        let alpha = (0..nmax)
            .map(|n| (pi / T::from_i64(n as i64 + 1)).sqrt().mul_pow2(1))
            .collect();
        let beta = (0..nmax)
            .map(|n| T::from_ratio(n as i64, n as i64 + 1).sqrt())
            .collect();
        WindowEvaluator {
            coeffs,
            alpha,
            beta,
            h0_scale: T::quarter_root(2),
            pi,
        }
    }

    /// Window value at `x`.
    pub fn eval(&self, x: T) -> T {
        let g = (-(self.pi * x * x)).exp();
        if g == T::zero() {
            return T::zero();
        }
        let mut prev = T::zero();
        let mut cur = self.h0_scale * g;
        let mut acc = self.coeffs[0] * cur;
        for n in 0..self.coeffs.len() - 1 {
            let next = self.alpha[n] * x * cur - self.beta[n] * prev;
            prev = cur;
            cur = next;
            let c = self.coeffs[n + 1];
            if c != T::zero() {
                acc += c * cur;
            }
        }
        acc
    }
}

/// `h_n(x)`.
pub fn hermite_eval<T: Real>(n: HermiteOrder, x: T) -> T {
    let w = HermiteWindow::single(n.get()).expect("order already validated");
    WindowEvaluator::new(&w).eval(x)
}

pub fn window_eval<T: Real>(w: &HermiteWindow, x: T) -> T {
    w.eval(x)
}

/// `R_n` with `(d/dx)^n e^{-2πx²} = R_n(x) e^{-2πx²}`, stored as
/// `R_n(x) = Σ_k a_k π^{(n+k)/2} x^k` with integer `a_k`.
///
/// Only `k ≡ n (mod 2)` carry nonzero coefficients, so every power of π
/// is integral.
#[derive(Debug, Clone, PartialEq)]
pub struct RodriguesPolynomial {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl RodriguesPolynomial {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Integer part `a_k` of the coefficient of `x^k`.
    pub fn coefficient(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exponent of π multiplying `x^k`.
    pub fn pi_power(&self, k: usize) -> u32 {
        (self.order + k as u32) / 2
    }

    /// `R_{n+1} = R_n' - 4πx R_n`, coefficientwise.
    pub fn next(&self) -> RodriguesPolynomial {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            if k + 1 < n {
                *slot += &self.coeffs[k + 1] * BigInt::from(k + 1);
            }
            if k >= 1 && k - 1 < n {
                *slot -= &self.coeffs[k - 1] * BigInt::from(4);
            }
        }
        RodriguesPolynomial {
            order: self.order + 1,
            coeffs: out,
        }
    }
}

pub fn rodrigues_polynomial(n: HermiteOrder) -> RodriguesPolynomial {
    let mut r = RodriguesPolynomial {
        order: 0,
        coeffs: vec![BigInt::from(1)],
    };
    for _ in 0..n.get() {
        r = r.next();
    }
    r
}
