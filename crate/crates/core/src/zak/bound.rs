//! Rigorous bound on the series tails dropped by a finite summation window.

use num_traits::ToPrimitive;

use crate::hermite::{rodrigues_polynomial, HermiteWindow};

/// Dominating function `M(t) = P(√π t) e^{-πt²} ≥ |w(t)|` for `t ≥ 0`, where
/// `P` has the absolute values of the window's polynomial coefficients.
#[derive(Debug, Clone)]
pub struct TailEnvelope {
    /// `(k, ln E_k)` for each nonzero coefficient of `P`.
    ln_coeffs: Vec<(u32, f64)>,
    degree: u32,
}

/// Combined bound for both tails together with the worse tail ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub bound: f64,
    pub rho: f64,
}

impl TailEnvelope {
    pub fn new(w: &HermiteWindow) -> Self {
        let degree = w.max_order();
        let mut e = vec![0.0f64; degree as usize + 1];
        for (n, c) in w.terms() {
            let r = rodrigues_polynomial(*n);
            let ln_norm = (0.25 - n.get() as f64) * std::f64::consts::LN_2 - 0.5 * ln_factorial(n.get());
            for (k, a) in r.coefficients().iter().enumerate() {
                let a = a.to_f64().unwrap_or(f64::INFINITY).abs();
                if a != 0.0 {
                    e[k] += c.abs() * (a.ln() + ln_norm).exp();
                }
            }
        }
        let ln_coeffs = e
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(k, v)| (k as u32, v.ln()))
            .collect();
        TailEnvelope { ln_coeffs, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `ln M(t)` for `t > 0`.
    pub fn ln_envelope(&self, t: f64) -> f64 {
        let ln_s = (std::f64::consts::PI.sqrt() * t).ln();
        let terms = self.ln_coeffs.iter().map(|&(k, lc)| lc + k as f64 * ln_s);
        let peak = terms.clone().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = terms.map(|v| (v - peak).exp()).sum();
        peak + sum.ln() - std::f64::consts::PI * t * t
    }

    /// Upper bound on `M(t + λ) / M(t)`, decreasing in `t`.
    pub fn ratio(&self, lambda: f64, t: f64) -> f64 {
        let ln = self.degree as f64 * (lambda / t).ln_1p()
            - std::f64::consts::PI * lambda * (2.0 * t + lambda);
        ln.exp()
    }

    /// Bound on `√λ Σ |w(λ(x0+k))|` over `k > K+1` and `k < -K`.
    pub fn bound(&self, lambda: f64, x0: f64, k: u64) -> TailBound {
        let k = k as f64;
        let upper = lambda * (x0 + k + 2.0);
        let lower = lambda * (k + 1.0 - x0);
        let rho_up = self.ratio(lambda, upper);
        let rho_lo = self.ratio(lambda, lower);
        let rho = rho_up.max(rho_lo);
        if !(rho < 1.0) {
            return TailBound {
                bound: f64::INFINITY,
                rho,
            };
        }
        let tail = |t: f64, r: f64| (self.ln_envelope(t) - (-r).ln_1p()).exp();
        // small safety factor for the f64 evaluation of the bound itself
        let b = lambda.sqrt() * (tail(upper, rho_up) + tail(lower, rho_lo)) * (1.0 + 1e-9);
        TailBound {
            bound: b.max(f64::MIN_POSITIVE),
            rho,
        }
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

