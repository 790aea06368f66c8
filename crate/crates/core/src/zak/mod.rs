//! Zak transform `Z_λ f(x, γ) = √λ Σ_k f(λ(x+k)) e^{-2πikγ}` of Hermite
//! windows, with a certified bound on the truncation error.

mod bound;
mod coord;
mod surd;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hermite::{HermiteWindow, WindowEvaluator};
use crate::xprec::{Precision, Real, XComplex, XReal};

pub use bound::{TailBound, TailEnvelope};
pub use coord::Coord;
pub use surd::{QuarticSurd, SurdError};

/// Hard cap on the summation half-width.
pub const MAX_HALF_WIDTH: u64 = 1 << 22;

/// Rational phases with denominators up to this size use a lookup table.
const PHASE_TABLE_LIMIT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZakError {
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("tolerance {tol:e} is below the rounding floor {floor:e} at {precision}-bit precision")]
    BelowRoundingFloor {
        tol: f64,
        floor: f64,
        precision: Precision,
    },
    #[error("truncation bound did not reach {tol:e} within half-width {max_k}")]
    NoConvergence { tol: f64, max_k: u64 },
    #[error("Zak parameter must be positive and finite, got {0}")]
    InvalidParameter(f64),
    #[error("window {0} is not in a single Fourier eigenspace")]
    NoEigenclass(String),
    #[error("window {0} is neither even nor odd")]
    NoParity(String),
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error("cannot parse coordinate `{0}`")]
    ParseCoord(String),
    #[error("cannot parse Zak parameter `{0}`")]
    ParseParameter(String),
}

/// The dilation `λ > 0`, exact when it is a quartic surd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZakParameter {
    Exact(QuarticSurd),
    Approx(f64),
}

impl ZakParameter {
    pub fn approx(lambda: f64) -> Result<Self, ZakError> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(ZakParameter::Approx(lambda))
        } else {
            Err(ZakError::InvalidParameter(lambda))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ZakParameter::Exact(s) => s.to_f64(),
            ZakParameter::Approx(v) => v,
        }
    }

    pub fn to_real<T: Real>(self) -> T {
        match self {
            ZakParameter::Exact(s) => s.to_real(),
            ZakParameter::Approx(v) => T::from_f64(v),
        }
    }

    pub fn recip(self) -> Result<Self, ZakError> {
        Ok(match self {
            ZakParameter::Exact(s) => ZakParameter::Exact(s.recip()?),
            ZakParameter::Approx(v) => ZakParameter::approx(1.0 / v)?,
        })
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ZakParameter::Exact(_))
    }

    fn validate(self) -> Result<Self, ZakError> {
        match self {
            ZakParameter::Approx(v) => ZakParameter::approx(v),
            exact => Ok(exact),
        }
    }
}

impl From<QuarticSurd> for ZakParameter {
    fn from(s: QuarticSurd) -> Self {
        ZakParameter::Exact(s)
    }
}

impl fmt::Display for ZakParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZakParameter::Exact(s) => write!(f, "{s}"),
            ZakParameter::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ZakParameter {
    type Err = ZakError;

    /// Quartic-surd syntax gives an exact parameter; a decimal literal gives
    /// an approximate one.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(surd) = s.parse::<QuarticSurd>() {
            return Ok(ZakParameter::Exact(surd));
        }
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| ZakError::ParseParameter(s.to_string()))?;
        ZakParameter::approx(v)
    }
}

/// `(x, γ)` folded into `[0,1)²`, with `Z(x, γ) = e^{2πi·shift·γ0} Z(x0, γ0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub x0: Coord,
    pub gamma0: Coord,
    pub shift: i64,
}

impl ReducedPoint {
    pub fn phase<T: Real>(&self) -> XComplex<T> {
        cis_product(Coord::from(self.shift), self.gamma0)
    }
}

pub fn reduce_point(x: Coord, gamma: Coord) -> ReducedPoint {
    ReducedPoint {
        x0: x.fract(),
        gamma0: gamma.fract(),
        shift: x.floor(),
    }
}

/// `e^{2πi·a·b}`, reducing the product exactly when both factors are
/// rational and with a compensated product otherwise.
pub fn cis_product<T: Real>(a: Coord, b: Coord) -> XComplex<T> {
    match a.checked_mul(b) {
        Some(Coord::Exact(r)) => {
            let f = r - r.floor();
            XComplex::cis_turns(T::from_ratio(*f.numer(), *f.denom()))
        }
        _ => {
            let (hi, lo) = crate::xprec::eft::two_prod(a.to_f64(), b.to_f64());
            let hi = hi - hi.floor();
            XComplex::cis_turns(T::from_f64(hi) + T::from_f64(lo))
        }
    }
}

/// `k ↦ e^{-2πikγ}` for a fixed `γ`.
#[derive(Debug, Clone)]
pub struct PhaseTable<T> {
    kind: PhaseKind<T>,
}

#[derive(Debug, Clone)]
enum PhaseKind<T> {
    /// `table[j] = e^{2πij/den}` and `γ = num/den`.
    Table {
        num: i64,
        den: i64,
        table: Vec<XComplex<T>>,
    },
    Direct(Coord),
}

impl<T: Real> PhaseTable<T> {
    pub fn new(gamma: Coord) -> Self {
        let kind = match gamma.fract() {
            Coord::Exact(r) if *r.denom() <= PHASE_TABLE_LIMIT => {
                let den = *r.denom();
                let table = (0..den)
                    .map(|j| XComplex::cis_turns(T::from_ratio(j, den)))
                    .collect();
                PhaseKind::Table {
                    num: *r.numer(),
                    den,
                    table,
                }
            }
            g => PhaseKind::Direct(g),
        };
        PhaseTable { kind }
    }

    pub fn at(&self, k: i64) -> XComplex<T> {
        match &self.kind {
            PhaseKind::Table { num, den, table } => {
                let idx = (-(k as i128) * *num as i128).rem_euclid(*den as i128);
                table[idx as usize]
            }
            PhaseKind::Direct(g) => cis_product(Coord::from(-k), *g),
        }
    }
}

/// One Zak value with its truncation certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakEvaluation<T> {
    pub value: XComplex<T>,
    /// Rigorous bound on the error from dropping the series tails.
    pub truncation_bound: f64,
    pub terms_used: usize,
    /// `√λ Σ |terms|`, the scale of accumulated rounding error.
    pub scale: f64,
}

impl<T: Real> ZakEvaluation<T> {
    pub fn abs(&self) -> T {
        self.value.abs()
    }

    pub fn to_xreal(&self) -> ZakEvaluation<XReal>
    where
        T: Into<XReal>,
    {
        ZakEvaluation {
            value: XComplex {
                re: self.value.re.into(),
                im: self.value.im.into(),
            },
            truncation_bound: self.truncation_bound,
            terms_used: self.terms_used,
            scale: self.scale,
        }
    }
}

/// Window samples `w(λ(x0+k))` for `k` in `[-K, K+1]`; independent of `γ`.
#[derive(Debug, Clone)]
pub struct SeriesColumn<T> {
    k_min: i64,
    values: Vec<T>,
    sqrt_lambda: T,
    truncation_bound: f64,
    scale: f64,
}

impl<T: Real> SeriesColumn<T> {
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    pub fn terms_used(&self) -> usize {
        self.values.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rounding_floor(&self) -> f64 {
        rounding_floor::<T>(self.scale)
    }

    /// `√λ Σ_k w(λ(x0+k)) e^{-2πikγ}`.
    pub fn sum(&self, phases: &PhaseTable<T>) -> XComplex<T> {
        let mut re = T::zero();
        let mut im = T::zero();
        match &phases.kind {
            PhaseKind::Table { num, den, table } => {
                let den = *den;
                let step = (-num).rem_euclid(den);
                let mut idx = (-(self.k_min as i128) * *num as i128).rem_euclid(den as i128) as i64;
                for &v in &self.values {
                    let p = table[idx as usize];
                    re += v * p.re;
                    im += v * p.im;
                    idx += step;
                    if idx >= den {
                        idx -= den;
                    }
                }
            }
            PhaseKind::Direct(_) => {
                for (i, &v) in self.values.iter().enumerate() {
                    let p = phases.at(self.k_min + i as i64);
                    re += v * p.re;
                    im += v * p.im;
                }
            }
        }
        XComplex::new(re * self.sqrt_lambda, im * self.sqrt_lambda)
    }

    /// Sum restricted to `k ≡ parity (mod 2)`.
    pub fn partial_sum(&self, phases: &PhaseTable<T>, parity: i64) -> XComplex<T> {
        let mut acc = XComplex::zero();
        for (i, &v) in self.values.iter().enumerate() {
            let k = self.k_min + i as i64;
            if k.rem_euclid(2) == parity {
                let p = phases.at(k);
                acc += XComplex::new(v * p.re, v * p.im);
            }
        }
        acc.scale(self.sqrt_lambda)
    }
}

fn rounding_floor<T: Real>(scale: f64) -> f64 {
    8.0 * T::epsilon() * scale
}

/// Zak transform of a fixed window at a fixed `λ`.
#[derive(Debug, Clone)]
pub struct ZakEvaluator<T> {
    window: HermiteWindow,
    samples: WindowEvaluator<T>,
    envelope: TailEnvelope,
    lambda: ZakParameter,
    lambda_t: T,
    sqrt_lambda: T,
    lambda_f: f64,
}

impl<T: Real> ZakEvaluator<T> {
    pub fn new(w: &HermiteWindow, lambda: ZakParameter) -> Result<Self, ZakError> {
        let lambda = lambda.validate()?;
        let lambda_t = lambda.to_real::<T>();
        Ok(ZakEvaluator {
            window: w.clone(),
            samples: WindowEvaluator::new(w),
            envelope: TailEnvelope::new(w),
            lambda,
            lambda_t,
            sqrt_lambda: lambda_t.sqrt(),
            lambda_f: lambda.to_f64(),
        })
    }

    pub fn window(&self) -> &HermiteWindow {
        &self.window
    }

    pub fn lambda(&self) -> ZakParameter {
        self.lambda
    }

    /// Starting half-width `max(8, ⌈(n_max + 20)/λ⌉)`.
    pub fn initial_half_width(&self) -> u64 {
        let k = ((self.window.max_order() as f64 + 20.0) / self.lambda_f).ceil();
        (k as u64).max(8)
    }

    pub fn tail_bound(&self, x0: Coord, k: u64) -> TailBound {
        self.envelope.bound(self.lambda_f, x0.fract().to_f64(), k)
    }

    /// Doubles the half-width until the tail bound is at most `tol/4` and
    /// the terms at the boundary shrink by at least half per step.
    pub fn choose_half_width(&self, x0: Coord, tol: f64) -> Result<(u64, TailBound), ZakError> {
        check_tolerance(tol)?;
        let mut k = self.initial_half_width();
        loop {
            let tb = self.tail_bound(x0, k);
            if tb.rho <= 0.5 && tb.bound <= tol / 4.0 {
                return Ok((k, tb));
            }
            if k >= MAX_HALF_WIDTH {
                return Err(ZakError::NoConvergence {
                    tol,
                    max_k: MAX_HALF_WIDTH,
                });
            }
            k *= 2;
        }
    }

    pub fn column(&self, x0: Coord, tol: f64) -> Result<SeriesColumn<T>, ZakError> {
        let (k, _) = self.choose_half_width(x0, tol)?;
        let col = self.column_with_half_width(x0, k);
        let floor = col.rounding_floor();
        if tol < floor {
            return Err(ZakError::BelowRoundingFloor {
                tol,
                floor,
                precision: T::PRECISION,
            });
        }
        Ok(col)
    }

    /// Column over `k ∈ [-K, K+1]` for an explicit half-width `K`.
    pub fn column_with_half_width(&self, x0: Coord, k: u64) -> SeriesColumn<T> {
        let x0 = x0.fract();
        let k = k as i64;
        let args: Box<dyn Fn(i64) -> T> = match x0 {
            Coord::Exact(r) => {
                let (num, den) = (*r.numer(), *r.denom());
                let step = self.lambda_t / T::from_i64(den);
                Box::new(move |j| step * T::from_i64(num + j * den))
            }
            Coord::Approx(v) => {
                let x = T::from_f64(v);
                let lambda = self.lambda_t;
                Box::new(move |j| lambda * (x + T::from_i64(j)))
            }
        };
        let values: Vec<T> = (-k..=k + 1).map(|j| self.samples.eval(args(j))).collect();
        let scale = self.lambda_f.sqrt() * values.iter().map(|v| v.to_f64().abs()).sum::<f64>();
        SeriesColumn {
            k_min: -k,
            values,
            sqrt_lambda: self.sqrt_lambda,
            truncation_bound: self.tail_bound(x0, k as u64).bound,
            scale,
        }
    }

    pub fn eval(&self, x: Coord, gamma: Coord, tol: f64) -> Result<ZakEvaluation<T>, ZakError> {
        let rp = reduce_point(x, gamma);
        let col = self.column(rp.x0, tol)?;
        Ok(self.finish(&rp, &col))
    }

    pub fn eval_with_half_width(&self, x: Coord, gamma: Coord, k: u64) -> ZakEvaluation<T> {
        let rp = reduce_point(x, gamma);
        let col = self.column_with_half_width(rp.x0, k);
        self.finish(&rp, &col)
    }

    fn finish(&self, rp: &ReducedPoint, col: &SeriesColumn<T>) -> ZakEvaluation<T> {
        let phases = PhaseTable::new(rp.gamma0);
        let mut value = col.sum(&phases);
        if rp.shift != 0 {
            value = value * rp.phase();
        }
        ZakEvaluation {
            value,
            truncation_bound: col.truncation_bound,
            terms_used: col.terms_used(),
            scale: col.scale,
        }
    }
}

fn check_tolerance(tol: f64) -> Result<(), ZakError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(ZakError::InvalidTolerance(tol))
    }
}

pub fn zak_eval<T: Real>(
    w: &HermiteWindow,
    lambda: ZakParameter,
    x: Coord,
    gamma: Coord,
    tol: f64,
) -> Result<ZakEvaluation<T>, ZakError> {
    ZakEvaluator::new(w, lambda)?.eval(x, gamma, tol)
}

/// [`zak_eval`] at a precision chosen at run time.
pub fn zak_eval_at_precision(
    w: &HermiteWindow,
    lambda: ZakParameter,
    x: Coord,
    gamma: Coord,
    tol: f64,
    precision: Precision,
) -> Result<ZakEvaluation<XReal>, ZakError> {
    crate::with_precision!(precision, T => zak_eval::<T>(w, lambda, x, gamma, tol).map(|e| e.to_xreal()))
}

/// Evaluates `e^{2πixγ} (-i)^j Z_{1/λ} w(γ, -x)`, which equals `Z_λ w(x, γ)`
/// for a window in the eigenclass `j`.
pub fn zak_eval_dual<T: Real>(
    w: &HermiteWindow,
    lambda: ZakParameter,
    x: Coord,
    gamma: Coord,
    tol: f64,
) -> Result<ZakEvaluation<T>, ZakError> {
    let j = w
        .eigenclass()
        .ok_or_else(|| ZakError::NoEigenclass(w.to_string()))?;
    let inner = zak_eval::<T>(w, lambda.recip()?, gamma, -x, tol)?;
    let v = inner.value * cis_product(x, gamma);
    let value = match j {
        0 => v,
        1 => XComplex::new(v.im, -v.re),
        2 => -v,
        _ => XComplex::new(-v.im, v.re),
    };
    Ok(ZakEvaluation { value, ..inner })
}

/// `max |Z(x, γ) ∓ Z(-x, -γ)|` over the samples, with the sign given by
/// the parity of the window.
pub fn zak_symmetry_residuals<T: Real>(
    w: &HermiteWindow,
    lambda: ZakParameter,
    samples: &[(Coord, Coord)],
    tol: f64,
) -> Result<f64, ZakError> {
    let sign = w
        .parity()
        .ok_or_else(|| ZakError::NoParity(w.to_string()))?
        .sign();
    let z = ZakEvaluator::<T>::new(w, lambda)?;
    let mut worst = 0.0f64;
    for &(x, g) in samples {
        let a = z.eval(x, g, tol)?.value;
        let b = z.eval(-x, -g, tol)?.value;
        let r = (a - b.scale(T::from_f64(sign))).abs().to_f64();
        worst = worst.max(r);
    }
    Ok(worst)
}
