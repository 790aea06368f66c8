//! Zibulski–Zeevi matrices of rationally oversampled Gabor systems and their
//! extreme singular values.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::hermite::HermiteWindow;
use crate::xprec::{Real, XComplex};
use crate::zak::{Coord, ZakError, ZakEvaluator, ZakParameter};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZibulskiError {
    #[error("invalid lattice density `{0}`")]
    Density(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error(transparent)]
    Zak(#[from] ZakError),
}

/// Lattice density `ab = p/q` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalDensity {
    p: u32,
    q: u32,
}

impl RationalDensity {
    /// Reduces `p/q` to lowest terms.
    pub fn new(p: u32, q: u32) -> Result<Self, ZibulskiError> {
        if p == 0 || q == 0 {
            return Err(ZibulskiError::Density(format!("{p}/{q}")));
        }
        let g = p.gcd(&q);
        Ok(RationalDensity { p: p / g, q: q / g })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn value(self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `ab ≥ 1`: no Gabor frame exists there, but the matrices are still
    /// well defined.
    pub fn is_supercritical(self) -> bool {
        self.p >= self.q
    }

    pub fn as_coord(self) -> Coord {
        Coord::exact(self.p as i64, self.q as i64)
    }
}

impl fmt::Display for RationalDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalDensity {
    type Err = ZibulskiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ZibulskiError::Density(s.to_string());
        let (p, q) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
        let p = p.trim().parse().map_err(|_| err())?;
        let q = q.trim().parse().map_err(|_| err())?;
        RationalDensity::new(p, q).map_err(|_| err())
    }
}

/// The `p × q` matrix with entries `p^{-1/2} Z_{1/b} g(x - ℓp/q, γ + k/p)`,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ZZMatrix<T> {
    pub x: Coord,
    pub gamma: Coord,
    pub p: usize,
    pub q: usize,
    pub entries: Vec<XComplex<T>>,
    /// Largest truncation bound among the entries.
    pub truncation_bound: f64,
}

impl<T: Real> ZZMatrix<T> {
    pub fn entry(&self, k: usize, l: usize) -> XComplex<T> {
        self.entries[k * self.q + l]
    }

    pub fn row(&self, k: usize) -> &[XComplex<T>] {
        &self.entries[k * self.q..(k + 1) * self.q]
    }

    pub fn to_f64(&self) -> ZZMatrix<f64> {
        ZZMatrix {
            x: self.x,
            gamma: self.gamma,
            p: self.p,
            q: self.q,
            entries: self.entries.iter().map(|z| z.to_f64()).collect(),
            truncation_bound: self.truncation_bound,
        }
    }
}

/// A matrix together with its extreme singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct ZZMatrixSample {
    pub matrix: ZZMatrix<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl ZZMatrixSample {
    pub fn new(matrix: ZZMatrix<f64>) -> Result<Self, ZibulskiError> {
        let (sigma_min, sigma_max) = singular_extremes(matrix.p, matrix.q, &matrix.entries)?;
        Ok(ZZMatrixSample {
            matrix,
            sigma_min,
            sigma_max,
        })
    }
}

/// Zak evaluator at `λ = 1/b` with the density attached.
#[derive(Debug, Clone)]
pub struct ZZAssembler<T> {
    zak: ZakEvaluator<T>,
    density: RationalDensity,
}

impl<T: Real> ZZAssembler<T> {
    pub fn new(
        w: &HermiteWindow,
        b: ZakParameter,
        density: RationalDensity,
    ) -> Result<Self, ZibulskiError> {
        Ok(ZZAssembler {
            zak: ZakEvaluator::new(w, b.recip()?)?,
            density,
        })
    }

    pub fn zak(&self) -> &ZakEvaluator<T> {
        &self.zak
    }

    pub fn density(&self) -> RationalDensity {
        self.density
    }

    /// Zak arguments `(x - ℓp/q, γ + k/p)` of entry `(k, ℓ)`.
    pub fn entry_point(&self, x: Coord, gamma: Coord, k: usize, l: usize) -> (Coord, Coord) {
        let (p, q) = (self.density.p as i64, self.density.q as i64);
        (
            x - Coord::exact(l as i64 * p, q),
            gamma + Coord::exact(k as i64, p),
        )
    }

    pub fn matrix(&self, x: Coord, gamma: Coord, tol: f64) -> Result<ZZMatrix<T>, ZibulskiError> {
        let (p, q) = (self.density.p as usize, self.density.q as usize);
        let norm = T::from_i64(p as i64).sqrt().recip();
        let mut entries = Vec::with_capacity(p * q);
        let mut trunc = 0.0f64;
        for k in 0..p {
            for l in 0..q {
                let (xe, ge) = self.entry_point(x, gamma, k, l);
                let z = self.zak.eval(xe, ge, tol)?;
                trunc = trunc.max(z.truncation_bound / (p as f64).sqrt());
                entries.push(z.value.scale(norm));
            }
        }
        Ok(ZZMatrix {
            x,
            gamma,
            p,
            q,
            entries,
            truncation_bound: trunc,
        })
    }
}

pub fn zz_matrix<T: Real>(
    w: &HermiteWindow,
    b: ZakParameter,
    density: RationalDensity,
    x: Coord,
    gamma: Coord,
    tol: f64,
) -> Result<ZZMatrix<T>, ZibulskiError> {
    ZZAssembler::new(w, b, density)?.matrix(x, gamma, tol)
}

/// Smallest and largest of the `p` leading singular values of a `p × q`
/// matrix (row-major), via one-sided cyclic Jacobi on the rows.
///
/// When `p > q` the smallest value is zero.
pub fn singular_extremes(
    p: usize,
    q: usize,
    entries: &[XComplex<f64>],
) -> Result<(f64, f64), ZibulskiError> {
    assert_eq!(entries.len(), p * q, "matrix shape mismatch");
    if entries
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(ZibulskiError::NonFinite);
    }
    let sigma = row_singular_values(p, q, entries);
    let min = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sigma.iter().copied().fold(0.0, f64::max);
    Ok((if p == 0 { 0.0 } else { min }, max))
}

/// Orthogonalizes the rows with unitary plane rotations; the final row norms
/// are the singular values.
pub fn row_singular_values(p: usize, q: usize, entries: &[XComplex<f64>]) -> Vec<f64> {
    let mut rows: Vec<Vec<XComplex<f64>>> = entries.chunks(q.max(1)).map(|r| r.to_vec()).collect();
    rows.truncate(p);
    const MAX_SWEEPS: usize = 60;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                rotated |= rotate_pair(&mut rows, i, j);
            }
        }
        if !rotated {
            break;
        }
    }
    rows.iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

fn rotate_pair(rows: &mut [Vec<XComplex<f64>>], i: usize, j: usize) -> bool {
    let (alpha, beta, g) = {
        let (ri, rj) = (&rows[i], &rows[j]);
        let mut g = XComplex::<f64>::zero();
        for (a, b) in ri.iter().zip(rj) {
            g += *a * b.conj();
        }
        let alpha: f64 = ri.iter().map(|z| z.norm_sqr()).sum();
        let beta: f64 = rj.iter().map(|z| z.norm_sqr()).sum();
        (alpha, beta, g)
    };
    let g_abs = g.abs();
    if g_abs <= f64::EPSILON * (alpha * beta).sqrt() || g_abs == 0.0 {
        return false;
    }
    let zeta = (beta - alpha) / (2.0 * g_abs);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let e = g.scale(1.0 / g_abs);
    let (se, se_conj) = (e.scale(s), e.conj().scale(s));
    let (head, tail) = rows.split_at_mut(j);
    for (a, b) in head[i].iter_mut().zip(tail[0].iter_mut()) {
        let (ai, bj) = (*a, *b);
        *a = ai.scale(c) - se * bj;
        *b = se_conj * ai + bj.scale(c);
    }
    true
}

/// `(Σ_ℓ |Z_{1/b} g(x - ℓ/q, γ)|²)^{1/2}`, the quantity bounded by the frame
/// bounds in the integer-oversampled case.
pub fn integer_oversampled_bound<T: Real>(
    w: &HermiteWindow,
    b: ZakParameter,
    q: u32,
    x: Coord,
    gamma: Coord,
    tol: f64,
) -> Result<f64, ZibulskiError> {
    let zak = ZakEvaluator::<T>::new(w, b.recip()?)?;
    let mut acc = T::zero();
    for l in 0..q as i64 {
        acc += zak.eval(x - Coord::exact(l, q as i64), gamma, tol)?.value.norm_sqr();
    }
    Ok(acc.sqrt().to_f64())
}
