//! Frame-bound estimates on sampling grids over the fundamental domain,
//! sweeps along hyperbolas `ab = p/q`, and obstruction certificates.
//!
//! A positive lower estimate on a grid means no obstruction was found; it
//! never certifies the frame property.

mod obstruction;
mod probes;

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;
use thiserror::Error;

use crate::hermite::HermiteWindow;
use crate::xprec::XComplex;
use crate::zak::{reduce_point, Coord, PhaseTable, SeriesColumn, ZakError, ZakEvaluator, ZakParameter};
use crate::zibulski::{singular_extremes, RationalDensity, ZibulskiError};

pub use obstruction::{
    obstruction_point, Witness,
    certify_obstruction, obstruction_points, CertificationReport, ObstructionPoint, PointStatus,
    VanishingPattern,
};
pub use probes::{known_probes, KnownProbe, ProbeStatus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FramescanError {
    #[error("a·b = {product} does not match the density {density}")]
    DensityMismatch {
        product: f64,
        density: RationalDensity,
    },
    #[error("grid needs at least 2 points per axis, got {0}×{1}")]
    InvalidGrid(usize, usize),
    #[error("invalid b range [{0}, {1}] with {2} samples")]
    InvalidRange(f64, f64, usize),
    #[error("window {0} is not in a single Fourier eigenspace")]
    NoEigenclass(String),
    #[error("obstruction point {id} does not apply to eigenclass {class}")]
    EigenclassMismatch { id: u8, class: u8 },
    #[error(transparent)]
    Zibulski(#[from] ZibulskiError),
    #[error(transparent)]
    Zak(#[from] ZakError),
}

/// Uniform grid `(i/nx, j/nγ)` plus extra probe points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ngamma: usize,
    pub probes: Vec<(Coord, Coord)>,
    /// Close the point set under the map that exchanges `(a, b)` with
    /// `(b, a)`, so swapped estimates are taken over matching points.
    /// Only used for integer oversampling and eigenclass windows.
    pub symmetrize: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::uniform(51, 51)
    }
}

impl GridSpec {
    pub fn uniform(nx: usize, ngamma: usize) -> Self {
        GridSpec {
            nx,
            ngamma,
            probes: Vec::new(),
            symmetrize: true,
        }
    }

    pub fn with_probes(mut self, probes: impl IntoIterator<Item = (Coord, Coord)>) -> Self {
        for p in probes {
            if !self.probes.contains(&p) {
                self.probes.push(p);
            }
        }
        self
    }

    fn validate(&self) -> Result<(), FramescanError> {
        if self.nx < 2 || self.ngamma < 2 {
            return Err(FramescanError::InvalidGrid(self.nx, self.ngamma));
        }
        Ok(())
    }

    /// Grid points in row-major order, then the probes.
    pub fn points(&self) -> Vec<(Coord, Coord)> {
        let mut pts = Vec::with_capacity(self.nx * self.ngamma + self.probes.len());
        for i in 0..self.nx {
            for j in 0..self.ngamma {
                pts.push((
                    Coord::exact(i as i64, self.nx as i64),
                    Coord::exact(j as i64, self.ngamma as i64),
                ));
            }
        }
        pts.extend(self.probes.iter().map(|&(x, g)| (x.fract(), g.fract())));
        pts
    }
}

/// Grid extrema of the singular values of the Zibulski–Zeevi matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBoundsEstimate {
    pub a: f64,
    pub b: f64,
    pub b_param: ZakParameter,
    pub density: RationalDensity,
    /// Minimum of `σ_min` over the evaluated points.
    pub sqrt_a: f64,
    /// Maximum of `σ_max` over the evaluated points.
    pub sqrt_b: f64,
    pub argmin: (Coord, Coord),
    pub max_truncation: f64,
    pub points_evaluated: usize,
    pub grid: (usize, usize),
    pub probe: Option<KnownProbe>,
}

type Key = (i64, i64, u64);

fn coord_key(c: Coord) -> Key {
    match c {
        Coord::Exact(r) => (*r.numer(), *r.denom(), 0),
        Coord::Approx(v) => (0, 0, v.to_bits()),
    }
}

fn cached<'a, K: Hash + Eq, V>(map: &'a HashMap<K, V>, k: &K) -> &'a V {
    map.get(k).expect("value precomputed for every key")
}

/// `(x, γ) ↦ (-γ/q, qx)`; the bound function at `λ` on the image equals the
/// one at `q/λ` on the original point.
fn swap_map(q: i64, (x, g): (Coord, Coord)) -> (Coord, Coord) {
    let qc = Coord::from(q);
    ((-g).div(qc).fract(), x.mul(qc).fract())
}

/// Evaluates the matrices for one `(window, b, density)` at many points.
struct BoundsEngine {
    zak: ZakEvaluator<f64>,
    density: RationalDensity,
    tol: f64,
}

impl BoundsEngine {
    fn new(
        w: &HermiteWindow,
        b: ZakParameter,
        density: RationalDensity,
        tol: f64,
    ) -> Result<Self, FramescanError> {
        Ok(BoundsEngine {
            zak: ZakEvaluator::new(w, b.recip().map_err(FramescanError::Zak)?)?,
            density,
            tol,
        })
    }

    fn entry_args(&self, x: Coord, g: Coord) -> Vec<(Coord, Coord)> {
        let (p, q) = (self.density.p() as i64, self.density.q() as i64);
        let mut out = Vec::with_capacity((p * q) as usize);
        for k in 0..p {
            for l in 0..q {
                out.push((x - Coord::exact(l * p, q), g + Coord::exact(k, p)));
            }
        }
        out
    }

    fn run(&self, points: &[(Coord, Coord)]) -> Result<(Vec<(f64, f64)>, f64), FramescanError> {
        let args: Vec<Vec<(Coord, Coord)>> =
            points.iter().map(|&(x, g)| self.entry_args(x, g)).collect();
        let mut x_keys: HashMap<Key, Coord> = HashMap::new();
        let mut g_keys: HashMap<Key, Coord> = HashMap::new();
        for &(x, g) in args.iter().flatten() {
            let rp = reduce_point(x, g);
            x_keys.entry(coord_key(rp.x0)).or_insert(rp.x0);
            g_keys.entry(coord_key(rp.gamma0)).or_insert(rp.gamma0);
        }
        let columns: HashMap<Key, SeriesColumn<f64>> = x_keys
            .into_par_iter()
            .map(|(k, x0)| Ok((k, self.zak.column(x0, self.tol)?)))
            .collect::<Result<_, ZakError>>()?;
        let phases: HashMap<Key, PhaseTable<f64>> = g_keys
            .into_par_iter()
            .map(|(k, g0)| (k, PhaseTable::new(g0)))
            .collect();
        let max_trunc = columns
            .values()
            .map(|c| c.truncation_bound())
            .fold(0.0, f64::max)
            / (self.density.p() as f64).sqrt();
        let (p, q) = (self.density.p() as usize, self.density.q() as usize);
        let norm = 1.0 / (p as f64).sqrt();
        let sigmas = args
            .par_iter()
            .map(|entry_args| {
                let entries: Vec<XComplex<f64>> = entry_args
                    .iter()
                    .map(|&(x, g)| {
                        let rp = reduce_point(x, g);
                        let col = cached(&columns, &coord_key(rp.x0));
                        let ph = cached(&phases, &coord_key(rp.gamma0));
                        let mut v = col.sum(ph);
                        if rp.shift != 0 {
                            v = v * rp.phase();
                        }
                        v.scale(norm)
                    })
                    .collect();
                singular_extremes(p, q, &entries)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((sigmas, max_trunc))
    }
}

fn evaluation_points(w: &HermiteWindow, density: RationalDensity, grid: &GridSpec) -> Vec<(Coord, Coord)> {
    let mut pts = grid.points();
    if grid.symmetrize && density.p() == 1 && w.eigenclass().is_some() {
        let q = density.q() as i64;
        let images: Vec<_> = pts.iter().map(|&pt| swap_map(q, pt)).collect();
        pts.extend(images);
    }
    let mut seen = std::collections::HashSet::new();
    pts.retain(|&(x, g)| seen.insert((coord_key(x), coord_key(g))));
    pts
}

/// Extremes of `σ_min` and `σ_max` over the grid at `(a, b)` with
/// `ab = p/q`.
pub fn estimate_bounds(
    w: &HermiteWindow,
    a: f64,
    b: ZakParameter,
    density: RationalDensity,
    grid: &GridSpec,
    tol: f64,
) -> Result<FrameBoundsEstimate, FramescanError> {
    grid.validate()?;
    let product = a * b.to_f64();
    if (product - density.value()).abs() > 1e-12 * density.value().max(1.0) {
        return Err(FramescanError::DensityMismatch { product, density });
    }
    let engine = BoundsEngine::new(w, b, density, tol)?;
    let points = evaluation_points(w, density, grid);
    let (sigmas, max_truncation) = engine.run(&points)?;
    let mut imin = 0;
    let mut sqrt_b = 0.0f64;
    for (i, &(lo, hi)) in sigmas.iter().enumerate() {
        if lo < sigmas[imin].0 {
            imin = i;
        }
        sqrt_b = sqrt_b.max(hi);
    }
    Ok(FrameBoundsEstimate {
        a,
        b: b.to_f64(),
        b_param: b,
        density,
        sqrt_a: sigmas[imin].0,
        sqrt_b,
        argmin: points[imin],
        max_truncation,
        points_evaluated: points.len(),
        grid: (grid.nx, grid.ngamma),
        probe: None,
    })
}

/// [`estimate_bounds`] with `a = (p/q)/b`.
pub fn estimate_on_hyperbola(
    w: &HermiteWindow,
    b: ZakParameter,
    density: RationalDensity,
    grid: &GridSpec,
    tol: f64,
) -> Result<FrameBoundsEstimate, FramescanError> {
    let a = density.value() / b.to_f64();
    estimate_bounds(w, a, b, density, grid, tol)
}

/// A sweep of `b` along `ab = p/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolaScan {
    pub b_min: f64,
    pub b_max: f64,
    pub samples: usize,
    pub grid: GridSpec,
    pub tol: f64,
    /// Add the registered probe values of `b` and their witness points.
    pub inject_known_probes: bool,
    pub extra_b: Vec<ZakParameter>,
}

impl HyperbolaScan {
    pub fn new(b_min: f64, b_max: f64, samples: usize) -> Self {
        HyperbolaScan {
            b_min,
            b_max,
            samples,
            grid: GridSpec::default(),
            tol: 1e-13,
            inject_known_probes: true,
            extra_b: Vec::new(),
        }
    }
}

/// Logarithmically spaced values; when `b_min · b_max = p/q` the samples
/// are mirrored exactly under `b ↦ (p/q)/b`.
pub fn log_spaced_b(b_min: f64, b_max: f64, n: usize, density: RationalDensity) -> Vec<f64> {
    let step = (b_max / b_min).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| b_min * (step * i as f64).exp()).collect();
    out[n - 1] = b_max;
    let d = density.value();
    if ((b_min * b_max) / d - 1.0).abs() < 1e-12 {
        for i in 0..n / 2 {
            out[n - 1 - i] = d / out[i];
        }
        if n % 2 == 1 {
            out[n / 2] = d.sqrt();
        }
    }
    out
}

pub fn scan_hyperbola(
    w: &HermiteWindow,
    density: RationalDensity,
    scan: &HyperbolaScan,
) -> Result<Vec<FrameBoundsEstimate>, FramescanError> {
    if !(scan.b_min > 0.0 && scan.b_min < scan.b_max && scan.samples >= 2) {
        return Err(FramescanError::InvalidRange(scan.b_min, scan.b_max, scan.samples));
    }
    let mut grid = scan.grid.clone();
    let mut jobs: Vec<(ZakParameter, Option<KnownProbe>)> =
        log_spaced_b(scan.b_min, scan.b_max, scan.samples, density)
            .into_iter()
            .map(|b| (ZakParameter::Approx(b), None))
            .collect();
    if scan.inject_known_probes {
        for probe in known_probes(w, density) {
            let b = probe.b.to_f64();
            if b < scan.b_min || b > scan.b_max {
                continue;
            }
            if let Some(pt) = probe.witness {
                grid = grid.with_probes([pt]);
            }
            jobs.push((probe.b, Some(probe)));
        }
    }
    jobs.extend(scan.extra_b.iter().map(|&b| (b, None)));
    // an exact value supersedes a sample that rounds to the same b
    let exact: Vec<f64> = jobs.iter().filter(|j| j.0.is_exact()).map(|j| j.0.to_f64()).collect();
    jobs.retain(|(b, _)| b.is_exact() || !exact.iter().any(|e| (e - b.to_f64()).abs() <= 1e-14 * e));
    let mut rows = jobs
        .par_iter()
        .map(|(b, probe)| {
            let mut est = estimate_on_hyperbola(w, *b, density, &grid, scan.tol)?;
            est.probe = probe.clone();
            Ok(est)
        })
        .collect::<Result<Vec<_>, FramescanError>>()?;
    rows.sort_by(|x, y| x.b.total_cmp(&y.b));
    Ok(rows)
}
