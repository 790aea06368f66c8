//! Catalog of vanishing Zak values of Hermite windows and a verifier that
//! certifies each one at a chosen precision.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::hermite::HermiteWindow;
use crate::with_precision;
use crate::xprec::{Precision, Real, XComplex, XReal};
use crate::zak::{
    reduce_point, zak_eval_at_precision, Coord, PhaseTable, QuarticSurd, ZakError, ZakEvaluation,
    ZakEvaluator, ZakParameter,
};

/// Seed for the random class windows.
pub const CLASS_WINDOW_SEED: u64 = 0x5EED_2A4B;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IdentityId {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
}

impl IdentityId {
    pub fn status(self) -> ProofStatus {
        match self {
            IdentityId::I5 | IdentityId::I6 | IdentityId::I7 => ProofStatus::VerifiedNumerically,
            _ => ProofStatus::Proven,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProofStatus {
    #[serde(rename = "PROVEN")]
    Proven,
    /// Known only from high-precision evaluation.
    #[serde(rename = "VERIFIED-NUMERICALLY")]
    VerifiedNumerically,
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofStatus::Proven => "PROVEN",
            ProofStatus::VerifiedNumerically => "VERIFIED-NUMERICALLY",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// A claimed zero `Z_λ g(x, γ) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCase {
    pub id: IdentityId,
    /// Family parameters such as `m`, `p`, `s`.
    pub params: BTreeMap<String, i64>,
    pub window: HermiteWindow,
    pub lambda: QuarticSurd,
    pub x: Rational64,
    pub gamma: Rational64,
}

impl IdentityCase {
    pub fn new(
        id: IdentityId,
        params: &[(&str, i64)],
        window: HermiteWindow,
        lambda: QuarticSurd,
        x: Rational64,
        gamma: Rational64,
    ) -> Self {
        IdentityCase {
            id,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            window,
            lambda,
            x,
            gamma,
        }
    }

    /// Same point and dilation with another window.
    pub fn with_window(&self, window: HermiteWindow) -> Self {
        IdentityCase {
            window,
            ..self.clone()
        }
    }

    pub fn lambda_param(&self) -> ZakParameter {
        ZakParameter::Exact(self.lambda)
    }

    pub fn point(&self) -> (Coord, Coord) {
        (Coord::Exact(self.x), Coord::Exact(self.gamma))
    }

    /// Window that misses the identity: the Gaussian, or `h_1` at `(½, ½)`
    /// where every even window vanishes.
    pub fn control_window(&self) -> HermiteWindow {
        let half = Rational64::new(1, 2);
        let (x, g) = self.point();
        let n = if (x.fract(), g.fract()) == (Coord::Exact(half), Coord::Exact(half)) {
            1
        } else {
            0
        };
        HermiteWindow::single(n).expect("small order")
    }
}

impl fmt::Display for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        write!(
            f,
            " g={} λ={} (x,γ)=({}, {})",
            self.window, self.lambda, self.x, self.gamma
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogOptions {
    pub m_values: Vec<u32>,
    pub seed: u64,
    /// Random windows per class for the class identities.
    pub class_windows: usize,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            m_values: vec![0, 1, 2],
            seed: CLASS_WINDOW_SEED,
            class_windows: 10,
        }
    }
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn h(n: u32) -> HermiteWindow {
    HermiteWindow::single(n).expect("order within range")
}

fn sqrt(n: u64) -> QuarticSurd {
    QuarticSurd::sqrt(n).expect("small surd")
}

/// Zeros shared by every window of class 2 (`j = 2`) or 3, inside `[0, 1)²`.
pub fn class_zero_lattice(class: u8) -> Vec<(QuarticSurd, Rational64, Rational64)> {
    match class {
        2 => {
            let mut out: Vec<_> = (1..4).map(|p| (sqrt(2), r(p, 4), r(1, 2))).collect();
            out.extend([1, 3, 5].map(|p| (sqrt(3), r(p, 6), r(1, 2))));
            out
        }
        3 => (2..=4)
            .flat_map(|s| (0..s).map(move |p| (sqrt(s as u64), r(p, s), r(0, 1))))
            .collect(),
        _ => Vec::new(),
    }
}

/// Random windows `Σ c_i h_{j+4i}`, `i < 3`, with `c_i` uniform in `[-1, 1]`.
pub fn class_windows(class: u8, count: usize, seed: u64) -> Vec<HermiteWindow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ class as u64);
    let j = class as u32;
    (0..count)
        .map(|_| {
            let terms: Vec<(u32, f64)> = (0..3)
                .map(|i| (j + 4 * i, rng.gen_range(-1.0..=1.0)))
                .collect();
            HermiteWindow::new(terms).expect("nonzero random window")
        })
        .collect()
}

pub fn catalog() -> Vec<IdentityCase> {
    catalog_with(&CatalogOptions::default())
}

pub fn catalog_with(opts: &CatalogOptions) -> Vec<IdentityCase> {
    use IdentityId::*;
    let mut out = Vec::new();
    for &m in &opts.m_values {
        for p in [1, 3] {
            let c = IdentityCase::new(I1, &[("m", m as i64), ("p", p)], h(4 * m + 2), sqrt(2), r(p, 4), r(1, 2));
            out.push(c);
        }
    }
    for &m in &opts.m_values {
        for p in [1, 5] {
            let c = IdentityCase::new(I2, &[("m", m as i64), ("p", p)], h(4 * m + 2), sqrt(3), r(p, 6), r(1, 2));
            out.push(c);
        }
    }
    for &m in &opts.m_values {
        for s in 2..=4i64 {
            for p in 0..s {
                let params = [("m", m as i64), ("s", s), ("p", p)];
                out.push(IdentityCase::new(I3, &params, h(4 * m + 3), sqrt(s as u64), r(p, s), r(0, 1)));
            }
        }
    }
    for class in [2u8, 3] {
        for (i, w) in class_windows(class, opts.class_windows, opts.seed).into_iter().enumerate() {
            for (lambda, x, g) in class_zero_lattice(class) {
                let params = [("class", class as i64), ("window", i as i64)];
                out.push(IdentityCase::new(I4, &params, w.clone(), lambda, x, g));
            }
        }
    }
    let q3 = |k| QuarticSurd::pow_quarters(3, k).expect("small surd");
    out.push(IdentityCase::new(I5, &[], h(4), q3(1), r(0, 1), r(1, 2)));
    out.push(IdentityCase::new(I6, &[], h(4), q3(-1), r(0, 1), r(1, 2)));
    for p in 0..3 {
        out.push(IdentityCase::new(I7, &[("p", p)], h(5), q3(3), r(p, 3), r(1, 2)));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub precision: Precision,
    pub tolerance: f64,
    /// `|Z_λ g(x, γ)|` as computed.
    pub residual: XReal,
    pub truncation_bound: f64,
    pub terms_used: usize,
    pub verdict: Verdict,
}

/// One JSON line per report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub id: IdentityId,
    pub params: BTreeMap<String, String>,
    pub precision_bits: u32,
    pub residual: String,
    pub truncation_bound: String,
    pub terms_used: usize,
    pub verdict: Verdict,
    pub status: ProofStatus,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn record(&self) -> VerificationRecord {
        let c = &self.case;
        let mut params: BTreeMap<String, String> =
            c.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
        params.insert("g".into(), c.window.to_string());
        params.insert("lambda".into(), c.lambda.to_string());
        params.insert("x".into(), c.x.to_string());
        params.insert("gamma".into(), c.gamma.to_string());
        VerificationRecord {
            id: c.id,
            params,
            precision_bits: self.precision.bits(),
            residual: self.residual.to_sci_string(self.residual.natural_digits().min(20)),
            truncation_bound: format!("{:e}", self.truncation_bound),
            terms_used: self.terms_used,
            verdict: self.verdict,
            status: c.id.status(),
        }
    }
}

/// PASS iff `residual ≤ max(tolerance, 4 · truncation_bound)`.
pub fn verdict(residual: f64, tolerance: f64, truncation_bound: f64) -> Verdict {
    if residual <= tolerance.max(4.0 * truncation_bound) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Evaluates the case with the series truncated at `tolerance / 16`.
pub fn verify(
    case: &IdentityCase,
    precision: Precision,
    tolerance: f64,
) -> Result<VerificationReport, ZakError> {
    let (x, g) = case.point();
    let z: ZakEvaluation<XReal> =
        zak_eval_at_precision(&case.window, case.lambda_param(), x, g, tolerance / 16.0, precision)?;
    let residual = abs_xreal(&z.value);
    Ok(VerificationReport {
        case: case.clone(),
        precision,
        tolerance,
        truncation_bound: z.truncation_bound,
        terms_used: z.terms_used,
        verdict: verdict(residual.to_f64(), tolerance, z.truncation_bound),
        residual,
    })
}

fn abs_xreal(z: &XComplex<XReal>) -> XReal {
    match (z.re, z.im) {
        (XReal::Native(a), XReal::Native(b)) => XComplex::new(a, b).abs().into(),
        (XReal::Double(a), XReal::Double(b)) => XComplex::new(a, b).abs().into(),
        (XReal::Quad(a), XReal::Quad(b)) => XComplex::new(a, b).abs().into(),
        _ => unreachable!("components share one precision"),
    }
}

/// Verifies the cases concurrently; reports come back in input order.
pub fn verify_all(
    cases: &[IdentityCase],
    precision: Precision,
    tolerance: f64,
) -> Vec<Result<VerificationReport, ZakError>> {
    cases
        .par_iter()
        .map(|c| verify(c, precision, tolerance))
        .collect()
}

/// `|Z_λ g(x, γ)|` for an arbitrary window and point, truncated close to
/// the rounding level of the precision.
pub fn negative_control(
    window: &HermiteWindow,
    lambda: QuarticSurd,
    x: Rational64,
    gamma: Rational64,
    precision: Precision,
) -> Result<XReal, ZakError> {
    let tol = precision.unit_roundoff() * 1024.0 * (1.0 + window.l1_norm());
    let z = zak_eval_at_precision(
        window,
        ZakParameter::Exact(lambda),
        Coord::Exact(x),
        Coord::Exact(gamma),
        tol,
        precision,
    )?;
    Ok(abs_xreal(&z.value))
}

/// Moduli of the even-`k` and odd-`k` parts of the series and of their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParitySplit {
    pub even: f64,
    pub odd: f64,
    pub total: f64,
}

pub fn parity_split(
    case: &IdentityCase,
    precision: Precision,
    tolerance: f64,
) -> Result<ParitySplit, ZakError> {
    with_precision!(precision, T => parity_split_at::<T>(case, tolerance))
}

fn parity_split_at<T: Real>(case: &IdentityCase, tolerance: f64) -> Result<ParitySplit, ZakError> {
    let (x, g) = case.point();
    let rp = reduce_point(x, g);
    let zak = ZakEvaluator::<T>::new(&case.window, case.lambda_param())?;
    let col = zak.column(rp.x0, tolerance / 16.0)?;
    let phases = PhaseTable::new(rp.gamma0);
    // term k of the original series is term k + shift of the reduced one
    let even = col.partial_sum(&phases, rp.shift.rem_euclid(2));
    let odd = col.partial_sum(&phases, (rp.shift + 1).rem_euclid(2));
    Ok(ParitySplit {
        even: even.abs().to_f64(),
        odd: odd.abs().to_f64(),
        total: (even + odd).abs().to_f64(),
    })
}
