//! Lattice parameters where no window of a given Fourier class generates a
//! frame, with finite certificates at a witness point.

use serde::Serialize;

use crate::hermite::{HermiteWindow, Parity};
use crate::with_precision;
use crate::xprec::{Precision, Real};
use crate::zak::{Coord, QuarticSurd, ZakParameter};
use crate::zibulski::{singular_extremes, RationalDensity, ZZAssembler, ZZMatrix};

use super::FramescanError;

/// Which part of the matrix must vanish at the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VanishingPattern {
    AllEntries,
    Row(usize),
    /// `Σ_k v_k M[k, ·] = 0`.
    LeftNull([i8; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub class: u8,
    pub x: Coord,
    pub gamma: Coord,
    pub pattern: VanishingPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionPoint {
    pub id: u8,
    pub a: QuarticSurd,
    pub b: QuarticSurd,
    pub density: RationalDensity,
    pub witnesses: Vec<Witness>,
    /// Points whose certificate also follows from another point by
    /// exchanging `a` and `b`.
    pub swap_partner: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointStatus {
    Applies,
    /// The density has the form `n/(n+1)`, already excluded for every odd
    /// window.
    CoveredByOddSymmetry,
    NotApplicable,
}

impl ObstructionPoint {
    pub fn witness(&self, class: u8) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.class == class)
    }

    pub fn classes(&self) -> Vec<u8> {
        self.witnesses.iter().map(|w| w.class).collect()
    }

    pub fn status_for(&self, w: &HermiteWindow) -> PointStatus {
        match w.eigenclass() {
            Some(c) if self.witness(c).is_some() => PointStatus::Applies,
            _ if w.parity() == Some(Parity::Odd) && self.density.q() == self.density.p() + 1 => {
                PointStatus::CoveredByOddSymmetry
            }
            _ => PointStatus::NotApplicable,
        }
    }

    pub fn b_param(&self) -> ZakParameter {
        ZakParameter::Exact(self.b)
    }
}

fn surd(u: u64, v: u64, w: u64) -> QuarticSurd {
    QuarticSurd::new(u, v, w).expect("constant surd")
}

fn witness(class: u8, x: (i64, i64), gamma: (i64, i64), pattern: VanishingPattern) -> Witness {
    Witness {
        class,
        x: Coord::exact(x.0, x.1),
        gamma: Coord::exact(gamma.0, gamma.1),
        pattern,
    }
}

fn density(p: u32, q: u32) -> RationalDensity {
    RationalDensity::new(p, q).expect("constant density")
}

/// The five obstruction points, indexed 0 to 4.
pub fn obstruction_points() -> Vec<ObstructionPoint> {
    use VanishingPattern::*;
    let inv_sqrt2 = surd(1, 2, 4);
    let inv_sqrt3 = surd(1, 3, 9);
    vec![
        ObstructionPoint {
            id: 0,
            a: inv_sqrt2,
            b: inv_sqrt2,
            density: density(1, 2),
            witnesses: vec![witness(2, (3, 4), (1, 2), AllEntries)],
            swap_partner: None,
        },
        ObstructionPoint {
            id: 1,
            a: inv_sqrt3,
            b: inv_sqrt3,
            density: density(1, 3),
            witnesses: vec![
                witness(2, (5, 6), (1, 2), AllEntries),
                witness(3, (2, 3), (0, 1), AllEntries),
            ],
            swap_partner: None,
        },
        ObstructionPoint {
            id: 2,
            a: surd(1, 2, 1),
            b: surd(1, 2, 1),
            density: density(1, 4),
            witnesses: vec![witness(3, (3, 4), (0, 1), AllEntries)],
            swap_partner: None,
        },
        ObstructionPoint {
            id: 3,
            a: surd(2, 3, 9),
            b: inv_sqrt3,
            density: density(2, 3),
            witnesses: vec![witness(2, (5, 6), (1, 2), Row(0))],
            swap_partner: None,
        },
        ObstructionPoint {
            id: 4,
            a: inv_sqrt3,
            b: surd(2, 3, 9),
            density: density(2, 3),
            witnesses: vec![witness(2, (1, 3), (1, 4), LeftNull([1, 1]))],
            swap_partner: Some(3),
        },
    ]
}

pub fn obstruction_point(id: u8) -> Option<ObstructionPoint> {
    obstruction_points().into_iter().find(|p| p.id == id)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub id: u8,
    pub window: String,
    pub class: u8,
    pub witness: (Coord, Coord),
    pub pattern: VanishingPattern,
    pub precision: Precision,
    /// Largest modulus over the vanishing set.
    pub residual: f64,
    pub truncation_bound: f64,
    pub tol: f64,
    pub sigma_min: f64,
    pub matrix: ZZMatrix<f64>,
    /// Result of certifying the swapped point for the same window.
    pub partner: Option<(u8, bool)>,
    pub pass: bool,
}

fn vanishing_residual<T: Real>(m: &ZZMatrix<T>, pattern: VanishingPattern) -> f64 {
    let max_abs = |it: &mut dyn Iterator<Item = T>| it.map(|v| v.to_f64()).fold(0.0, f64::max);
    match pattern {
        VanishingPattern::AllEntries => max_abs(&mut m.entries.iter().map(|z| z.abs())),
        VanishingPattern::Row(k) => max_abs(&mut m.row(k).iter().map(|z| z.abs())),
        VanishingPattern::LeftNull(v) => {
            let norm = (v.iter().map(|c| (*c as f64).powi(2)).sum::<f64>()).sqrt();
            let mut cols = (0..m.q).map(|l| {
                let mut acc = crate::xprec::XComplex::<T>::zero();
                for (k, c) in v.iter().enumerate().take(m.p) {
                    acc += m.entry(k, l).scale(T::from_i64(*c as i64));
                }
                acc.abs()
            });
            max_abs(&mut cols) / norm
        }
    }
}

fn certify_at<T: Real>(
    w: &HermiteWindow,
    point: &ObstructionPoint,
    wit: &Witness,
    tol: f64,
) -> Result<(f64, ZZMatrix<f64>), FramescanError> {
    let asm = ZZAssembler::<T>::new(w, point.b_param(), point.density)?;
    let m = asm.matrix(wit.x, wit.gamma, tol / 16.0)?;
    Ok((vanishing_residual(&m, wit.pattern), m.to_f64()))
}

/// Evaluates the matrix at the witness point in exact coordinates and
/// checks the vanishing pattern for the window's class.
pub fn certify_obstruction(
    w: &HermiteWindow,
    point: &ObstructionPoint,
    tol: f64,
    precision: Precision,
) -> Result<CertificationReport, FramescanError> {
    let class = w
        .eigenclass()
        .ok_or_else(|| FramescanError::NoEigenclass(w.to_string()))?;
    let wit = point
        .witness(class)
        .ok_or(FramescanError::EigenclassMismatch { id: point.id, class })?;
    let (residual, matrix) = with_precision!(precision, T => certify_at::<T>(w, point, wit, tol)?);
    let (sigma_min, _) = singular_extremes(matrix.p, matrix.q, &matrix.entries)?;
    let partner = match point.swap_partner {
        Some(id) => {
            let other = obstruction_point(id).expect("registered partner");
            let rep = certify_obstruction(w, &other, tol, precision)?;
            Some((id, rep.pass))
        }
        None => None,
    };
    let truncation_bound = matrix.truncation_bound;
    let pass = residual <= tol && truncation_bound <= tol && partner.is_none_or(|(_, ok)| ok);
    Ok(CertificationReport {
        id: point.id,
        window: w.to_string(),
        class,
        witness: (wit.x, wit.gamma),
        pattern: wit.pattern,
        precision,
        residual,
        truncation_bound,
        tol,
        sigma_min,
        matrix,
        partner,
        pass,
    })
}
