//! Registered `b` values where a sharp drop of the lower bound is known or
//! has been observed, with a witness point to add to the grid.

use crate::hermite::HermiteWindow;
use crate::zak::{Coord, QuarticSurd, ZakParameter};
use crate::zibulski::RationalDensity;

use super::obstruction::{obstruction_points, PointStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStatus {
    /// Explained by a vanishing Zak pattern; the lower bound is zero.
    ExpectedZero,
    /// A small value observed on grids with no known explanation.
    ExpectedInconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownProbe {
    pub b: ZakParameter,
    pub witness: Option<(Coord, Coord)>,
    pub status: ProbeStatus,
    pub label: String,
}

fn exact(n: u64, k: i32, den: u64) -> ZakParameter {
    let s = QuarticSurd::pow_quarters(n, k)
        .and_then(|s| s.div(QuarticSurd::integer(den)?))
        .expect("constant surd");
    ZakParameter::Exact(s)
}

fn zero_probe(b: ZakParameter, x: (i64, i64), gamma: (i64, i64), label: &str) -> KnownProbe {
    KnownProbe {
        b,
        witness: Some((Coord::exact(x.0, x.1), Coord::exact(gamma.0, gamma.1))),
        status: ProbeStatus::ExpectedZero,
        label: label.to_string(),
    }
}

/// Probes for the window and density, including obstruction points whose
/// class and density match.
pub fn known_probes(w: &HermiteWindow, density: RationalDensity) -> Vec<KnownProbe> {
    let mut out = Vec::new();
    let single = match w.terms() {
        [(n, _)] => Some(n.get()),
        _ => None,
    };
    match (single, density.p(), density.q()) {
        (Some(4), 1, 2) => {
            out.push(zero_probe(exact(3, -1, 1), (1, 2), (1, 2), "h4 b=3^(-1/4)"));
            out.push(zero_probe(exact(3, 1, 2), (1, 4), (0, 1), "h4 b=3^(1/4)/2"));
            out.push(zero_probe(exact(3, 1, 1), (1, 2), (1, 2), "h4 b=3^(1/4)"));
            out.push(zero_probe(exact(3, -1, 2), (1, 4), (0, 1), "h4 b=3^(-1/4)/2"));
        }
        (Some(5), 1, 3) => {
            out.push(zero_probe(exact(27, -1, 1), (0, 1), (1, 2), "h5 b=27^(-1/4)"));
            out.push(zero_probe(exact(27, 1, 3), (1, 6), (0, 1), "h5 b=27^(1/4)/3"));
        }
        (Some(2), 1, 2) => {
            // Seen on a grid with step 1/50; the i/51 grid steps over it.
            const B: f64 = 3.5261848971734;
            for (b, pt) in [(B, ((3, 10), (2, 25))), (0.5 / B, ((1, 25), (1, 2)))] {
                out.push(KnownProbe {
                    b: ZakParameter::Approx(b),
                    witness: Some((Coord::exact(pt.0 .0, pt.0 .1), Coord::exact(pt.1 .0, pt.1 .1))),
                    status: ProbeStatus::ExpectedInconclusive,
                    label: format!("h2 unexplained drop b={b}"),
                });
            }
        }
        _ => {}
    }
    for pt in obstruction_points() {
        if pt.density != density || pt.status_for(w) != PointStatus::Applies {
            continue;
        }
        let wit = pt.witness(w.eigenclass().expect("applicable class")).expect("witness");
        out.push(KnownProbe {
            b: pt.b_param(),
            witness: Some((wit.x, wit.gamma)),
            status: ProbeStatus::ExpectedZero,
            label: format!("obstruction point {}", pt.id),
        });
    }
    out
}
