use proptest::prelude::*;
use zakframe::hermite::{hermite_eval, HermiteOrder, HermiteWindow};
use zakframe::xprec::{QuadDouble, Real, XComplex};
use zakframe::zak::{
    reduce_point, zak_eval, zak_eval_dual, zak_symmetry_residuals, Coord, PhaseTable,
    QuarticSurd, ZakError, ZakEvaluator, ZakParameter,
};

fn surd(s: &str) -> ZakParameter {
    ZakParameter::Exact(s.parse::<QuarticSurd>().unwrap())
}

fn q(n: i64, d: i64) -> Coord {
    Coord::exact(n, d)
}

/// Plain symmetric partial sum over |k| ≤ 60 at quad precision, with phases
/// from the float angle. Shares nothing with the evaluator beyond `h_n`.
fn naive_zak(terms: &[(u32, f64)], lambda: QuadDouble, x: f64, gamma: f64) -> (f64, f64) {
    let mut re = QuadDouble::zero();
    let mut im = QuadDouble::zero();
    for k in -60i64..=60 {
        let t = lambda * (QuadDouble::from_f64(x) + QuadDouble::from_i64(k));
        let mut v = QuadDouble::zero();
        for &(n, c) in terms {
            v += QuadDouble::from_f64(c) * hermite_eval(HermiteOrder::new(n).unwrap(), t);
        }
        let (s, co) = (-2.0 * std::f64::consts::PI * k as f64 * gamma).sin_cos();
        re += v * QuadDouble::from_f64(co);
        im += v * QuadDouble::from_f64(s);
    }
    let r = lambda.sqrt();
    ((re * r).to_f64(), (im * r).to_f64())
}

#[test]
fn gaussian_at_origin() {
    let h0 = HermiteWindow::single(0).unwrap();
    let z = zak_eval::<QuadDouble>(&h0, surd("sqrt(2)"), q(0, 1), q(0, 1), 1e-40).unwrap();
    let want: QuadDouble = "1.419495488083766123362186731351697790857".parse_real();
    assert!((z.value.re - want).abs().to_f64() < 1e-38);
    assert_eq!(z.value.im, QuadDouble::zero());
    // dominated by the first two shells: √2 (1 + 2e^{-2π})
    let z = zak_eval::<f64>(&h0, surd("sqrt(2)"), q(0, 1), q(0, 1), 1e-14).unwrap();
    let two_shells = 2f64.sqrt() * (1.0 + 2.0 * (-2.0 * std::f64::consts::PI).exp());
    assert!((z.value.re - two_shells).abs() < 1e-10);
}

trait ParseReal {
    fn parse_real(&self) -> QuadDouble;
}

impl ParseReal for str {
    fn parse_real(&self) -> QuadDouble {
        QuadDouble::parse_decimal(self).unwrap()
    }
}

#[test]
fn matches_naive_sum() {
    let cases: &[(&[(u32, f64)], f64, f64, f64)] = &[
        (&[(0, 1.0)], 0.8, 0.3, 0.1),
        (&[(2, 1.0), (6, -0.4)], 1.7, 0.55, 0.9),
        (&[(5, 1.0)], 2.5, 0.05, 0.45),
        (&[(1, 0.3), (2, 0.9), (12, 0.2)], 0.6, 0.7, 0.25),
    ];
    for &(terms, lambda, x, gamma) in cases {
        let w = HermiteWindow::new(terms.iter().copied()).unwrap();
        let z = zak_eval::<QuadDouble>(
            &w,
            ZakParameter::Approx(lambda),
            Coord::Approx(x),
            Coord::Approx(gamma),
            1e-30,
        )
        .unwrap();
        let (re, im) = naive_zak(terms, QuadDouble::from_f64(lambda), x, gamma);
        assert!((z.value.re.to_f64() - re).abs() < 1e-14, "{terms:?}");
        assert!((z.value.im.to_f64() - im).abs() < 1e-14, "{terms:?}");
        assert!(z.truncation_bound <= 1e-30 / 4.0);
    }
}

#[test]
fn odd_windows_vanish_at_origin() {
    for spec in ["1", "3", "3:1,7:-2", "5:0.2,9:1"] {
        let w: HermiteWindow = spec.parse().unwrap();
        for lambda in ["1", "sqrt(2)", "3^(1/4)"] {
            let z = zak_eval::<f64>(&w, surd(lambda), q(0, 1), q(0, 1), 1e-14).unwrap();
            assert!(z.abs() <= 1e-14, "{spec} {lambda}");
        }
    }
}

#[test]
fn h2_quarter_half_zero() {
    let h2 = HermiteWindow::single(2).unwrap();
    for (x, prec_tol) in [(q(1, 4), 1e-40), (q(3, 4), 1e-40)] {
        let z = zak_eval::<QuadDouble>(&h2, surd("sqrt(2)"), x, q(1, 2), prec_tol).unwrap();
        assert!(z.abs().to_f64() <= prec_tol, "x={x}");
    }
}

#[test]
fn reduction_examples() {
    let rp = reduce_point(q(1, 4), q(1, 2));
    assert_eq!((rp.x0, rp.gamma0), (q(1, 4), q(1, 2)));
    assert_eq!(rp.phase::<f64>(), XComplex::new(1.0, 0.0));
    let rp = reduce_point(q(5, 4), q(1, 2));
    assert_eq!((rp.x0, rp.gamma0), (q(1, 4), q(1, 2)));
    assert_eq!(rp.phase::<f64>(), XComplex::new(-1.0, 0.0));
    let rp = reduce_point(q(1, 4), q(3, 2));
    assert_eq!((rp.x0, rp.gamma0), (q(1, 4), q(1, 2)));
    assert_eq!(rp.phase::<f64>(), XComplex::new(1.0, 0.0));
}

#[test]
fn dual_examples() {
    let tol = 1e-14;
    let h0 = HermiteWindow::single(0).unwrap();
    let a = zak_eval::<f64>(&h0, surd("1"), q(0, 1), q(0, 1), tol).unwrap();
    let b = zak_eval_dual::<f64>(&h0, surd("1"), q(0, 1), q(0, 1), tol).unwrap();
    assert!((a.value - b.value).abs() <= 1e-15);

    let h2 = HermiteWindow::single(2).unwrap();
    let (x, g) = (Coord::Approx(0.3), Coord::Approx(0.7));
    let a = zak_eval::<f64>(&h2, surd("sqrt(2)"), x, g, tol).unwrap();
    let b = zak_eval_dual::<f64>(&h2, surd("sqrt(2)"), x, g, tol).unwrap();
    assert!(a.abs() > 0.1);
    assert!((a.value - b.value).abs() <= 2.0 * tol);

    let h3 = HermiteWindow::single(3).unwrap();
    let a = zak_eval::<QuadDouble>(&h3, surd("sqrt(3)"), q(1, 3), q(0, 1), 1e-40).unwrap();
    let b = zak_eval_dual::<QuadDouble>(&h3, surd("sqrt(3)"), q(1, 3), q(0, 1), 1e-40).unwrap();
    assert!(a.abs().to_f64() <= 1e-40 && b.abs().to_f64() <= 1e-40);

    let mixed = HermiteWindow::new([(0, 1.0), (2, 1.0)]).unwrap();
    assert!(matches!(
        zak_eval_dual::<f64>(&mixed, surd("1"), q(0, 1), q(0, 1), tol),
        Err(ZakError::NoEigenclass(_))
    ));
}

#[test]
fn even_window_symmetries() {
    let tol = 1e-14;
    let w = HermiteWindow::new([(2, 0.7), (6, -0.3)]).unwrap();
    let z = ZakEvaluator::<f64>::new(&w, ZakParameter::Approx(1.3)).unwrap();
    for m in 0..4i64 {
        for i in 0..10 {
            let x = Coord::exact(2 * i + 1, 20);
            let a = z.eval(x, q(m, 2), tol).unwrap().value;
            let b = z.eval(q(1, 1) - x, q(m, 2), tol).unwrap().value;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - b.scale(sign)).abs() <= 2.0 * tol);
        }
    }
    assert!(z.eval(q(1, 2), q(1, 2), tol).unwrap().abs() <= tol);

    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let samples: Vec<(Coord, Coord)> = (0..50)
        .map(|_| (Coord::Approx(2.0 * next() - 1.0), Coord::Approx(2.0 * next() - 1.0)))
        .collect();
    let r = zak_symmetry_residuals::<f64>(&w, ZakParameter::Approx(0.9), &samples, tol).unwrap();
    assert!(r <= 2.0 * tol, "residual {r}");
    let mixed = HermiteWindow::new([(1, 1.0), (2, 1.0)]).unwrap();
    assert!(zak_symmetry_residuals::<f64>(&mixed, ZakParameter::Approx(0.9), &samples, tol).is_err());
}

#[test]
fn zero_sets_from_parity() {
    let tol = 1e-14;
    for (spec, odd) in [("1", true), ("3:1,7:0.5", true), ("0", false), ("2:1,4:-0.6", false)] {
        let w: HermiteWindow = spec.parse().unwrap();
        for lambda in [0.7, 1.0, 2.2] {
            let z = ZakEvaluator::<f64>::new(&w, ZakParameter::Approx(lambda)).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let both_half = i % 2 == 1 && j % 2 == 1;
                    if both_half == odd {
                        continue;
                    }
                    let v = z.eval(q(i, 2), q(j, 2), tol).unwrap().abs();
                    assert!(v <= tol, "{spec} λ={lambda} ({i}/2,{j}/2): {v}");
                }
            }
        }
    }
}

#[test]
fn truncation_bound_is_sound_and_not_vacuous() {
    let cases = [("0", 0.3), ("2", 0.4), ("3:1,7:0.5", 0.35), ("4", 0.5)];
    for (spec, lambda) in cases {
        let w: HermiteWindow = spec.parse().unwrap();
        let z = ZakEvaluator::<QuadDouble>::new(&w, ZakParameter::Approx(lambda)).unwrap();
        let (x, g) = (Coord::Approx(0.37), Coord::Approx(0.21));
        let full = z.eval(x, g, 1e-40).unwrap();
        let k_adaptive = z.choose_half_width(x, 1e-40).unwrap().0;
        let mut tight_somewhere = false;
        let mut k = k_adaptive / 2;
        while k >= 1 {
            let part = z.eval_with_half_width(x, g, k);
            let diff = (part.value - full.value).abs().to_f64();
            let bound = part.truncation_bound;
            assert!(diff <= bound + full.truncation_bound, "{spec} K={k}: {diff} > {bound}");
            if bound.is_finite() && diff > full.truncation_bound && bound <= 1e6 * diff {
                tight_somewhere = true;
            }
            k /= 2;
        }
        assert!(tight_somewhere, "{spec}: bound never within 1e6 of the actual change");
    }
}

#[test]
fn near_unitarity_on_grid() {
    let n = 101i64;
    for order in 0..=4u32 {
        for lambda in ["1", "sqrt(2)", "3^(-1/4)"] {
            let w = HermiteWindow::single(order).unwrap();
            let z = ZakEvaluator::<f64>::new(&w, surd(lambda)).unwrap();
            let phases: Vec<PhaseTable<f64>> =
                (0..n).map(|j| PhaseTable::new(q(j, n))).collect();
            let mut acc = 0.0;
            for i in 0..n {
                let col = z.column(q(i, n), 1e-14).unwrap();
                for p in &phases {
                    acc += col.sum(p).norm_sqr();
                }
            }
            let mean = acc / (n * n) as f64;
            assert!((mean - 1.0).abs() < 1e-3, "h{order} λ={lambda}: {mean}");
        }
    }
}

#[test]
fn tolerance_errors() {
    let h3 = HermiteWindow::single(3).unwrap();
    let err = zak_eval::<f64>(&h3, surd("sqrt(2)"), q(1, 2), q(0, 1), 1e-40).unwrap_err();
    assert!(matches!(err, ZakError::BelowRoundingFloor { .. }));
    assert!(matches!(
        zak_eval::<f64>(&h3, surd("sqrt(2)"), q(1, 2), q(0, 1), 0.0),
        Err(ZakError::InvalidTolerance(_))
    ));
    assert!(matches!(
        ZakEvaluator::<f64>::new(&h3, ZakParameter::Approx(-1.0)),
        Err(ZakError::InvalidParameter(_))
    ));
}

#[test]
fn exact_and_approx_parameters_agree() {
    let w = HermiteWindow::single(4).unwrap();
    let e = zak_eval::<f64>(&w, surd("3^(1/4)"), q(1, 5), q(2, 7), 1e-14).unwrap();
    let a = zak_eval::<f64>(
        &w,
        ZakParameter::Approx(3f64.powf(0.25)),
        Coord::Approx(0.2),
        Coord::Approx(2.0 / 7.0),
        1e-14,
    )
    .unwrap();
    assert!((e.value - a.value).abs() < 1e-13);
}

fn class_window(j: u32, c: [f64; 3]) -> HermiteWindow {
    HermiteWindow::new([(j, c[0]), (j + 4, c[1]), (j + 8, c[2])]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn poisson_duality(
        j in 0u32..4,
        c0 in 0.1f64..1.0, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0,
        lambda in 0.5f64..3.0, x in 0.0f64..1.0, gamma in 0.0f64..1.0,
    ) {
        let w = class_window(j, [c0, c1, c2]);
        let lambda = ZakParameter::Approx(lambda);
        let (x, g) = (Coord::Approx(x), Coord::Approx(gamma));
        let a = zak_eval::<f64>(&w, lambda, x, g, 1e-13).unwrap();
        let b = zak_eval_dual::<f64>(&w, lambda, x, g, 1e-13).unwrap();
        let budget = 2.0 * (a.truncation_bound + b.truncation_bound) + 1e-12;
        prop_assert!((a.value - b.value).abs() <= budget);
    }

    #[test]
    fn quasi_periodicity(
        n in 0u32..8, lambda in 0.5f64..3.0, x in -2.0f64..2.0, gamma in -2.0f64..2.0,
    ) {
        let w = HermiteWindow::single(n).unwrap();
        let z = ZakEvaluator::<f64>::new(&w, ZakParameter::Approx(lambda)).unwrap();
        let tol = 1e-13;
        let base = z.eval(Coord::Approx(x), Coord::Approx(gamma), tol).unwrap().value;
        let shifted = z.eval(Coord::Approx(x + 1.0), Coord::Approx(gamma), tol).unwrap().value;
        let (s, c) = (2.0 * std::f64::consts::PI * gamma).sin_cos();
        prop_assert!((shifted - base * XComplex::new(c, s)).abs() <= 2.0 * tol);
        let up = z.eval(Coord::Approx(x), Coord::Approx(gamma + 1.0), tol).unwrap().value;
        prop_assert!((up - base).abs() <= 2.0 * tol);
    }
}
