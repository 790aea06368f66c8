use num_rational::Rational64;
use zakframe::hermite::HermiteWindow;
use zakframe::identities::{
    catalog, catalog_with, class_zero_lattice, negative_control, parity_split, verdict, verify,
    verify_all, CatalogOptions, IdentityCase, IdentityId, ProofStatus, Verdict,
};
use zakframe::xprec::{Precision, QuadDouble, Real};
use zakframe::zak::{QuarticSurd, ZakError};

type Q = QuadDouble;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn h(n: u32) -> HermiteWindow {
    HermiteWindow::single(n).unwrap()
}

fn surd(s: &str) -> QuarticSurd {
    s.parse().unwrap()
}

/// `h_n(t)` from the explicit physicists' Hermite polynomial,
/// `2^{1/4} (2^n n!)^{-1/2} H_n(√(2π) t) e^{-πt²}`.
fn hermite_explicit(n: u32, t: Q) -> Q {
    let u = (Q::pi().mul_pow2(1)).sqrt() * t;
    let mut poly = Q::zero();
    let mut fact_n = Q::one();
    for i in 1..=n {
        fact_n = fact_n * Q::from_i64(i as i64);
    }
    for m in 0..=n / 2 {
        let mut denom = Q::one();
        for i in 1..=m {
            denom = denom * Q::from_i64(i as i64);
        }
        for i in 1..=n - 2 * m {
            denom = denom * Q::from_i64(i as i64);
        }
        let mut pow = Q::one();
        for _ in 0..n - 2 * m {
            pow = pow * u.mul_pow2(1);
        }
        let term = fact_n * pow / denom;
        poly = if m % 2 == 0 { poly + term } else { poly - term };
    }
    let norm = (Q::from_i64(1 << n) * fact_n).sqrt();
    Q::quarter_root(2) * poly / norm * (-(Q::pi() * t * t)).exp()
}

/// `√λ Σ_k h_n(λ(x+k)) (±1)^k` over a wide fixed range; `γ ∈ {0, ½}`.
fn zak_oracle(n: u32, lambda: Q, x: Rational64, gamma: Rational64) -> Q {
    let alternating = gamma == r(1, 2);
    assert!(alternating || gamma == r(0, 1));
    let x = Q::from_ratio(*x.numer(), *x.denom());
    let mut acc = Q::zero();
    for k in -40i64..=40 {
        let v = hermite_explicit(n, lambda * (x + Q::from_i64(k)));
        acc = if alternating && k % 2 != 0 { acc - v } else { acc + v };
    }
    lambda.sqrt() * acc
}

#[test]
fn catalog_sizes() {
    let cases = catalog();
    let count = |id| cases.iter().filter(|c| c.id == id).count();
    assert_eq!(count(IdentityId::I1), 6);
    assert_eq!(count(IdentityId::I2), 6);
    assert_eq!(count(IdentityId::I3), 27);
    assert_eq!(count(IdentityId::I4), 10 * 6 + 10 * 9);
    assert_eq!(count(IdentityId::I5), 1);
    assert_eq!(count(IdentityId::I6), 1);
    assert_eq!(count(IdentityId::I7), 3);
    assert_eq!(cases, catalog());
    let one = catalog_with(&CatalogOptions {
        m_values: vec![1],
        ..Default::default()
    });
    assert_eq!(one.iter().filter(|c| c.id == IdentityId::I3).count(), 9);
}

#[test]
fn class_lattice_contents() {
    let l2 = class_zero_lattice(2);
    let sqrt2: Vec<_> = l2
        .iter()
        .filter(|(l, _, _)| *l == surd("sqrt(2)"))
        .map(|(_, x, g)| (*x, *g))
        .collect();
    assert_eq!(sqrt2, vec![(r(1, 4), r(1, 2)), (r(1, 2), r(1, 2)), (r(3, 4), r(1, 2))]);
    assert_eq!(class_zero_lattice(3).len(), 9);
    assert!(class_zero_lattice(0).is_empty());
}

#[test]
fn class_windows_are_in_their_class() {
    for c in catalog().iter().filter(|c| c.id == IdentityId::I4) {
        let class = c.params["class"] as u8;
        assert_eq!(c.window.eigenclass(), Some(class));
        assert_eq!(c.window.terms().len(), 3);
        assert!(c.window.max_order() <= 14);
        assert!(c.window.terms().iter().all(|t| t.1.abs() <= 1.0));
    }
}

#[test]
fn oracle_confirms_first_identity() {
    // Σ (-1)^k (8π(k+¼)² - 1) e^{-2π(k+¼)²}
    let pi = Q::pi();
    let mut s = Q::zero();
    for k in -30i64..=30 {
        let t = Q::from_i64(k) + Q::from_ratio(1, 4);
        let v = (Q::from_i64(8) * pi * t * t - Q::one()) * (-(pi * t * t).mul_pow2(1)).exp();
        s = if k % 2 == 0 { s + v } else { s - v };
    }
    assert!(s.abs().to_f64() < 1e-60);
    let case = &catalog()[0];
    assert_eq!((case.id, case.x, case.gamma), (IdentityId::I1, r(1, 4), r(1, 2)));
    let rep = verify(case, Precision::Bits212, 1e-30).unwrap();
    assert!(rep.passed());
    assert!(rep.residual.to_f64() <= 1e-30);
}

#[test]
fn oracle_confirms_numerical_identities() {
    let q3 = Q::quarter_root(3);
    let q27 = Q::quarter_root(27);
    let checks = [
        (4, q3, r(0, 1)),
        (4, Q::one() / q3, r(0, 1)),
        (5, q27, r(0, 1)),
        (5, q27, r(1, 3)),
        (5, q27, r(2, 3)),
    ];
    for (n, lambda, x) in checks {
        let v = zak_oracle(n, lambda, x, r(1, 2));
        assert!(v.abs().to_f64() < 1e-55, "h{n} x={x}: {}", v.to_f64());
    }
    // a neighbouring dilation is not a zero
    let v = zak_oracle(4, Q::from_ratio(13, 10), r(0, 1), r(1, 2));
    assert!(v.abs().to_f64() > 1e-3);
}

#[test]
fn whole_catalog_passes_at_106_and_212_bits() {
    let cases = catalog();
    for (prec, tol) in [(Precision::Bits106, 1e-25), (Precision::Bits212, 1e-30)] {
        for (c, rep) in cases.iter().zip(verify_all(&cases, prec, tol)) {
            let rep = rep.unwrap();
            assert!(rep.passed(), "{c} at {prec}: {}", rep.residual);
            assert!(rep.truncation_bound <= tol);
        }
    }
}

#[test]
fn class_identities_at_moderate_tolerance() {
    let cases: Vec<_> = catalog().into_iter().filter(|c| c.id == IdentityId::I4).collect();
    for rep in verify_all(&cases, Precision::Bits106, 1e-22) {
        let rep = rep.unwrap();
        assert!(rep.passed() && rep.residual.to_f64() <= 1e-22);
    }
}

#[test]
fn residuals_shrink_with_precision() {
    let tiers = [
        (Precision::Bits53, 1e-12),
        (Precision::Bits106, 1e-25),
        (Precision::Bits212, 1e-30),
    ];
    for c in catalog() {
        let res: Vec<f64> = tiers
            .iter()
            .map(|&(p, tol)| {
                let rep = verify(&c, p, tol).unwrap();
                assert!(rep.passed(), "{c} at {p}");
                rep.residual.to_f64()
            })
            .collect();
        // each doubling of the precision gains at least ten digits
        for w in res.windows(2) {
            if w[0] != 0.0 {
                assert!(w[1] <= w[0] * 1e-10, "{c}: {:e} -> {:e}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn controls_fail_every_identity() {
    for c in catalog() {
        let ctl = c.with_window(c.control_window());
        let rep = verify(&ctl, Precision::Bits106, 1e-25).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail, "{ctl}");
        assert!(rep.residual.to_f64() > 1e-3, "{ctl}: {}", rep.residual);
    }
    // classes 0 and 1 miss the first identity; class 3 happens to vanish there too
    let i1 = &catalog()[0];
    for n in [1, 4, 5] {
        let rep = verify(&i1.with_window(h(n)), Precision::Bits106, 1e-25).unwrap();
        assert!(!rep.passed() && rep.residual.to_f64() > 1e-3, "h{n}");
    }
}

#[test]
fn gaussian_control_values() {
    let sqrt2 = surd("sqrt(2)");
    // √2 Σ (-1)^k e^{-2π(k+¼)²}
    let v = negative_control(&h(0), sqrt2, r(1, 4), r(1, 2), Precision::Bits212).unwrap();
    let oracle = zak_oracle(0, Q::from_i64(2).sqrt(), r(1, 4), r(1, 2)).abs();
    assert!((v.to_f64() - 0.913579138156116821407242593401).abs() < 1e-15);
    assert!((v.to_f64() - oracle.to_f64()).abs() < 1e-15);
    assert!((v.to_f64() - 0.9134).abs() < 1e-3);

    let v = negative_control(&h(0), surd("3^(1/4)"), r(0, 1), r(1, 2), Precision::Bits106).unwrap();
    let oracle = zak_oracle(0, Q::quarter_root(3), r(0, 1), r(1, 2)).abs();
    assert!(v.to_f64() > 0.1);
    assert!((v.to_f64() - oracle.to_f64()).abs() < 1e-25);

    // a symmetry zero of every even window
    let v = negative_control(&h(2), sqrt2, r(1, 2), r(1, 2), Precision::Bits106).unwrap();
    assert!(v.to_f64() < 1e-28);
}

#[test]
fn parity_halves_cancel() {
    let case = &catalog()[0];
    let split = parity_split(case, Precision::Bits212, 1e-30).unwrap();
    assert!(split.even > 0.1 && split.odd > 0.1, "{split:?}");
    assert!((split.even - split.odd).abs() < 1e-15);
    assert!(split.total < 1e-30);
    let lo = parity_split(case, Precision::Bits53, 1e-13).unwrap();
    assert!((lo.even - split.even).abs() < 1e-14);
}

#[test]
fn verdict_rule() {
    assert_eq!(verdict(1e-26, 1e-25, 0.0), Verdict::Pass);
    assert_eq!(verdict(1e-24, 1e-25, 0.0), Verdict::Fail);
    assert_eq!(verdict(1e-24, 1e-25, 1e-24), Verdict::Pass);
    assert_eq!(verdict(f64::NAN, 1.0, 1.0), Verdict::Fail);
}

#[test]
fn statuses_and_records() {
    let cases = catalog();
    let i7 = cases.iter().find(|c| c.id == IdentityId::I7).unwrap();
    assert_eq!(i7.id.status(), ProofStatus::VerifiedNumerically);
    assert_eq!(IdentityId::I3.status(), ProofStatus::Proven);
    let rep = verify(i7, Precision::Bits212, 1e-30).unwrap();
    let rec = rep.record();
    assert_eq!(rec.precision_bits, 212);
    assert_eq!(rec.params["p"], "0");
    assert_eq!(rec.params["lambda"], "27^(1/4)");
    assert_eq!(rec.verdict, Verdict::Pass);
    assert!(rec.residual.parse::<f64>().unwrap() <= 1e-30);
    assert!(rec.truncation_bound.parse::<f64>().is_ok());
}

#[test]
fn tolerance_below_rounding_is_reported() {
    let case = &catalog()[0];
    let err = verify(case, Precision::Bits53, 1e-30).unwrap_err();
    assert!(matches!(err, ZakError::BelowRoundingFloor { .. }));
}

#[test]
fn user_constructed_case() {
    let c = IdentityCase::new(
        IdentityId::I3,
        &[("s", 5)],
        h(3),
        surd("sqrt(5)"),
        r(1, 5),
        r(0, 1),
    );
    // s = 5 is outside the proven range and the value is not zero
    let rep = verify(&c, Precision::Bits106, 1e-25).unwrap();
    assert!(!rep.passed());
}
