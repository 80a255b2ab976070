mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::Rng;
use reality_domain::analytic::{
    bound_at, bound_at_unsimplified, chart_middle_term, membership_of_quartic,
};
use reality_domain::oracle::spectrum;
use reality_domain::*;

fn cp(a: f64, c: f64, f: f64) -> Couplings {
    Couplings::new(a, c, f).unwrap()
}

#[test]
fn f_upper_matches_sturm_bisection() {
    for a_coeff in [0.3, 1.0, 6.0, 10.0] {
        let oracle = common::f_upper_by_bisection(a_coeff);
        assert!((f_upper(a_coeff).unwrap() - oracle).abs() < 1e-8, "A = {a_coeff}");
    }
    assert!((common::f_upper_by_bisection(10.0) - 2.0745).abs() < 1e-4);
}

#[test]
fn phi_round_trip() {
    let f = 2f64.powf(0.25);
    let phi = phi_of(6.0, f).unwrap();
    assert!((phi - FRAC_PI_4).abs() < 1e-15);
    let f_back = (f_upper(6.0).unwrap().powi(2) * phi.cos()).sqrt();
    assert!((f_back - f).abs() < 1e-15);
}

#[test]
fn critical_points_match_bracketed_roots() {
    // A = 6, phi = pi/4: roots of 4z^3 - 12z - 4 sqrt(2) below zero.
    let cp = critical_points(6.0, FRAC_PI_4).unwrap();
    let cubic = common::critical_cubic(6.0, 2f64.sqrt());
    let roots = common::bracketed_roots(&cubic, -4.0, 0.0, 4000);
    assert_eq!(roots.len(), 2);
    assert!((cp.z_min - roots[0]).abs() < 1e-12);
    assert!((cp.z_max - roots[1]).abs() < 1e-12);
    // Frozen from the bracketing oracle above.
    assert!((cp.z_min + std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((cp.z_max + 0.517_638_090_205_041_5).abs() < 1e-12);
    for r in cp.cubic_residuals(6.0) {
        assert!(r.abs() < 1e-10);
    }
}

#[test]
fn critical_point_properties() {
    let mut rng = common::rng(31);
    for _ in 0..100_000 {
        let a_coeff = rng.gen_range(f64::EPSILON..=10.0);
        let phi = rng.gen_range(0.0..=FRAC_PI_2);
        let cp = critical_points(a_coeff, phi).unwrap();
        let scale = 1.0 + a_coeff.powf(1.5);
        for r in cp.cubic_residuals(a_coeff) {
            assert!(r.abs() <= 1e-10 * scale);
        }
        assert!(cp.z_min <= cp.z_max);
        let f2 = cp.f_upper.powi(2) * phi.cos();
        for z in [cp.z_min, cp.z_max] {
            let (s, u) = (bound_at(a_coeff, f2, z), bound_at_unsimplified(a_coeff, f2, z));
            assert!((s - u).abs() <= 1e-10 * (1.0 + a_coeff * a_coeff));
        }
    }
}

#[test]
fn c_bound_sign_structure() {
    let mut rng = common::rng(32);
    for _ in 0..20_000 {
        let a_coeff = rng.gen_range(1e-6..=10.0);
        let f = rng.gen_range(0.0..=1.0) * f_upper(a_coeff).unwrap();
        let Ok((lo, hi)) = c_bounds(a_coeff, f) else { continue };
        assert!(lo <= 0.0, "c_minus = {lo}");
        assert!(lo <= hi + 1e-12 * (1.0 + a_coeff * a_coeff));
    }
}

#[test]
fn c_bounds_at_a6_f1() {
    let (lo, hi) = c_bounds(6.0, 1.0).unwrap();
    assert!(lo < 0.0 && hi > 0.0);
    // Double-root oracle: Y(E) = E^4 - 6E^2 - 4E + C has a double root at each bound.
    let cubic = common::critical_cubic(6.0, 1.0);
    let roots = common::bracketed_roots(&cubic, -4.0, 0.0, 4000);
    let value = |z: f64| bound_at_unsimplified(6.0, 1.0, z);
    assert!((hi - value(roots[0])).abs() < 1e-10);
    assert!((lo - value(roots[1])).abs() < 1e-10);
}

#[test]
fn zero_f_rule_equivalence() {
    let mut rng = common::rng(33);
    for _ in 0..10_000 {
        let (a, c, _) = common::sample_box(&mut rng, 4.0, 4.0, 0.0);
        let q = secular_quartic(&cp(a, c, 0.0)).unwrap();
        let m = membership_analytic(&cp(a, c, 0.0)).unwrap();
        let rule = q.a_coeff >= 0.0 && q.c_coeff >= 0.0 && q.c_coeff <= q.a_coeff.powi(2) / 4.0;
        assert_eq!(rule, m.verdict != Verdict::Outside, "{a} {c}");
    }
    for a_coeff in [1e-300, 0.5, 3.0, 10.0] {
        assert_eq!(c_bounds(a_coeff, 0.0).unwrap(), (0.0, a_coeff * a_coeff / 4.0));
    }
}

#[test]
fn membership_matches_oracle_examples() {
    let tol = RealityTolerance::default();
    for (x, verdict) in [
        (cp(0.0, 0.0, 0.5), Verdict::Inside),
        (cp(3.0, 0.0, 0.1), Verdict::Outside),
        (cp(0.0, 0.0, 0.0), Verdict::Inside),
    ] {
        assert_eq!(membership_analytic(&x).unwrap().verdict, verdict);
        let real = spectrum(&x, &tol).unwrap().classification.is_real();
        assert_eq!(real, verdict == Verdict::Inside);
    }
}

#[test]
fn membership_slack_continuous_at_f_upper() {
    let q_at = |f2: f64| SecularQuartic::new(6.0, 1.0, f2);
    let band = BoundaryBand::default();
    let below = membership_of_quartic(&q_at(2.0 - 1e-9), band);
    let above = membership_of_quartic(&q_at(2.0 + 1e-9), band);
    assert_eq!(above.reason, Reason::FExceedsUpper);
    assert!((below.slack - above.slack).abs() < 1e-6);
    assert!(below.slack < 0.0 && above.slack < 0.0);
}

#[test]
fn reparam_round_trip() {
    let mut rng = common::rng(34);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 10_000 {
        let (a, c, f) = common::sample_box(&mut rng, 4.0, 4.0, 2.0);
        let x = cp(a, c, f);
        let Ok(p) = to_reparam(&x) else { continue };
        let q = secular_quartic(&x).unwrap();
        assert!((p.a_coeff() - q.a_coeff).abs() <= 1e-12 * (1.0 + q.a_coeff));
        let back = from_reparam(&p).unwrap();
        // The chart is quadratic in the couplings; compare squares against
        // the coupling budget a^2 + 2c^2 + f^2.
        let budget = 1.0 + a * a + 2.0 * c * c + f * f;
        for (u, v) in [(back.a(), a), (back.c(), c), (back.f(), f)] {
            let err = (u * u - v * v).abs() / budget;
            worst = worst.max(err);
            assert!(err <= 1e-12, "{x:?} -> {p:?} -> {back:?}");
        }
        done += 1;
    }
    assert!(worst <= 1e-12);
}

#[test]
fn reparam_round_trip_relative() {
    // Away from c = 0 the couplings themselves round-trip to 1e-12 relative.
    let mut rng = common::rng(35);
    let mut done = 0;
    while done < 10_000 {
        let (a, c, f) = common::sample_box(&mut rng, 4.0, 4.0, 2.0);
        if c < 0.05 {
            continue;
        }
        let x = cp(a, c, f);
        let Ok(p) = to_reparam(&x) else { continue };
        let back = from_reparam(&p).unwrap();
        for (u, v) in [(back.a(), a), (back.c(), c), (back.f(), f)] {
            assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0), "{x:?} -> {back:?}");
        }
        done += 1;
    }
}

#[test]
fn reparam_invariants() {
    let p = to_reparam(&cp(1.0, 1.0, 1.0)).unwrap();
    assert!((p.phi - PI / 3.0).abs() < 1e-14);
    let alpha = p.alpha;
    let (c2a, s2d, c2d) = (alpha.cos().powi(2), p.delta.sin().powi(2), p.delta.cos().powi(2));
    assert!((10.0 * c2a * s2d - 1.0).abs() < 1e-12);
    assert!((10.0 * c2a * c2d - 3.0).abs() < 1e-12);
}

#[test]
fn chart_constant_term_identity() {
    // C = (12 + 5 cos^2(alpha) cos^2(delta))^2 - 90 cos^2(alpha) - 135 - f^4/4
    let mut rng = common::rng(36);
    for _ in 0..5000 {
        let (a, c, f) = common::sample_box(&mut rng, 3.0, 2.0, 1.5);
        let x = cp(a, c, f);
        let Ok(p) = to_reparam(&x) else { continue };
        let q = secular_quartic(&x).unwrap();
        let m = chart_middle_term(&p);
        let c_chart = m * m - 90.0 * p.alpha.cos().powi(2) - 135.0 - 0.25 * f.powi(4);
        assert!((c_chart - q.c_coeff).abs() <= 1e-10 * (1.0 + q.c_coeff.abs()));
    }
}

#[test]
fn b_bounds_match_trigonometric_form() {
    // C_minus/plus = (100/3) sin^4(alpha) cos(t) [cos(t) - cos(phi)], t = (pi +- phi)/3
    let mut rng = common::rng(37);
    for _ in 0..5000 {
        let alpha = rng.gen_range(0.05..=FRAC_PI_2);
        let phi = rng.gen_range(0.0..=FRAC_PI_2);
        let (bm, bp) = b_bounds(alpha, phi).unwrap();
        assert!(bm >= 0.0 && bp >= 0.0);
        let s4 = alpha.sin().powi(4);
        let trig = |t: f64| 100.0 / 3.0 * s4 * t.cos() * (t.cos() - phi.cos());
        let a_coeff = 10.0 * alpha.sin().powi(2);
        let f4 = a_coeff.powi(3) / 54.0 * phi.cos().powi(2);
        let shift = 90.0 * alpha.cos().powi(2) + 135.0 + 0.25 * f4;
        assert!((bm - shift - trig((PI + phi) / 3.0)).abs() < 1e-10);
        assert!((bp - shift - trig((PI - phi) / 3.0)).abs() < 1e-10);
    }
}

#[test]
fn b_bounds_at_a6_quarter_phi() {
    let alpha = 0.6f64.sqrt().asin();
    let (bm, bp) = b_bounds(alpha, FRAC_PI_4).unwrap();
    assert!(bm >= 0.0 && bp >= bm);
}

#[test]
fn chart_membership_agrees_with_couplings() {
    let mut rng = common::rng(38);
    let mut done = 0;
    while done < 10_000 {
        let p = ReparamPoint::new(
            rng.gen_range(1e-3..=FRAC_PI_2),
            rng.gen_range(0.0..=FRAC_PI_2),
            rng.gen_range(0.0..=FRAC_PI_2),
        )
        .unwrap();
        let Ok(x) = from_reparam(&p) else { continue };
        let chart = membership_reparam(&p).unwrap();
        let direct = membership_analytic(&x).unwrap();
        if chart.slack.abs() > 1e-7 && direct.slack.abs() > 1e-7 {
            assert_eq!(chart.verdict, direct.verdict, "{p:?}");
            done += 1;
        }
    }
}

#[test]
fn chart_membership_examples() {
    let origin = ReparamPoint::new(FRAC_PI_2, 0.0, FRAC_PI_2).unwrap();
    assert_eq!(membership_reparam(&origin).unwrap().verdict, Verdict::Inside);

    let p = to_reparam(&cp(3.0, 0.0, 0.1)).unwrap();
    let m = membership_reparam(&p).unwrap();
    assert_eq!(m.verdict, Verdict::Outside);
    assert_eq!(m.reason, Reason::CBelowMinus);
}

#[test]
fn chart_boundary_by_delta_bisection() {
    // Fixed (alpha, phi) with A = 6, phi = pi/4: bisect delta to the sign change.
    let alpha = 0.6f64.sqrt().asin();
    let DeltaInterval::Closed { lo, hi } = delta_interval(alpha, FRAC_PI_4).unwrap() else {
        panic!("expected a non-empty interval");
    };
    let slack = |d: f64| membership_reparam(&ReparamPoint::new(alpha, d, FRAC_PI_4).unwrap()).unwrap().slack;
    // delta = 0 carries the largest c^2, so it stays representable.
    let (mut inside, mut outside) = (0.5 * (lo + hi), 0.0);
    assert!(lo > 0.0);
    assert!(slack(inside) > 0.0 && slack(outside) < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (inside + outside);
        if slack(mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    let m = membership_reparam(&ReparamPoint::new(alpha, inside, FRAC_PI_4).unwrap()).unwrap();
    assert_eq!(m.verdict, Verdict::Boundary);
}

#[test]
fn delta_interval_matches_oracle() {
    let tol = RealityTolerance::default();
    let alpha = 0.6f64.sqrt().asin();
    let DeltaInterval::Closed { lo, hi } = delta_interval(alpha, FRAC_PI_4).unwrap() else {
        panic!("expected a non-empty interval");
    };
    assert!(lo < hi);
    for k in 1..200 {
        let d = lo + (hi - lo) * k as f64 / 200.0;
        let x = from_reparam(&ReparamPoint::new(alpha, d, FRAC_PI_4).unwrap()).unwrap();
        assert_eq!(
            spectrum(&x, &tol).unwrap().classification,
            RealityClass::AllReal,
            "delta = {d}"
        );
    }
}

#[test]
fn empty_delta_cells_hold_no_real_points() {
    let tol = RealityTolerance::default();
    let mut empty = 0;
    for i in 1..40 {
        for j in 0..=20 {
            let alpha = FRAC_PI_2 * i as f64 / 40.0;
            let phi = FRAC_PI_2 * j as f64 / 20.0;
            let iv = delta_interval(alpha, phi).unwrap();
            for k in 0..=100 {
                let d = FRAC_PI_2 * k as f64 / 100.0;
                let Ok(x) = from_reparam(&ReparamPoint::new(alpha, d, phi).unwrap()) else {
                    continue;
                };
                let m = membership_analytic(&x).unwrap();
                if m.slack.abs() < 1e-6 {
                    continue;
                }
                let real = spectrum(&x, &tol).unwrap().classification.is_real();
                assert_eq!(real, iv.contains(d), "alpha {alpha} phi {phi} delta {d}");
            }
            if iv.is_empty() {
                empty += 1;
            }
        }
    }
    assert!(empty > 0, "grid should contain empty cells");
}
