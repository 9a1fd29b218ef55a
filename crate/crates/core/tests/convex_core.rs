use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, SQRT_2};

use approx::assert_relative_eq;
use finsys::convex::{hausdorff, inclusion_factors, mahler_volume, max_det_form, unit, SymBody};
use finsys::{Mat2, Vec2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn in_truncated(theta: f64, p: Vec2) -> bool {
    p.norm() <= 1.0 && p.y.abs() <= theta.sin()
}

/// Gauge by bisection along the ray, from a membership test only.
fn ray_gauge(member: impl Fn(Vec2) -> bool, v: Vec2) -> f64 {
    let (mut lo, mut hi) = (0.0, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if member(v * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 / lo
}

fn monte_carlo_area(member: impl Fn(Vec2) -> bool, half: Vec2, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples).filter(|_| member(Vec2::new(rng.random_range(-half.x..half.x), rng.random_range(-half.y..half.y)))).count();
    4.0 * half.x * half.y * hits as f64 / samples as f64
}

#[test]
fn gauges_of_the_model_bodies() {
    assert_relative_eq!(SymBody::square().gauge(Vec2::new(3.0, 4.0)), 4.0, epsilon = 1e-12);
    assert_relative_eq!(SymBody::disc().gauge(Vec2::new(3.0, 4.0)), 5.0, epsilon = 1e-12);
    let t = SymBody::truncated_disc(FRAC_PI_6).unwrap();
    let v = Vec2::new(0.0, 1.0);
    assert_relative_eq!(t.gauge(v), 2.0, epsilon = 1e-12);
    assert_relative_eq!(t.gauge(v), ray_gauge(|p| in_truncated(FRAC_PI_6, p), v), epsilon = 1e-9);
    let q = SymBody::truncated_disc(FRAC_PI_4).unwrap();
    assert_relative_eq!(q.gauge(Vec2::new(1.0, 0.0)), 1.0, epsilon = 1e-12);
}

#[test]
fn truncated_disc_gauge_matches_ray_oracle_in_all_directions() {
    for theta in [0.2, FRAC_PI_6, 1.0, 1.4] {
        let t = SymBody::truncated_disc(theta).unwrap();
        for k in 0..37 {
            let v = unit(k as f64 * PI / 36.0) * 1.7;
            assert_relative_eq!(t.gauge(v), ray_gauge(|p| in_truncated(theta, p), v), max_relative = 1e-9);
        }
    }
}

#[test]
fn truncated_disc_at_right_angle_is_the_disc() {
    let t = SymBody::truncated_disc(FRAC_PI_2).unwrap();
    assert!(hausdorff(&t, &SymBody::disc(), 1024) < 1e-12);
    assert!(SymBody::truncated_disc(0.0).is_err());
    assert!(SymBody::truncated_disc(2.0).is_err());
}

#[test]
fn polars_of_the_model_bodies() {
    let p = SymBody::square().polar().unwrap();
    assert!(hausdorff(&p, &SymBody::diamond(), 2048) < 1e-12);
    let d = SymBody::disc().polar().unwrap();
    assert!(hausdorff(&d, &SymBody::disc(), 2048) < 1e-12);
    for theta in [0.3, FRAC_PI_6, FRAC_PI_3, 1.2] {
        let a = SymBody::truncated_disc(theta).unwrap().polar().unwrap().area();
        assert_relative_eq!(a, 2.0 * theta + 2.0 / theta.tan(), max_relative = 1e-12);
    }
}

#[test]
fn polar_area_at_third_pi_against_monte_carlo() {
    let theta = FRAC_PI_3;
    let a = SymBody::truncated_disc(theta).unwrap().polar().unwrap().area();
    assert_relative_eq!(a, 3.2491, epsilon = 1e-4);
    // The polar is {u : h_B(u) <= 1}; the support of B is attained on its arcs.
    let support = |u: Vec2| (0..=2000).map(|k| {
        let phi = -theta + 2.0 * theta * k as f64 / 2000.0;
        (u.x * phi.cos() + u.y * phi.sin()).abs()
    }).fold(0.0, f64::max);
    let mc = monte_carlo_area(|u| support(u) <= 1.0, Vec2::new(1.0, 1.0 / theta.sin()), 200_000, 5);
    assert_relative_eq!(a, mc, max_relative = 0.01);
}

#[test]
fn areas_of_the_model_bodies() {
    assert_relative_eq!(SymBody::disc().area(), PI, epsilon = 1e-12);
    assert_relative_eq!(SymBody::square().area(), 4.0, epsilon = 1e-12);
    let theta = FRAC_PI_3;
    let a = SymBody::truncated_disc(theta).unwrap().area();
    assert_relative_eq!(a, 2.0 * theta + (2.0 * theta).sin(), epsilon = 1e-12);
    assert_relative_eq!(a, 2.9604, epsilon = 1e-4);
    let mc = monte_carlo_area(|p| in_truncated(theta, p), Vec2::new(1.0, 1.0), 200_000, 6);
    assert_relative_eq!(a, mc, max_relative = 0.01);
}

#[test]
fn mahler_volumes_at_the_extremes() {
    assert_relative_eq!(mahler_volume(&SymBody::square()).unwrap(), 8.0, epsilon = 1e-12);
    assert_relative_eq!(mahler_volume(&SymBody::disc()).unwrap(), PI * PI, epsilon = 1e-12);
}

#[test]
fn john_ellipses_of_the_model_bodies() {
    let e = SymBody::square().john_ellipse().unwrap();
    assert!((e.q - Mat2::identity()).norm() < 1e-6, "{}", e.q);
    let q = Mat2::new(2.0, 0.3, 0.3, 0.5);
    let e = SymBody::ellipse(q).unwrap().john_ellipse().unwrap();
    assert!((e.q - q).norm() < 1e-9);
    // Diamond: the largest inscribed disc by a one-parameter search.
    let fits = |r: f64| (0..720).all(|k| {
        let p = unit(k as f64 * PI / 360.0) * r;
        p.x.abs() + p.y.abs() <= 1.0 + 1e-15
    });
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if fits(m) {
            lo = m;
        } else {
            hi = m;
        }
    }
    assert_relative_eq!(lo, 1.0 / SQRT_2, epsilon = 1e-6);
    let e = SymBody::diamond().john_ellipse().unwrap();
    assert!((e.q - Mat2::identity() / (lo * lo)).norm() < 1e-5, "{}", e.q);
}

#[test]
fn max_det_form_recovers_an_ellipse_through_its_dual_points() {
    // Points of the polar of an ellipse lie on it; the best form is the ellipse itself.
    let q = Mat2::new(1.5, -0.2, -0.2, 0.7);
    let pts: Vec<Vec2> = (0..24).map(|k| {
        let u = unit(k as f64 * PI / 24.0);
        u / u.dot(&(q * u)).sqrt()
    }).collect();
    let p = max_det_form(&pts).unwrap();
    assert!((p - q).norm() < 1e-6, "{p}");
}

#[test]
fn invalid_bodies_are_rejected() {
    assert!(SymBody::ellipse(Mat2::new(1.0, 2.0, 2.0, 1.0)).is_err());
    assert!(SymBody::hull(&[Vec2::new(1.0, 0.0)]).is_err());
}

fn arb_body() -> impl Strategy<Value = SymBody> {
    prop_oneof![
        prop::collection::vec((0.0..PI, 0.3..2.0f64), 2..7).prop_filter_map("degenerate hull", |v| {
            let pts: Vec<Vec2> = v.iter().map(|&(phi, r)| unit(phi) * r).collect();
            SymBody::hull(&pts).ok()
        }),
        (0.05..FRAC_PI_2).prop_map(|t| SymBody::truncated_disc(t).unwrap()),
        (0.2..3.0f64, 0.2..3.0f64, -0.5..0.5f64).prop_filter_map("not positive", |(a, b, c)| {
            SymBody::ellipse(Mat2::new(a, c * (a * b).sqrt(), c * (a * b).sqrt(), b)).ok()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polar_is_an_involution(b in arb_body()) {
        let pp = b.polar().unwrap().polar().unwrap();
        prop_assert!(hausdorff(&pp, &b, 512) <= 1e-9);
    }

    #[test]
    fn mahler_volume_lies_between_square_and_disc(b in arb_body()) {
        let m = mahler_volume(&b).unwrap();
        prop_assert!(m >= 8.0 - 1e-9 && m <= PI * PI + 1e-9, "{m}");
    }

    #[test]
    fn gauge_is_the_support_of_the_polar(b in arb_body(), phi in 0.0..(2.0 * PI), r in 0.1..5.0f64) {
        let v = unit(phi) * r;
        let p = b.polar().unwrap();
        prop_assert!((b.gauge(v) - p.support(v)).abs() <= 1e-9 * b.gauge(v).max(1.0));
    }

    #[test]
    fn gauge_satisfies_the_triangle_inequality(b in arb_body(), a in 0.0..(2.0 * PI), c in 0.0..(2.0 * PI), s in 0.1..3.0f64) {
        let (u, v) = (unit(a), unit(c) * s);
        prop_assert!(b.gauge(u + v) <= b.gauge(u) + b.gauge(v) + 1e-12);
    }

    #[test]
    fn john_ellipse_sits_between_c_over_root_two_and_c(b in arb_body()) {
        let e = b.john_ellipse().unwrap();
        let (inner, outer) = inclusion_factors(&e, &b, 720);
        prop_assert!(inner >= 1.0 - 1e-6, "{inner}");
        prop_assert!(outer <= SQRT_2 * (1.0 + 1e-6), "{outer}");
    }
}
