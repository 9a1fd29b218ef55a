use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use approx::assert_relative_eq;
use finsys::great_circles::*;
use finsys::metric::spherical_finsler_mobius;

/// Angle between a great circle and the parallel it crosses, from
/// central differences of the embedded curve only.
fn tangent_angle(c: &GreatCircle, tau: f64) -> (f64, f64) {
    let e = 1e-6;
    let (p, q0, q1) = (c.embed(tau), c.embed(tau - e), c.embed(tau + e));
    let t = (q1 - q0) / (2.0 * e);
    let v = p.z.asin();
    let east = nalgebra::Vector3::new(-p.y, p.x, 0.0).normalize();
    let north = (nalgebra::Vector3::z() - p * p.z).normalize();
    (v, t.dot(&north).abs().atan2(t.dot(&east).abs()))
}

#[test]
fn clairaut_angle_value() {
    let th = clairaut_angle(FRAC_PI_3, FRAC_PI_6).unwrap();
    assert_relative_eq!(th, (1.0 / 3f64.sqrt()).acos(), epsilon = 1e-14);
    assert_relative_eq!(th, 0.9553, epsilon = 1e-4);
    assert!(clairaut_angle(FRAC_PI_3, 1.1).is_err());
    assert!(clairaut_angle(2.0, 0.1).is_err());
}

#[test]
fn clairaut_angle_matches_the_extreme_circle() {
    for a in [0.3, FRAC_PI_4, FRAC_PI_3, 1.4] {
        let c = GreatCircle { s: 0.2, theta0: a };
        for k in 1..20 {
            let tau = -1.5 + 3.0 * k as f64 / 20.0;
            let (v, angle) = tangent_angle(&c, tau);
            assert_relative_eq!(angle, clairaut_angle(a, v).unwrap(), epsilon = 1e-6);
        }
    }
}

#[test]
fn velocity_is_the_derivative_of_the_chart_point() {
    let c = GreatCircle { s: 0.4, theta0: 0.7 };
    for tau in [0.1, 1.0, 2.5] {
        let e = 1e-6;
        let num = (c.point(tau + e) - c.point(tau - e)) / (2.0 * e);
        assert!((num - c.velocity(tau)).norm() < 1e-7);
    }
}

#[test]
fn traced_circles_stay_in_their_latitude_band() {
    for theta0 in [0.0, 0.3, 0.8] {
        let tr = trace_great_circle(0.5, theta0, 0.8, 256).unwrap();
        assert_relative_eq!(tr.max_latitude, theta0, epsilon = 1e-15);
        let top = tr.points.iter().map(|p| p[1].abs()).fold(0.0, f64::max);
        assert!(top <= theta0 + 1e-12);
        assert!(top >= theta0 * (1.0 - 1e-3));
    }
    assert!(trace_great_circle(0.0, 0.9, 0.8, 16).is_err());
}

#[test]
fn equator_has_fa_length_pi_over_half_a_turn() {
    let a = FRAC_PI_4;
    let m = spherical_finsler_mobius(a, false).unwrap();
    let eq = GreatCircle { s: 0.0, theta0: 0.0 };
    assert_relative_eq!(eq.length_in(&m, 0.0, PI), PI, max_relative = 1e-12);
}

#[test]
fn extreme_arc_has_fa_length_pi() {
    for a in [FRAC_PI_4, FRAC_PI_3] {
        let m = spherical_finsler_mobius(a, false).unwrap();
        let (c, t0, t1) = extreme_arc(a).unwrap();
        assert_relative_eq!(c.point(t1).y, a, epsilon = 1e-12);
        assert_relative_eq!(c.length_in(&m, t0, t1), PI, max_relative = 1e-6);
    }
}

#[test]
fn height_integral_is_pi() {
    assert_relative_eq!(height_integrand_check(FRAC_PI_4).unwrap(), PI, epsilon = 1e-8);
    assert_relative_eq!(height_integrand_check(FRAC_PI_3).unwrap(), PI, epsilon = 1e-8);
    assert_relative_eq!(height_integrand_check(1.57).unwrap(), PI, epsilon = 1e-6);
    for k in 0..20 {
        let a = 0.1 + 1.4 * k as f64 / 19.0;
        assert!((height_integrand_check(a).unwrap() - PI).abs() <= 1e-6);
    }
}

#[test]
fn cone_gauge_matches_the_truncated_disc() {
    for v in [0.0, 0.3, -0.6] {
        assert!(cone_gauge_residual(0.8, v, 64).unwrap() < 1e-9);
    }
    let p = ConeProfile::new(0.8).unwrap();
    let s = p.samples(8);
    assert_eq!(s.len(), 9);
    assert_relative_eq!(s[4][1], 0.8, epsilon = 1e-12);
    assert_relative_eq!(s[0][1], 0.0, epsilon = 1e-7);
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    assert_relative_eq!(gauss_legendre(|x| x.powi(9) + 1.0, -1.0, 2.0, 1), (2f64.powi(10) - 1.0) / 10.0 + 3.0, max_relative = 1e-13);
}
