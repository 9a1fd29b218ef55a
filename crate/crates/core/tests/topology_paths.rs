use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use approx::assert_relative_eq;
use finsys::convex::SymBody;
use finsys::measure::{volume, VolumeKind};
use finsys::metric::*;
use finsys::paths::*;
use finsys::{FinsysError, Vec2};

fn sys(s: &Surface, n: usize, class: ClassSpec) -> f64 {
    let g = Graph::matched(s, n).unwrap();
    systole(&g, class).unwrap().value(class).unwrap()
}

fn h(s: &Surface, n: usize) -> f64 {
    height(&Graph::matched(s, n).unwrap()).unwrap().length
}

/// Shortest nonzero lattice vector by enumeration.
fn lattice_min(b: &SymBody, b1: Vec2, b2: Vec2) -> f64 {
    let mut best = f64::INFINITY;
    for m in -6i32..=6 {
        for k in -6i32..=6 {
            if (m, k) != (0, 0) {
                best = best.min(b.gauge(b1 * m as f64 + b2 * k as f64));
            }
        }
    }
    best
}

#[test]
fn plane_distances() {
    let sq = constant_norm(SymBody::square(), Topology::Plane, Rect::new(0.0, 4.0, 0.0, 4.0).unwrap()).unwrap();
    let g = Graph::new(&sq, 4, 4).unwrap();
    let win = Window::new(&g, 0, 4, 0, 4, None);
    assert_relative_eq!(distance(&g, &win, (0, 0), (3, 4)).unwrap(), 4.0, epsilon = 1e-12);
    let eu = constant_norm(SymBody::disc(), Topology::Plane, Rect::new(0.0, 4.0, 0.0, 4.0).unwrap()).unwrap();
    let g = Graph::new(&eu, 8, 8).unwrap();
    let win = Window::new(&g, 0, 8, 0, 8, None);
    // (3, 4) is not a stencil direction: the graph distance is an upper bound within the angular gap.
    let d = distance(&g, &win, (0, 0), (6, 8)).unwrap();
    assert!((5.0..5.0 * 1.01).contains(&d), "{d}");
    let mut mask = vec![false; g.bx * g.by];
    mask[0] = true;
    mask[8 * g.bx + 6] = true;
    let win = Window::new(&g, 0, 8, 0, 8, Some(&mask));
    assert!(distance(&g, &win, (0, 0), (6, 8)).unwrap().is_infinite());
}

#[test]
fn flat_torus_systoles() {
    let cases = [
        (SymBody::square(), Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0), 2.0),
        (SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 1.0),
        (SymBody::square(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 3.0), 1.0),
        (SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(0.4, 0.9), 0.97f64.sqrt()),
    ];
    for (b, b1, b2, expected) in cases {
        let oracle = lattice_min(&b, b1, b2);
        assert_relative_eq!(oracle, expected, epsilon = 1e-12);
        let t = flat_torus(b, b1, b2).unwrap();
        assert_relative_eq!(sys(&t, 12, ClassSpec::All), oracle, max_relative = 1e-9);
    }
}

#[test]
fn keen_second_systole_of_the_square_torus() {
    let t = flat_torus(SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 2.0)).unwrap();
    let g = Graph::matched(&t, 12).unwrap();
    let first = systole(&g, ClassSpec::All).unwrap().all.unwrap();
    assert_relative_eq!(first.length, 1.0, max_relative = 1e-9);
    assert_relative_eq!(second_systole(&g, first.element).unwrap().unwrap(), 2.0, max_relative = 1e-9);
}

#[test]
fn sup_norm_klein_systole() {
    assert_relative_eq!(sys(&sup_norm_klein(FRAC_PI_2).unwrap(), 16, ClassSpec::All), PI, max_relative = 1e-9);
    assert_relative_eq!(sys(&sup_norm_klein(PI).unwrap(), 16, ClassSpec::All), PI, max_relative = 1e-9);
}

#[test]
fn fa_systoles_and_height() {
    let m = spherical_finsler_mobius(FRAC_PI_4, false).unwrap();
    assert_relative_eq!(sys(&m, 32, ClassSpec::Nonorientable), PI, max_relative = 1e-6);
    assert_relative_eq!(sys(&m, 32, ClassSpec::Orientable), 2.0 * PI * FRAC_PI_4.cos(), max_relative = 1e-6);
    let m3 = spherical_finsler_mobius(FRAC_PI_3, false).unwrap();
    for class in [ClassSpec::All, ClassSpec::Orientable, ClassSpec::Nonorientable] {
        assert_relative_eq!(sys(&m3, 32, class), PI, max_relative = 1e-6);
    }
    for a in [FRAC_PI_4, FRAC_PI_3] {
        let hm = h(&spherical_finsler_mobius(a, false).unwrap(), 32);
        assert!(hm <= PI * (1.0 + 1e-9) && hm >= PI * (1.0 - 1e-4), "{hm}");
    }
}

#[test]
fn dual_fa_height() {
    for a in [FRAC_PI_4, FRAC_PI_3] {
        let m = spherical_finsler_mobius(a, true).unwrap();
        assert_relative_eq!(h(&m, 32), PI * (1.0 - a.cos()), max_relative = 1e-4);
    }
}

#[test]
fn sup_norm_band_heights() {
    for lambda in [0.25, 0.5, 1.0, 2.0] {
        let m = sup_norm_mobius(lambda).unwrap();
        assert_relative_eq!(h(&m, 16), lambda * PI, max_relative = 1e-12);
        assert_relative_eq!(sys(&m, 16, ClassSpec::All), PI, max_relative = 1e-12);
    }
}

#[test]
fn glued_wide_band_values() {
    let m = glued_wide_mobius(2.0).unwrap();
    assert_relative_eq!(sys(&m, 32, ClassSpec::All), PI, max_relative = 1e-6);
    assert_relative_eq!(h(&m, 32), 2.0 * PI, max_relative = 1e-5);
}

#[test]
fn height_needs_a_boundary() {
    let k = sup_norm_klein(1.0).unwrap();
    assert!(matches!(height(&Graph::matched(&k, 8).unwrap()), Err(FinsysError::Unsupported(_))));
}

#[test]
fn collapsing_the_boundary() {
    for (m, expected) in [
        (sup_norm_mobius(0.5).unwrap(), FRAC_PI_2),
        (sup_norm_mobius(2.0).unwrap(), PI),
        (spherical_finsler_mobius(FRAC_PI_3, false).unwrap(), PI),
    ] {
        let r = collapse_boundary(&m).unwrap().systole(32, 32).unwrap();
        assert_relative_eq!(r.systole, expected, max_relative = 1e-5);
        assert_relative_eq!(r.systole, r.band_height.min(r.band_systole), max_relative = 1e-9);
    }
    assert!(collapse_boundary(&sup_norm_klein(1.0).unwrap()).is_err());
}

#[test]
fn soul_distance_of_the_sup_norm_band() {
    let m = sup_norm_mobius(1.0).unwrap();
    let g = Graph::matched(&m, 16).unwrap();
    let d = soul_distance_field(&g).unwrap();
    for i in 0..g.bx {
        assert_relative_eq!(d.d_sigma[g.ny * g.bx + i], FRAC_PI_2, max_relative = 1e-12);
    }
}

#[test]
fn equidistant_soul_of_a_symmetric_band_is_the_middle_line() {
    let m = sup_norm_mobius(1.0).unwrap();
    let gamma = equidistant_soul(&Graph::matched(&m, 16).unwrap()).unwrap();
    assert!(gamma.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn doubling_relations() {
    let m = sup_norm_mobius(0.5).unwrap();
    let d = double_mobius(&m).unwrap();
    assert_relative_eq!(h(&d, 16), PI, max_relative = 1e-12);
    assert_relative_eq!(sys(&d, 16, ClassSpec::All), PI, max_relative = 1e-12);
    let d1 = double_mobius(&sup_norm_mobius(1.0).unwrap()).unwrap();
    assert_relative_eq!(h(&d1, 16), 2.0 * PI, max_relative = 1e-12);
    let dd = double_mobius(&d).unwrap();
    assert_relative_eq!(h(&dd, 16), 4.0 * FRAC_PI_2, max_relative = 1e-12);
    // A band without soul reflection is cut along its equidistant curve.
    let r = finsys::verify::random_surface(2001, Topology::Mobius, 0.25, &[]).unwrap();
    let dr = double_mobius(&r).unwrap();
    assert!(dr.equivariance_residual(32).0 < 1e-9);
    let (hm, hd) = (h(&r, 24), h(&dr, 24));
    assert_relative_eq!(hd, 2.0 * hm, max_relative = 0.02);
    let (vm, vd) = (
        volume(&r, VolumeKind::HolmesThompson, 32).unwrap().value,
        volume(&dr, VolumeKind::HolmesThompson, 32).unwrap().value,
    );
    assert_relative_eq!(vd, 2.0 * vm, max_relative = 0.02);
}

#[test]
fn weighted_split_of_the_sup_norm_band() {
    let m = sup_norm_mobius(1.0).unwrap();
    let (_, r) = weighted_split(&m, 0.5, 1.0, 32, 32).unwrap();
    let hm = PI;
    assert!(r.height[0] >= 2.0 * 0.5 / 1.5 * hm * (1.0 - 1e-6), "{:?}", r.height);
    assert!(r.height[1] >= 2.0 * 1.0 / 1.5 * hm * (1.0 - 1e-6), "{:?}", r.height);
    assert_relative_eq!(r.volume[0] + r.volume[1], r.volume_total, max_relative = 1e-9);
    assert!(weighted_split(&m, 1.0, 1.0, 32, 32).is_err());
    assert!(weighted_split(&m, 0.5, 1.0, 4, 4).is_err());
}

#[test]
fn klein_from_fa_boundary_loop() {
    // The identified boundary circle closes up as a loop of F_a-length pi cos a.
    let a = FRAC_PI_3;
    let k = klein_from_fa(a).unwrap();
    assert_relative_eq!(sys(&k, 32, ClassSpec::All), PI * a.cos(), max_relative = 1e-6);
    assert_relative_eq!(volume(&k, VolumeKind::HolmesThompson, 64).unwrap().value, 2.0 * PI, max_relative = 1e-4);
}

#[test]
fn witnesses_have_their_reported_length() {
    let m = spherical_finsler_mobius(FRAC_PI_4, false).unwrap();
    let g = Graph::matched(&m, 24).unwrap();
    let w = systole(&g, ClassSpec::Orientable).unwrap().orientable.unwrap();
    assert_relative_eq!(g.polyline_length(&w.nodes, 1e-9), w.length, max_relative = 1e-6);
    assert!(w.orientable);
}
