use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use approx::assert_relative_eq;
use finsys::convex::SymBody;
use finsys::measure::{densities, duran_check, volume, volume_grid, volumes, VolumeKind};
use finsys::metric::*;
use finsys::verify::random_surface;
use finsys::{Mat2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fa_bands_have_area_two_pi() {
    for a in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let m = spherical_finsler_mobius(a, false).unwrap();
        let v = volume(&m, VolumeKind::HolmesThompson, 64).unwrap();
        assert_relative_eq!(v.value, 2.0 * PI, max_relative = 1e-5);
        assert!(v.estimated_error < 1e-3);
    }
}

#[test]
fn dual_bands_have_area_two_pi_sin_squared() {
    for a in [FRAC_PI_4, FRAC_PI_3] {
        let m = spherical_finsler_mobius(a, true).unwrap();
        let v = volume(&m, VolumeKind::HolmesThompson, 64).unwrap();
        assert_relative_eq!(v.value, 2.0 * PI * a.sin().powi(2), max_relative = 1e-6);
    }
}

#[test]
fn flat_sup_norm_torus() {
    let t = flat_torus(SymBody::square(), Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0)).unwrap();
    let (ht, b) = volumes(&t, 8, 8).unwrap();
    assert_relative_eq!(ht.value, 8.0 / PI, max_relative = 1e-12);
    assert_relative_eq!(b.value, PI, max_relative = 1e-12);
    assert!(ht.value < b.value);
}

#[test]
fn sup_norm_bands() {
    for lambda in [0.25, 0.5, 1.0, 2.0] {
        let m = sup_norm_mobius(lambda).unwrap();
        assert_relative_eq!(volume(&m, VolumeKind::HolmesThompson, 16).unwrap().value, 2.0 * lambda * PI, max_relative = 1e-12);
    }
    // Constant Busemann density pi/4 over a fundamental domain of area pi^2.
    let m = sup_norm_mobius(1.0).unwrap();
    let b = volume(&m, VolumeKind::Busemann, 16).unwrap().value;
    assert_relative_eq!(b, PI.powi(3) / 4.0, max_relative = 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 100_000;
    let inside = (0..n).filter(|_| {
        let p = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        m.norm(1.0, 0.2, p) <= 1.0
    }).count();
    let ball = 4.0 * inside as f64 / n as f64;
    assert_relative_eq!(b, PI / ball * PI * PI, max_relative = 0.01);
}

#[test]
fn glued_wide_bands_have_area_one_plus_lambda_pi() {
    for lambda in [1.0, 1.5, 2.0] {
        let m = glued_wide_mobius(lambda).unwrap();
        let v = volume(&m, VolumeKind::HolmesThompson, 64).unwrap();
        assert_relative_eq!(v.value, (1.0 + lambda) * PI, max_relative = 1e-4);
    }
}

#[test]
fn riemannian_fields_have_equal_areas() {
    let q = Mat2::new(2.0, 0.4, 0.4, 0.7);
    let s = constant_norm(SymBody::ellipse(q).unwrap(), Topology::Torus, Rect::new(0.0, 2.0, 0.0, 1.0).unwrap()).unwrap();
    let (ht, b) = volumes(&s, 16, 16).unwrap();
    assert_relative_eq!(ht.value, b.value, max_relative = 1e-12);
    assert_relative_eq!(ht.value, 2.0 * q.determinant().sqrt(), max_relative = 1e-12);
    let r = random_surface(1, Topology::Torus, 0.0, &[]).unwrap();
    let (ht, b) = volumes(&r, 32, 32).unwrap();
    assert!((ht.value - b.value).abs() <= 2.0 * (ht.estimated_error + b.estimated_error) + 1e-9 * b.value);
}

#[test]
fn duran_inequality_holds_pointwise() {
    let t = flat_torus(SymBody::square(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
    let d = duran_check(&t, 4, 4).unwrap();
    assert_eq!(d.violations, 0);
    assert_relative_eq!(d.max_mahler_ratio, 8.0 / (PI * PI), max_relative = 1e-9);
    let (ht, b) = densities(&t, 0.5, 0.5).unwrap();
    assert!(ht < b);
    for seed in 0..5 {
        let s = random_surface(seed, Topology::Klein, 1.0, &[]).unwrap();
        assert_eq!(duran_check(&s, 6, 6).unwrap().violations, 0);
        let (ht, b) = volumes(&s, 16, 16).unwrap();
        assert!(ht.value <= b.value + ht.estimated_error + b.estimated_error);
    }
}

#[test]
fn refinement_converges() {
    let m = spherical_finsler_mobius(FRAC_PI_3, false).unwrap();
    let coarse = volume_grid(&m, VolumeKind::HolmesThompson, 16, 16).unwrap();
    let fine = volume_grid(&m, VolumeKind::HolmesThompson, 64, 64).unwrap();
    assert!((fine.value - 2.0 * PI).abs() <= (coarse.value - 2.0 * PI).abs() + 1e-12);
}
