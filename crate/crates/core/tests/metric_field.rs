use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use approx::assert_relative_eq;
use finsys::convex::{BodyLiteral, SymBody};
use finsys::metric::*;
use finsys::verify::random_surface;
use finsys::{FinsysError, Vec2};

fn shipped() -> Vec<Surface> {
    vec![
        flat_torus(SymBody::square(), Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0)).unwrap(),
        sup_norm_mobius(0.5).unwrap(),
        sup_norm_klein(FRAC_PI_2).unwrap(),
        spherical_finsler_mobius(FRAC_PI_4, false).unwrap(),
        spherical_finsler_mobius(FRAC_PI_4, true).unwrap(),
        glued_wide_mobius(2.0).unwrap(),
        almost_extremal_mobius(2.0, 0.1).unwrap(),
        klein_from_fa(FRAC_PI_3).unwrap(),
        mirrored_klein(&sup_norm_mobius(1.0).unwrap()).unwrap(),
        random_surface(4, Topology::Mobius, 0.75, &[]).unwrap(),
        random_surface(5, Topology::Klein, 0.5, &[SymmetryKind::Rotational]).unwrap(),
    ]
}

#[test]
fn shipped_fields_are_equivariant() {
    for s in shipped() {
        let (r, x, y) = s.equivariance_residual(48);
        assert!(r < 1e-9, "{} residual {r} at ({x}, {y})", s.name);
        s.validate().unwrap();
    }
}

#[test]
fn truncation_angle_values() {
    assert_relative_eq!(fa_angle(FRAC_PI_3, 0.0), FRAC_PI_3, epsilon = 1e-15);
    assert_relative_eq!(fa_angle(FRAC_PI_3, FRAC_PI_3), 0.0, epsilon = 1e-7);
    assert_relative_eq!(fa_angle(FRAC_PI_3, PI / 6.0), (1.0 / 3f64.sqrt()).acos(), epsilon = 1e-12);
}

#[test]
fn fa_field_is_the_truncated_disc_in_the_round_frame() {
    let a = FRAC_PI_4;
    let m = spherical_finsler_mobius(a, false).unwrap();
    for v in [-0.6, 0.0, 0.3] {
        let th = fa_angle(a, v);
        // Horizontal speed is cos v, vertical speed is 1 / sin theta.
        assert_relative_eq!(m.norm(0.1, v, Vec2::new(1.0, 0.0)), v.cos(), max_relative = 1e-12);
        assert_relative_eq!(m.norm(0.1, v, Vec2::new(0.0, 1.0)), 1.0 / th.sin(), max_relative = 1e-12);
    }
}

#[test]
fn descriptions_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let torus = SurfaceDescription::FlatTorus { body: BodyLiteral::Square, basis: [[2.0, 0.0], [0.0, 2.0]] }.build().unwrap();
    for s in shipped().into_iter().filter(|s| s.description.is_some()).chain([torus]) {
        let p = dir.path().join(format!("{}.json", s.name));
        save_surface(&s, &p).unwrap();
        let back = load_surface(&p).unwrap();
        assert_eq!(back.topology, s.topology);
        for (x, y) in [(0.11, 0.05), (0.7, -0.2)] {
            let w = Vec2::new(0.3, 0.8);
            assert_relative_eq!(back.norm(x, y, w), s.norm(x, y, w), max_relative = 1e-12);
        }
    }
}

#[test]
fn tabulated_fields_interpolate_their_nodes() {
    use BodyLiteral::{Disc, Square};
    let bodies = vec![vec![Disc, Square, Disc], vec![Square, Disc, Square], vec![Disc, Square, Disc]];
    let s = tabulated(Topology::Torus, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), &bodies).unwrap();
    let w = Vec2::new(1.0, 1.0);
    assert_relative_eq!(s.norm(0.0, 0.0, w), 2f64.sqrt(), max_relative = 1e-12);
    assert_relative_eq!(s.norm(0.5, 0.0, w), 1.0, max_relative = 1e-12);
    let mid = s.norm(0.25, 0.0, w);
    assert!(mid > 1.0 && mid < 2f64.sqrt());
    // Edges that disagree across the identification are rejected.
    let bad = vec![vec![Disc, Square]; 2];
    assert!(tabulated(Topology::Torus, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), &bad).is_err());
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(matches!(flat_torus(SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)), Err(FinsysError::InvalidSurface(_))));
    assert!(spherical_finsler_mobius(0.0, false).is_err());
    assert!(spherical_finsler_mobius(2.0, false).is_err());
    assert!(sup_norm_mobius(-1.0).is_err());
    assert!(double_mobius(&sup_norm_klein(1.0).unwrap()).is_err());
    assert!(matches!(SurfaceDescription::from_json("{ \"kind\": \"nope\" }"), Err(FinsysError::Parse(_))));
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_surface(&dir.path().join("missing.json")), Err(FinsysError::Io(_))));
}

#[test]
fn klein_bottle_symmetry_flags() {
    let k = sup_norm_klein(FRAC_PI_2).unwrap();
    let f = klein_symmetry_flags(&k, 1e-6);
    assert!(f.soul && f.soul_switching && f.rotational);
    let f = klein_symmetry_flags(&klein_from_fa(FRAC_PI_3).unwrap(), 1e-6);
    assert!(f.soul);
    for kind in [SymmetryKind::Soul, SymmetryKind::SoulSwitching, SymmetryKind::Rotational] {
        let r = random_surface(9, Topology::Klein, 0.8, &[kind]).unwrap();
        let f = klein_symmetry_flags(&r, 1e-6);
        let hit = match kind {
            SymmetryKind::Soul => f.soul,
            SymmetryKind::SoulSwitching => f.soul_switching,
            SymmetryKind::Rotational => f.rotational,
        };
        assert!(hit, "{kind:?} not detected: {f:?}");
    }
}

#[test]
fn random_surfaces_are_reproducible() {
    let a = random_surface(17, Topology::Torus, 0.5, &[]).unwrap();
    let b = random_surface(17, Topology::Torus, 0.5, &[]).unwrap();
    let w = Vec2::new(0.2, -0.9);
    assert_eq!(a.norm(0.3, 0.4, w), b.norm(0.3, 0.4, w));
    assert!(random_surface(17, Topology::Torus, 1.5, &[]).is_err());
}
