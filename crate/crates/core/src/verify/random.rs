//! Seeded random Finsler surfaces.
//!
//! The field is `sqrt(v^T Q v) + P(v)` where the quadratic form `Q` and
//! the smoothed-hexagon part `P` (weight `roughness`) vary smoothly. It
//! is averaged over the finite group generated by the deck glide and the
//! requested Klein symmetries, which makes it equivariant by construction.
//! Roughness 0 gives a Riemannian metric.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{LpPolygon, SymBody};
use crate::error::{FinsysError, Result};
use crate::metric::{NormField, Rect, Surface, SurfaceDescription, SymmetryKind, Tangent, Topology};
use crate::{Mat2, Vec2};

#[derive(Clone, Debug)]
struct Wave {
    terms: Vec<(f64, f64, f64, f64)>,
    base: f64,
}

impl Wave {
    fn sample(rng: &mut ChaCha8Rng, base: f64, amp: f64, wx: f64, wy: f64, x_modes: bool) -> Self {
        let modes: &[(f64, f64)] = if x_modes { &[(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] } else { &[(0.0, 1.0), (0.0, 2.0)] };
        let terms = modes
            .iter()
            .map(|&(k, l)| (rng.random_range(-amp..amp), k * wx, l * wy, rng.random_range(0.0..2.0 * PI)))
            .collect();
        Self { terms, base }
    }

    #[inline]
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.base + self.terms.iter().map(|&(a, kx, ly, ph)| a * (kx * x + ly * y + ph).cos()).sum::<f64>()
    }
}

/// `(x, y) -> (x + tx, ±y + ty)`, translations reduced modulo the field periods.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Affine {
    tx: f64,
    ty: f64,
    flip: bool,
}

impl Affine {
    fn then(&self, g: &Affine) -> Affine {
        let ty = if g.flip { -self.ty } else { self.ty } + g.ty;
        Affine { tx: self.tx + g.tx, ty, flip: self.flip != g.flip }
    }

    fn normalized(mut self, px: f64, py: Option<f64>) -> Self {
        self.tx = self.tx.rem_euclid(px);
        if (self.tx - px).abs() < 1e-9 * px {
            self.tx = 0.0;
        }
        if let Some(py) = py {
            self.ty = self.ty.rem_euclid(py);
            if (self.ty - py).abs() < 1e-9 * py {
                self.ty = 0.0;
            }
        }
        self
    }

    fn same(&self, o: &Affine) -> bool {
        self.flip == o.flip && (self.tx - o.tx).abs() < 1e-9 && (self.ty - o.ty).abs() < 1e-9
    }
}

fn closure(gens: &[Affine], px: f64, py: Option<f64>) -> Vec<Affine> {
    let mut out = vec![Affine { tx: 0.0, ty: 0.0, flip: false }];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let h = out[i].then(g).normalized(px, py);
            if !out.iter().any(|o| o.same(&h)) {
                out.push(h);
            }
        }
        i += 1;
        if out.len() > 64 {
            break;
        }
    }
    out
}

/// Builds the random surface for `seed`.
pub fn random_surface(seed: u64, topology: Topology, roughness: f64, symmetry: &[SymmetryKind]) -> Result<Surface> {
    if !(0.0..=1.0).contains(&roughness) {
        return Err(FinsysError::InvalidSurface("roughness must lie in [0, 1]".into()));
    }
    if !symmetry.is_empty() && topology != Topology::Klein {
        return Err(FinsysError::InvalidSurface("symmetries can only be imposed on Klein bottles".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1_d000_0000);
    let l = PI;
    let half = match topology {
        Topology::Torus | Topology::Cylinder => PI * rng.random_range(0.3..0.8),
        Topology::Mobius => PI * rng.random_range(0.25..0.75),
        Topology::Klein => PI * rng.random_range(0.3..0.7),
        _ => return Err(FinsysError::InvalidSurface(format!("random surfaces are not available for {topology}"))),
    };
    let domain = Rect::new(0.0, l, -half, half)?;
    let glide = matches!(topology, Topology::Mobius | Topology::Klein);
    let px = if glide { 2.0 * l } else { l };
    let py = match topology {
        Topology::Torus | Topology::Klein => Some(2.0 * half),
        _ => None,
    };
    let wx = 2.0 * PI / px;
    let wy = match py {
        Some(p) => 2.0 * PI / p,
        None => PI / (2.0 * half),
    };
    let rotational = symmetry.contains(&SymmetryKind::Rotational);
    let x_modes = !rotational;
    let a0 = rng.random_range(0.0..PI);
    let alpha = Wave::sample(&mut rng, a0, 0.5, wx, wy, x_modes);
    let s0 = rng.random_range(-0.35..0.35);
    let stretch = Wave::sample(&mut rng, s0, 0.2, wx, wy, x_modes);
    let scale = Wave::sample(&mut rng, 0.0, 0.25, wx, wy, x_modes);
    let rho = Wave::sample(&mut rng, 0.0, 1.2, wx, wy, x_modes);
    let beta: f64 = rng.random_range(0.0..PI);
    let normals: Vec<Vec2> = (0..3).map(|i| crate::convex::unit(beta + i as f64 * PI / 3.0)).collect();
    let hex = LpPolygon::new(normals.clone(), 8)?;
    let hex_flipped = LpPolygon::new(normals.iter().map(|a| Vec2::new(a.x, -a.y)).collect(), 8)?;

    let mut gens = Vec::new();
    if glide {
        gens.push(Affine { tx: l, ty: 0.0, flip: true });
    }
    if symmetry.contains(&SymmetryKind::Soul) {
        gens.push(Affine { tx: 0.0, ty: 0.0, flip: true });
    }
    if symmetry.contains(&SymmetryKind::SoulSwitching) {
        gens.push(Affine { tx: 0.0, ty: half, flip: true });
    }
    let group = closure(&gens, px, py);
    let ng = group.len() as f64;

    let field = NormField::new(move |x, y| {
        let mut q = Mat2::zeros();
        let (mut w_plain, mut w_flip) = (0.0, 0.0);
        for g in &group {
            let gx = x + g.tx;
            let gy = if g.flip { -y } else { y } + g.ty;
            let a = alpha.eval(gx, gy);
            let s = stretch.eval(gx, gy);
            let e = scale.eval(gx, gy).exp();
            let r = roughness * 0.5 * (1.0 + rho.eval(gx, gy).tanh());
            let (sn, cs) = a.sin_cos();
            let (l1, l2) = ((2.0 * s).exp() * e * e, (-2.0 * s).exp() * e * e);
            let mut qg = Mat2::new(
                l1 * cs * cs + l2 * sn * sn,
                (l1 - l2) * cs * sn,
                (l1 - l2) * cs * sn,
                l1 * sn * sn + l2 * cs * cs,
            );
            if g.flip {
                qg[(0, 1)] = -qg[(0, 1)];
                qg[(1, 0)] = -qg[(1, 0)];
            }
            q += qg * (1.0 - r) * (1.0 - r);
            if g.flip {
                w_flip += r * e;
            } else {
                w_plain += r * e;
            }
        }
        q /= ng;
        let mut parts = vec![(1.0, SymBody::ellipse(q).expect("positive combination of forms"))];
        if w_plain > 0.0 {
            parts.push((w_plain / ng, SymBody::lp_polygon(hex.clone())));
        }
        if w_flip > 0.0 {
            parts.push((w_flip / ng, SymBody::lp_polygon(hex_flipped.clone())));
        }
        Tangent::flat(SymBody::sum(parts).expect("positive weights"))
    });
    let s = Surface::new(format!("random_{topology}_{seed}"), topology, domain, field)?.with_description(SurfaceDescription::Random {
        topology,
        seed,
        roughness,
        symmetry: symmetry.to_vec(),
    });
    Ok(s)
}
