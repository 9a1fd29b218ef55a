//! The Riemannian metric `g` of pointwise John ellipses and the chain of
//! comparisons `vol_HT(F) >= vol(g)/2 >= (sqrt 2/pi) sys(g)^2 >= (sqrt 2/pi) sys(F)^2`.

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::convex::{unit, SymBody};
use crate::error::{FinsysError, Result};
use crate::measure::{volume_grid, VolumeKind};
use crate::metric::{NormField, Surface, Tangent, Topology};
use crate::paths::{systole, ClassSpec, Graph};
use crate::Mat2;

/// Riemannian constant of the Klein bottle: `vol(g) >= (2 sqrt 2/pi) sys(g)^2`.
pub const RIEMANNIAN_KLEIN: f64 = 2.0 * SQRT_2 / PI;

/// Tabulates the John ellipse of the unit ball at the `(nx + 1) x (ny + 1)`
/// chart nodes and interpolates the quadratic forms bilinearly. Forms are
/// stored in chart coordinates, so the frame is folded in.
pub fn john_field(s: &Surface, nx: usize, ny: usize) -> Result<Surface> {
    let d = s.domain;
    let mut forms = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let (x, y) = (d.x0 + d.width() * i as f64 / nx as f64, d.y0 + d.height() * j as f64 / ny as f64);
            let t = s.field.eval(x, y);
            let e = t.body.john_ellipse().map_err(|e| FinsysError::Numerical(format!("John ellipse failed at ({x:.6}, {y:.6}): {e}")))?;
            forms.push(t.frame.transpose() * e.q * t.frame);
        }
    }
    let field = NormField::new(move |x, y| {
        let u = ((x - d.x0) / d.width() * nx as f64).clamp(0.0, nx as f64);
        let v = ((y - d.y0) / d.height() * ny as f64).clamp(0.0, ny as f64);
        let (i, j) = ((u.floor() as usize).min(nx - 1), (v.floor() as usize).min(ny - 1));
        let (a, b) = (u - i as f64, v - j as f64);
        let at = |ii: usize, jj: usize| forms[jj * (nx + 1) + ii];
        let q: Mat2 = at(i, j) * ((1.0 - a) * (1.0 - b)) + at(i + 1, j) * (a * (1.0 - b)) + at(i, j + 1) * ((1.0 - a) * b) + at(i + 1, j + 1) * (a * b);
        Tangent::flat(SymBody::ellipse(q).expect("positive combination of forms"))
    });
    Ok(Surface::new(format!("john_{}", s.name), s.topology, d, field)?.with_seams(s.y_seams.clone()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Link {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JohnReport {
    pub surface: String,
    /// Extremes of `F / sqrt(g)` over the sampled tangent vectors; the
    /// double inclusion puts them in `[1/sqrt 2, 1]`.
    pub sandwich: [f64; 2],
    pub sandwich_holds: bool,
    pub sys_f: f64,
    pub sys_g: f64,
    pub vol_ht_f: f64,
    pub vol_g: f64,
    pub links: Vec<Link>,
    /// `vol_HT(F) / sys(F)^2`.
    pub ratio: f64,
}

impl JohnReport {
    pub fn all_hold(&self) -> bool {
        self.sandwich_holds && self.links.iter().all(|l| l.holds)
    }
}

/// Builds `g` and reports each inequality of the chain. `tol` is relative.
pub fn john_lower_bound_check(s: &Surface, n: usize, tol: f64) -> Result<JohnReport> {
    if s.topology != Topology::Klein {
        return Err(FinsysError::Unsupported("the John comparison is stated for Klein bottles".into()));
    }
    let gs = john_field(s, n, n)?;
    let d = s.domain;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (d.x0 + d.width() * i as f64 / n as f64, d.y0 + d.height() * j as f64 / n as f64);
            for k in 0..64 {
                let w = unit(TAU * k as f64 / 64.0);
                let r = s.norm(x, y, w) / gs.norm(x, y, w);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    let sandwich_holds = lo >= (1.0 - tol) / SQRT_2 && hi <= 1.0 + tol;
    let sys_of = |surf: &Surface| -> Result<f64> {
        let g = Graph::matched(surf, n)?;
        systole(&g, ClassSpec::All)?.value(ClassSpec::All).ok_or_else(|| FinsysError::Numerical("no systolic loop found".into()))
    };
    let sys_f = sys_of(s)?;
    let sys_g = sys_of(&gs)?;
    let vol_ht_f = volume_grid(s, VolumeKind::HolmesThompson, n, n)?.value;
    let vol_g = volume_grid(&gs, VolumeKind::HolmesThompson, n, n)?.value;
    let link = |name: &str, lhs: f64, rhs: f64| Link { name: name.into(), lhs, rhs, holds: lhs >= rhs * (1.0 - tol) };
    let links = vec![
        link("sys(g) >= sys(F)", sys_g, sys_f),
        link("vol_HT(F) >= vol(g)/2", vol_ht_f, 0.5 * vol_g),
        link("vol(g) >= (2 sqrt2/pi) sys(g)^2", vol_g, RIEMANNIAN_KLEIN * sys_g * sys_g),
        link("vol_HT(F) >= (sqrt2/pi) sys(F)^2", vol_ht_f, SQRT_2 / PI * sys_f * sys_f),
        link("(pi/2) vol_HT(F) >= vol(g)", 0.5 * PI * vol_ht_f, vol_g),
    ];
    Ok(JohnReport {
        surface: s.name.clone(),
        sandwich: [lo, hi],
        sandwich_holds,
        sys_f,
        sys_g,
        vol_ht_f,
        vol_g,
        links,
        ratio: vol_ht_f / (sys_f * sys_f),
    })
}
