//! The three symmetries of Klein bottles: soul reflection, soul switch and rotation.

use serde::{Deserialize, Serialize};

use super::surface::Surface;
use crate::convex::unit;
use crate::{Mat2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    /// `(x, y) -> (x, -y)`: reflection fixing each soul.
    Soul,
    /// `(x, y) -> (x, b - y)`: exchanges the two souls.
    SoulSwitching,
    /// `(x, y) -> (x + t, y)` for every `t`.
    Rotational,
}

impl std::str::FromStr for SymmetryKind {
    type Err = crate::FinsysError;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "soul" => Ok(Self::Soul),
            "soul_switching" | "soul-switching" => Ok(Self::SoulSwitching),
            "rotational" => Ok(Self::Rotational),
            _ => Err(crate::FinsysError::InvalidSurface(format!("unknown symmetry `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFlags {
    pub soul: bool,
    pub soul_switching: bool,
    pub rotational: bool,
    /// Largest relative mismatch seen for each map, in the order above.
    pub residuals: [f64; 3],
}

impl SymmetryFlags {
    pub fn any(&self) -> bool {
        self.soul || self.soul_switching || self.rotational
    }
}

/// Relative mismatch `|F_{φ(p)}(dφ w) - F_p(w)|` over a deterministic sample.
fn residual(s: &Surface, map: impl Fn(Vec2, usize) -> Vec2, lin: Mat2, samples: usize) -> f64 {
    let d = s.domain;
    let mut worst: f64 = 0.0;
    let golden = 0.618_033_988_749_895;
    for i in 0..samples {
        let fx = (i as f64 * golden).fract();
        let fy = ((i as f64 + 0.5) / samples as f64).fract();
        let p = Vec2::new(d.x0 + fx * d.width(), d.y0 + fy * d.height());
        let q = map(p, i);
        let (Some(tp), Some(tq)) = (s.tangent(p.x, p.y), s.tangent(q.x, q.y)) else { continue };
        for k in 0..12 {
            let w = unit(std::f64::consts::PI * (k as f64 + 0.25) / 12.0);
            let a = tp.norm(w);
            let b = tq.norm(lin * w);
            worst = worst.max((a - b).abs() / a.max(b));
        }
    }
    worst
}

/// Tests the three symmetries on a sample of points and directions.
pub fn klein_symmetry_flags(s: &Surface, tol: f64) -> SymmetryFlags {
    let d = s.domain;
    let c = d.y0 + d.y1;
    let half = 0.5 * d.height();
    let refl = Mat2::new(1.0, 0.0, 0.0, -1.0);
    let n = 257;
    let r_soul = residual(s, |p, _| Vec2::new(p.x, c - p.y), refl, n);
    let r_switch = residual(s, |p, _| Vec2::new(p.x, c + half - p.y), refl, n);
    let r_rot = residual(
        s,
        |p, i| Vec2::new(p.x + d.width() * ((i as f64 * 0.754_877_666) % 1.0), p.y),
        Mat2::identity(),
        n,
    );
    SymmetryFlags {
        soul: r_soul <= tol,
        soul_switching: s.vertical && r_switch <= tol,
        rotational: r_rot <= tol,
        residuals: [r_soul, r_switch, r_rot],
    }
}
