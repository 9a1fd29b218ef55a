//! Quotient surfaces: a rectangular chart, a norm field on it, and a deck
//! group generated by a horizontal translation or glide and, optionally,
//! a vertical translation.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::description::SurfaceDescription;
use crate::convex::SymBody;
use crate::error::{FinsysError, Result};
use crate::{Mat2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Bounded rectangle without identifications.
    Plane,
    Torus,
    Cylinder,
    Mobius,
    Klein,
    /// Möbius band with its boundary collapsed to a point.
    ProjectiveFromCollapse,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Topology::Plane => "plane",
            Topology::Torus => "torus",
            Topology::Cylinder => "cylinder",
            Topology::Mobius => "mobius",
            Topology::Klein => "klein",
            Topology::ProjectiveFromCollapse => "projective_from_collapse",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Topology {
    type Err = FinsysError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plane" => Topology::Plane,
            "torus" => Topology::Torus,
            "cylinder" => Topology::Cylinder,
            "mobius" => Topology::Mobius,
            "klein" => Topology::Klein,
            "projective_from_collapse" | "rp2" => Topology::ProjectiveFromCollapse,
            _ => return Err(FinsysError::InvalidSurface(format!("unknown topology `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(FinsysError::InvalidSurface("degenerate chart rectangle".into()));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// Affine chart isometry `(x, y) -> (x + tx, ±y + ty)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub tx: f64,
    pub ty: f64,
    pub flip: bool,
}

impl Isometry {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x + self.tx, if self.flip { -p.y } else { p.y } + self.ty)
    }

    pub fn linear(&self) -> Mat2 {
        Mat2::new(1.0, 0.0, 0.0, if self.flip { -1.0 } else { 1.0 })
    }
}

/// Tangent norm at a point: `F(w) = gauge_body(frame * w)` for chart vectors `w`.
#[derive(Clone, Debug)]
pub struct Tangent {
    pub body: SymBody,
    pub frame: Mat2,
}

impl Tangent {
    pub fn new(body: SymBody, frame: Mat2) -> Self {
        Self { body, frame }
    }

    pub fn flat(body: SymBody) -> Self {
        Self { body, frame: Mat2::identity() }
    }

    #[inline]
    pub fn norm(&self, w: Vec2) -> f64 {
        self.body.gauge(self.frame * w)
    }

    /// Chart-area scale `|det frame|`.
    pub fn jacobian(&self) -> f64 {
        self.frame.determinant().abs()
    }
}

type FieldFn = dyn Fn(f64, f64) -> Tangent + Send + Sync;

/// Continuous field of tangent norms on the closed chart rectangle.
#[derive(Clone)]
pub struct NormField {
    f: Arc<FieldFn>,
}

impl fmt::Debug for NormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NormField")
    }
}

impl NormField {
    pub fn new(f: impl Fn(f64, f64) -> Tangent + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn constant(t: Tangent) -> Self {
        Self::new(move |_, _| t.clone())
    }

    /// Value at a chart point of the fundamental rectangle.
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> Tangent {
        (self.f)(x, y)
    }
}

/// Deck element `V^m H^k`: `H(x, y) = (x + L, σ(y))`, `V(x, y) = (x, y + P)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub k: i64,
    pub m: i64,
}

/// A Finsler surface presented as a quotient of a chart rectangle.
#[derive(Clone, Debug)]
pub struct Surface {
    pub name: String,
    pub topology: Topology,
    pub domain: Rect,
    /// Horizontal generator reverses orientation: `y -> y0 + y1 - y`.
    pub glide: bool,
    /// Vertical translation by the domain height is a generator.
    pub vertical: bool,
    /// Horizontal translation by the domain width is a generator (false only for the plane).
    pub horizontal: bool,
    /// Horizontal lines where the field is not smooth; used to align quadrature.
    pub y_seams: Vec<f64>,
    pub field: NormField,
    pub description: Option<SurfaceDescription>,
}

impl Surface {
    pub fn new(name: impl Into<String>, topology: Topology, domain: Rect, field: NormField) -> Result<Self> {
        let (horizontal, glide, vertical) = match topology {
            Topology::Plane => (false, false, false),
            Topology::Torus => (true, false, true),
            Topology::Cylinder => (true, false, false),
            Topology::Mobius => (true, true, false),
            Topology::Klein => (true, true, true),
            Topology::ProjectiveFromCollapse => {
                return Err(FinsysError::InvalidSurface(
                    "projective planes are built by collapsing the boundary of a Möbius band".into(),
                ))
            }
        };
        Ok(Self {
            name: name.into(),
            topology,
            domain,
            glide,
            vertical,
            horizontal,
            y_seams: Vec::new(),
            field,
            description: None,
        })
    }

    pub fn with_seams(mut self, seams: Vec<f64>) -> Self {
        self.y_seams = seams;
        self
    }

    pub fn with_description(mut self, d: SurfaceDescription) -> Self {
        self.description = Some(d);
        self
    }

    pub fn has_boundary(&self) -> bool {
        !self.vertical
    }

    pub fn is_orientable(&self) -> bool {
        !self.glide
    }

    /// Generators as chart isometries.
    pub fn generators(&self) -> Vec<Isometry> {
        let d = &self.domain;
        let mut g = Vec::new();
        if self.horizontal {
            g.push(Isometry { tx: d.width(), ty: if self.glide { d.y0 + d.y1 } else { 0.0 }, flip: self.glide });
        }
        if self.vertical {
            g.push(Isometry { tx: 0.0, ty: d.height(), flip: false });
        }
        g
    }

    pub fn element_flips(&self, e: Element) -> bool {
        self.glide && e.k.rem_euclid(2) == 1
    }

    /// Action of a deck element on a chart point.
    pub fn act(&self, e: Element, p: Vec2) -> Vec2 {
        let d = &self.domain;
        let y = if self.element_flips(e) { d.y0 + d.y1 - p.y } else { p.y };
        Vec2::new(p.x + e.k as f64 * d.width(), y + e.m as f64 * d.height())
    }

    /// Reduces a cover point into the fundamental rectangle. Returns the
    /// reduced point and the linear part of the reducing deck map, or
    /// `None` outside the cover (beyond a boundary).
    pub fn reduce(&self, p: Vec2) -> Option<(Vec2, bool)> {
        let d = &self.domain;
        let (mut x, mut y, mut flip) = (p.x, p.y, false);
        if self.horizontal {
            let k = ((x - d.x0) / d.width()).floor();
            x -= k * d.width();
            if self.glide && (k as i64).rem_euclid(2) == 1 {
                y = d.y0 + d.y1 - y;
                flip = true;
            }
        } else if x < d.x0 - 1e-12 * d.width() || x > d.x1 + 1e-12 * d.width() {
            return None;
        }
        if self.vertical {
            let m = ((y - d.y0) / d.height()).floor();
            y -= m * d.height();
        } else if y < d.y0 - 1e-12 * d.height() || y > d.y1 + 1e-12 * d.height() {
            return None;
        }
        Some((Vec2::new(x.clamp(d.x0, d.x1), y.clamp(d.y0, d.y1)), flip))
    }

    /// Tangent norm at a cover point.
    #[inline]
    pub fn tangent(&self, x: f64, y: f64) -> Option<Tangent> {
        let (q, flip) = self.reduce(Vec2::new(x, y))?;
        let mut t = self.field.eval(q.x, q.y);
        if flip {
            t.frame = t.frame * Mat2::new(1.0, 0.0, 0.0, -1.0);
        }
        Some(t)
    }

    /// Norm of chart vector `w` at cover point `(x, y)`.
    #[inline]
    pub fn norm(&self, x: f64, y: f64, w: Vec2) -> f64 {
        match self.tangent(x, y) {
            Some(t) => t.norm(w),
            None => f64::INFINITY,
        }
    }

    /// Largest relative mismatch of the field across the identified edges
    /// of the chart, over `samples` points and 16 directions each.
    pub fn equivariance_residual(&self, samples: usize) -> (f64, f64, f64) {
        let d = &self.domain;
        let mut worst = (0.0, d.x0, d.y0);
        let dirs: Vec<Vec2> = (0..16).map(|k| crate::convex::unit(std::f64::consts::PI * k as f64 / 16.0)).collect();
        let mut check = |a: Vec2, b: Vec2, lin: Mat2| {
            let ta = self.field.eval(a.x, a.y);
            let tb = self.field.eval(b.x, b.y);
            for w in &dirs {
                let fa = ta.norm(*w);
                let fb = tb.norm(lin * w);
                let r = (fa - fb).abs() / fa.abs().max(fb.abs()).max(1e-300);
                if r > worst.0 {
                    worst = (r, a.x, a.y);
                }
            }
        };
        for i in 0..=samples {
            let t = i as f64 / samples as f64;
            if self.horizontal {
                let y = d.y0 + t * d.height();
                let yb = if self.glide { d.y0 + d.y1 - y } else { y };
                let lin = if self.glide { Mat2::new(1.0, 0.0, 0.0, -1.0) } else { Mat2::identity() };
                check(Vec2::new(d.x0, y), Vec2::new(d.x1, yb), lin);
            }
            if self.vertical {
                let x = d.x0 + t * d.width();
                check(Vec2::new(x, d.y0), Vec2::new(x, d.y1), Mat2::identity());
            }
        }
        worst
    }

    /// Rejects fields that do not glue continuously across the identifications.
    pub fn validate(&self) -> Result<()> {
        let (r, x, y) = self.equivariance_residual(64);
        if r > 1e-6 {
            return Err(FinsysError::NotEquivariant { residual: r, x, y });
        }
        for (i, j) in [(0.3, 0.4), (0.7, 0.2), (0.5, 0.5)] {
            let d = &self.domain;
            let t = self.field.eval(d.x0 + i * d.width(), d.y0 + j * d.height());
            if t.jacobian() <= 0.0 || !t.jacobian().is_finite() {
                return Err(FinsysError::InvalidSurface("degenerate frame in the norm field".into()));
            }
        }
        Ok(())
    }

    /// Parameters `t` in `(0, 1)` where the segment `p -> q` meets a lift of a seam.
    pub fn seam_crossings(&self, p: Vec2, q: Vec2) -> Vec<f64> {
        if self.y_seams.is_empty() || p.y == q.y {
            return Vec::new();
        }
        let d = &self.domain;
        let (lo, hi) = (p.y.min(q.y), p.y.max(q.y));
        let mut ts = Vec::new();
        let mut push = |y: f64| {
            if y > lo && y < hi {
                ts.push((y - p.y) / (q.y - p.y));
            }
        };
        for &sy in &self.y_seams {
            let images = [sy, d.y0 + d.y1 - sy];
            for y in images {
                if self.vertical {
                    let m0 = ((lo - y) / d.height()).floor() as i64;
                    let m1 = ((hi - y) / d.height()).ceil() as i64;
                    for m in m0..=m1 {
                        push(y + m as f64 * d.height());
                    }
                } else {
                    push(y);
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        ts
    }

    /// Lower bound for `F(w) / |w|` (Euclidean chart norm), sampled.
    pub fn min_stretch(&self) -> f64 {
        let d = &self.domain;
        let mut c = f64::INFINITY;
        let n = 24;
        for i in 0..=n {
            for j in 0..=n {
                let t = self.field.eval(d.x0 + d.width() * i as f64 / n as f64, d.y0 + d.height() * j as f64 / n as f64);
                for k in 0..32 {
                    let w = crate::convex::unit(std::f64::consts::PI * k as f64 / 32.0);
                    c = c.min(t.norm(w));
                }
            }
        }
        0.9 * c
    }
}
