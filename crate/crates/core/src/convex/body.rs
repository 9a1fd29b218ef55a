//! Centrally symmetric convex bodies: unit balls of Finsler tangent norms.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use super::ellipse::{self, Ellipse};
use super::polygon::{validate_support_samples, ConvexPolygon, PolygonPair};
use crate::error::{FinsysError, Result};
use crate::{Mat2, Vec2};

/// Default angular resolution when a body has no closed form.
pub const DEFAULT_SAMPLES: usize = 1024;

/// Smoothed polygon norm `(sum_i |<a_i, v>|^p)^(1/p)`.
#[derive(Clone, Debug)]
pub struct LpPolygon {
    pub normals: Vec<Vec2>,
    pub p: u32,
}

impl LpPolygon {
    pub fn new(normals: Vec<Vec2>, p: u32) -> Result<Self> {
        if normals.len() < 2 || p < 1 {
            return Err(FinsysError::InvalidBody("lp polygon needs two normals and p >= 1".into()));
        }
        let (a, b) = (normals[0], normals[1]);
        let spans = normals.iter().any(|n| (a.x * n.y - a.y * n.x).abs() > 1e-12)
            || (a.x * b.y - a.y * b.x).abs() > 1e-12;
        if !spans {
            return Err(FinsysError::InvalidBody("lp polygon normals do not span the plane".into()));
        }
        Ok(Self { normals, p })
    }

    #[inline]
    fn gauge(&self, v: Vec2) -> f64 {
        let mut s = 0.0;
        if self.p == 8 {
            for a in &self.normals {
                let t = a.dot(&v);
                let t2 = t * t;
                let t4 = t2 * t2;
                s += t4 * t4;
            }
            return s.sqrt().sqrt().sqrt();
        }
        for a in &self.normals {
            s += a.dot(&v).abs().powi(self.p as i32);
        }
        s.powf(1.0 / self.p as f64)
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// Euclidean unit disc.
    Disc,
    /// `[-1, 1]^2`, the sup-norm ball.
    Square,
    /// `|x| + |y| <= 1`.
    Diamond,
    /// `{x : x^T Q x <= 1}`.
    Ellipse(Mat2),
    /// Unit disc cut by `|x_2| <= sin(theta)`.
    TruncatedDisc(f64),
    /// Polar of the truncated disc: unit disc with two tangent caps.
    CappedDisc(f64),
    /// Polygon given by vertices or by support samples.
    Polygon(Arc<PolygonPair>, PolygonOrigin),
    LpPolygon(Arc<LpPolygon>),
    /// Gauge `sum_i w_i g_i` of a positive combination.
    Sum(Arc<[(f64, SymBody)]>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonOrigin {
    Hull,
    Sampled,
    Approximation,
}

/// Centrally symmetric convex body with the origin in its interior.
#[derive(Clone, Debug)]
pub struct SymBody {
    shape: Shape,
}

impl fmt::Display for SymBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Disc => write!(f, "disc"),
            Shape::Square => write!(f, "square"),
            Shape::Diamond => write!(f, "diamond"),
            Shape::Ellipse(q) => write!(f, "ellipse[{:.4} {:.4}; {:.4} {:.4}]", q[(0, 0)], q[(0, 1)], q[(1, 0)], q[(1, 1)]),
            Shape::TruncatedDisc(t) => write!(f, "truncated_disc(theta={t:.6})"),
            Shape::CappedDisc(t) => write!(f, "capped_disc(theta={t:.6})"),
            Shape::Polygon(p, o) => write!(f, "polygon({:?}, {} vertices)", o, p.body.len()),
            Shape::LpPolygon(l) => write!(f, "lp_polygon(p={}, {} normals)", l.p, l.normals.len()),
            Shape::Sum(parts) => write!(f, "sum({} parts)", parts.len()),
        }
    }
}

impl SymBody {
    pub fn disc() -> Self {
        Self { shape: Shape::Disc }
    }

    pub fn square() -> Self {
        Self { shape: Shape::Square }
    }

    pub fn diamond() -> Self {
        Self { shape: Shape::Diamond }
    }

    /// Ellipse `{x : x^T Q x <= 1}`; `Q` must be symmetric positive definite.
    pub fn ellipse(q: Mat2) -> Result<Self> {
        ellipse::check_spd(&q)?;
        Ok(Self { shape: Shape::Ellipse(q) })
    }

    pub fn truncated_disc(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI / 2.0) {
            return Err(FinsysError::InvalidBody(format!("truncation angle {theta} outside (0, pi/2]")));
        }
        if theta == PI / 2.0 {
            return Ok(Self::disc());
        }
        Ok(Self { shape: Shape::TruncatedDisc(theta) })
    }

    pub fn capped_disc(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI / 2.0) {
            return Err(FinsysError::InvalidBody(format!("cap angle {theta} outside (0, pi/2]")));
        }
        if theta == PI / 2.0 {
            return Ok(Self::disc());
        }
        Ok(Self { shape: Shape::CappedDisc(theta) })
    }

    /// Symmetric convex hull of the given points and their negatives.
    pub fn hull(points: &[Vec2]) -> Result<Self> {
        let p = ConvexPolygon::symmetric_hull(points)?;
        Ok(Self { shape: Shape::Polygon(Arc::new(PolygonPair::new(p)?), PolygonOrigin::Hull) })
    }

    /// Body with support values `h[k]` at angles `2 pi k / N`.
    pub fn from_support(h: &[f64]) -> Result<Self> {
        validate_support_samples(h)?;
        let p = ConvexPolygon::from_support_samples(h)?;
        Ok(Self { shape: Shape::Polygon(Arc::new(PolygonPair::new(p)?), PolygonOrigin::Sampled) })
    }

    pub fn from_polygon(p: ConvexPolygon) -> Result<Self> {
        Ok(Self { shape: Shape::Polygon(Arc::new(PolygonPair::new(p)?), PolygonOrigin::Hull) })
    }

    pub fn lp_polygon(l: LpPolygon) -> Self {
        Self { shape: Shape::LpPolygon(Arc::new(l)) }
    }

    /// Body whose gauge is `sum_i w_i * gauge_i`. Weights must be nonnegative, not all zero.
    pub fn sum(parts: Vec<(f64, SymBody)>) -> Result<Self> {
        let parts: Vec<_> = parts.into_iter().filter(|(w, _)| *w != 0.0).collect();
        if parts.is_empty() || parts.iter().any(|(w, _)| !(*w > 0.0 && w.is_finite())) {
            return Err(FinsysError::InvalidBody("sum weights must be positive".into()));
        }
        if parts.len() == 1 {
            let (w, b) = &parts[0];
            if *w == 1.0 {
                return Ok(b.clone());
            }
        }
        Ok(Self { shape: Shape::Sum(parts.into()) })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Short tag naming the representation.
    pub fn kind(&self) -> &'static str {
        match &self.shape {
            Shape::Disc => "disc",
            Shape::Square => "square",
            Shape::Diamond => "diamond",
            Shape::Ellipse(_) => "ellipse",
            Shape::TruncatedDisc(_) => "truncated_disc",
            Shape::CappedDisc(_) => "capped_disc",
            Shape::Polygon(_, PolygonOrigin::Sampled) => "sampled",
            Shape::Polygon(..) => "polygon",
            Shape::LpPolygon(_) => "lp_polygon",
            Shape::Sum(_) => "sum",
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.shape, Shape::LpPolygon(_) | Shape::Sum(_))
    }

    /// Minkowski gauge `min {t >= 0 : v in t B}`.
    #[inline]
    pub fn gauge(&self, v: Vec2) -> f64 {
        match &self.shape {
            Shape::Disc => v.norm(),
            Shape::Square => v.x.abs().max(v.y.abs()),
            Shape::Diamond => v.x.abs() + v.y.abs(),
            Shape::Ellipse(q) => quad(q, v).max(0.0).sqrt(),
            Shape::TruncatedDisc(t) => v.norm().max(v.y.abs() / t.sin()),
            Shape::CappedDisc(t) => truncated_support(*t, v),
            Shape::Polygon(p, _) => p.polar.support(v),
            Shape::LpPolygon(l) => l.gauge(v),
            Shape::Sum(parts) => parts.iter().map(|(w, b)| w * b.gauge(v)).sum(),
        }
    }

    /// Support function `max_{x in B} <x, u>`.
    pub fn support(&self, u: Vec2) -> f64 {
        match &self.shape {
            Shape::Disc => u.norm(),
            Shape::Square => u.x.abs() + u.y.abs(),
            Shape::Diamond => u.x.abs().max(u.y.abs()),
            Shape::Ellipse(q) => quad(&inv2(q), u).max(0.0).sqrt(),
            Shape::TruncatedDisc(t) => truncated_support(*t, u),
            Shape::CappedDisc(t) => u.norm().max(u.y.abs() / t.sin()),
            Shape::Polygon(p, _) => p.body.support(u),
            Shape::LpPolygon(_) | Shape::Sum(_) => match self.approximation(DEFAULT_SAMPLES) {
                Ok(p) => p.body.support(u),
                Err(_) => f64::NAN,
            },
        }
    }

    /// Support values at the `n` angles `2 pi k / n`.
    pub fn support_samples(&self, n: usize) -> Vec<f64> {
        if let Shape::LpPolygon(_) | Shape::Sum(_) = self.shape {
            if let Ok(p) = self.approximation(n.max(DEFAULT_SAMPLES)) {
                return (0..n).map(|k| p.body.support(unit(TAU * k as f64 / n as f64))).collect();
            }
        }
        (0..n).map(|k| self.support(unit(TAU * k as f64 / n as f64))).collect()
    }

    /// Lebesgue area.
    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disc => PI,
            Shape::Square => 4.0,
            Shape::Diamond => 2.0,
            Shape::Ellipse(q) => PI / q.determinant().sqrt(),
            Shape::TruncatedDisc(t) => 2.0 * t + (2.0 * t).sin(),
            Shape::CappedDisc(t) => 2.0 * t + 2.0 / t.tan(),
            Shape::Polygon(p, _) => p.body.area(),
            Shape::LpPolygon(_) | Shape::Sum(_) => self.radial_area(4 * DEFAULT_SAMPLES),
        }
    }

    /// `1/2 * integral g(u)^-2`, trapezoid rule over `n` angles.
    pub fn radial_area(&self, n: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..n {
            let g = self.gauge(unit(TAU * k as f64 / n as f64));
            s += 1.0 / (g * g);
        }
        0.5 * s * TAU / n as f64
    }

    /// Areas of the body and of its polar, both from one polygon when no closed form exists.
    pub fn area_pair(&self, n: usize) -> Result<(f64, f64)> {
        if self.is_closed_form() {
            return Ok((self.area(), self.polar()?.area()));
        }
        let p = self.approximation(n)?;
        Ok((p.body.area(), p.polar.area()))
    }

    /// Polar body `{y : <x, y> <= 1 for all x in B}`.
    pub fn polar(&self) -> Result<SymBody> {
        let shape = match &self.shape {
            Shape::Disc => Shape::Disc,
            Shape::Square => Shape::Diamond,
            Shape::Diamond => Shape::Square,
            Shape::Ellipse(q) => Shape::Ellipse(inv2(q)),
            Shape::TruncatedDisc(t) => Shape::CappedDisc(*t),
            Shape::CappedDisc(t) => Shape::TruncatedDisc(*t),
            Shape::Polygon(p, o) => {
                let o = if *o == PolygonOrigin::Approximation { *o } else { PolygonOrigin::Hull };
                Shape::Polygon(Arc::new(p.swapped()), o)
            }
            Shape::LpPolygon(_) | Shape::Sum(_) => {
                let p = self.approximation(DEFAULT_SAMPLES)?;
                Shape::Polygon(Arc::new(p.swapped()), PolygonOrigin::Approximation)
            }
        };
        Ok(SymBody { shape })
    }

    /// Boundary point in direction `u` (radial projection).
    pub fn radial_point(&self, u: Vec2) -> Vec2 {
        u / self.gauge(u)
    }

    /// Polygon approximation: exact for polygons, inscribed through
    /// `n` radial boundary points (plus known corners) otherwise.
    pub fn approximation(&self, n: usize) -> Result<PolygonPair> {
        if let Shape::Polygon(p, _) = &self.shape {
            return Ok((**p).clone());
        }
        PolygonPair::new(self.to_polygon(n)?)
    }

    pub fn to_polygon(&self, n: usize) -> Result<ConvexPolygon> {
        let corners: Vec<Vec2> = match &self.shape {
            Shape::Square => return ConvexPolygon::symmetric_hull(&[Vec2::new(1.0, 1.0), Vec2::new(1.0, -1.0)]),
            Shape::Diamond => return ConvexPolygon::symmetric_hull(&[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]),
            Shape::Polygon(p, _) => return Ok(p.body.clone()),
            Shape::TruncatedDisc(t) => vec![Vec2::new(t.cos(), t.sin()), Vec2::new(-t.cos(), t.sin())],
            Shape::CappedDisc(t) => vec![Vec2::new(0.0, 1.0 / t.sin())],
            _ => vec![],
        };
        let n = n.max(8);
        let mut pts: Vec<Vec2> = (0..n / 2).map(|k| self.radial_point(unit(TAU * k as f64 / n as f64))).collect();
        pts.extend(corners);
        ConvexPolygon::symmetric_hull(&pts)
    }

    /// Image `A B` under an invertible linear map.
    pub fn linear_image(&self, a: &Mat2) -> Result<SymBody> {
        let det = a.determinant();
        if det.abs() < 1e-300 {
            return Err(FinsysError::InvalidBody("singular linear map".into()));
        }
        let ai = a.try_inverse().ok_or_else(|| FinsysError::InvalidBody("singular linear map".into()))?;
        match &self.shape {
            Shape::Disc => SymBody::ellipse(ai.transpose() * ai),
            Shape::Ellipse(q) => SymBody::ellipse(ai.transpose() * q * ai),
            _ => {
                let p = self.to_polygon(DEFAULT_SAMPLES)?;
                let pts: Vec<Vec2> = p.vertices().iter().map(|v| a * v).collect();
                SymBody::hull(&pts)
            }
        }
    }

    /// John ellipse: the maximal-area ellipse inscribed in the body.
    pub fn john_ellipse(&self) -> Result<Ellipse> {
        self.john_ellipse_with(4096)
    }

    pub fn john_ellipse_with(&self, n: usize) -> Result<Ellipse> {
        ellipse::john(self, n)
    }

    /// Whether the body is an ellipse up to relative area tolerance `tol`.
    pub fn is_ellipse(&self, tol: f64) -> bool {
        match &self.shape {
            Shape::Disc | Shape::Ellipse(_) => true,
            _ => match self.john_ellipse_with(512) {
                Ok(e) => (self.area() - e.area()).abs() <= tol * self.area(),
                Err(_) => false,
            },
        }
    }
}

#[inline]
pub fn unit(phi: f64) -> Vec2 {
    let (s, c) = phi.sin_cos();
    Vec2::new(c, s)
}

#[inline]
fn quad(q: &Mat2, v: Vec2) -> f64 {
    q[(0, 0)] * v.x * v.x + (q[(0, 1)] + q[(1, 0)]) * v.x * v.y + q[(1, 1)] * v.y * v.y
}

pub(crate) fn inv2(q: &Mat2) -> Mat2 {
    let d = q.determinant();
    Mat2::new(q[(1, 1)] / d, -q[(0, 1)] / d, -q[(1, 0)] / d, q[(0, 0)] / d)
}

#[inline]
fn truncated_support(theta: f64, u: Vec2) -> f64 {
    let (s, c) = theta.sin_cos();
    let r = u.norm();
    if u.y.abs() <= s * r {
        r
    } else {
        u.x.abs() * c + u.y.abs() * s
    }
}

/// Hausdorff distance via support functions on `n` directions.
pub fn hausdorff(a: &SymBody, b: &SymBody, n: usize) -> f64 {
    let ha = a.support_samples(n);
    let hb = b.support_samples(n);
    ha.iter().zip(&hb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Mahler volume `area(B) * area(B°)`.
pub fn mahler_volume(b: &SymBody) -> Result<f64> {
    let (a, ap) = b.area_pair(4096)?;
    Ok(a * ap)
}
