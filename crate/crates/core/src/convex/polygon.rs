//! Centrally symmetric convex polygons with exact polars.

use std::f64::consts::TAU;

use crate::error::{FinsysError, Result};
use crate::Vec2;

/// Symmetric convex polygon, vertices counter-clockwise, no collinear triples.
#[derive(Clone, Debug)]
pub struct ConvexPolygon {
    verts: Vec<Vec2>,
    /// Outward normal angle of edge `i -> i+1`, unwrapped ascending.
    normal_angles: Vec<f64>,
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

impl ConvexPolygon {
    /// Convex hull of `points ∪ -points`.
    pub fn symmetric_hull(points: &[Vec2]) -> Result<Self> {
        let mut pts: Vec<Vec2> = Vec::with_capacity(2 * points.len());
        for p in points {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(FinsysError::InvalidBody("non-finite point".into()));
            }
            pts.push(*p);
            pts.push(-*p);
        }
        let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if scale <= 0.0 {
            return Err(FinsysError::InvalidBody("degenerate point set".into()));
        }
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-14 * scale);
        let eps = 1e-13 * scale * scale;
        let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() + 1);
        for &p in pts.iter() {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        let lower = hull.len() + 1;
        for &p in pts.iter().rev().skip(1) {
            while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        Self::from_ccw(hull)
    }

    fn from_ccw(verts: Vec<Vec2>) -> Result<Self> {
        let m = verts.len();
        if m < 4 {
            return Err(FinsysError::InvalidBody(format!(
                "polygon has {m} vertices, expected a two-dimensional body"
            )));
        }
        let mut normal_angles = Vec::with_capacity(m);
        for i in 0..m {
            let e = verts[(i + 1) % m] - verts[i];
            let c = verts[i].x * e.y - verts[i].y * e.x;
            if c <= 0.0 {
                return Err(FinsysError::InvalidBody("origin not interior".into()));
            }
            let mut a = (-e.x).atan2(e.y);
            if let Some(&prev) = normal_angles.last() {
                while a < prev {
                    a += TAU;
                }
            }
            normal_angles.push(a);
        }
        Ok(Self { verts, normal_angles })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Support function `max_{x in P} <x, u>`.
    pub fn support(&self, u: Vec2) -> f64 {
        let m = self.verts.len();
        if m <= 16 {
            return self.verts.iter().map(|v| v.dot(&u)).fold(f64::NEG_INFINITY, f64::max);
        }
        if u.x == 0.0 && u.y == 0.0 {
            return 0.0;
        }
        let a0 = self.normal_angles[0];
        let phi = a0 + (u.y.atan2(u.x) - a0).rem_euclid(TAU);
        let k = self.normal_angles.partition_point(|&a| a <= phi);
        let i = k % m;
        let d0 = self.verts[i].dot(&u);
        let d1 = self.verts[(i + 1) % m].dot(&u);
        let d2 = self.verts[(i + m - 1) % m].dot(&u);
        d0.max(d1).max(d2)
    }

    pub fn area(&self) -> f64 {
        let m = self.verts.len();
        let mut s = 0.0;
        for i in 0..m {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % m];
            s += a.x * b.y - a.y * b.x;
        }
        0.5 * s
    }

    /// Exact polar `{y : <x, y> <= 1 for all x in P}`.
    pub fn polar(&self) -> Result<Self> {
        let m = self.verts.len();
        let mut pts = Vec::with_capacity(m);
        for i in 0..m {
            let a = self.verts[i];
            let e = self.verts[(i + 1) % m] - a;
            let n = Vec2::new(e.y, -e.x);
            let c = n.dot(&a);
            pts.push(n / c);
        }
        Self::symmetric_hull(&pts)
    }

    /// Polygon with given support values at angles `2 pi k / n`.
    pub fn from_support_samples(h: &[f64]) -> Result<Self> {
        let n = h.len();
        let mut pts = Vec::with_capacity(n);
        for k in 0..n {
            let t0 = TAU * k as f64 / n as f64;
            let t1 = TAU * ((k + 1) % n) as f64 / n as f64;
            let (s0, c0) = t0.sin_cos();
            let (s1, c1) = t1.sin_cos();
            let det = c0 * s1 - s0 * c1;
            let x = (h[k] * s1 - h[(k + 1) % n] * s0) / det;
            let y = (c0 * h[(k + 1) % n] - c1 * h[k]) / det;
            pts.push(Vec2::new(x, y));
        }
        Self::symmetric_hull(&pts)
    }

    /// Gauge `min {t : x in t P}`, evaluated by scanning edges.
    pub fn gauge_slow(&self, x: Vec2) -> f64 {
        let m = self.verts.len();
        let mut g: f64 = 0.0;
        for i in 0..m {
            let a = self.verts[i];
            let e = self.verts[(i + 1) % m] - a;
            let n = Vec2::new(e.y, -e.x);
            g = g.max(n.dot(&x) / n.dot(&a));
        }
        g
    }
}

/// A polygon together with its polar, for O(log m) gauge and support queries.
#[derive(Clone, Debug)]
pub struct PolygonPair {
    pub body: ConvexPolygon,
    pub polar: ConvexPolygon,
}

impl PolygonPair {
    pub fn new(body: ConvexPolygon) -> Result<Self> {
        let polar = body.polar()?;
        Ok(Self { body, polar })
    }

    pub fn swapped(&self) -> Self {
        Self { body: self.polar.clone(), polar: self.body.clone() }
    }
}

/// Validates uniform-angle support samples: finite, positive, symmetric, convex.
pub fn validate_support_samples(h: &[f64]) -> Result<()> {
    let n = h.len();
    if n < 8 || n % 2 != 0 {
        return Err(FinsysError::InvalidBody(format!("need an even number >= 8 of samples, got {n}")));
    }
    let hmax = h.iter().cloned().fold(0.0, f64::max);
    for (k, &v) in h.iter().enumerate() {
        if !v.is_finite() || v <= 0.0 {
            return Err(FinsysError::InvalidBody(format!("support sample {k} = {v} is not positive")));
        }
        if (v - h[(k + n / 2) % n]).abs() > 1e-9 * hmax {
            return Err(FinsysError::InvalidBody(format!("support sample {k} breaks central symmetry")));
        }
    }
    let c = (TAU / n as f64).cos();
    for k in 0..n {
        let r = h[(k + n - 1) % n] + h[(k + 1) % n] - 2.0 * c * h[k];
        if r < -1e-9 * hmax {
            return Err(FinsysError::InvalidBody(format!(
                "support samples are not convex at index {k} (residual {r:.3e})"
            )));
        }
    }
    Ok(())
}
