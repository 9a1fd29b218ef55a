//! Great circles of the round band `|v| <= a` in longitude-latitude
//! coordinates, the systolic cones they sweep out, and the integral behind
//! the height of the truncated-disc metric.
//!
//! Curves are built from the embedding in `R^3` by rotation, so no ODE
//! integrator sits between these baselines and the graph computations.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::convex::SymBody;
use crate::error::{FinsysError, Result};
use crate::metric::Surface;
use crate::Vec2;

// Five-point Gauss-Legendre rule on [-1, 1].
const GL_X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_W: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss-Legendre quadrature with `panels` equal panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (x, w) in GL_X.iter().zip(GL_W) {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

fn check_band(a: f64) -> Result<()> {
    if !(a > 0.0 && a < FRAC_PI_2) {
        return Err(FinsysError::Unsupported(format!("band half-width {a} outside (0, pi/2)")));
    }
    Ok(())
}

/// Half-angle of the cone of systolic directions at latitude `v`.
pub fn clairaut_angle(a: f64, v: f64) -> Result<f64> {
    check_band(a)?;
    if v.abs() > a * (1.0 + 1e-12) {
        return Err(FinsysError::Unsupported(format!("latitude {v} outside the band |v| <= {a}: the cone is empty")));
    }
    Ok((a.cos() / v.cos()).clamp(0.0, 1.0).acos().min(FRAC_PI_2))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConeProfile {
    pub a: f64,
}

impl ConeProfile {
    pub fn new(a: f64) -> Result<Self> {
        check_band(a)?;
        Ok(Self { a })
    }

    pub fn theta(&self, v: f64) -> Result<f64> {
        clairaut_angle(self.a, v)
    }

    /// `(v, theta(v))` at `n + 1` equally spaced latitudes.
    pub fn samples(&self, n: usize) -> Vec<[f64; 2]> {
        (0..=n)
            .map(|k| {
                let v = -self.a + 2.0 * self.a * k as f64 / n as f64;
                [v, clairaut_angle(self.a, v).unwrap_or(0.0)]
            })
            .collect()
    }
}

/// Great circle through the equator point of longitude `s`, leaving it at
/// angle `theta0` above the equator. Parametrized by round arclength.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GreatCircle {
    pub s: f64,
    pub theta0: f64,
}

impl GreatCircle {
    fn frame(&self) -> (Vector3<f64>, Vector3<f64>) {
        let p = Vector3::new(self.s.cos(), self.s.sin(), 0.0);
        let e_lon = Vector3::new(-self.s.sin(), self.s.cos(), 0.0);
        let t = e_lon * self.theta0.cos() + Vector3::z() * self.theta0.sin();
        (p, t)
    }

    pub fn embed(&self, tau: f64) -> Vector3<f64> {
        let (p, t) = self.frame();
        p * tau.cos() + t * tau.sin()
    }

    /// Longitude and latitude at `tau`, with the longitude continued from `s`.
    pub fn point(&self, tau: f64) -> Vec2 {
        let q = self.embed(tau);
        let v = q.z.clamp(-1.0, 1.0).asin();
        // Longitude advances monotonically for |theta0| < pi/2; unwrap against s + tau.
        let raw = q.y.atan2(q.x);
        let guess = self.s + tau;
        let u = raw + 2.0 * PI * ((guess - raw) / (2.0 * PI)).round();
        Vec2::new(u, v)
    }

    /// Derivative of `(u, v)` in `tau`.
    pub fn velocity(&self, tau: f64) -> Vec2 {
        let (p, t) = self.frame();
        let q = p * tau.cos() + t * tau.sin();
        let dq = t * tau.cos() - p * tau.sin();
        let r2 = q.x * q.x + q.y * q.y;
        let du = (q.x * dq.y - q.y * dq.x) / r2;
        let dv = dq.z / r2.sqrt();
        Vec2::new(du, dv)
    }

    pub fn max_latitude(&self) -> f64 {
        self.theta0.abs()
    }

    /// Length of the arc `tau in [t0, t1]` in the norm field of `surface`.
    pub fn length_in(&self, surface: &Surface, t0: f64, t1: f64) -> f64 {
        gauss_legendre(
            |tau| {
                let p = self.point(tau);
                surface.norm(p.x, p.y, self.velocity(tau))
            },
            t0,
            t1,
            256,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub a: f64,
    pub circle: GreatCircle,
    /// `(u, v)` samples of the full circle, kept where `|v| <= a`.
    pub points: Vec<[f64; 2]>,
    pub round_length: f64,
    pub max_latitude: f64,
}

/// Samples the great circle through `(s, 0)` at angle `theta0` with `n` segments.
pub fn trace_great_circle(s: f64, theta0: f64, a: f64, n: usize) -> Result<Trace> {
    check_band(a)?;
    if theta0.abs() > a * (1.0 + 1e-12) {
        return Err(FinsysError::Unsupported(format!("angle {theta0} leaves the band |v| <= {a}")));
    }
    let c = GreatCircle { s, theta0 };
    let n = n.max(4);
    let points = (0..=n)
        .map(|k| c.point(2.0 * PI * k as f64 / n as f64))
        .filter(|p| p.y.abs() <= a * (1.0 + 1e-12))
        .map(|p| [p.x, p.y])
        .collect();
    Ok(Trace { a, circle: c, points, round_length: 2.0 * PI, max_latitude: c.max_latitude() })
}

/// The extreme circle tangent to `v = a`, as the arc from its lowest to its
/// highest point: an arc between the two boundary circles of the band.
pub fn extreme_arc(a: f64) -> Result<(GreatCircle, f64, f64)> {
    check_band(a)?;
    Ok((GreatCircle { s: 0.0, theta0: a }, -FRAC_PI_2, FRAC_PI_2))
}

/// `int_{-a}^{a} dv / sin theta(v)`, evaluated after `sin v = sin a sin t`
/// removes the inverse square-root singularities at `v = +-a`.
pub fn height_integrand_check(a: f64) -> Result<f64> {
    check_band(a)?;
    let (sa, ca) = (a.sin(), a.cos());
    let f = |t: f64| {
        let v = (sa * t.sin()).asin();
        let dv = sa * t.cos() / v.cos();
        let cv = v.cos();
        // sin theta(v) = sqrt(cos^2 v - cos^2 a) / cos v, with the difference
        // written as a product to avoid cancellation near the boundary.
        let gap = (cv - ca) * (cv + ca);
        if gap <= 0.0 {
            return 0.0;
        }
        dv * cv / gap.sqrt()
    };
    Ok(gauss_legendre(f, -FRAC_PI_2, FRAC_PI_2, 64))
}

/// Largest deviation of the truncated-disc gauge from the piecewise form
/// `1` inside the cone `|phi| <= theta` and `|sin phi| / sin theta` outside.
pub fn cone_gauge_residual(a: f64, v: f64, samples: usize) -> Result<f64> {
    let th = clairaut_angle(a, v)?;
    if th <= 0.0 {
        return Err(FinsysError::Unsupported("the cone degenerates on the boundary".into()));
    }
    let body = SymBody::truncated_disc(th)?;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let phi = 2.0 * PI * k as f64 / samples as f64;
        let u = Vec2::new(phi.cos(), phi.sin());
        let inside = phi.sin().abs() <= th.sin();
        let expect = if inside { 1.0 } else { phi.sin().abs() / th.sin() };
        worst = worst.max((body.gauge(u) - expect).abs());
    }
    Ok(worst)
}
