//! Origin-centred ellipses and the John (maximal inscribed) ellipse.

use std::f64::consts::{PI, TAU};

use super::body::{inv2, unit, SymBody};
use crate::error::{FinsysError, Result};
use crate::{Mat2, Vec2};

/// `{x : x^T Q x <= 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub q: Mat2,
}

pub(crate) fn check_spd(q: &Mat2) -> Result<()> {
    let ok = q.iter().all(|v| v.is_finite())
        && (q[(0, 1)] - q[(1, 0)]).abs() <= 1e-12 * (q[(0, 0)].abs() + q[(1, 1)].abs())
        && q[(0, 0)] > 0.0
        && q.determinant() > 0.0;
    if ok {
        Ok(())
    } else {
        Err(FinsysError::InvalidBody("ellipse form is not symmetric positive definite".into()))
    }
}

impl Ellipse {
    pub fn new(q: Mat2) -> Result<Self> {
        check_spd(&q)?;
        Ok(Self { q })
    }

    pub fn gauge(&self, v: Vec2) -> f64 {
        (v.dot(&(self.q * v))).max(0.0).sqrt()
    }

    pub fn area(&self) -> f64 {
        PI / self.q.determinant().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { q: self.q / (s * s) }
    }

    pub fn body(&self) -> SymBody {
        SymBody::ellipse(self.q).expect("ellipse form checked at construction")
    }

    /// `n` points on the boundary.
    pub fn boundary(&self, n: usize) -> Vec<Vec2> {
        (0..n)
            .map(|k| {
                let u = unit(TAU * k as f64 / n as f64);
                u / self.gauge(u)
            })
            .collect()
    }
}

/// Minimum-volume origin-centred ellipse containing `pts` (Khachiyan
/// iterations with away steps). Returns the form `M` with `x^T M x <= 1`.
pub fn mvee_centered(pts: &[Vec2], tol: f64) -> Result<Mat2> {
    let m = pts.len();
    if m < 2 {
        return Err(FinsysError::Numerical("too few points for an ellipse".into()));
    }
    let n = 2.0;
    let mut u = vec![1.0 / m as f64; m];
    let mut kappa = vec![0.0; m];
    for _ in 0..200_000 {
        let mut x = Mat2::zeros();
        for (w, p) in u.iter().zip(pts) {
            x += *w * p * p.transpose();
        }
        if x.determinant() <= 0.0 {
            return Err(FinsysError::Numerical("points do not span the plane".into()));
        }
        let xi = inv2(&x);
        let (mut jmax, mut kmin) = (0usize, usize::MAX);
        for i in 0..m {
            kappa[i] = pts[i].dot(&(xi * pts[i]));
            if kappa[i] > kappa[jmax] {
                jmax = i;
            }
            if u[i] > 0.0 && (kmin == usize::MAX || kappa[i] < kappa[kmin]) {
                kmin = i;
            }
        }
        let up = kappa[jmax] - n;
        let down = if kmin == usize::MAX { 0.0 } else { n - kappa[kmin] };
        if up <= n * tol && down <= n * tol {
            let s = kappa[jmax] / n;
            return Ok(xi / (n * s));
        }
        if up >= down {
            let a = up / (n * (kappa[jmax] - 1.0));
            for w in u.iter_mut() {
                *w *= 1.0 - a;
            }
            u[jmax] += a;
        } else {
            let k = kmin;
            let mut a = (kappa[k] - n) / (n * (kappa[k] - 1.0));
            let lim = -u[k] / (1.0 - u[k]);
            let drop = a <= lim;
            if drop {
                a = lim;
            }
            for w in u.iter_mut() {
                *w *= 1.0 - a;
            }
            u[k] += a;
            if drop {
                u[k] = 0.0;
            }
        }
    }
    Err(FinsysError::Numerical("ellipse iteration did not converge".into()))
}

/// Maximizes `log det P` subject to `v^T P v <= 1` for every `v` in `pts`,
/// by a log-barrier path with damped Newton steps in the three entries of
/// `P`. `{x : x^T P^-1 x <= 1}` is then the largest centred ellipse inside
/// the body whose polar has the points `pts` as vertices.
pub fn max_det_form(pts: &[Vec2]) -> Result<Mat2> {
    let rmax = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if pts.len() < 2 || !(rmax > 0.0 && rmax.is_finite()) {
        return Err(FinsysError::Numerical("too few points for an ellipse".into()));
    }
    let g: Vec<[f64; 3]> = pts.iter().map(|v| [v.x * v.x, 2.0 * v.x * v.y, v.y * v.y]).collect();
    let form = |p: &[f64; 3]| Mat2::new(p[0], p[1], p[1], p[2]);
    let slack = |p: &[f64; 3], k: usize| 1.0 - (g[k][0] * p[0] + g[k][1] * p[1] + g[k][2] * p[2]);
    let objective = |p: &[f64; 3], mu: f64| -> f64 {
        let d = p[0] * p[2] - p[1] * p[1];
        if d <= 0.0 || p[0] <= 0.0 {
            return f64::INFINITY;
        }
        let mut b = 0.0;
        for k in 0..g.len() {
            let c = slack(p, k);
            if c <= 0.0 {
                return f64::INFINITY;
            }
            b += c.ln();
        }
        -d.ln() - mu * b
    };
    let r0 = 0.5 / rmax;
    let mut p = [r0 * r0, 0.0, r0 * r0];
    let basis = [Mat2::new(1.0, 0.0, 0.0, 0.0), Mat2::new(0.0, 1.0, 1.0, 0.0), Mat2::new(0.0, 0.0, 0.0, 1.0)];
    let mut mu = 1.0 / g.len() as f64;
    while mu > 1e-14 / g.len() as f64 {
        for _ in 0..100 {
            let pi = inv2(&form(&p));
            let mut grad = nalgebra::Vector3::zeros();
            let mut hess = nalgebra::Matrix3::zeros();
            for a in 0..3 {
                grad[a] = -(pi * basis[a]).trace();
                for b in 0..3 {
                    hess[(a, b)] = (pi * basis[a] * pi * basis[b]).trace();
                }
            }
            for (k, gk) in g.iter().enumerate() {
                let c = slack(&p, k);
                let gv = nalgebra::Vector3::new(gk[0], gk[1], gk[2]);
                grad += gv * (mu / c);
                hess += gv * gv.transpose() * (mu / (c * c));
            }
            let Some(step) = hess.lu().solve(&(-grad)) else {
                return Err(FinsysError::Numerical("singular Newton system in the John iteration".into()));
            };
            let decrement = -grad.dot(&step);
            if decrement < 1e-12 {
                break;
            }
            let f0 = objective(&p, mu);
            let mut t = 1.0;
            loop {
                let q = [p[0] + t * step[0], p[1] + t * step[1], p[2] + t * step[2]];
                if objective(&q, mu) <= f0 - 0.25 * t * decrement {
                    p = q;
                    break;
                }
                t *= 0.5;
                if t < 1e-20 {
                    return Err(FinsysError::Numerical("line search stalled in the John iteration".into()));
                }
            }
        }
        mu *= 0.1;
    }
    Ok(form(&p))
}

/// John ellipse of `c`, from the facets of a polygonal approximation of `c`
/// (the vertices of its polar). Curved boundaries are sampled at `n`
/// directions; the result is then shrunk, if needed, so that it lies
/// inside `c` on a fine boundary mesh.
pub(crate) fn john(c: &SymBody, n: usize) -> Result<Ellipse> {
    use super::body::Shape;
    match c.shape() {
        Shape::Disc => return Ellipse::new(Mat2::identity()),
        Shape::Ellipse(q) => return Ellipse::new(*q),
        _ => {}
    }
    let polar = c.polar()?;
    let pts: Vec<Vec2> = polar.to_polygon(n)?.vertices().to_vec();
    // Symmetric pairs give the same constraint; keep one of each.
    let half: Vec<Vec2> = pts.iter().copied().filter(|v| v.y > 0.0 || (v.y == 0.0 && v.x > 0.0)).collect();
    let p = max_det_form(if half.len() >= 2 { &half } else { &pts })?;
    let e = Ellipse::new(sym(inv2(&p)))?;
    let worst = e.boundary(4 * n.max(256)).iter().map(|p| c.gauge(*p)).fold(0.0, f64::max);
    Ok(if worst > 1.0 { e.scaled(1.0 / worst) } else { e })
}

fn sym(q: Mat2) -> Mat2 {
    let o = 0.5 * (q[(0, 1)] + q[(1, 0)]);
    Mat2::new(q[(0, 0)], o, o, q[(1, 1)])
}

/// Maximal `t` with `t E ⊂ C` and minimal `s` with `C ⊂ s E`, on `n` directions.
pub fn inclusion_factors(e: &Ellipse, c: &SymBody, n: usize) -> (f64, f64) {
    let mut inner = f64::INFINITY;
    let mut outer: f64 = 0.0;
    for k in 0..n {
        let u = unit(TAU * k as f64 / n as f64);
        let r = e.gauge(u) / c.gauge(u);
        inner = inner.min(r);
        outer = outer.max(r);
    }
    (inner, outer)
}
