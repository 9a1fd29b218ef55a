//! The model surfaces: flat tori, sup-norm bands and Klein bottles, the
//! spherical Finsler Möbius bands and the glued extremal families.

use std::f64::consts::PI;

use super::description::SurfaceDescription;
use super::surface::{NormField, Rect, Surface, Tangent, Topology};
use crate::convex::{BodyLiteral, SymBody};
use crate::error::{FinsysError, Result};
use crate::{Mat2, Vec2};

/// Default lower clamp for the truncation angle near the band boundary.
pub const THETA_FLOOR: f64 = 1e-6;

fn diag(a: f64, b: f64) -> Mat2 {
    Mat2::new(a, 0.0, 0.0, b)
}

/// Lagrange-Gauss reduction of a lattice basis.
pub fn gauss_reduce(mut b1: Vec2, mut b2: Vec2) -> (Vec2, Vec2) {
    if b1.norm_squared() > b2.norm_squared() {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        let mu = (b1.dot(&b2) / b1.norm_squared()).round();
        b2 -= mu * b1;
        if b2.norm_squared() >= b1.norm_squared() {
            return (b1, b2);
        }
        std::mem::swap(&mut b1, &mut b2);
    }
}

/// `R^2 / Λ` with a constant norm. The chart is the unit square in
/// coordinates of a reduced basis of `Λ`.
pub fn flat_torus(body: SymBody, b1: Vec2, b2: Vec2) -> Result<Surface> {
    let det = b1.x * b2.y - b1.y * b2.x;
    if !(det.abs() > 1e-12 * b1.norm() * b2.norm()) || !det.is_finite() {
        return Err(FinsysError::InvalidSurface("lattice basis is degenerate".into()));
    }
    let (r1, r2) = gauss_reduce(b1, b2);
    let frame = Mat2::new(r1.x, r2.x, r1.y, r2.y);
    let field = NormField::constant(Tangent::new(body, frame));
    Surface::new("flat_torus", Topology::Torus, Rect::new(0.0, 1.0, 0.0, 1.0)?, field)
}

/// Constant norm on a rectangle with the identifications of `topology`.
pub fn constant_norm(body: SymBody, topology: Topology, domain: Rect) -> Result<Surface> {
    if topology == Topology::Klein || topology == Topology::Mobius {
        if (domain.y0 + domain.y1).abs() > 1e-12 * domain.height() {
            return Err(FinsysError::InvalidSurface("glide surfaces need a chart symmetric in y".into()));
        }
    }
    Surface::new(format!("constant_{topology}"), topology, domain, NormField::constant(Tangent::flat(body)))
}

/// Sup-norm strip `[0, pi] x [-lambda pi/2, lambda pi/2]` glued by `(x + pi, -y)`.
pub fn sup_norm_mobius(lambda: f64) -> Result<Surface> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(FinsysError::InvalidSurface("lambda must be positive".into()));
    }
    let h = lambda * PI / 2.0;
    Ok(constant_norm(SymBody::square(), Topology::Mobius, Rect::new(0.0, PI, -h, h)?)?
        .renamed("sup_norm_mobius")
        .with_description(SurfaceDescription::SupNormMobius { lambda }))
}

/// Sup-norm `[0, pi] x [-b, b]` with the glide and the vertical translation by `2b`.
pub fn sup_norm_klein(b: f64) -> Result<Surface> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(FinsysError::InvalidSurface("b must be positive".into()));
    }
    Ok(constant_norm(SymBody::square(), Topology::Klein, Rect::new(0.0, PI, -b, b)?)?
        .renamed("sup_norm_klein")
        .with_description(SurfaceDescription::SupNormKlein { b }))
}

/// Truncation angle `arccos(cos a / cos v)`.
pub fn fa_angle(a: f64, v: f64) -> f64 {
    (a.cos() / v.cos()).min(1.0).acos()
}

fn fa_tangent(a: f64, v: f64, floor: f64, dual: bool) -> Tangent {
    let th = fa_angle(a, v).max(floor).min(PI / 2.0);
    let body = if dual { SymBody::capped_disc(th) } else { SymBody::truncated_disc(th) };
    Tangent::new(body.expect("angle clamped into range"), diag(v.cos(), 1.0))
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a < PI / 2.0) {
        return Err(FinsysError::InvalidSurface(format!("band half-width a = {a} outside (0, pi/2)")));
    }
    Ok(())
}

/// The band `|v| <= a` of the round sphere modulo the antipodal map, with
/// unit ball `{|xi| <= 1, |xi_v| <= sin theta(v)}` in the orthonormal frame
/// (or its polar when `dual`).
pub fn spherical_finsler_mobius(a: f64, dual: bool) -> Result<Surface> {
    spherical_finsler_mobius_with_floor(a, dual, THETA_FLOOR)
}

pub fn spherical_finsler_mobius_with_floor(a: f64, dual: bool, floor: f64) -> Result<Surface> {
    check_a(a)?;
    let field = NormField::new(move |_, v| fa_tangent(a, v, floor, dual));
    let name = if dual { "spherical_finsler_mobius_dual" } else { "spherical_finsler_mobius" };
    Ok(Surface::new(name, Topology::Mobius, Rect::new(-PI / 2.0, PI / 2.0, -a, a)?, field)?
        .with_description(SurfaceDescription::SphericalFinslerMobius { a, dual, theta_floor: Some(floor) }))
}

/// The spherical band for `a = pi/3` with flat sup-norm collars of width
/// `(lambda - 1) pi / 2` glued to both boundary circles.
pub fn glued_wide_mobius(lambda: f64) -> Result<Surface> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(FinsysError::InvalidSurface("lambda must be at least 1".into()));
    }
    let a = PI / 3.0;
    let w = (lambda - 1.0) * PI / 2.0;
    let collar = Tangent::new(SymBody::square(), diag(a.cos(), 1.0));
    let field = NormField::new(move |_, v| if v.abs() <= a { fa_tangent(a, v, THETA_FLOOR, false) } else { collar.clone() });
    let seams = if w > 0.0 { vec![-a, a] } else { vec![] };
    Ok(Surface::new("glued_wide_mobius", Topology::Mobius, Rect::new(-PI / 2.0, PI / 2.0, -a - w, a + w)?, field)?
        .with_seams(seams)
        .with_description(SurfaceDescription::GluedWideMobius { lambda }))
}

/// Sup-norm Möbius band of width `pi` joined through a neck of width
/// `eps` to a flat cylinder of circumference `pi` and width `(lambda-1) pi/2`.
pub fn almost_extremal_mobius(lambda: f64, eps: f64) -> Result<Surface> {
    if !(lambda >= 1.0 && eps > 0.0 && eps.is_finite()) {
        return Err(FinsysError::InvalidSurface("need lambda >= 1 and eps > 0".into()));
    }
    let w = (lambda - 1.0) * PI / 2.0;
    let r = PI / 2.0;
    let field = NormField::new(move |_, y| {
        let t = y.abs();
        let s = if t <= r { 1.0 } else if t <= r + eps { 1.0 - 0.5 * (t - r) / eps } else { 0.5 };
        Tangent::new(SymBody::square(), diag(s, 1.0))
    });
    let h = r + eps + w;
    Ok(Surface::new("almost_extremal_mobius", Topology::Mobius, Rect::new(0.0, PI, -h, h)?, field)?
        .with_seams(vec![-r - eps, -r, r, r + eps])
        .with_description(SurfaceDescription::AlmostExtremalMobius { lambda, neck: eps }))
}

/// `F_a` on the band `|v| <= a` with the glide and the vertical
/// translation by `2a`, identifying each boundary point with the opposite one.
pub fn klein_from_fa(a: f64) -> Result<Surface> {
    check_a(a)?;
    let field = NormField::new(move |_, v| fa_tangent(a, v, THETA_FLOOR, false));
    Ok(Surface::new("klein_from_fa", Topology::Klein, Rect::new(-PI / 2.0, PI / 2.0, -a, a)?, field)?
        // Cut at the soul so the area quadrature grades toward the glued circle.
        .with_seams(vec![0.0])
        .with_description(SurfaceDescription::KleinFromFa { a: Some(a) }))
}

fn mirrored_field(m: &Surface) -> Result<(NormField, f64, Vec<f64>)> {
    if m.topology != Topology::Mobius {
        return Err(FinsysError::InvalidSurface("doubling needs a Möbius band".into()));
    }
    let d = m.domain;
    if (d.y0 + d.y1).abs() > 1e-12 * d.height() {
        return Err(FinsysError::InvalidSurface("Möbius chart must be symmetric about its soul".into()));
    }
    let c = d.y1;
    let f = m.field.clone();
    let flip = Mat2::new(1.0, 0.0, 0.0, -1.0);
    let field = NormField::new(move |x, y| {
        if y > c {
            let mut t = f.eval(x, 2.0 * c - y);
            t.frame *= flip;
            t
        } else if y < -c {
            let mut t = f.eval(x, -2.0 * c - y);
            t.frame *= flip;
            t
        } else {
            f.eval(x, y)
        }
    });
    let mut seams = vec![-c, c];
    for s in &m.y_seams {
        seams.extend([*s, 2.0 * c - s, -2.0 * c - s]);
    }
    seams.retain(|s| s.abs() <= 2.0 * c);
    seams.sort_by(f64::total_cmp);
    seams.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok((field, c, seams))
}

/// Resolution of the graph that locates the soul of a band being doubled.
pub const DOUBLING_SOUL_GRID: usize = 96;

/// Odd Fourier series of period `2L` fitted to the soul samples, so that
/// `gamma(x + L) = -gamma(x)` holds exactly.
#[derive(Clone, Debug)]
struct SoulSeries {
    x0: f64,
    omega: f64,
    /// `(k, a_k, b_k)` for odd `k`.
    terms: Vec<(f64, f64, f64)>,
}

impl SoulSeries {
    fn fit(x0: f64, period: f64, samples: &[f64]) -> Self {
        let n = samples.len();
        let omega = 2.0 * PI / period;
        let mut terms = Vec::new();
        for k in (1..=n / 4).step_by(2) {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, g) in samples.iter().enumerate() {
                let ph = 2.0 * PI * (k * i) as f64 / n as f64;
                a += g * ph.cos();
                b += g * ph.sin();
            }
            terms.push((k as f64, 2.0 * a / n as f64, 2.0 * b / n as f64));
        }
        Self { x0, omega, terms }
    }

    /// `(gamma(x), gamma'(x))`.
    fn eval(&self, x: f64) -> (f64, f64) {
        let ph = self.omega * (x - self.x0);
        let (mut g, mut dg) = (0.0, 0.0);
        for &(k, a, b) in &self.terms {
            let (sn, cs) = (k * ph).sin_cos();
            g += a * cs + b * sn;
            dg += k * self.omega * (b * cs - a * sn);
        }
        (g, dg)
    }
}

/// `2M`: `M` with the mirror copy `M'` glued along the boundary, cut open
/// along the soul of `M'`. The soul is the curve of the double cover
/// equidistant from both boundary lines; when it is not the chart line
/// `y = 0`, the outer halves are pulled back through a vertical stretch
/// that sends the chart strip `c <= |y| <= 2c` onto the two sides of it.
pub fn double_mobius(m: &Surface) -> Result<Surface> {
    let (mirrored, c, seams) = mirrored_field(m)?;
    let d = m.domain;
    let g = crate::paths::Graph::matched(m, DOUBLING_SOUL_GRID)?;
    let gamma = crate::paths::equidistant_soul(&g)?;
    let cut = gamma.iter().any(|v| v.abs() > 1e-9 * c);
    let (field, seams) = if !cut {
        (mirrored, seams)
    } else {
        let series = SoulSeries::fit(d.x0, 2.0 * d.width(), &gamma);
        let f = m.field.clone();
        let field = NormField::new(move |x, y| {
            if y.abs() <= c {
                return f.eval(x, y);
            }
            let (gm, dgm) = series.eval(x);
            // Outer coordinate t in [0, 1] from the glued boundary to the cut.
            let (t, yp, dy) = if y > c {
                let t = (y - c) / c;
                (t, c - t * (c - gm), -(c - gm) / c)
            } else {
                let t = (-c - y) / c;
                (t, -c + t * (c + gm), -(c + gm) / c)
            };
            let mut tg = f.eval(x, yp);
            tg.frame *= Mat2::new(1.0, 0.0, t * dgm, dy);
            tg
        });
        (field, vec![-c, c])
    };
    let mut s = Surface::new(format!("double_{}", m.name), Topology::Mobius, Rect::new(d.x0, d.x1, -2.0 * c, 2.0 * c)?, field)?
        .with_seams(seams);
    if let Some(desc) = &m.description {
        s = s.with_description(SurfaceDescription::DoubleMobius { base: Box::new(desc.clone()) });
    }
    Ok(s)
}

/// The Klein bottle `M ∪ M'` obtained by gluing `M` to its mirror image:
/// the doubled chart with a vertical translation by `4c`.
pub fn mirrored_klein(m: &Surface) -> Result<Surface> {
    let (field, c, seams) = mirrored_field(m)?;
    let d = m.domain;
    let mut s = Surface::new(format!("mirrored_{}", m.name), Topology::Klein, Rect::new(d.x0, d.x1, -2.0 * c, 2.0 * c)?, field)?
        .with_seams(seams);
    if let Some(desc) = &m.description {
        s = s.with_description(SurfaceDescription::MirroredKlein { base: Box::new(desc.clone()) });
    }
    Ok(s)
}

/// Field bilinearly interpolated (as gauges) between bodies at the nodes
/// of a regular grid covering the chart, `bodies[j][i]` at `(x_i, y_j)`.
pub fn tabulated(topology: Topology, domain: Rect, bodies: &[Vec<BodyLiteral>]) -> Result<Surface> {
    let ny = bodies.len();
    let nx = bodies.first().map(|r| r.len()).unwrap_or(0);
    if nx < 2 || ny < 2 || bodies.iter().any(|r| r.len() != nx) {
        return Err(FinsysError::InvalidSurface("tabulated field needs a rectangular grid of at least 2x2 bodies".into()));
    }
    let grid: Vec<Vec<SymBody>> = bodies.iter().map(|r| r.iter().map(|b| b.build()).collect::<Result<_>>()).collect::<Result<_>>()?;
    let field = NormField::new(move |x, y| {
        let fx = ((x - domain.x0) / domain.width() * (nx - 1) as f64).clamp(0.0, (nx - 1) as f64);
        let fy = ((y - domain.y0) / domain.height() * (ny - 1) as f64).clamp(0.0, (ny - 1) as f64);
        let i = (fx.floor() as usize).min(nx - 2);
        let j = (fy.floor() as usize).min(ny - 2);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let parts = vec![
            ((1.0 - tx) * (1.0 - ty), grid[j][i].clone()),
            (tx * (1.0 - ty), grid[j][i + 1].clone()),
            ((1.0 - tx) * ty, grid[j + 1][i].clone()),
            (tx * ty, grid[j + 1][i + 1].clone()),
        ];
        Tangent::flat(SymBody::sum(parts).expect("bilinear weights sum to one"))
    });
    let s = Surface::new(format!("tabulated_{topology}"), topology, domain, field)?;
    s.validate()?;
    Ok(s)
}

impl Surface {
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}
