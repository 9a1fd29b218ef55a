//! Holmes-Thompson and Busemann areas of Finsler surfaces.
//!
//! Both are integrals over the fundamental rectangle of a density built
//! from the tangent body `B`: `area(B°)/pi` and `pi/area(B)`, times the
//! frame jacobian. The midpoint rule is applied on four nested grids
//! split at the field's seams, and the results are extrapolated with the
//! observed order of convergence; the spread of two successive
//! extrapolations is the error estimate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{FinsysError, Result};
use crate::metric::Surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeKind {
    HolmesThompson,
    Busemann,
}

impl std::str::FromStr for VolumeKind {
    type Err = FinsysError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ht" | "holmes_thompson" => Ok(Self::HolmesThompson),
            "busemann" | "b" => Ok(Self::Busemann),
            _ => Err(FinsysError::Unsupported(format!("unknown volume kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelValue {
    pub nx: usize,
    pub ny: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeResult {
    pub kind: VolumeKind,
    pub value: f64,
    pub estimated_error: f64,
    /// Observed convergence order, when the three levels show one.
    pub order: Option<f64>,
    pub levels: Vec<LevelValue>,
}

/// Angular resolution for bodies without closed-form areas.
pub const BODY_SAMPLES: usize = 512;

/// Pairwise (cascade) summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Both densities at a chart point: `(HT, Busemann)` per unit chart area.
pub fn densities(s: &Surface, x: f64, y: f64) -> Result<(f64, f64)> {
    let t = s.field.eval(x, y);
    let (a, ap) = t.body.area_pair(BODY_SAMPLES)?;
    let j = t.jacobian();
    Ok((ap / PI * j, PI / a * j))
}

fn bands(s: &Surface, ny: usize) -> Vec<(f64, f64, usize)> {
    let d = s.domain;
    let mut cuts = vec![d.y0];
    let mut seams: Vec<f64> = s.y_seams.iter().cloned().filter(|y| *y > d.y0 + 1e-12 && *y < d.y1 - 1e-12).collect();
    seams.sort_by(f64::total_cmp);
    cuts.extend(seams);
    cuts.push(d.y1);
    cuts.windows(2)
        .map(|w| {
            let share = (w[1] - w[0]) / d.height() * ny as f64;
            let k = ((share / 8.0).round() as usize).max(1) * 8;
            (w[0], w[1], k)
        })
        .collect()
}

/// Midpoint sums of both densities; `div` coarsens every band. Bands
/// touching a boundary or seam use `y = ya + (yb - ya) g(t)` with the
/// cubic smoothstep `g`, which absorbs inverse-square-root endpoint
/// singularities of the density.
fn midpoint(s: &Surface, nx: usize, bands: &[(f64, f64, usize)], div: usize) -> Result<(f64, f64, usize)> {
    let d = s.domain;
    let nxl = nx / div;
    let dx = d.width() / nxl as f64;
    let graded = !(s.vertical && bands.len() == 1);
    let mut ht = Vec::new();
    let mut bu = Vec::new();
    let mut rows = 0;
    for &(ya, yb, k) in bands {
        let nyl = k / div;
        rows += nyl;
        let hb = yb - ya;
        for j in 0..nyl {
            let t = (j as f64 + 0.5) / nyl as f64;
            let (y, wy) = if graded {
                (ya + hb * t * t * (3.0 - 2.0 * t), hb * 6.0 * t * (1.0 - t) / nyl as f64)
            } else {
                (ya + hb * t, hb / nyl as f64)
            };
            for i in 0..nxl {
                let x = d.x0 + (i as f64 + 0.5) * dx;
                let (h, b) = densities(s, x, y)?;
                ht.push(h * dx * wy);
                bu.push(b * dx * wy);
            }
        }
    }
    Ok((pairwise_sum(&ht), pairwise_sum(&bu), rows))
}

/// Extrapolated value and observed order from three levels `h, h/2, h/4`.
fn richardson(i0: f64, i1: f64, i2: f64) -> Option<(f64, f64)> {
    let (d1, d2) = (i1 - i0, i2 - i1);
    let r = d1 / d2;
    if d2 != 0.0 && r > 1.05 {
        let p = r.log2().clamp(0.25, 4.0);
        Some((i2 + d2 / (2f64.powf(p) - 1.0), p))
    } else {
        None
    }
}

fn extrapolate(kind: VolumeKind, lv: Vec<LevelValue>) -> VolumeResult {
    let v: Vec<f64> = lv.iter().map(|l| l.value).collect();
    let last = v[3];
    let floor = 1e-14 * last.abs();
    let d = (v[3] - v[2]).abs();
    if d <= 10.0 * floor {
        return VolumeResult { kind, value: last, estimated_error: d.max(floor), order: None, levels: lv };
    }
    match (richardson(v[0], v[1], v[2]), richardson(v[1], v[2], v[3])) {
        (Some((ea, _)), Some((eb, p))) => {
            let err = (eb - ea).abs().max((eb - last).abs() * 1e-3).max(floor);
            VolumeResult { kind, value: eb, estimated_error: err, order: Some(p), levels: lv }
        }
        (None, Some((eb, p))) => VolumeResult { kind, value: eb, estimated_error: (eb - last).abs().max(floor), order: Some(p), levels: lv },
        _ => VolumeResult { kind, value: last, estimated_error: 2.0 * d, order: None, levels: lv },
    }
}

/// Holmes-Thompson and Busemann areas on an `nx` by `ny` grid (rounded up to multiples of 8).
pub fn volumes(s: &Surface, nx: usize, ny: usize) -> Result<(VolumeResult, VolumeResult)> {
    if nx < 8 || ny < 8 {
        return Err(FinsysError::InvalidGrid("volume grids need at least 8 cells per side".into()));
    }
    let nx = nx.div_ceil(8) * 8;
    let b = bands(s, ny);
    let mut ht = Vec::new();
    let mut bu = Vec::new();
    for div in [8, 4, 2, 1] {
        let (h, v, rows) = midpoint(s, nx, &b, div)?;
        ht.push(LevelValue { nx: nx / div, ny: rows, value: h });
        bu.push(LevelValue { nx: nx / div, ny: rows, value: v });
    }
    Ok((extrapolate(VolumeKind::HolmesThompson, ht), extrapolate(VolumeKind::Busemann, bu)))
}

/// Area of the given kind on an `n` by `n` grid.
pub fn volume(s: &Surface, kind: VolumeKind, n: usize) -> Result<VolumeResult> {
    volume_grid(s, kind, n, n)
}

pub fn volume_grid(s: &Surface, kind: VolumeKind, nx: usize, ny: usize) -> Result<VolumeResult> {
    let (ht, bu) = volumes(s, nx, ny)?;
    Ok(match kind {
        VolumeKind::HolmesThompson => ht,
        VolumeKind::Busemann => bu,
    })
}

/// Single-level midpoint area of an `nx` by `ny` grid with cell `(i, j)`,
/// i.e. `[x_i, x_{i+1}] x [y_j, y_{j+1}]`, counted with weight `keep(i, j)`.
pub fn masked_volume(s: &Surface, kind: VolumeKind, nx: usize, ny: usize, keep: impl Fn(usize, usize) -> f64) -> Result<f64> {
    let d = s.domain;
    let (dx, dy) = (d.width() / nx as f64, d.height() / ny as f64);
    let mut v = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let w = keep(i, j);
            if w <= 0.0 {
                continue;
            }
            let (h, b) = densities(s, d.x0 + (i as f64 + 0.5) * dx, d.y0 + (j as f64 + 0.5) * dy)?;
            v.push(match kind {
                VolumeKind::HolmesThompson => h,
                VolumeKind::Busemann => b,
            } * dx
                * dy
                * w);
        }
    }
    Ok(pairwise_sum(&v))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DuranReport {
    pub cells: usize,
    /// Largest `area(B) area(B°) / pi^2` over the sampled cells.
    pub max_mahler_ratio: f64,
    pub violations: usize,
}

/// Pointwise check of `area(B) area(B°) <= pi^2`, i.e. HT density <= Busemann density.
pub fn duran_check(s: &Surface, nx: usize, ny: usize) -> Result<DuranReport> {
    let d = s.domain;
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for j in 0..ny {
        for i in 0..nx {
            let x = d.x0 + (i as f64 + 0.5) * d.width() / nx as f64;
            let y = d.y0 + (j as f64 + 0.5) * d.height() / ny as f64;
            let t = s.field.eval(x, y);
            let (a, ap) = t.body.area_pair(BODY_SAMPLES)?;
            let r = a * ap / (PI * PI);
            worst = worst.max(r);
            if r > 1.0 + 1e-9 {
                bad += 1;
            }
        }
    }
    Ok(DuranReport { cells: nx * ny, max_mahler_ratio: worst, violations: bad })
}
