//! Distances to the souls: the core circle of a Möbius band, and the two
//! one-sided circles `y = 0` and `y = b` of a Klein bottle.

use serde::{Deserialize, Serialize};

use super::graph::{Dijkstra, Graph, Window};
use crate::error::{FinsysError, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoulDistances {
    pub nx: usize,
    pub ny: usize,
    /// Per base node, row-major with `bx` columns.
    pub bx: usize,
    pub d_sigma: Vec<f64>,
    pub d_sigma_prime: Option<Vec<f64>>,
}

fn from_rows(g: &Graph, win: &Window, row: usize) -> Vec<f64> {
    let sources: Vec<(usize, f64)> =
        (0..win.len()).filter(|&x| win.active[x] && g.base_row(win.base[x] as usize) == row).map(|x| (x, 0.0)).collect();
    let mut dj = Dijkstra::new(win);
    let mut out = vec![f64::INFINITY; g.bx * g.by];
    dj.run(g, win, &sources, f64::INFINITY, None, |_, _| false);
    for x in 0..win.len() {
        if win.active[x] {
            let b = win.base[x] as usize;
            out[b] = out[b].min(dj.dist[x]);
        }
    }
    out
}

/// Multi-source distances from every lift of the soul(s).
pub fn soul_distance_field(g: &Graph) -> Result<SoulDistances> {
    let s = g.surface;
    if !s.glide {
        return Err(FinsysError::Unsupported("souls exist on Möbius bands and Klein bottles".into()));
    }
    let (nx, ny) = (g.nx as i64, g.ny as i64);
    let (j0, j1) = if s.vertical { (-ny / 2, ny + ny / 2) } else { (0, ny) };
    let win = Window::new(g, -nx / 2, nx + nx / 2, j0, j1, None);
    let d_sigma = from_rows(g, &win, g.ny / 2);
    let d_sigma_prime = if s.vertical { Some(from_rows(g, &win, 0)) } else { None };
    Ok(SoulDistances { nx: g.nx, ny: g.ny, bx: g.bx, d_sigma, d_sigma_prime })
}

/// The soul of a Möbius band in the sense of the double cover: the curve
/// `y = gamma(x)` of points equidistant from the two boundary lines.
/// Returns `gamma` at the `2 nx` columns `x0 + i dx` of one cover period;
/// `gamma(x + L) = -gamma(x)`. Where a column crosses the equidistant set
/// more than once, the lowest crossing is used.
pub fn equidistant_soul(g: &Graph) -> Result<Vec<f64>> {
    let s = g.surface;
    if !s.glide || s.vertical {
        return Err(FinsysError::Unsupported("the equidistant soul is defined for Möbius bands".into()));
    }
    let (nx, ny) = (g.nx as i64, g.ny as i64);
    let win = Window::new(g, -nx, 3 * nx, 0, ny, None);
    // In the cover the row j = 0 is one boundary line everywhere.
    let sources: Vec<(usize, f64)> = (-nx..=3 * nx).filter_map(|i| win.index(i, 0)).map(|x| (x, 0.0)).collect();
    let mut dj = Dijkstra::new(&win);
    dj.run(g, &win, &sources, f64::INFINITY, None, |_, _| false);
    let d1 = |i: i64, j: i64| win.index(i, j).map_or(f64::INFINITY, |x| dj.dist[x]);
    // The glide (x, y) -> (x + L, -y) swaps the boundary lines.
    let d2 = |i: i64, j: i64| d1(i + nx, ny - j);
    let y = |j: f64| s.domain.y0 + s.domain.height() * j / ny as f64;
    let mut gamma = Vec::with_capacity(2 * g.nx);
    for i in 0..2 * nx {
        let f = |j: i64| d1(i, j) - d2(i, j);
        let mut found = None;
        for j in 0..ny {
            let (a, b) = (f(j), f(j + 1));
            if !(a.is_finite() && b.is_finite()) {
                return Err(FinsysError::Numerical("boundary distances did not reach the whole band".into()));
            }
            if a <= 0.0 && b >= 0.0 {
                let t = if b > a { -a / (b - a) } else { 0.5 };
                found = Some(y(j as f64 + t));
                break;
            }
        }
        gamma.push(found.ok_or_else(|| FinsysError::Numerical(format!("no equidistant point in column {i}")))?);
    }
    Ok(gamma)
}
