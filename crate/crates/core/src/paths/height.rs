//! Heights of bands and distances between node sets.

use serde::{Deserialize, Serialize};

use super::graph::{Dijkstra, Graph, Window, RADIUS};
use crate::error::{FinsysError, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathWitness {
    pub length: f64,
    pub nodes: Vec<(i64, i64)>,
    pub points: Vec<[f64; 2]>,
}

pub(crate) fn witness(g: &Graph, win: &Window, dj: &Dijkstra, target: usize, length: f64) -> PathWitness {
    let nodes = dj.path_to(win, target);
    let points = nodes
        .iter()
        .map(|&(i, j)| {
            let p = g.point(i, j);
            [p.x, p.y]
        })
        .collect();
    PathWitness { length, nodes, points }
}

/// Horizontal period of a strip in grid columns (two chart widths for a glide).
pub(crate) fn strip_period(g: &Graph) -> i64 {
    if g.surface.glide {
        2 * g.nx as i64
    } else {
        g.nx as i64
    }
}

/// Shortest arc between the two boundary lines of a Möbius band or cylinder.
pub fn height(g: &Graph) -> Result<PathWitness> {
    let s = g.surface;
    if s.vertical || !s.horizontal {
        return Err(FinsysError::Unsupported(format!("{} has no height: it needs exactly the boundary of a band", s.topology)));
    }
    let ny = g.ny as i64;
    let per = strip_period(g);
    let m = (g.nx as i64 / 2).max(RADIUS);
    let win = Window::new(g, -m, per + m, 0, ny, None);
    let sources: Vec<(usize, f64)> = (0..per).filter_map(|i| win.index(i, 0)).map(|x| (x, 0.0)).collect();
    band_height(g, &win, &sources, |_, j| j == ny)
}

/// Multi-source search stopping at the first node satisfying `is_target`.
pub(crate) fn band_height(
    g: &Graph,
    win: &Window,
    sources: &[(usize, f64)],
    is_target: impl Fn(i64, i64) -> bool,
) -> Result<PathWitness> {
    let mut dj = Dijkstra::new(win);
    let mut hit = None;
    dj.run(g, win, sources, f64::INFINITY, None, |n, d| {
        let (i, j) = win.coords(n);
        if is_target(i, j) {
            hit = Some((n, d));
            true
        } else {
            false
        }
    });
    let (n, d) = hit.ok_or_else(|| FinsysError::Numerical("no path between the boundary components".into()))?;
    Ok(witness(g, win, &dj, n, d))
}

/// Graph distance between two global nodes inside `win` (infinite if disconnected).
pub fn distance(g: &Graph, win: &Window, p: (i64, i64), q: (i64, i64)) -> Result<f64> {
    let (Some(a), Some(b)) = (win.index(p.0, p.1), win.index(q.0, q.1)) else {
        return Err(FinsysError::Unsupported("endpoints outside the search window".into()));
    };
    if !win.active[a] || !win.active[b] {
        return Ok(f64::INFINITY);
    }
    let mut dj = Dijkstra::new(win);
    let mut out = f64::INFINITY;
    dj.run(g, win, &[(a, 0.0)], f64::INFINITY, None, |n, d| {
        if n == b {
            out = d;
            true
        } else {
            false
        }
    });
    Ok(out)
}
