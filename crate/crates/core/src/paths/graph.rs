//! Lifted grid graphs: nodes on a regular grid of the universal cover,
//! edges along a radius-3 stencil, weights are Finsler lengths of the
//! straight chords.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{FinsysError, Result};
use crate::metric::Surface;
use crate::Vec2;

pub const RADIUS: i64 = 3;

/// Primitive offsets `(di, dj)` with `max(|di|, |dj|) <= RADIUS`.
#[derive(Clone, Debug)]
pub struct Stencil {
    pub offsets: Vec<(i64, i64)>,
    /// Index of `(di, -dj)` for each offset.
    pub mirror: Vec<usize>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Stencil {
    pub fn new(r: i64) -> Self {
        let mut offsets = Vec::new();
        for dj in -r..=r {
            for di in -r..=r {
                if (di, dj) != (0, 0) && gcd(di, dj) == 1 {
                    offsets.push((di, dj));
                }
            }
        }
        let mirror = offsets.iter().map(|&(di, dj)| offsets.iter().position(|&o| o == (di, -dj)).unwrap()).collect();
        Self { offsets, mirror }
    }
}

/// Finsler length of the segment `p -> q` in the cover. The segment is
/// cut where it crosses a seam of the field; each piece is integrated by
/// adaptive Simpson after the smoothstep substitution `t = 3s^2 - 2s^3`,
/// which tames inverse-square-root blow-up at the piece ends.
pub fn chord_length(s: &Surface, p: Vec2, q: Vec2, rel_tol: f64) -> f64 {
    let mut cuts = vec![0.0];
    cuts.extend(s.seam_crossings(p, q));
    cuts.push(1.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            total += piece_length(s, p + (q - p) * w[0], p + (q - p) * w[1], rel_tol);
        }
    }
    total
}

fn piece_length(s: &Surface, p: Vec2, q: Vec2, rel_tol: f64) -> f64 {
    let d = q - p;
    let f = |u: f64| {
        let t = u * u * (3.0 - 2.0 * u);
        let x = p + d * t;
        let w = 6.0 * u * (1.0 - u);
        if w == 0.0 {
            return 0.0;
        }
        s.norm(x.x, x.y, d) * w
    };
    let (fa, fm, fb) = (f(0.0), f(0.5), f(1.0));
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return f64::INFINITY;
    }
    let whole = (fa + 4.0 * fm + fb) / 6.0;
    adaptive(&f, 0.0, 1.0, fa, fm, fb, whole, rel_tol * whole.abs().max(1e-300), 24)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * eps {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Grid graph on the universal cover of a surface.
pub struct Graph<'s> {
    pub surface: &'s Surface,
    pub nx: usize,
    pub ny: usize,
    /// Base node columns and rows (one period, or the closed range for bounded directions).
    pub bx: usize,
    pub by: usize,
    pub stencil: Stencil,
    weights: Vec<f64>,
}

impl<'s> Graph<'s> {
    pub fn new(surface: &'s Surface, nx: usize, ny: usize) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(FinsysError::InvalidGrid(format!("grid {nx}x{ny} is too coarse")));
        }
        if (surface.glide || surface.vertical) && ny % 2 != 0 {
            return Err(FinsysError::InvalidGrid("glide and Klein grids need an even number of rows".into()));
        }
        let bx = if surface.horizontal { nx } else { nx + 1 };
        let by = if surface.vertical { ny } else { ny + 1 };
        let stencil = Stencil::new(RADIUS);
        let ns = stencil.offsets.len();
        let mut g = Self { surface, nx, ny, bx, by, stencil, weights: Vec::new() };
        let mut w = vec![f64::INFINITY; bx * by * ns];
        for j in 0..by as i64 {
            for i in 0..bx as i64 {
                let b = (j as usize) * bx + i as usize;
                let p = g.point(i, j);
                for (k, &(di, dj)) in g.stencil.offsets.iter().enumerate() {
                    let (ti, tj) = (i + di, j + dj);
                    if !surface.vertical && !(0..=ny as i64).contains(&tj) {
                        continue;
                    }
                    if !surface.horizontal && !(0..=nx as i64).contains(&ti) {
                        continue;
                    }
                    w[b * ns + k] = chord_length(surface, p, g.point(ti, tj), 1e-7);
                }
            }
        }
        g.weights = w;
        Ok(g)
    }

    /// Grid matched to the chart aspect ratio, `n` cells along x.
    pub fn matched(surface: &'s Surface, n: usize) -> Result<Self> {
        let (nx, ny) = matched_dims(surface, n);
        Self::new(surface, nx, ny)
    }

    pub fn dx(&self) -> f64 {
        self.surface.domain.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.surface.domain.height() / self.ny as f64
    }

    /// Chart coordinates of global node `(i, j)`.
    #[inline]
    pub fn point(&self, i: i64, j: i64) -> Vec2 {
        let d = &self.surface.domain;
        Vec2::new(d.x0 + i as f64 * self.dx(), d.y0 + j as f64 * self.dy())
    }

    /// Base node and orientation flag of global node `(i, j)`.
    #[inline]
    pub fn base_of(&self, i: i64, j: i64) -> Option<(usize, bool)> {
        let s = self.surface;
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let (mut i, mut j, mut flip) = (i, j, false);
        if s.horizontal {
            let k = i.div_euclid(nx);
            i -= k * nx;
            if s.glide && k.rem_euclid(2) == 1 {
                j = ny - j;
                flip = true;
            }
        } else if !(0..=nx).contains(&i) {
            return None;
        }
        if s.vertical {
            j = j.rem_euclid(ny);
        } else if !(0..=ny).contains(&j) {
            return None;
        }
        Some((j as usize * self.bx + i as usize, flip))
    }

    #[inline]
    pub fn weight(&self, base: usize, flip: bool, k: usize) -> f64 {
        let ns = self.stencil.offsets.len();
        let k = if flip { self.stencil.mirror[k] } else { k };
        self.weights[base * ns + k]
    }

    /// Base row of a base node index.
    pub fn base_row(&self, b: usize) -> usize {
        b / self.bx
    }

    pub fn base_col(&self, b: usize) -> usize {
        b % self.bx
    }

    /// Finsler length of a polyline of global nodes, with fresh chord integrals.
    pub fn polyline_length(&self, nodes: &[(i64, i64)], rel_tol: f64) -> f64 {
        nodes
            .windows(2)
            .map(|w| chord_length(self.surface, self.point(w[0].0, w[0].1), self.point(w[1].0, w[1].1), rel_tol))
            .sum()
    }
}

/// `(nx, ny)` with `n` columns and square chart cells, `ny` even.
pub fn matched_dims(surface: &Surface, n: usize) -> (usize, usize) {
    let d = surface.domain;
    let ny = ((n as f64 * d.height() / d.width() / 2.0).round() as usize).max(4) * 2;
    (n, ny)
}

/// Rectangular window `[i0, i1] x [j0, j1]` of global nodes with a blocked border.
pub struct Window {
    pub i0: i64,
    pub j0: i64,
    pub w: usize,
    pub h: usize,
    stride: usize,
    pub base: Vec<u32>,
    pub flip: Vec<bool>,
    pub active: Vec<bool>,
    offsets: Vec<isize>,
}

impl Window {
    pub fn new(g: &Graph, i0: i64, i1: i64, j0: i64, j1: i64, mask: Option<&[bool]>) -> Self {
        let r = RADIUS;
        let w = (i1 - i0 + 1) as usize;
        let h = (j1 - j0 + 1) as usize;
        let stride = w + 2 * r as usize;
        let rows = h + 2 * r as usize;
        let n = stride * rows;
        let mut base = vec![0u32; n];
        let mut flip = vec![false; n];
        let mut active = vec![false; n];
        for jj in 0..h {
            for ii in 0..w {
                let idx = (jj + r as usize) * stride + ii + r as usize;
                if let Some((b, f)) = g.base_of(i0 + ii as i64, j0 + jj as i64) {
                    base[idx] = b as u32;
                    flip[idx] = f;
                    active[idx] = mask.map_or(true, |m| m[b]);
                }
            }
        }
        let offsets = g.stencil.offsets.iter().map(|&(di, dj)| dj as isize * stride as isize + di as isize).collect();
        Self { i0, j0, w, h, stride, base, flip, active, offsets }
    }

    #[inline]
    pub fn index(&self, i: i64, j: i64) -> Option<usize> {
        let (ii, jj) = (i - self.i0, j - self.j0);
        if ii < 0 || jj < 0 || ii >= self.w as i64 || jj >= self.h as i64 {
            return None;
        }
        Some((jj as usize + RADIUS as usize) * self.stride + ii as usize + RADIUS as usize)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (i64, i64) {
        let jj = (idx / self.stride) as i64 - RADIUS;
        let ii = (idx % self.stride) as i64 - RADIUS;
        (self.i0 + ii, self.j0 + jj)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.index(i, j).is_some_and(|x| self.active[x])
    }
}

#[derive(Clone, Copy)]
struct Item {
    d: f64,
    n: u32,
}

impl PartialEq for Item {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.d.total_cmp(&self.d).then(o.n.cmp(&self.n))
    }
}

/// Groups of window nodes joined by zero-length edges (collapsed boundaries).
pub struct Teleports {
    pub group: Vec<u8>,
    pub members: Vec<Vec<u32>>,
}

/// Reusable single-window Dijkstra state.
pub struct Dijkstra {
    pub dist: Vec<f64>,
    pub pred: Vec<u32>,
    settled: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<Item>,
}

pub const NO_PRED: u32 = u32::MAX;

impl Dijkstra {
    pub fn new(win: &Window) -> Self {
        let n = win.len();
        Self { dist: vec![f64::INFINITY; n], pred: vec![NO_PRED; n], settled: vec![false; n], touched: Vec::new(), heap: BinaryHeap::new() }
    }

    fn reset(&mut self) {
        for &t in &self.touched {
            self.dist[t as usize] = f64::INFINITY;
            self.pred[t as usize] = NO_PRED;
            self.settled[t as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs from `sources` until `visit(node, dist)` returns true or all
    /// distances up to `cutoff` are settled.
    pub fn run(
        &mut self,
        g: &Graph,
        win: &Window,
        sources: &[(usize, f64)],
        cutoff: f64,
        teleports: Option<&Teleports>,
        mut visit: impl FnMut(usize, f64) -> bool,
    ) {
        self.reset();
        let mut fired = [false; 8];
        for &(s, d) in sources {
            if win.active[s] && d < self.dist[s] {
                if self.dist[s].is_infinite() {
                    self.touched.push(s as u32);
                }
                self.dist[s] = d;
                self.heap.push(Item { d, n: s as u32 });
            }
        }
        let ns = win.offsets.len();
        while let Some(Item { d, n }) = self.heap.pop() {
            let n = n as usize;
            if self.settled[n] || d > self.dist[n] {
                continue;
            }
            if d > cutoff {
                break;
            }
            self.settled[n] = true;
            if visit(n, d) {
                return;
            }
            if let Some(t) = teleports {
                let gid = t.group[n] as usize;
                if gid > 0 && !fired[gid] {
                    fired[gid] = true;
                    for &m in &t.members[gid] {
                        let m = m as usize;
                        if win.active[m] && d < self.dist[m] {
                            if self.dist[m].is_infinite() {
                                self.touched.push(m as u32);
                            }
                            self.dist[m] = d;
                            self.pred[m] = n as u32;
                            self.heap.push(Item { d, n: m as u32 });
                        }
                    }
                }
            }
            let b = win.base[n] as usize;
            let f = win.flip[n];
            for k in 0..ns {
                let nb = (n as isize + win.offsets[k]) as usize;
                if !win.active[nb] || self.settled[nb] {
                    continue;
                }
                let nd = d + g.weight(b, f, k);
                if nd < self.dist[nb] && nd <= cutoff {
                    if self.dist[nb].is_infinite() {
                        self.touched.push(nb as u32);
                    }
                    self.dist[nb] = nd;
                    self.pred[nb] = n as u32;
                    self.heap.push(Item { d: nd, n: nb as u32 });
                }
            }
        }
    }

    /// Node sequence ending at `target`, following predecessors.
    pub fn path_to(&self, win: &Window, target: usize) -> Vec<(i64, i64)> {
        let mut out = vec![win.coords(target)];
        let mut n = target;
        while self.pred[n] != NO_PRED {
            n = self.pred[n] as usize;
            out.push(win.coords(n));
        }
        out.reverse();
        out
    }
}
