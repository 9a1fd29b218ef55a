//! Shortest noncontractible loops, by class, on a lifted grid graph.
//!
//! A loop in the class of a deck element `e` lifts to a path from `p` to
//! `e(p)`. Every such lift crosses a band of `RADIUS` consecutive grid
//! columns (or rows, for vertical translations), so basepoints are
//! restricted to that band: first every `stride`-th node of its first
//! column, then all band nodes near the best one.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::graph::{chord_length, Dijkstra, Graph, Teleports, Window, RADIUS};
use crate::error::{FinsysError, Result};
use crate::metric::{Element, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSpec {
    /// Every noncontractible free homotopy class.
    All,
    Orientable,
    Nonorientable,
    /// Arcs between boundary components (the height).
    RelativeBoundary,
    /// Arcs across a band that meet its soul.
    ThroughSoul,
}

impl std::str::FromStr for ClassSpec {
    type Err = FinsysError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "orientable" | "plus" => Ok(Self::Orientable),
            "nonorientable" | "minus" => Ok(Self::Nonorientable),
            "relative_boundary" => Ok(Self::RelativeBoundary),
            "through_soul" => Ok(Self::ThroughSoul),
            _ => Err(FinsysError::Unsupported(format!("unknown class `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoopWitness {
    pub length: f64,
    pub element: Element,
    pub orientable: bool,
    pub basepoint: (i64, i64),
    /// Global grid nodes of the lifted loop, from `p` to `e(p)`.
    pub nodes: Vec<(i64, i64)>,
    /// The same polyline in cover chart coordinates.
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystoleResult {
    pub nx: usize,
    pub ny: usize,
    pub all: Option<LoopWitness>,
    pub orientable: Option<LoopWitness>,
    pub nonorientable: Option<LoopWitness>,
    pub per_element: Vec<(Element, f64)>,
    pub basepoints: usize,
}

impl SystoleResult {
    pub fn value(&self, class: ClassSpec) -> Option<f64> {
        match class {
            ClassSpec::Orientable => self.orientable.as_ref(),
            ClassSpec::Nonorientable => self.nonorientable.as_ref(),
            _ => self.all.as_ref(),
        }
        .map(|w| w.length)
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub stride: usize,
    /// Window margin as a fraction of the chart size.
    pub margin: f64,
    pub mask: Option<Vec<bool>>,
    /// Restrict windows to these global rows.
    pub j_range: Option<(i64, i64)>,
    /// Explicit deck elements to test instead of the enumerated ones.
    pub candidates: Option<Vec<Element>>,
    /// Collapse the two boundary lines of a strip to points.
    pub teleports: bool,
    /// Basepoint rows (for column sweeps) allowed; `None` means all.
    pub rows: Option<(i64, i64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { stride: 4, margin: 0.25, mask: None, j_range: None, candidates: None, teleports: false, rows: None }
    }
}

#[derive(Clone, Copy)]
struct Best {
    len: f64,
    p: (i64, i64),
    e: Element,
}

pub(crate) fn act_index(g: &Graph, e: Element, i: i64, j: i64) -> (i64, i64) {
    let (nx, ny) = (g.nx as i64, g.ny as i64);
    let j = if g.surface.element_flips(e) { ny - j } else { j };
    (i + e.k * nx, j + e.m * ny)
}

fn lower_bound(s: &Surface, cmin: f64, e: Element) -> f64 {
    let dx = e.k as f64 * s.domain.width();
    let dy = if s.element_flips(e) { 0.0 } else { e.m as f64 * s.domain.height() };
    cmin * (dx * dx + dy * dy).sqrt()
}

fn enumerate(s: &Surface, kmax: i64, mmax: i64) -> Vec<Element> {
    let mut out = Vec::new();
    if s.horizontal {
        for k in 1..=kmax {
            let mr = if s.vertical { mmax } else { 0 };
            for m in -mr..=mr {
                out.push(Element { k, m });
            }
        }
    }
    if s.vertical {
        for m in 1..=mmax {
            out.push(Element { k: 0, m });
        }
    }
    out
}

fn class_index(s: &Surface, e: Element) -> usize {
    usize::from(s.element_flips(e))
}

fn wanted(class: ClassSpec, idx: usize) -> bool {
    match class {
        ClassSpec::All => true,
        ClassSpec::Orientable => idx == 0,
        ClassSpec::Nonorientable => idx == 1,
        _ => false,
    }
}

/// Straight-chord upper bounds for each class.
fn chord_bounds(g: &Graph, cands: &[Element]) -> [f64; 2] {
    let s = g.surface;
    let mut b = [f64::INFINITY; 2];
    let rows = if s.vertical { g.ny } else { g.ny + 1 };
    for &e in cands.iter().filter(|e| e.k.abs() <= 2 && e.m.abs() <= 2) {
        for t in 0..9 {
            let (i, j) = if e.k != 0 { (0, (t * (rows - 1) / 8) as i64) } else { ((t * g.nx / 9) as i64, 0) };
            let (ti, tj) = act_index(g, e, i, j);
            let l = chord_length(s, g.point(i, j), g.point(ti, tj), 1e-6);
            let c = class_index(s, e);
            b[c] = b[c].min(l);
        }
    }
    b
}

struct Sweep<'a, 'g> {
    g: &'a Graph<'g>,
    class: ClassSpec,
    opts: &'a SweepOptions,
    cmin: f64,
    best: [Option<Best>; 2],
    bound: [f64; 2],
    per_element: Vec<(Element, f64)>,
    evaluated: HashSet<(i64, i64)>,
}

impl<'a, 'g> Sweep<'a, 'g> {
    fn live(&self, cands: &[Element]) -> Vec<Element> {
        let s = self.g.surface;
        cands
            .iter()
            .cloned()
            .filter(|&e| {
                let c = class_index(s, e);
                wanted(self.class, c) && lower_bound(s, self.cmin, e) <= self.bound[c] * (1.0 + 1e-9)
            })
            .collect()
    }

    fn window(&self, cands: &[Element], column: bool) -> Option<Window> {
        let g = self.g;
        let s = g.surface;
        let (nx, ny) = (g.nx as i64, g.ny as i64);
        let last = if s.vertical { ny - 1 } else { ny };
        let (ci, cj) = if column {
            let (r0, r1) = self.opts.rows.unwrap_or((0, last));
            ((0, RADIUS - 1), (r0, r1))
        } else {
            ((0, nx - 1), (0, RADIUS - 1))
        };
        let (mut i0, mut i1, mut j0, mut j1) = (ci.0, ci.1, cj.0, cj.1);
        for &pi in &[ci.0, ci.1] {
            for &pj in &[cj.0, cj.1] {
                for &e in cands {
                    let (ti, tj) = act_index(g, e, pi, pj);
                    i0 = i0.min(ti);
                    i1 = i1.max(ti);
                    j0 = j0.min(tj);
                    j1 = j1.max(tj);
                }
            }
        }
        let mi = ((self.opts.margin * nx as f64).ceil() as i64).max(RADIUS);
        let mj = ((self.opts.margin * ny as f64).ceil() as i64).max(RADIUS);
        i0 -= mi;
        i1 += mi;
        j0 -= mj;
        j1 += mj;
        if !s.vertical {
            j0 = j0.max(0);
            j1 = j1.min(ny);
        }
        if let Some((a, b)) = self.opts.j_range {
            j0 = j0.max(a);
            j1 = j1.min(b);
        }
        if j1 < j0 {
            return None;
        }
        Some(Window::new(g, i0, i1, j0, j1, self.opts.mask.as_deref()))
    }

    fn teleports(&self, win: &Window) -> Option<Teleports> {
        if !self.opts.teleports {
            return None;
        }
        let ny = self.g.ny as i64;
        let mut group = vec![0u8; win.len()];
        let mut members = vec![Vec::new(), Vec::new(), Vec::new()];
        for idx in 0..win.len() {
            if !win.active[idx] {
                continue;
            }
            let (_, j) = win.coords(idx);
            let gid = if j == 0 { 1 } else if j == ny { 2 } else { 0 };
            if gid > 0 {
                group[idx] = gid as u8;
                members[gid].push(idx as u32);
            }
        }
        Some(Teleports { group, members })
    }

    fn evaluate(&mut self, win: &Window, tel: Option<&Teleports>, dj: &mut Dijkstra, cands: &[Element], p: (i64, i64)) {
        if !self.evaluated.insert(p) {
            return;
        }
        let Some(src) = win.index(p.0, p.1) else { return };
        if !win.active[src] {
            return;
        }
        let s = self.g.surface;
        let mut targets: Vec<(usize, Element, usize)> = Vec::new();
        let mut cutoff: f64 = 0.0;
        for &e in cands {
            let c = class_index(s, e);
            if lower_bound(s, self.cmin, e) > self.bound[c] * (1.0 + 1e-9) {
                continue;
            }
            let (ti, tj) = act_index(self.g, e, p.0, p.1);
            if let Some(t) = win.index(ti, tj) {
                if win.active[t] {
                    targets.push((t, e, c));
                    cutoff = cutoff.max(self.bound[c]);
                }
            }
        }
        if targets.is_empty() {
            return;
        }
        let mut found: Vec<(Element, usize, f64)> = Vec::new();
        let mut pending = targets.len();
        dj.run(self.g, win, &[(src, 0.0)], cutoff * (1.0 + 1e-12), tel, |n, d| {
            for &(t, e, c) in &targets {
                if t == n {
                    found.push((e, c, d));
                    pending -= 1;
                }
            }
            pending == 0
        });
        for (e, c, d) in found {
            if let Some(pe) = self.per_element.iter_mut().find(|x| x.0 == e) {
                pe.1 = pe.1.min(d);
            } else {
                self.per_element.push((e, d));
            }
            if self.best[c].is_none_or(|b| d < b.len) {
                self.best[c] = Some(Best { len: d, p, e });
                self.bound[c] = self.bound[c].min(d);
            }
        }
    }

    fn run_group(&mut self, all: &[Element], column: bool) {
        let cands: Vec<Element> = all.iter().cloned().filter(|e| (e.k != 0) == column).collect();
        let cands = self.live(&cands);
        if cands.is_empty() {
            return;
        }
        let Some(win) = self.window(&cands, column) else { return };
        let tel = self.teleports(&win);
        let mut dj = Dijkstra::new(&win);
        let g = self.g;
        let s = g.surface;
        let (nx, ny) = (g.nx as i64, g.ny as i64);
        let last = if s.vertical { ny - 1 } else { ny };
        let (r0, r1) = if column { self.opts.rows.unwrap_or((0, last)) } else { (0, nx - 1) };
        let stride = self.opts.stride.max(1) as i64;
        let mut t = r0;
        while t <= r1 {
            let p = if column { (0, t) } else { (t, 0) };
            self.evaluate(&win, tel.as_ref(), &mut dj, &cands, p);
            t += stride;
        }
        if (r1 - r0) % stride != 0 {
            let p = if column { (0, r1) } else { (r1, 0) };
            self.evaluate(&win, tel.as_ref(), &mut dj, &cands, p);
        }
        for c in 0..2 {
            let Some(b) = self.best[c] else { continue };
            if (b.e.k != 0) != column {
                continue;
            }
            let centre = if column { b.p.1 } else { b.p.0 };
            for t in (centre - stride)..=(centre + stride) {
                if t < r0 || t > r1 {
                    continue;
                }
                for o in 0..RADIUS {
                    let p = if column { (o, t) } else { (t, o) };
                    self.evaluate(&win, tel.as_ref(), &mut dj, &cands, p);
                }
            }
        }
    }

    fn witness(&self, b: Best) -> Option<LoopWitness> {
        let g = self.g;
        let column = b.e.k != 0;
        let win = self.window(&[b.e], column)?;
        let tel = self.teleports(&win);
        let mut dj = Dijkstra::new(&win);
        let src = win.index(b.p.0, b.p.1)?;
        let (ti, tj) = act_index(g, b.e, b.p.0, b.p.1);
        let t = win.index(ti, tj)?;
        let mut len = f64::NAN;
        dj.run(g, &win, &[(src, 0.0)], b.len * (1.0 + 1e-9), tel.as_ref(), |n, d| {
            if n == t {
                len = d;
                true
            } else {
                false
            }
        });
        let nodes = dj.path_to(&win, t);
        let points = nodes.iter().map(|&(i, j)| {
            let p = g.point(i, j);
            [p.x, p.y]
        });
        Some(LoopWitness {
            length: if len.is_nan() { b.len } else { len },
            element: b.e,
            orientable: !g.surface.element_flips(b.e),
            basepoint: b.p,
            points: points.collect(),
            nodes,
        })
    }
}

/// Shortest loops of the requested class through the grid graph.
pub fn systole(g: &Graph, class: ClassSpec) -> Result<SystoleResult> {
    systole_with(g, class, &SweepOptions::default())
}

pub fn systole_with(g: &Graph, class: ClassSpec, opts: &SweepOptions) -> Result<SystoleResult> {
    let s = g.surface;
    if matches!(class, ClassSpec::RelativeBoundary | ClassSpec::ThroughSoul) {
        return Err(FinsysError::Unsupported("arc classes are measured by `height`".into()));
    }
    if !s.horizontal && !s.vertical {
        return Err(FinsysError::Unsupported("a plane chart has no noncontractible loops".into()));
    }
    if class == ClassSpec::Nonorientable && !s.glide {
        return Err(FinsysError::Unsupported(format!("{} has no orientation-reversing loops", s.topology)));
    }
    let cmin = s.min_stretch();
    let cands = match &opts.candidates {
        Some(c) => c.clone(),
        None => {
            let probe = enumerate(s, 2, 2);
            let b = chord_bounds(g, &probe);
            let top = if class == ClassSpec::All { b[0].min(b[1]) } else { b.iter().cloned().fold(f64::INFINITY, f64::min) };
            let reach = b.iter().cloned().filter(|v| v.is_finite()).fold(top, f64::max) * 1.3;
            let kmax = ((reach / (cmin * s.domain.width())).floor() as i64).clamp(1, 8);
            let mmax = ((reach / (cmin * s.domain.height())).floor() as i64 + 1).clamp(1, 8);
            enumerate(s, kmax, mmax)
        }
    };
    let mut bound = chord_bounds(g, &cands).map(|v| v * 1.3);
    let mut attempt = 0;
    loop {
        let mut sw = Sweep {
            g,
            class,
            opts,
            cmin,
            best: [None, None],
            bound,
            per_element: Vec::new(),
            evaluated: HashSet::new(),
        };
        sw.run_group(&cands, true);
        sw.run_group(&cands, false);
        let missing = (0..2).any(|c| wanted(class, c) && sw.best[c].is_none() && bound[c].is_finite());
        if missing && attempt < 3 {
            attempt += 1;
            bound = bound.map(|v| v * 2.0);
            continue;
        }
        if sw.best.iter().all(|b| b.is_none()) {
            break;
        }
        let w: Vec<Option<LoopWitness>> = (0..2).map(|c| sw.best[c].and_then(|b| sw.witness(b))).collect();
        let all = match (&w[0], &w[1]) {
            (Some(a), Some(b)) => Some(if a.length <= b.length { a.clone() } else { b.clone() }),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        let mut per_element = sw.per_element;
        per_element.sort_by(|a, b| a.1.total_cmp(&b.1));
        let basepoints = sw.evaluated.len();
        return Ok(SystoleResult {
            nx: g.nx,
            ny: g.ny,
            all: if wanted(class, 0) || wanted(class, 1) { all } else { None },
            orientable: w[0].clone(),
            nonorientable: w[1].clone(),
            per_element,
            basepoints,
        });
    }
    Err(FinsysError::Numerical("no noncontractible loop found within the search windows".into()))
}

/// Shortest loop in a class not parallel to `first` (second successive minimum on tori).
pub fn second_systole(g: &Graph, first: Element) -> Result<Option<f64>> {
    let s = g.surface;
    let cands: Vec<Element> = enumerate(s, 3, 3).into_iter().filter(|e| e.k * first.m - e.m * first.k != 0).collect();
    let opts = SweepOptions { candidates: Some(cands), ..SweepOptions::default() };
    let r = systole_with(g, ClassSpec::All, &opts)?;
    Ok(r.all.map(|w| w.length))
}
