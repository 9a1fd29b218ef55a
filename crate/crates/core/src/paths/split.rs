//! Splitting the mirrored Klein bottle `K = M ∪ M'` into two Möbius bands
//! `M1 = {λ2 d(x, σ) <= λ1 d(x, σ')}` and `M2`, its complement.

use serde::{Deserialize, Serialize};

use super::graph::{chord_length, Dijkstra, Graph, Window, RADIUS};
use super::height::strip_period;
use super::soul::soul_distance_field;
use super::systole::{systole_with, ClassSpec, SweepOptions};
use crate::error::{FinsysError, Result};
use crate::measure::{masked_volume, VolumeKind};
use crate::metric::{mirrored_klein, Element, Surface};

const SUB: usize = 16;

/// A region of a surface given by a node mask and cell coverage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaskedRegion {
    pub nodes: Vec<bool>,
    /// Fraction of each cell inside the region.
    pub cells: Vec<f64>,
    /// Row of the soul this band retracts to, in the Klein chart.
    pub soul_row: i64,
    /// Deck element generating the band's fundamental group.
    pub generator: Element,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitResult {
    pub lambda: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub regions: [MaskedRegion; 2],
    pub volume: [f64; 2],
    pub volume_total: f64,
    pub height: [f64; 2],
    pub systole: [f64; 2],
    /// Largest `|λ2 dσ - λ1 dσ'|` over nodes on the interface, relative to the cell size.
    pub interface_residual: f64,
}

/// Builds `K` from the Möbius band `m` and splits it with weights `0 < λ1 < λ2 <= 1`.
/// `nx` by `ny` is the grid of `m`; `K` uses twice as many rows.
pub fn weighted_split(m: &Surface, l1: f64, l2: f64, nx: usize, ny: usize) -> Result<(Surface, SplitResult)> {
    if !(l1 > 0.0 && l1 < l2 && l2 <= 1.0) {
        return Err(FinsysError::Unsupported("weights must satisfy 0 < λ1 < λ2 <= 1".into()));
    }
    let k = mirrored_klein(m)?;
    let res = split_klein(&k, l1, l2, nx, 2 * ny)?;
    Ok((k, res))
}

fn split_klein(k: &Surface, l1: f64, l2: f64, nx: usize, ny: usize) -> Result<SplitResult> {
    if ny % 4 != 0 {
        return Err(FinsysError::InvalidGrid("split grids need a multiple of 4 rows".into()));
    }
    // A stencil edge must not reach from one soul past the other one.
    if ny < 4 * RADIUS as usize {
        return Err(FinsysError::InvalidGrid("grid too coarse to separate the souls; refine it".into()));
    }
    let g = Graph::new(k, nx, ny)?;
    let sd = soul_distance_field(&g)?;
    let dp = sd.d_sigma_prime.as_ref().expect("Klein bottles have two souls");
    let f: Vec<f64> = sd.d_sigma.iter().zip(dp).map(|(a, b)| l2 * a - l1 * b).collect();
    let fval = |i: i64, j: i64| f[g.base_of(i, j).expect("Klein charts cover the plane").0];
    let node = |i: usize, j: usize| fval(i as i64, j as i64);
    let n1: Vec<bool> = f.iter().map(|v| *v <= 0.0).collect();
    let n2: Vec<bool> = n1.iter().map(|b| !b).collect();
    // Share of each cell where the bilinear interpolant of `f` is <= 0.
    let mut c1 = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1));
            c1[j * nx + i] = if a.max(b).max(c).max(d) <= 0.0 {
                1.0
            } else if a.min(b).min(c).min(d) > 0.0 {
                0.0
            } else {
                let mut hits = 0;
                for v in 0..SUB {
                    let t = (v as f64 + 0.5) / SUB as f64;
                    for u in 0..SUB {
                        let s = (u as f64 + 0.5) / SUB as f64;
                        let val = (1.0 - t) * ((1.0 - s) * a + s * b) + t * ((1.0 - s) * c + s * d);
                        hits += usize::from(val <= 0.0);
                    }
                }
                hits as f64 / (SUB * SUB) as f64
            };
        }
    }
    let c2: Vec<f64> = c1.iter().map(|w| 1.0 - w).collect();
    let v1 = masked_volume(k, VolumeKind::HolmesThompson, nx, ny, |i, j| c1[j * nx + i])?;
    let v2 = masked_volume(k, VolumeKind::HolmesThompson, nx, ny, |i, j| c2[j * nx + i])?;
    let vt = masked_volume(k, VolumeKind::HolmesThompson, nx, ny, |_, _| 1.0)?;

    let (nxi, nyi) = (nx as i64, ny as i64);
    let regions = [
        MaskedRegion { nodes: n1, cells: c1, soul_row: nyi / 2, generator: Element { k: 1, m: 0 } },
        MaskedRegion { nodes: n2, cells: c2, soul_row: nyi, generator: Element { k: 1, m: 1 } },
    ];
    let per = strip_period(&g);
    let mut heights = [0.0; 2];
    let mut systoles = [0.0; 2];
    for (r, reg) in regions.iter().enumerate() {
        let (j0, j1) = (reg.soul_row - nyi / 2, reg.soul_row + nyi / 2);
        let mi = (nxi / 2).max(RADIUS);
        let win = Window::new(&g, -mi, per + mi, j0, j1, Some(&reg.nodes));
        let inside = |i: i64, j: i64| win.contains(i, j);
        let outside = |i: i64, j: i64| win.index(i, j).is_some_and(|x| !win.active[x]);
        let sign = if r == 0 { 1.0 } else { -1.0 };
        // Distance from an interface node to the zero crossing of `f` along its
        // nearest edge leaving the region, so heights are measured between the
        // interpolated interface curves rather than the last grid rows inside.
        let offset = |i: i64, j: i64| -> Option<f64> {
            if !inside(i, j) {
                return None;
            }
            let fi = sign * fval(i, j);
            let p = g.point(i, j);
            [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .filter(|(a, b)| outside(i + a, j + b))
                .map(|(a, b)| {
                    let fo = sign * fval(i + a, j + b);
                    let t = (fi.abs() / (fi.abs() + fo.abs()).max(1e-300)).clamp(0.0, 1.0);
                    let q = g.point(i + a, j + b);
                    chord_length(k, p, p + (q - p) * t, 1e-10)
                })
                .reduce(f64::min)
        };
        let sources: Vec<(usize, f64)> = (0..per)
            .flat_map(|i| (j0..reg.soul_row).map(move |j| (i, j)))
            .filter_map(|(i, j)| Some((win.index(i, j)?, offset(i, j)?)))
            .collect();
        let soul = reg.soul_row;
        let mut dj = Dijkstra::new(&win);
        dj.run(&g, &win, &sources, f64::INFINITY, None, |_, _| false);
        heights[r] = (0..win.len())
            .filter(|&x| dj.dist[x].is_finite())
            .filter_map(|x| {
                let (i, j) = win.coords(x);
                if j <= soul {
                    return None;
                }
                Some(dj.dist[x] + offset(i, j)?)
            })
            .fold(f64::INFINITY, f64::min);
        if !heights[r].is_finite() {
            return Err(FinsysError::InvalidGrid("grid too coarse to separate the souls; refine it".into()));
        }
        let gen = reg.generator;
        let cands: Vec<Element> = (1..=3).map(|p| Element { k: p * gen.k, m: if p % 2 == 1 { gen.m } else { 0 } }).collect();
        let opts = SweepOptions {
            mask: Some(reg.nodes.clone()),
            j_range: Some((j0, j1)),
            candidates: Some(cands),
            rows: Some((j0, j1)),
            ..SweepOptions::default()
        };
        systoles[r] = systole_with(&g, ClassSpec::All, &opts)?.all.map_or(f64::INFINITY, |w| w.length);
    }
    let h = (g.dx().powi(2) + g.dy().powi(2)).sqrt();
    let mut resid: f64 = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let here = node(i, j) <= 0.0;
            let edge = [(i + 1, j), (i, j + 1)].iter().any(|&(a, b)| (node(a, b) <= 0.0) != here);
            if edge {
                resid = resid.max(node(i, j).abs() / h);
            }
        }
    }
    Ok(SplitResult {
        lambda: [l1, l2],
        nx,
        ny,
        regions,
        volume: [v1, v2],
        volume_total: vt,
        height: heights,
        systole: systoles,
        interface_residual: resid,
    })
}
