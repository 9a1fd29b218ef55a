//! Invariants of one surface and the verdicts of the applicable bounds.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bounds::BoundId;
use crate::error::{FinsysError, Result};
use crate::measure::volumes;
use crate::metric::{klein_symmetry_flags, Surface, SurfaceDescription, SymmetryFlags, Topology};
use crate::paths::{collapse_boundary, height, second_systole, systole, ClassSpec, Graph};

/// Symmetry residual below which a Klein bottle counts as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-6;

/// A value with an error bar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub error: f64,
}

impl Measured {
    pub fn rel(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.error / self.value.abs()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Finest graph resolution (cells along the chart's x side).
    pub grid: usize,
    /// Number of halvings below `grid` used to estimate the refinement gap.
    pub refine: usize,
    /// Resolution of the volume quadrature.
    pub volume_grid: usize,
    pub bounds: Vec<BoundId>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { grid: 64, refine: 1, volume_grid: 64, bounds: BoundId::ALL.to_vec() }
    }
}

/// Path invariants at one graph resolution.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LevelInvariants {
    pub nx: usize,
    pub ny: usize,
    pub sys: Option<f64>,
    pub sys_plus: Option<f64>,
    pub sys_minus: Option<f64>,
    pub second_sys: Option<f64>,
    pub h: Option<f64>,
    pub rp2_sys: Option<f64>,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Reported as evidence only: the bound is conjectural for this surface.
    Evidence,
    /// The bound does not apply or an invariant is missing.
    Error,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub bound: BoundId,
    pub status: Status,
    pub ratio: Option<f64>,
    pub bound_value: Option<f64>,
    /// `ratio - bound_value`.
    pub margin: Option<f64>,
    /// Combined numerical tolerance on the margin.
    pub tolerance: Option<f64>,
    pub note: Option<String>,
}

impl Verdict {
    fn error(bound: BoundId, note: impl Into<String>) -> Self {
        Self { bound, status: Status::Error, ratio: None, bound_value: None, margin: None, tolerance: None, note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub description: Option<SurfaceDescription>,
    pub seed: Option<u64>,
    pub options: CheckOptions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantReport {
    pub surface: String,
    pub topology: Topology,
    pub sys: Option<Measured>,
    pub sys_plus: Option<Measured>,
    pub sys_minus: Option<Measured>,
    pub second_sys: Option<Measured>,
    pub h: Option<Measured>,
    /// Systole of the projective plane obtained by collapsing the boundary.
    pub rp2_sys: Option<Measured>,
    pub vol_ht: Measured,
    pub vol_b: Measured,
    /// `h / sys`.
    pub lambda: Option<f64>,
    /// `vol_HT <= vol_B` within the quadrature errors.
    pub duran: bool,
    pub symmetry: Option<SymmetryFlags>,
    pub levels: Vec<LevelInvariants>,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
    pub seconds: f64,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn verdict(&self, b: BoundId) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.bound == b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Writes the report through a temporary file so readers never see a partial one.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_json())
    }
}

pub(crate) fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Path invariants needed by `bounds` on one graph.
pub fn level_invariants(s: &Surface, n: usize, bounds: &[BoundId]) -> Result<LevelInvariants> {
    let t0 = Instant::now();
    let g = Graph::matched(s, n)?;
    let mut out = LevelInvariants { nx: g.nx, ny: g.ny, ..Default::default() };
    match s.topology {
        Topology::Torus => {
            let r = systole(&g, ClassSpec::All)?;
            let w = r.all.ok_or_else(|| FinsysError::Numerical("no systolic loop found".into()))?;
            out.sys = Some(w.length);
            if bounds.contains(&BoundId::KeenFinsler) {
                out.second_sys = second_systole(&g, w.element)?;
            }
        }
        Topology::Cylinder => {
            out.sys = systole(&g, ClassSpec::All)?.value(ClassSpec::All);
            out.h = Some(height(&g)?.length);
        }
        Topology::Mobius => {
            if bounds.contains(&BoundId::IvanovRp2) {
                let c = collapse_boundary(s)?.systole_on(&g)?;
                out.h = Some(c.band_height);
                out.sys = Some(c.band_systole);
                out.sys_minus = Some(c.band_systole_nonorientable);
                out.sys_plus = Some(c.band_systole_orientable).filter(|v| v.is_finite());
                out.rp2_sys = Some(c.systole);
            } else {
                let r = systole(&g, ClassSpec::All)?;
                out.sys = r.value(ClassSpec::All);
                out.sys_plus = r.value(ClassSpec::Orientable);
                out.sys_minus = r.value(ClassSpec::Nonorientable);
                out.h = Some(height(&g)?.length);
            }
        }
        Topology::Klein => {
            out.sys = systole(&g, ClassSpec::All)?.value(ClassSpec::All);
        }
        t => return Err(FinsysError::Unsupported(format!("no invariants are computed for {t}"))),
    }
    out.seconds = t0.elapsed().as_secs_f64();
    Ok(out)
}

fn measured(levels: &[LevelInvariants], pick: impl Fn(&LevelInvariants) -> Option<f64>) -> Option<Measured> {
    let vals: Vec<f64> = levels.iter().filter_map(&pick).collect();
    let last = *vals.last()?;
    let gap = if vals.len() >= 2 { (last - vals[vals.len() - 2]).abs() } else { 0.0 };
    Some(Measured { value: last, error: gap })
}

/// Computes the invariants of `s` and evaluates the requested bounds.
pub fn check(s: &Surface, opts: &CheckOptions) -> Result<InvariantReport> {
    let t0 = Instant::now();
    let (ht, bu) = volumes(s, opts.volume_grid, opts.volume_grid)?;
    let vol_ht = Measured { value: ht.value, error: ht.estimated_error };
    let vol_b = Measured { value: bu.value, error: bu.estimated_error };
    let duran = vol_ht.value <= vol_b.value + vol_ht.error + vol_b.error + 1e-12 * vol_b.value;

    let mut levels = Vec::new();
    for r in (0..=opts.refine).rev() {
        let n = opts.grid >> r;
        if n < 8 {
            continue;
        }
        levels.push(level_invariants(s, n, &opts.bounds)?);
    }
    let sys = measured(&levels, |l| l.sys);
    let h = measured(&levels, |l| l.h);
    let lambda = match (h, sys) {
        (Some(h), Some(s)) => Some(h.value / s.value),
        _ => None,
    };
    let symmetry = (s.topology == Topology::Klein).then(|| klein_symmetry_flags(s, SYMMETRY_TOL));
    let mut report = InvariantReport {
        surface: s.name.clone(),
        topology: s.topology,
        sys,
        sys_plus: measured(&levels, |l| l.sys_plus),
        sys_minus: measured(&levels, |l| l.sys_minus),
        second_sys: measured(&levels, |l| l.second_sys),
        h,
        rp2_sys: measured(&levels, |l| l.rp2_sys),
        vol_ht,
        vol_b,
        lambda,
        duran,
        symmetry,
        levels,
        verdicts: Vec::new(),
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            description: s.description.clone(),
            seed: match &s.description {
                Some(SurfaceDescription::Random { seed, .. }) => Some(*seed),
                _ => None,
            },
            options: opts.clone(),
        },
        seconds: 0.0,
    };
    report.verdicts = opts.bounds.iter().map(|&b| verdict(&report, b)).collect();
    report.seconds = t0.elapsed().as_secs_f64();
    Ok(report)
}

/// Verdict for `b` from the invariants already in `r`.
pub fn verdict(r: &InvariantReport, b: BoundId) -> Verdict {
    if !b.applies_to(r.topology) {
        return Verdict::error(b, format!("{b} does not apply to a {}", r.topology));
    }
    let v = r.vol_ht;
    // Ratio as vol / (x * y) with relative error bars added up.
    let pair = |x: Option<Measured>, y: Option<Measured>| -> Option<(f64, f64)> {
        let (x, y) = (x?, y?);
        let ratio = v.value / (x.value * y.value);
        Some((ratio, ratio * (v.rel() + x.rel() + y.rel())))
    };
    let (ratio, tol) = match b {
        BoundId::FinslerLoewnerTorus | BoundId::KleinSharp | BoundId::KleinJohn | BoundId::KleinJohnImproved => pair(r.sys, r.sys),
        BoundId::IvanovRp2 => pair(r.rp2_sys, r.rp2_sys),
        BoundId::KeenFinsler => pair(r.sys, r.second_sys),
        BoundId::Cylinder | BoundId::MobiusPiecewise => pair(r.sys, r.h),
    }
    .map_or((None, None), |(a, t)| (Some(a), Some(t)));
    let Some(ratio) = ratio else {
        return Verdict::error(b, "an invariant needed by the bound was not computed");
    };
    let bound_value = match b.value(r.lambda) {
        Ok(x) => x,
        Err(e) => return Verdict::error(b, e.to_string()),
    };
    let tol = tol.unwrap_or(0.0) + 1e-9 * ratio;
    let margin = ratio - bound_value;
    let mut note = None;
    let status = if b == BoundId::KleinSharp && !r.symmetry.as_ref().is_some_and(|f| f.any()) {
        note = Some("no symmetry detected: the bound is conjectural here".to_string());
        Status::Evidence
    } else if margin >= -tol {
        Status::Pass
    } else {
        Status::Fail
    };
    if b.is_external() && note.is_none() {
        note = Some("constant relies on an external volume comparison".into());
    }
    Verdict { bound: b, status, ratio: Some(ratio), bound_value: Some(bound_value), margin: Some(margin), tolerance: Some(tol), note }
}
