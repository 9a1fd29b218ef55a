//! Batches of random surfaces run through `check`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bounds::BoundId;
use super::random::random_surface;
use super::report::{check, CheckOptions, InvariantReport, Status};
use crate::convex::inclusion_factors;
use crate::error::Result;
use crate::measure::duran_check;
use crate::metric::{SymmetryKind, Topology};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub topology: Topology,
    pub first_seed: u64,
    pub seeds: usize,
    pub symmetry: Vec<SymmetryKind>,
    /// Fixed roughness, or `None` to cycle through 0, 1/4, .., 1 by seed.
    pub roughness: Option<f64>,
    pub check: CheckOptions,
    /// Tangent bodies per surface tested for the John double inclusion.
    pub john_samples: usize,
    /// Cells per side of the pointwise Dürán check.
    pub duran_grid: usize,
}

impl SuiteOptions {
    pub fn new(topology: Topology, seeds: usize) -> Self {
        Self {
            topology,
            first_seed: 0,
            seeds,
            symmetry: Vec::new(),
            roughness: None,
            check: CheckOptions { grid: 32, refine: 1, volume_grid: 32, bounds: BoundId::for_topology(topology) },
            john_samples: 4,
            duran_grid: 8,
        }
    }

    pub fn roughness_for(&self, seed: u64) -> f64 {
        self.roughness.unwrap_or((seed % 5) as f64 / 4.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub seed: u64,
    pub roughness: f64,
    pub report: InvariantReport,
    /// Cells where `area(B) area(B°) > pi^2`.
    pub duran_violations: usize,
    /// Extremes of `gauge_E / gauge_B` over the sampled bodies and directions;
    /// `E ⊂ B ⊂ sqrt(2) E` means both lie in `[1, sqrt 2]`.
    pub john_inner_min: f64,
    pub john_outer_max: f64,
}

impl SuiteEntry {
    pub fn john_ok(&self) -> bool {
        self.john_inner_min >= 1.0 - 1e-6 && self.john_outer_max <= std::f64::consts::SQRT_2 * (1.0 + 1e-6)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub entries: Vec<SuiteEntry>,
    pub failures: Vec<(u64, BoundId)>,
    /// Smallest `ratio - bound` per bound over the suite.
    pub min_margin: Vec<(BoundId, f64)>,
    /// Smallest `vol_HT / sys^2` among Klein bottles without detected
    /// symmetry: evidence on the open case, never a verdict.
    pub conjecture_min_ratio: Option<f64>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.entries.iter().all(|e| e.duran_violations == 0 && e.report.duran && e.john_ok())
    }
}

/// Runs `opts.seeds` consecutive seeds.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let t0 = Instant::now();
    let mut entries = Vec::new();
    for seed in opts.first_seed..opts.first_seed + opts.seeds as u64 {
        let rough = opts.roughness_for(seed);
        let s = random_surface(seed, opts.topology, rough, &opts.symmetry)?;
        let report = check(&s, &opts.check)?;
        let duran = duran_check(&s, opts.duran_grid, opts.duran_grid)?;
        let (mut inner, mut outer) = (f64::INFINITY, 0.0f64);
        let d = s.domain;
        for k in 0..opts.john_samples {
            // Golden-ratio sample points of the chart.
            let (fx, fy) = ((k as f64 * 0.618_034 + 0.1).fract(), (k as f64 * 0.414_214 + 0.3).fract());
            let body = s.field.eval(d.x0 + fx * d.width(), d.y0 + fy * d.height()).body;
            let e = body.john_ellipse()?;
            let (a, b) = inclusion_factors(&e, &body, 720);
            inner = inner.min(a);
            outer = outer.max(b);
        }
        entries.push(SuiteEntry { seed, roughness: rough, report, duran_violations: duran.violations, john_inner_min: inner, john_outer_max: outer });
    }
    let mut failures = Vec::new();
    let mut min_margin: Vec<(BoundId, f64)> = Vec::new();
    let mut conj: Option<f64> = None;
    for e in &entries {
        for v in &e.report.verdicts {
            if v.status == Status::Fail {
                failures.push((e.seed, v.bound));
            }
            if v.status == Status::Evidence {
                if let Some(r) = v.ratio {
                    conj = Some(conj.map_or(r, |c| c.min(r)));
                }
                continue;
            }
            if let Some(m) = v.margin {
                match min_margin.iter_mut().find(|(b, _)| *b == v.bound) {
                    Some(x) => x.1 = x.1.min(m),
                    None => min_margin.push((v.bound, m)),
                }
            }
        }
    }
    Ok(SuiteReport { options: opts.clone(), entries, failures, min_margin, conjecture_min_ratio: conj, seconds: t0.elapsed().as_secs_f64() })
}
