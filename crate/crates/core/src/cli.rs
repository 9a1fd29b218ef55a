//! The `finsys` command line.
//!
//! Exit codes: 0 when every verdict passes, 2 when a numerical check
//! fails, 1 for usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{FinsysError, Result};
use crate::great_circles::{trace_great_circle, ConeProfile};
use crate::measure::{volumes, VolumeKind};
use crate::metric::{klein_symmetry_flags, load_surface, Surface, SymmetryKind, Topology};
use crate::paths::{height, systole, ClassSpec, Graph};
use crate::verify::{check, parse_bounds, reproduce_table, run_suite, to_csv, CheckOptions, Status, SuiteOptions, TableScale, CRITERIA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "finsys", version, about = "Systoles, heights and areas of Finsler surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TraceFormat {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Ht,
    Busemann,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Reproduce {
    Paper,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a surface file and print the construction with its checks.
    Describe { file: PathBuf },
    /// Holmes-Thompson and Busemann areas.
    Volume {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        kind: KindArg,
        /// `N` or `NxM` cells.
        #[arg(long, default_value = "64", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Shortest noncontractible loop of a class.
    Systole {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1)]
        refine: usize,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Shortest arc between the boundary components.
    Height {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1)]
        refine: usize,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// All invariants and bound verdicts of one surface.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        bounds: String,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1)]
        refine: usize,
        #[arg(long)]
        volume_grid: Option<usize>,
        /// Report file (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random surfaces of one topology through `check`.
    Suite {
        #[arg(long)]
        topology: String,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Comma-separated: soul, soul_switching, rotational.
        #[arg(long)]
        symmetry: Option<String>,
        #[arg(long)]
        roughness: Option<f64>,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The reproduction table as CSV.
    Table {
        #[arg(long, value_enum, default_value = "paper")]
        reproduce: Reproduce,
        /// Comma-separated criterion numbers; all by default.
        #[arg(long)]
        criteria: Option<String>,
        /// Coarser grids and fewer seeds.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A great circle of the band `|v| <= a` with the cone profile.
    Trace {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        theta0: f64,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: TraceFormat,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Output goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                FinsysError::Numerical(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn parse_grid(text: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("expected N or NxM, got `{text}`");
    let (a, b) = text.split_once(['x', 'X']).unwrap_or((text, text));
    let n = a.trim().parse().map_err(|_| bad())?;
    let m = b.trim().parse().map_err(|_| bad())?;
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

fn levels(grid: usize, refine: usize) -> Vec<usize> {
    (0..=refine).rev().map(|r| grid >> r).filter(|&n| n >= 8).collect()
}

fn emit(out: &mut dyn std::io::Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn describe(s: &Surface) -> serde_json::Value {
    let (res, x, y) = s.equivariance_residual(64);
    let mut v = json!({
        "name": s.name,
        "topology": s.topology.to_string(),
        "domain": [s.domain.x0, s.domain.x1, s.domain.y0, s.domain.y1],
        "orientable": s.is_orientable(),
        "boundary": s.has_boundary(),
        "seams": s.y_seams,
        "equivariance_residual": res,
        "worst_point": [x, y],
        "min_stretch": s.min_stretch(),
        "description": s.description,
    });
    if s.topology == Topology::Klein {
        v["symmetry"] = serde_json::to_value(klein_symmetry_flags(s, crate::verify::report::SYMMETRY_TOL)).unwrap_or_default();
    }
    v
}

fn execute(cmd: Command, out: &mut dyn std::io::Write) -> Result<i32> {
    match cmd {
        Command::Describe { file } => {
            let s = load_surface(&file)?;
            emit(out, &format!("{}\n", serde_json::to_string_pretty(&describe(&s))?))?;
            Ok(EXIT_OK)
        }
        Command::Volume { file, kind, grid, out: fmt } => {
            let s = load_surface(&file)?;
            let (ht, bu) = volumes(&s, grid.0, grid.1)?;
            let picked: Vec<_> = match kind {
                KindArg::Ht => vec![ht],
                KindArg::Busemann => vec![bu],
                KindArg::Both => vec![ht, bu],
            };
            match fmt {
                Format::Json => emit(out, &format!("{}\n", serde_json::to_string_pretty(&picked)?))?,
                Format::Text => {
                    let mut t = String::new();
                    for v in &picked {
                        let name = match v.kind {
                            VolumeKind::HolmesThompson => "vol_HT",
                            VolumeKind::Busemann => "vol_B",
                        };
                        let _ = writeln!(t, "{name} = {:.12} ± {:.2e}", v.value, v.estimated_error);
                    }
                    emit(out, &t)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Systole { file, class, grid, refine, out: fmt } => {
            let s = load_surface(&file)?;
            let class: ClassSpec = class.parse()?;
            let mut rows = Vec::new();
            let mut last = None;
            for n in levels(grid, refine) {
                let g = Graph::matched(&s, n)?;
                let r = systole(&g, class)?;
                let w = match class {
                    ClassSpec::Orientable => r.orientable.clone(),
                    ClassSpec::Nonorientable => r.nonorientable.clone(),
                    _ => r.all.clone(),
                };
                let w = w.ok_or_else(|| FinsysError::Numerical("no loop of the requested class found".into()))?;
                rows.push((g.nx, g.ny, w.length));
                last = Some(w);
            }
            let w = last.ok_or_else(|| FinsysError::InvalidGrid("grid too coarse".into()))?;
            write_paths(out, fmt, "systole", &rows, &json!({ "element": w.element, "orientable": w.orientable, "points": w.points }))?;
            Ok(EXIT_OK)
        }
        Command::Height { file, grid, refine, out: fmt } => {
            let s = load_surface(&file)?;
            let mut rows = Vec::new();
            let mut last = None;
            for n in levels(grid, refine) {
                let g = Graph::matched(&s, n)?;
                let h = height(&g)?;
                rows.push((g.nx, g.ny, h.length));
                last = Some(h);
            }
            let h = last.ok_or_else(|| FinsysError::InvalidGrid("grid too coarse".into()))?;
            write_paths(out, fmt, "height", &rows, &json!({ "points": h.points }))?;
            Ok(EXIT_OK)
        }
        Command::Check { file, bounds, grid, refine, volume_grid, out: path } => {
            let s = load_surface(&file)?;
            let mut bounds = parse_bounds(&bounds)?;
            let all_requested = bounds.len() == crate::verify::BoundId::ALL.len();
            if all_requested {
                bounds.retain(|b| b.applies_to(s.topology));
            }
            let opts = CheckOptions { grid, refine, volume_grid: volume_grid.unwrap_or(grid), bounds };
            let r = check(&s, &opts)?;
            if let Some(p) = path {
                r.write(&p)?;
            }
            let mut t = String::new();
            let _ = writeln!(t, "{} ({})", r.surface, r.topology);
            let _ = writeln!(t, "  vol_HT = {:.9} ± {:.1e}   vol_B = {:.9} ± {:.1e}", r.vol_ht.value, r.vol_ht.error, r.vol_b.value, r.vol_b.error);
            for (name, m) in [("sys", r.sys), ("sys+", r.sys_plus), ("sys-", r.sys_minus), ("sys2", r.second_sys), ("h", r.h), ("sys(RP2)", r.rp2_sys)] {
                if let Some(m) = m {
                    let _ = writeln!(t, "  {name:<9}= {:.9} ± {:.1e}", m.value, m.error);
                }
            }
            for v in &r.verdicts {
                let status = match v.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Evidence => "EVIDENCE",
                    Status::Error => "ERROR",
                };
                let _ = write!(t, "  {status:<8} {:<22}", v.bound.name());
                if let (Some(ratio), Some(b), Some(m)) = (v.ratio, v.bound_value, v.margin) {
                    let _ = write!(t, " ratio {ratio:.6} bound {b:.6} margin {m:+.6}");
                }
                if let Some(n) = &v.note {
                    let _ = write!(t, "  ({n})");
                }
                t.push('\n');
            }
            emit(out, &t)?;
            Ok(if r.all_pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Suite { topology, seeds, first_seed, symmetry, roughness, grid, out: path } => {
            let topo: Topology = topology.parse()?;
            let mut o = SuiteOptions::new(topo, seeds);
            o.first_seed = first_seed;
            o.roughness = roughness;
            o.check.grid = grid;
            o.check.volume_grid = grid;
            if let Some(sym) = symmetry {
                o.symmetry = sym.split(',').map(|p| p.trim().parse::<SymmetryKind>()).collect::<Result<_>>()?;
            }
            let r = run_suite(&o)?;
            if let Some(p) = path {
                crate::verify::report::write_atomic(&p, &serde_json::to_string_pretty(&r)?)?;
            }
            let mut t = String::new();
            let _ = writeln!(t, "{} {} surfaces in {:.1} s", r.entries.len(), topo, r.seconds);
            for (b, m) in &r.min_margin {
                let _ = writeln!(t, "  min margin {:<22} {m:+.6}", b.name());
            }
            if let Some(c) = r.conjecture_min_ratio {
                let _ = writeln!(t, "  open case: min vol_HT/sys^2 = {c:.6} over Klein bottles without symmetry (evidence only)");
            }
            for (seed, b) in &r.failures {
                let _ = writeln!(t, "  FAIL seed {seed} {}", b.name());
            }
            let _ = writeln!(t, "{}", if r.all_pass() { "PASS" } else { "FAIL" });
            emit(out, &t)?;
            Ok(if r.all_pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Table { reproduce: Reproduce::Paper, criteria, quick, out: path } => {
            let list: Vec<u32> = match criteria {
                Some(c) => c
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().map_err(|_| FinsysError::Unsupported(format!("bad criterion `{p}`"))))
                    .collect::<Result<_>>()?,
                None => CRITERIA.to_vec(),
            };
            let scale = if quick { TableScale::quick() } else { TableScale::full() };
            let rows = reproduce_table(&list, &scale)?;
            let csv = to_csv(&rows);
            match path {
                Some(p) => crate::verify::report::write_atomic(&p, &csv)?,
                None => emit(out, &csv)?,
            }
            Ok(if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Trace { a, theta0, s, samples, out: fmt, file } => {
            let tr = trace_great_circle(s, theta0, a, samples)?;
            let cone = ConeProfile::new(a)?.samples(samples.max(8));
            let text = match fmt {
                TraceFormat::Csv => {
                    let mut t = String::from("series,x,y\n");
                    for p in &tr.points {
                        let _ = writeln!(t, "circle,{:.12},{:.12}", p[0], p[1]);
                    }
                    for c in &cone {
                        let _ = writeln!(t, "cone,{:.12},{:.12}", c[0], c[1]);
                    }
                    t
                }
                TraceFormat::Svg => trace_svg(a, &tr.points, &cone),
            };
            match file {
                Some(p) => crate::verify::report::write_atomic(&p, &text)?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_paths(out: &mut dyn std::io::Write, fmt: Format, what: &str, rows: &[(usize, usize, f64)], witness: &serde_json::Value) -> Result<()> {
    let value = rows.last().map(|r| r.2).unwrap_or(f64::NAN);
    match fmt {
        Format::Json => {
            let levels: Vec<_> = rows.iter().map(|(nx, ny, v)| json!({ "nx": nx, "ny": ny, "value": v })).collect();
            let v = json!({ what: value, "levels": levels, "witness": witness });
            emit(out, &format!("{}\n", serde_json::to_string_pretty(&v)?))
        }
        Format::Text => {
            let mut t = String::new();
            let mut prev: Option<f64> = None;
            for (nx, ny, v) in rows {
                let gap = prev.map_or(String::new(), |p| format!("  gap {:.3e}", p - v));
                let _ = writeln!(t, "{nx:>5} x {ny:<5} {what} = {v:.12}{gap}");
                prev = Some(*v);
            }
            emit(out, &t)
        }
    }
}

/// Great circle in the `(u, v)` chart over the band, and the cone
/// half-angle `theta(v)` drawn as a profile on the right.
fn trace_svg(a: f64, pts: &[[f64; 2]], cone: &[[f64; 2]]) -> String {
    let (w, h) = (720.0, 240.0);
    let umin = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let umax = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let sx = |u: f64| 20.0 + (u - umin) / (umax - umin).max(1e-12) * (w - 200.0);
    let sy = |v: f64| h / 2.0 - v / a * (h / 2.0 - 20.0);
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n");
    let _ = writeln!(s, "<rect x=\"20\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#888\"/>", sy(a), w - 200.0, sy(-a) - sy(a));
    let path: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
    let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"1.5\" points=\"{}\"/>", path.join(" "));
    let cx = w - 160.0;
    let prof: Vec<String> = cone.iter().map(|c| format!("{:.2},{:.2}", cx + c[1] / std::f64::consts::FRAC_PI_2 * 140.0, sy(c[0]))).collect();
    let _ = writeln!(s, "<line x1=\"{cx}\" y1=\"{:.2}\" x2=\"{cx}\" y2=\"{:.2}\" stroke=\"#888\"/>", sy(a), sy(-a));
    let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"#22c\" stroke-width=\"1.5\" points=\"{}\"/>", prof.join(" "));
    s.push_str("</svg>\n");
    s
}
