use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use approx::assert_relative_eq;
use finsys::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use finsys::convex::SymBody;
use finsys::metric::*;
use finsys::verify::*;
use finsys::Vec2;

fn opts(s: &Surface, grid: usize) -> CheckOptions {
    CheckOptions { grid, refine: 1, volume_grid: grid, bounds: BoundId::for_topology(s.topology) }
}

#[test]
fn fm_bound_branches() {
    assert_relative_eq!(fm_bound(1.0).unwrap(), 2.0 / PI, epsilon = 1e-15);
    assert_relative_eq!(fm_bound(0.3).unwrap(), 2.0 / PI, epsilon = 1e-15);
    assert_relative_eq!(fm_bound(2.0).unwrap(), 3.0 / (2.0 * PI), epsilon = 1e-15);
    assert_relative_eq!(fm_bound(1e9).unwrap(), 1.0 / PI, max_relative = 1e-8);
    assert!(fm_bound(0.0).is_err());
    assert!(fm_bound(-1.0).is_err());
}

#[test]
fn bound_catalogue() {
    assert_eq!(BoundId::ALL.len(), 8);
    for b in BoundId::ALL {
        assert_eq!(b.name().parse::<BoundId>().unwrap(), b);
    }
    assert_eq!(parse_bounds("all").unwrap().len(), 8);
    assert_eq!(parse_bounds("klein_sharp,cylinder").unwrap(), vec![BoundId::KleinSharp, BoundId::Cylinder]);
    assert!(parse_bounds("nonsense").is_err());
    assert_relative_eq!(BoundId::KleinJohn.value(None).unwrap(), SQRT_2 / PI, epsilon = 1e-15);
    assert_relative_eq!(BoundId::KleinJohnImproved.value(None).unwrap(), 4.0 * SQRT_2 / (PI * PI), epsilon = 1e-15);
    assert!(!BoundId::KleinSharp.applies_to(Topology::Torus));
}

#[test]
fn riemannian_square_torus_margin() {
    let t = flat_torus(SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
    let r = check(&t, &opts(&t, 16)).unwrap();
    let v = r.verdict(BoundId::FinslerLoewnerTorus).unwrap();
    assert_eq!(v.status, Status::Pass);
    assert_relative_eq!(v.ratio.unwrap(), 1.0, max_relative = 1e-9);
    assert_relative_eq!(v.margin.unwrap(), 1.0 - 2.0 / PI, max_relative = 1e-9);
    assert!(r.all_pass());
}

#[test]
fn equality_families_have_zero_margin() {
    let k = sup_norm_klein(FRAC_PI_2).unwrap();
    let r = check(&k, &opts(&k, 16)).unwrap();
    let v = r.verdict(BoundId::KleinSharp).unwrap();
    assert_eq!(v.status, Status::Pass);
    assert!(v.margin.unwrap().abs() < 1e-9);
    let g = glued_wide_mobius(2.0).unwrap();
    let r = check(&g, &opts(&g, 32)).unwrap();
    let v = r.verdict(BoundId::MobiusPiecewise).unwrap();
    assert_eq!(v.status, Status::Pass);
    assert_relative_eq!(v.bound_value.unwrap(), 3.0 / (2.0 * PI), max_relative = 1e-5);
    assert!(v.margin.unwrap().abs() < 0.02 * v.bound_value.unwrap());
    let t = flat_torus(SymBody::square(), Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0)).unwrap();
    let r = check(&t, &opts(&t, 8)).unwrap();
    assert!(r.verdict(BoundId::FinslerLoewnerTorus).unwrap().margin.unwrap().abs() < 1e-9);
}

#[test]
fn almost_extremal_margin_shrinks_with_the_neck() {
    let margins: Vec<f64> = [0.4, 0.2, 0.1]
        .iter()
        .map(|&eps| {
            let m = almost_extremal_mobius(2.0, eps).unwrap();
            let o = CheckOptions { bounds: vec![BoundId::MobiusPiecewise], ..opts(&m, 16) };
            check(&m, &o).unwrap().verdict(BoundId::MobiusPiecewise).unwrap().margin.unwrap()
        })
        .collect();
    assert!(margins.iter().all(|m| *m >= -1e-9), "{margins:?}");
    assert!(margins[0] > margins[1] && margins[1] > margins[2], "{margins:?}");
}

#[test]
fn inapplicable_bounds_give_error_entries() {
    let t = flat_torus(SymBody::disc(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
    let o = CheckOptions { bounds: vec![BoundId::KleinSharp, BoundId::FinslerLoewnerTorus], ..opts(&t, 8) };
    let r = check(&t, &o).unwrap();
    assert_eq!(r.verdict(BoundId::KleinSharp).unwrap().status, Status::Error);
    assert_eq!(r.verdict(BoundId::FinslerLoewnerTorus).unwrap().status, Status::Pass);
}

#[test]
fn asymmetric_klein_bottles_are_evidence_only() {
    let k = random_surface(21, Topology::Klein, 0.75, &[]).unwrap();
    let r = check(&k, &opts(&k, 16)).unwrap();
    assert!(!r.symmetry.unwrap().any());
    assert_eq!(r.verdict(BoundId::KleinSharp).unwrap().status, Status::Evidence);
    assert_eq!(r.verdict(BoundId::KleinJohn).unwrap().status, Status::Pass);
}

#[test]
fn reports_round_trip_as_json() {
    let m = sup_norm_mobius(0.5).unwrap();
    let r = check(&m, &opts(&m, 16)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    r.write(&p).unwrap();
    let back: InvariantReport = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(back.verdicts.len(), r.verdicts.len());
    assert_relative_eq!(back.rp2_sys.unwrap().value, FRAC_PI_2, max_relative = 1e-12);
}

#[test]
fn john_metric_of_the_sup_norm_klein_bottle() {
    let k = sup_norm_klein(FRAC_PI_2).unwrap();
    let g = john_field(&k, 4, 4).unwrap();
    let w = Vec2::new(0.6, 0.8);
    assert_relative_eq!(g.norm(0.3, 0.2, w), 1.0, max_relative = 1e-6);
    let r = john_lower_bound_check(&k, 8, 1e-6).unwrap();
    assert!(r.all_hold(), "{r:?}");
    assert!(r.sys_g >= r.sys_f * (1.0 - 1e-9));
}

#[test]
fn john_chain_on_random_klein_bottles() {
    for seed in 0..2 {
        let k = random_surface(seed, Topology::Klein, 0.5, &[]).unwrap();
        let r = john_lower_bound_check(&k, 8, 0.02).unwrap();
        assert!(r.vol_g <= 2.0 * r.vol_ht_f * 1.02);
        assert!(r.ratio >= SQRT_2 / PI);
        assert!(r.sandwich_holds, "{:?}", r.sandwich);
    }
    assert!(john_lower_bound_check(&sup_norm_mobius(1.0).unwrap(), 8, 0.02).is_err());
}

#[test]
fn small_suites_pass() {
    for (topo, sym) in [(Topology::Mobius, vec![]), (Topology::Klein, vec![SymmetryKind::Rotational])] {
        let mut o = SuiteOptions::new(topo, 2);
        o.symmetry = sym;
        o.check.grid = 16;
        o.check.volume_grid = 16;
        let r = run_suite(&o).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures);
        assert_eq!(r.entries.len(), 2);
        // Roughness 0 gives a Riemannian field: no Dürán gap.
        let e = &r.entries[0].report;
        assert!((e.vol_ht.value - e.vol_b.value).abs() <= 2.0 * (e.vol_ht.error + e.vol_b.error) + 1e-9 * e.vol_b.value);
    }
}

#[test]
fn quick_table_rows() {
    let rows = reproduce_table(&[7, 11], &TableScale::quick()).unwrap();
    assert!(rows.iter().all(|r| r.pass), "{}", to_csv(&rows));
    let csv = to_csv(&rows);
    assert!(csv.starts_with("criterion,case,quantity"));
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(criterion_rows(12, &TableScale::quick()).is_err());
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["finsys"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn surface_file(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn cli_usage_errors_exit_one() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(cli(&["volume"]).0, EXIT_USAGE);
    assert_eq!(cli(&["volume", "x.json", "--grid", "0x3"]).0, EXIT_USAGE);
    assert_eq!(cli(&["describe", "/definitely/missing.json"]).0, EXIT_USAGE);
    assert_eq!(cli(&["trace", "--a", "0.5", "--theta0", "0.9"]).0, EXIT_USAGE);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("systole"));
    assert_eq!(cli(&["--version"]).0, EXIT_OK);
}

#[test]
fn cli_commands_on_a_surface_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = surface_file(&dir, "m.json", r#"{ "kind": "sup_norm_mobius", "lambda": 0.5 }"#);
    let (code, out, _) = cli(&["describe", &f]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["topology"], "mobius");
    let (code, out, _) = cli(&["volume", &f, "--kind", "ht", "--grid", "16x8", "--out", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_relative_eq!(v[0]["value"].as_f64().unwrap(), PI, max_relative = 1e-12);
    let (code, out, _) = cli(&["systole", &f, "--class", "nonorientable", "--grid", "16", "--out", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_relative_eq!(v["systole"].as_f64().unwrap(), PI, max_relative = 1e-12);
    assert!(v["witness"]["points"].as_array().unwrap().len() >= 2);
    let (code, out, _) = cli(&["height", &f, "--grid", "16"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("height = 1.5707963"));
    let report = dir.path().join("report.json");
    let (code, out, _) = cli(&["check", &f, "--grid", "16", "--out", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS"));
    assert!(report.exists());
}

#[test]
fn cli_numerical_failures_exit_two() {
    // The Klein bottle glued from F_pi/3 has a loop of length pi/2, so its
    // systole row cannot match pi.
    let (code, out, _) = cli(&["table", "--reproduce", "paper", "--criteria", "6", "--quick"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.lines().any(|l| l.contains("F_pi/3,sys") && l.ends_with("FAIL,")));
    let dir = tempfile::tempdir().unwrap();
    let f = surface_file(&dir, "k.json", r#"{ "kind": "klein_from_fa" }"#);
    let (code, out, _) = cli(&["check", &f, "--bounds", "klein_sharp", "--grid", "16", "--volume-grid", "32"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS     klein_sharp"));
}

#[test]
fn cli_trace_and_table() {
    let (code, out, _) = cli(&["trace", "--a", "1.0", "--theta0", "0.5", "--samples", "16"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("series,x,y"));
    let (code, out, _) = cli(&["trace", "--a", "1.0", "--theta0", "0.5", "--out", "svg"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("<svg") && out.trim_end().ends_with("</svg>"));
    let (code, out, _) = cli(&["table", "--reproduce", "paper", "--criteria", "7", "--quick"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().nth(1).unwrap().starts_with("7,"));
    assert_eq!(cli(&["table", "--criteria", "x"]).0, EXIT_USAGE);
}

#[test]
fn cli_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("suite.json");
    let (code, out, err) = cli(&["suite", "--topology", "torus", "--seeds", "1", "--grid", "16", "--out", out_file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert!(out.contains("PASS"));
    assert!(out_file.exists());
    assert_eq!(cli(&["suite", "--topology", "sphere"]).0, EXIT_USAGE);
}
