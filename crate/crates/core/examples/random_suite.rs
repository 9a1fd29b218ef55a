//! A few random Klein bottles with a soul-switching symmetry.

use finsys::metric::{SymmetryKind, Topology};
use finsys::verify::{run_suite, SuiteOptions};

fn main() -> finsys::Result<()> {
    let mut o = SuiteOptions::new(Topology::Klein, 2);
    o.symmetry = vec![SymmetryKind::SoulSwitching];
    o.check.grid = 16;
    o.check.volume_grid = 16;
    let r = run_suite(&o)?;
    for e in &r.entries {
        println!("seed {} roughness {:.2}: pass {}", e.seed, e.roughness, e.report.all_pass());
    }
    for (b, m) in &r.min_margin {
        println!("min margin {:<22} {m:+.6}", b.name());
    }
    Ok(())
}
