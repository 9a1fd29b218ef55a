//! Full invariant report and bound verdicts for a surface file.

use finsys::metric::SurfaceDescription;
use finsys::verify::{check, BoundId, CheckOptions};

fn main() -> finsys::Result<()> {
    let d = SurfaceDescription::from_json(r#"{ "kind": "sup_norm_klein", "b": 1.5707963267948966 }"#)?;
    let s = d.build()?;
    let opts = CheckOptions { grid: 16, refine: 1, volume_grid: 16, bounds: BoundId::for_topology(s.topology) };
    let r = check(&s, &opts)?;
    println!("{}: vol_HT {:.6}  sys {:.6}", r.surface, r.vol_ht.value, r.sys.map_or(f64::NAN, |m| m.value));
    for v in &r.verdicts {
        println!("  {:<22} {:?} ratio {:.6} bound {:.6}", v.bound.name(), v.status, v.ratio.unwrap_or(f64::NAN), v.bound_value.unwrap_or(f64::NAN));
    }
    Ok(())
}
