//! Splitting a Möbius band by weighted distances to its two souls.

use finsys::metric::sup_norm_mobius;
use finsys::paths::weighted_split;

fn main() -> finsys::Result<()> {
    let m = sup_norm_mobius(2.0)?;
    let (_, r) = weighted_split(&m, 0.5, 1.0, 32, 32)?;
    for k in 0..2 {
        println!("M{}: vol {:.6}  h {:.6}  sys {:.6}", k + 1, r.volume[k], r.height[k], r.systole[k]);
    }
    println!("total {:.6} (whole band {:.6})", r.volume[0] + r.volume[1], r.volume_total);
    Ok(())
}
