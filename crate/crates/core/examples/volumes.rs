//! Holmes-Thompson and Busemann areas of the spherical Finsler bands.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use finsys::measure::volumes;
use finsys::metric::spherical_finsler_mobius;

fn main() -> finsys::Result<()> {
    for a in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let m = spherical_finsler_mobius(a, false)?;
        let (ht, b) = volumes(&m, 32, 32)?;
        let dual = spherical_finsler_mobius(a, true)?;
        let (ht_dual, _) = volumes(&dual, 32, 32)?;
        println!(
            "a = {a:.4}: vol_HT {:.9} (2 pi = {:.9})  vol_B {:.6}  dual vol_HT {:.9} (2 pi sin^2 a = {:.9})",
            ht.value,
            2.0 * PI,
            b.value,
            ht_dual.value,
            2.0 * PI * a.sin().powi(2)
        );
    }
    Ok(())
}
