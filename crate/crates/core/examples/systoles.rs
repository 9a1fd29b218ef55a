//! Systoles by class and heights of Möbius bands on the lifted grid graph.

use std::f64::consts::FRAC_PI_3;

use finsys::metric::{spherical_finsler_mobius, sup_norm_mobius};
use finsys::paths::{height, systole, ClassSpec, Graph};

fn main() -> finsys::Result<()> {
    for m in [sup_norm_mobius(0.5)?, spherical_finsler_mobius(FRAC_PI_3, false)?] {
        for n in [16, 32] {
            let g = Graph::matched(&m, n)?;
            let r = systole(&g, ClassSpec::All)?;
            let h = height(&g)?;
            println!(
                "{:<24} {:>3}x{:<3} sys {:.6}  sys+ {:.6}  sys- {:.6}  h {:.6}",
                m.name,
                g.nx,
                g.ny,
                r.value(ClassSpec::All).unwrap_or(f64::NAN),
                r.value(ClassSpec::Orientable).unwrap_or(f64::NAN),
                r.value(ClassSpec::Nonorientable).unwrap_or(f64::NAN),
                h.length
            );
        }
    }
    Ok(())
}
