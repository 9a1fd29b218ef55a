//! Collapsing the boundary of a Möbius band to a point gives a projective plane.

use finsys::metric::{sup_norm_mobius, Topology};
use finsys::verify::random_surface;
use finsys::paths::collapse_boundary;

fn main() -> finsys::Result<()> {
    let bands = [sup_norm_mobius(0.5)?, random_surface(7, Topology::Mobius, 0.5, &[])?];
    for m in &bands {
        let r = collapse_boundary(m)?.systole(24, 16)?;
        println!(
            "{:<20} sys(RP2) {:.6}  h {:.6}  sys {:.6}  min(h, sys) {:.6}",
            m.name,
            r.systole,
            r.band_height,
            r.band_systole,
            r.band_height.min(r.band_systole)
        );
    }
    Ok(())
}
