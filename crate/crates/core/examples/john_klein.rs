//! The John-ellipse metric of a Klein bottle and the chain of comparisons
//! behind `vol_HT >= (sqrt 2/pi) sys^2`.

use finsys::metric::Topology;
use finsys::verify::{john_lower_bound_check, random_surface};

fn main() -> finsys::Result<()> {
    let k = random_surface(3, Topology::Klein, 0.5, &[])?;
    let r = john_lower_bound_check(&k, 12, 0.02)?;
    println!("F / sqrt(g) in [{:.4}, {:.4}]", r.sandwich[0], r.sandwich[1]);
    for l in &r.links {
        println!("  {:<36} {:>10.6} vs {:>10.6}  {}", l.name, l.lhs, l.rhs, if l.holds { "holds" } else { "fails" });
    }
    Ok(())
}
