//! Unit balls: gauges, polars, the Mahler volume and the John ellipse.

use finsys::convex::{hausdorff, inclusion_factors, mahler_volume, SymBody};
use finsys::Vec2;

fn main() -> finsys::Result<()> {
    let bodies = [
        ("square", SymBody::square()),
        ("disc", SymBody::disc()),
        ("truncated disc pi/4", SymBody::truncated_disc(std::f64::consts::FRAC_PI_4)?),
        ("hexagon", SymBody::hull(&[Vec2::new(1.0, 0.0), Vec2::new(0.4, 0.9), Vec2::new(-0.6, 0.8)])?),
    ];
    println!("{:<20} {:>9} {:>9} {:>9} {:>10} {:>8}", "body", "area", "polar", "Mahler", "pp-dist", "John");
    for (name, b) in &bodies {
        let polar = b.polar()?;
        let back = polar.polar()?;
        let e = b.john_ellipse()?;
        let (inner, outer) = inclusion_factors(&e, b, 720);
        println!(
            "{name:<20} {:>9.6} {:>9.6} {:>9.6} {:>10.2e} {:>8.4}",
            b.area(),
            polar.area(),
            mahler_volume(b)?,
            hausdorff(&back, b, 1024),
            outer / inner
        );
    }
    // Gauge of the truncated disc along a few directions.
    let t = SymBody::truncated_disc(0.5)?;
    for k in 0..4 {
        let w = finsys::convex::unit(k as f64 * std::f64::consts::FRAC_PI_4);
        println!("gauge at {:>4.1} deg: {:.6}", 45.0 * k as f64, t.gauge(w));
    }
    Ok(())
}
