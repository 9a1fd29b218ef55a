//! Great circles of the round band `|v| <= a` and the cone profile
//! `theta(v) = arccos(cos a / cos v)` they trace out.

use std::f64::consts::PI;

use finsys::great_circles::{clairaut_angle, extreme_arc, height_integrand_check, trace_great_circle};
use finsys::metric::spherical_finsler_mobius;

fn main() -> finsys::Result<()> {
    let a = 1.0;
    let tr = trace_great_circle(0.0, 0.6, a, 64)?;
    println!("circle at 0.6 rad stays below latitude {:.4} ({} samples kept)", tr.max_latitude, tr.points.len());
    for v in [0.0, 0.5, 0.9] {
        println!("theta({v}) = {:.6}", clairaut_angle(a, v)?);
    }
    println!("int dv / sin theta(v) - pi = {:.2e}", height_integrand_check(a)? - PI);
    // The extreme arc realizes the height of F_a.
    let m = spherical_finsler_mobius(a, false)?;
    let (c, t0, t1) = extreme_arc(a)?;
    println!("F_a length of the extreme arc: {:.9} (pi = {PI:.9})", c.length_in(&m, t0, t1));
    Ok(())
}
