//! Centrally symmetric convex bodies in the plane: gauges, supports,
//! polars, areas and John ellipses.

pub mod body;
pub mod ellipse;
pub mod literal;
pub mod polygon;

pub use body::{hausdorff, mahler_volume, unit, LpPolygon, PolygonOrigin, Shape, SymBody, DEFAULT_SAMPLES};
pub use ellipse::{inclusion_factors, max_det_form, mvee_centered, Ellipse};
pub use literal::BodyLiteral;
pub use polygon::{ConvexPolygon, PolygonPair};
