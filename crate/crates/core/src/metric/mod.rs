//! Norm fields on quotient surfaces and the model constructions.

pub mod constructions;
pub mod description;
pub mod surface;
pub mod symmetry;

pub use constructions::*;
pub use description::{load_surface, save_surface, SurfaceDescription};
pub use surface::{Element, Isometry, NormField, Rect, Surface, Tangent, Topology};
pub use symmetry::{klein_symmetry_flags, SymmetryFlags, SymmetryKind};
