//! Systolic geometry of Finsler surfaces.
//!
//! Surfaces are quotients of a rectangular chart by a small deck group
//! (torus, cylinder, Möbius band, Klein bottle). A [`metric::NormField`]
//! assigns a centrally symmetric convex unit ball to every point. The
//! crate computes Holmes-Thompson and Busemann areas ([`measure`]),
//! systoles and heights on lifted grid graphs ([`paths`]), and checks
//! the result against the known optimal systolic inequalities
//! ([`verify`]).
//!
//! ```
//! use finsys::metric::constructions;
//! use finsys::measure::{volume, VolumeKind};
//!
//! let m = constructions::sup_norm_mobius(0.5).unwrap();
//! let v = volume(&m, VolumeKind::HolmesThompson, 32).unwrap();
//! assert!((v.value - std::f64::consts::PI).abs() < 1e-9);
//! ```

pub mod cli;
pub mod convex;
pub mod error;
pub mod great_circles;
pub mod measure;
pub mod metric;
pub mod paths;
pub mod verify;

pub use error::{FinsysError, Result};

/// Two-dimensional vector used throughout.
pub type Vec2 = nalgebra::Vector2<f64>;
/// 2x2 real matrix used for frames and quadratic forms.
pub type Mat2 = nalgebra::Matrix2<f64>;
