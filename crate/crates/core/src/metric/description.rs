//! Surface files: JSON descriptions that rebuild a surface exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::constructions as c;
use super::surface::{Rect, Surface, Topology};
use super::symmetry::SymmetryKind;
use crate::convex::BodyLiteral;
use crate::error::Result;
use crate::Vec2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceDescription {
    FlatTorus {
        body: BodyLiteral,
        basis: [[f64; 2]; 2],
    },
    ConstantNorm {
        topology: Topology,
        domain: Rect,
        body: BodyLiteral,
    },
    SupNormMobius {
        lambda: f64,
    },
    SupNormKlein {
        b: f64,
    },
    SphericalFinslerMobius {
        a: f64,
        #[serde(default)]
        dual: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta_floor: Option<f64>,
    },
    GluedWideMobius {
        lambda: f64,
    },
    AlmostExtremalMobius {
        lambda: f64,
        neck: f64,
    },
    KleinFromFa {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
    },
    DoubleMobius {
        base: Box<SurfaceDescription>,
    },
    MirroredKlein {
        base: Box<SurfaceDescription>,
    },
    Random {
        topology: Topology,
        seed: u64,
        roughness: f64,
        #[serde(default)]
        symmetry: Vec<SymmetryKind>,
    },
    Tabulated {
        topology: Topology,
        domain: Rect,
        bodies: Vec<Vec<BodyLiteral>>,
    },
}

impl SurfaceDescription {
    pub fn build(&self) -> Result<Surface> {
        let s = match self {
            SurfaceDescription::FlatTorus { body, basis } => {
                c::flat_torus(body.build()?, Vec2::new(basis[0][0], basis[0][1]), Vec2::new(basis[1][0], basis[1][1]))?
            }
            SurfaceDescription::ConstantNorm { topology, domain, body } => {
                c::constant_norm(body.build()?, *topology, Rect::new(domain.x0, domain.x1, domain.y0, domain.y1)?)?
            }
            SurfaceDescription::SupNormMobius { lambda } => return c::sup_norm_mobius(*lambda),
            SurfaceDescription::SupNormKlein { b } => return c::sup_norm_klein(*b),
            SurfaceDescription::SphericalFinslerMobius { a, dual, theta_floor } => {
                return c::spherical_finsler_mobius_with_floor(*a, *dual, theta_floor.unwrap_or(c::THETA_FLOOR))
            }
            SurfaceDescription::GluedWideMobius { lambda } => return c::glued_wide_mobius(*lambda),
            SurfaceDescription::AlmostExtremalMobius { lambda, neck } => return c::almost_extremal_mobius(*lambda, *neck),
            SurfaceDescription::KleinFromFa { a } => return c::klein_from_fa(a.unwrap_or(std::f64::consts::PI / 3.0)),
            SurfaceDescription::DoubleMobius { base } => return c::double_mobius(&base.build()?),
            SurfaceDescription::MirroredKlein { base } => return c::mirrored_klein(&base.build()?),
            SurfaceDescription::Random { topology, seed, roughness, symmetry } => {
                return crate::verify::random::random_surface(*seed, *topology, *roughness, symmetry)
            }
            SurfaceDescription::Tabulated { topology, domain, bodies } => c::tabulated(*topology, *domain, bodies)?,
        };
        Ok(s.with_description(self.clone()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }
}

/// Reads and builds a surface file.
pub fn load_surface(path: &Path) -> Result<Surface> {
    let text = std::fs::read_to_string(path)?;
    let d = SurfaceDescription::from_json(&text)?;
    let s = d.build()?;
    s.validate()?;
    Ok(s)
}

/// Writes the description of a surface.
pub fn save_surface(s: &Surface, path: &Path) -> Result<()> {
    let d = s.description.as_ref().ok_or_else(|| {
        crate::error::FinsysError::Unsupported(format!("surface `{}` has no serializable description", s.name))
    })?;
    std::fs::write(path, d.to_json())?;
    Ok(())
}
