//! Projective planes from Möbius bands by collapsing the boundary circle.

use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::height::height;
use super::systole::{systole_with, ClassSpec, SweepOptions};
use crate::error::{FinsysError, Result};
use crate::metric::{Surface, Topology};

/// A Möbius band viewed as a projective plane with its boundary collapsed to a point.
pub struct CollapsedSurface<'s> {
    pub band: &'s Surface,
}

pub fn collapse_boundary(m: &Surface) -> Result<CollapsedSurface<'_>> {
    if m.topology != Topology::Mobius {
        return Err(FinsysError::Unsupported("only Möbius bands collapse to projective planes".into()));
    }
    Ok(CollapsedSurface { band: m })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollapseReport {
    /// Systole of the projective plane.
    pub systole: f64,
    /// Loops through the collapsed point: the height of the band.
    pub via_pole: f64,
    /// Best orientation-reversing loop, allowed to pass through the pole.
    pub via_loops: Option<f64>,
    pub band_height: f64,
    pub band_systole: f64,
    pub band_systole_nonorientable: f64,
    pub band_systole_orientable: f64,
}

impl CollapsedSurface<'_> {
    /// In the double cover (a sphere) the boundary lines of the strip become
    /// two poles joined by zero-length edges; the loops of the projective
    /// plane are the orientation-reversing deck classes.
    pub fn systole(&self, nx: usize, ny: usize) -> Result<CollapseReport> {
        let g = Graph::new(self.band, nx, ny)?;
        self.systole_on(&g)
    }

    /// Same as [`CollapsedSurface::systole`] on a prebuilt graph of the band.
    pub fn systole_on(&self, g: &Graph) -> Result<CollapseReport> {
        if !std::ptr::eq(g.surface, self.band) {
            return Err(FinsysError::Unsupported("the graph belongs to another surface".into()));
        }
        let h = height(g)?.length;
        let opts = SweepOptions { teleports: true, ..SweepOptions::default() };
        let loops = systole_with(g, ClassSpec::Nonorientable, &opts)?.nonorientable.map(|w| w.length);
        let band = systole_with(g, ClassSpec::All, &SweepOptions::default())?;
        let sys = band.all.as_ref().map(|w| w.length).unwrap_or(f64::INFINITY);
        let sys_minus = band.nonorientable.as_ref().map(|w| w.length).unwrap_or(f64::INFINITY);
        let sys_plus = band.orientable.as_ref().map(|w| w.length).unwrap_or(f64::INFINITY);
        Ok(CollapseReport {
            systole: loops.map_or(h, |l| l.min(h)),
            via_pole: h,
            via_loops: loops,
            band_height: h,
            band_systole: sys,
            band_systole_nonorientable: sys_minus,
            band_systole_orientable: sys_plus,
        })
    }
}
