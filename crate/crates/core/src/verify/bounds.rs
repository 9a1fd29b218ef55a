//! Catalogue of the systolic lower bounds and their ratios.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FinsysError, Result};
use crate::metric::Topology;

/// `(lambda + 1) / (pi lambda)` above the knee `lambda = 1`, `2 / pi` below.
pub fn fm_bound(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(FinsysError::Unsupported(format!("lambda = {lambda} must be positive")));
    }
    if lambda <= 1.0 {
        Ok(2.0 / PI)
    } else {
        Ok((lambda + 1.0) / (PI * lambda))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `vol_HT / sys^2 >= 2/pi` on tori.
    FinslerLoewnerTorus,
    /// `vol_HT / sys^2 >= 2/pi` on projective planes, here the collapsed Möbius band.
    IvanovRp2,
    /// `vol_HT >= (2/pi) a b` for the two shortest independent loops of a torus.
    KeenFinsler,
    /// `vol_HT >= (2/pi) sys h` on cylinders.
    Cylinder,
    /// `vol_HT / (sys h) >= fm_bound(h / sys)` on Möbius bands.
    MobiusPiecewise,
    /// `vol_HT / sys^2 >= 2/pi` on Klein bottles with a symmetry.
    KleinSharp,
    /// `vol_HT / sys^2 >= sqrt(2)/pi` on all Klein bottles.
    KleinJohn,
    /// `vol_HT / sys^2 >= 4 sqrt(2)/pi^2`, resting on an external volume estimate.
    KleinJohnImproved,
}

impl BoundId {
    pub const ALL: [BoundId; 8] = [
        BoundId::FinslerLoewnerTorus,
        BoundId::IvanovRp2,
        BoundId::KeenFinsler,
        BoundId::Cylinder,
        BoundId::MobiusPiecewise,
        BoundId::KleinSharp,
        BoundId::KleinJohn,
        BoundId::KleinJohnImproved,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundId::FinslerLoewnerTorus => "finsler_loewner_torus",
            BoundId::IvanovRp2 => "ivanov_rp2",
            BoundId::KeenFinsler => "keen_finsler",
            BoundId::Cylinder => "cylinder",
            BoundId::MobiusPiecewise => "mobius_piecewise",
            BoundId::KleinSharp => "klein_sharp",
            BoundId::KleinJohn => "klein_john",
            BoundId::KleinJohnImproved => "klein_john_improved",
        }
    }

    pub fn topology(&self) -> Topology {
        match self {
            BoundId::FinslerLoewnerTorus | BoundId::KeenFinsler => Topology::Torus,
            BoundId::IvanovRp2 | BoundId::MobiusPiecewise => Topology::Mobius,
            BoundId::Cylinder => Topology::Cylinder,
            BoundId::KleinSharp | BoundId::KleinJohn | BoundId::KleinJohnImproved => Topology::Klein,
        }
    }

    pub fn applies_to(&self, t: Topology) -> bool {
        self.topology() == t
    }

    /// Bounds that are applicable to a topology.
    pub fn for_topology(t: Topology) -> Vec<BoundId> {
        Self::ALL.iter().copied().filter(|b| b.applies_to(t)).collect()
    }

    /// Lower bound on the ratio; `lambda = h / sys` matters only for Möbius bands.
    pub fn value(&self, lambda: Option<f64>) -> Result<f64> {
        match self {
            BoundId::MobiusPiecewise => {
                fm_bound(lambda.ok_or_else(|| FinsysError::Unsupported("the Möbius bound needs h / sys".into()))?)
            }
            BoundId::KleinJohn => Ok(SQRT_2 / PI),
            BoundId::KleinJohnImproved => Ok(4.0 * SQRT_2 / (PI * PI)),
            _ => Ok(2.0 / PI),
        }
    }

    /// Whether the bound is only proved conditionally (Klein bottles without
    /// symmetry) or rests on a result quoted without proof.
    pub fn is_external(&self) -> bool {
        matches!(self, BoundId::KleinJohnImproved)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = FinsysError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|b| b.name() == s || (s == "keen" && *b == BoundId::KeenFinsler))
            .ok_or_else(|| FinsysError::Unsupported(format!("unknown bound `{s}`")))
    }
}

/// Parses `all` or a comma-separated list of bound names.
pub fn parse_bounds(s: &str) -> Result<Vec<BoundId>> {
    if s == "all" {
        return Ok(BoundId::ALL.to_vec());
    }
    s.split(',').map(|p| p.trim().parse()).collect()
}
