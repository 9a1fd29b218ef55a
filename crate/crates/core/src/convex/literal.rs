//! Serializable body descriptions used in surface files.

use serde::{Deserialize, Serialize};

use super::body::SymBody;
use crate::error::Result;
use crate::{Mat2, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodyLiteral {
    Disc,
    Square,
    Diamond,
    TruncatedDisc { theta: f64 },
    CappedDisc { theta: f64 },
    Ellipse { q: [[f64; 2]; 2] },
    Support { values: Vec<f64> },
    Hull { points: Vec<[f64; 2]> },
}

impl BodyLiteral {
    pub fn build(&self) -> Result<SymBody> {
        match self {
            BodyLiteral::Disc => Ok(SymBody::disc()),
            BodyLiteral::Square => Ok(SymBody::square()),
            BodyLiteral::Diamond => Ok(SymBody::diamond()),
            BodyLiteral::TruncatedDisc { theta } => SymBody::truncated_disc(*theta),
            BodyLiteral::CappedDisc { theta } => SymBody::capped_disc(*theta),
            BodyLiteral::Ellipse { q } => SymBody::ellipse(Mat2::new(q[0][0], q[0][1], q[1][0], q[1][1])),
            BodyLiteral::Support { values } => SymBody::from_support(values),
            BodyLiteral::Hull { points } => {
                let pts: Vec<Vec2> = points.iter().map(|p| Vec2::new(p[0], p[1])).collect();
                SymBody::hull(&pts)
            }
        }
    }
}
