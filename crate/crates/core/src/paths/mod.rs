//! Systoles, heights and distances on lifted grid graphs.

pub mod graph;
pub mod systole;

pub use graph::{chord_length, matched_dims, Dijkstra, Graph, Stencil, Window, RADIUS};
pub use systole::{second_systole, systole, systole_with, ClassSpec, LoopWitness, SweepOptions, SystoleResult};
pub mod collapse;
pub mod height;
pub mod soul;
pub mod split;

pub use collapse::{collapse_boundary, CollapseReport, CollapsedSurface};
pub use height::{distance, height, PathWitness};
pub use soul::{equidistant_soul, soul_distance_field, SoulDistances};
pub use split::{weighted_split, MaskedRegion, SplitResult};
