//! Scattering walks on graphs whose vertices are multiports, either as ideal
//! coins or expanded into beam splitters and mirrors.

pub mod engine;
pub mod graph;

pub use engine::{build_network, run_walk, run_walk_from_lead, Schedule, VertexOverride, WalkEngine, WalkRun, WalkStep};
pub use graph::{EdgeSpec, GraphSpec, VertexKind, VertexPort};
