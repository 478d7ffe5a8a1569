//! Graph covers and planar emulators.
//!
//! Graphs, vertex maps with witness-producing cover/emulator checks,
//! planarity testing with rotation systems, Z/2 voltage double covers with a
//! projective-planarity decision, quotients by free involutions, named
//! constructions with bundled emulator assets, and a backtracking search for
//! emulator labelings.

pub mod constructions;
pub mod covers;
pub mod embedding;
pub mod formats;
pub mod graph;
pub mod iso;
pub mod maps;
mod planarity;
pub mod search;

pub use embedding::{test_planarity, PlanarityResult, RotationSystem};
pub use graph::{Graph, GraphError, VertexId};
pub use maps::{Classification, FailureKind, GraphMap, LocalFailure, MapClass, MapError};
