//! Graph Laplacians as quantum states: entanglement tests under vertex
//! labelings, labeling constructions, separability certificates for graph
//! products, and exhaustive experiments.

pub mod constructions;
pub mod decomposition;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod products;

pub use entanglement::{verdict, Status, Verdict};
pub use error::{Error, Result};
pub use graph::{DensityMatrix, Graph};
pub use labeling::{Bipartition, DimVector, VertexLabeling};
pub use products::ProductMask;
