pub mod census;
pub mod diam2;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod report;
pub mod tree_model;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, VertexSet};
