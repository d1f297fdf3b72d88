//! Counting, sampling and first-order logic for graphs whose vertex set
//! splits into `l` parts with at most `d` neighbours inside a vertex's own
//! part (the class `P(l, d)`).

mod bits;
pub mod canon;
pub mod census;
pub mod decimal;
pub mod decomp;
pub mod error;
pub mod forbidden;
pub mod graph;
pub mod io;
pub mod logic;
pub mod poisson;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, VertexSet};
