//! Balanced connected k-partition of vertex-weighted graphs.
//!
//! - [`approx`]: Merge/Pull `k/2`-approximation for the min-max objective.
//! - [`scaling`]: weight scaling that makes the approximation polynomial.
//! - [`oracle`]: exhaustive ground truth for small graphs.
//! - [`fpt`]: exact max-min solver for unweighted graphs, parameterized by
//!   a vertex cover, using branch-and-bound with lazily separated cuts.
//! - [`io`]: instance files, generators and benchmark records.

pub mod approx;
pub mod error;
mod flow;
pub mod fpt;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod scaling;

pub use approx::{minmax_bcp3, minmax_bcpk, BcpkResult, Certificate};
pub use error::{BcpError, Result};
pub use graph::{Vertex, VertexSet, Weight, WeightedGraph};
pub use partition::{Frac, OrderedPartition3, Partition, StarCenterCertificate};
