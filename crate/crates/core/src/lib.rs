//! Spectral upper bounds on the independence number of graphs with loops,
//! polarity graphs of finite projective planes, and an exact oracle to test
//! them against.

pub mod bounds;
pub mod certify;
pub mod exact;
pub mod families;
pub mod galois;
pub mod geometry;
pub mod graphcore;
pub mod spectra;

pub use bounds::{BoundError, BoundKind, BoundReport, Method};
pub use exact::{brute_alpha, max_independent_set, AlphaResult};
pub use galois::{Field, FieldElement, FieldError};
pub use geometry::{er_graph, LoopMode};
pub use graphcore::{Graph, GraphError};
pub use spectra::{Matrix, Spectrum};
