//! Group-valued flows on multigraphs.
//!
//! The crate computes and certifies flows with large support: given a
//! multigraph, an abelian group, and a target boundary, the exact solver
//! enumerates the affine solution coset over the graph's cycle space and
//! reports the maximum-support labelling together with a recheckable
//! certificate. Around that core sit an ear calculus (labelling triples,
//! equitability, gain/bonus accounting), constructive support bounds for
//! 2-, 3-, 4- and 6-flows, reduction surgery (three-cut pushing, triangle
//! contraction), generators for the graph families used by the test
//! sweeps, and plain-text / JSON interchange formats.

pub mod bounds;
pub mod catalog;
pub mod ears;
pub mod error;
pub mod flow;
pub mod graph;
pub mod group;
pub mod reduction;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{MultiGraph, Orientation, SurgeryMap, VertexSet};
pub use group::{GroupElem, GroupSpec, Z3};
