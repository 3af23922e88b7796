//! Counting in anonymous synchronous dynamic networks with a leader.
//!
//! * [`graph`]: dynamic graphs, leader-centred labelled multigraphs, family
//!   checks and the multigraph-to-G(PD)_2 lift.
//! * [`sim`]: the synchronous send/receive engine and flood-based diameter.
//! * [`algebra`]: the leader's exact integer equation systems and their kernel.
//! * [`witness`]: equal-view instance pairs of different size.
//! * [`protocols`]: star, equation-solving and degree-detector counters.
//! * [`oracle`]: exhaustive small-scale ground truth.

pub mod algebra;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod protocols;
pub mod sim;
pub mod witness;

pub use error::{Error, Result};
