//! Community recovery in the symmetric d-uniform hypergraph stochastic block
//! model by projected tensor power iteration.
//!
//! The pipeline is: sample or load a [`Hypergraph`], produce a starting
//! [`Assignment`] ([`init`]), then alternate the multilinear score
//! ([`score::multilinear_score`]) with the balanced projection
//! ([`projection::project_balanced`]) until a fixed point ([`solver::ptpm`]).
//! [`metrics`] scores the result against a planted partition and
//! [`experiments`] drives the reproducible studies.

pub mod assignment;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod init;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod par;
pub mod projection;
pub mod sampler;
pub mod score;
pub mod seeds;
pub mod solver;

pub use assignment::Assignment;
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use par::Execution;
pub use score::ScoreMatrix;
