//! Quotients of one-sided edge shifts by a pair of graph embeddings.
//!
//! Given graphs G, H and embeddings xi0, xi1 of H into G, the crate builds the
//! quotient system, evaluates its metric exactly, computes dimension groups and
//! K-groups by integer linear algebra, synthesizes seed data for prescribed
//! K-groups, and renders the planar realization.

pub mod bundle;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod matrix;
pub mod metric;
pub mod realization;
pub mod smale;
pub mod symbolic;

pub use embedding::{EmbeddingPair, HypothesisReport};
pub use error::{Error, Result};
pub use graph::{Graph, PathWord};
pub use matrix::IntMatrix;
pub use metric::{Metric, MetricInterval};
pub use symbolic::{Angle, ClassPoint, Kappa, LassoRay};
