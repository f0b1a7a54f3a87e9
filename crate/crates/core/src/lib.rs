//! Agglomerative likelihood clustering (ALC) of correlated time series.
//!
//! Objects are grouped by greedily maximizing the Potts-model
//! log-likelihood of their correlation matrix. The crate also ships a
//! synthetic one-factor data generator, a bootstrap consensus filter for
//! short series, and evaluation tooling (ARI, MST export, exhaustive
//! oracle, runtime scaling).

pub mod bootstrap;
pub mod correlation;
pub mod data;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod likelihood;
pub mod partition;
pub mod synthetic;
mod union_find;

pub use correlation::CorrelationMatrix;
pub use data::{estimate_correlation, DataMatrix};
pub use engine::{run, ClusterResult, EngineConfig, EngineState, Label, Warning};
pub use error::{AlcError, ErrorKind, Result};
pub use likelihood::{ClusterStats, Likelihood};
pub use partition::Partition;
