//! Island-model bi-objective feature subset selection with a logistic
//! regression wrapper.
//!
//! Each candidate is a feature bit-mask scored by two objectives: the
//! fraction of features kept (minimized) and the balanced AUC of a logistic
//! regression trained on those features (maximized). NSGA-II, a binary
//! NSPSO and MOEA/D evolve populations of masks on horizontal data shards,
//! and a migration step merges the islands through non-dominated sorting.

pub mod algorithms;
pub mod classifier;
pub mod dataset;
pub mod engine;
pub mod mask;
pub mod metrics;
pub mod mo;
pub mod rng;
pub mod solution;

pub use algorithms::Algorithm;
pub use classifier::{balanced_auc, cardinality_score, LrModel, TrainConfig};
pub use dataset::{Dataset, Shard};
pub use engine::{run, EngineConfig, EngineError, Execution, RunReport};
pub use mask::FeatureMask;
pub use solution::{ObjectivePair, Population, Solution};
