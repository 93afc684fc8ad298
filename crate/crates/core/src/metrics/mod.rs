//! Quality indicators and statistics over finished runs.

mod eaf;
mod hv;
mod stats;
mod summary;

pub use eaf::{attainment_count, eaf, AttainmentSurfaces, Surface};
pub use hv::hypervolume;
pub use stats::{speedup, t_test_pooled, StatResult};
pub use summary::{summarize, AucSource, LeastCardinal, ModalSubset, Summary, SummaryOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("front contains a dominated point ({cardinality}, {auc})")]
    Dominated { cardinality: f64, auc: f64 },
    #[error("empty input")]
    Empty,
    #[error("times must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("samples need at least 2 values, got {0}")]
    TooFewSamples(usize),
    #[error("run {run} has no solutions with {what}")]
    MissingValues { run: usize, what: &'static str },
}
