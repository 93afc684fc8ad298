//! Candidate solutions and their objective values.

use serde::{Deserialize, Serialize};

use crate::classifier::LrModel;
use crate::mask::FeatureMask;

/// Objective values of one solution: cardinality ratio (minimized) and
/// balanced AUC (maximized).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePair {
    pub cardinality: f64,
    pub auc: f64,
}

impl ObjectivePair {
    pub fn new(cardinality: f64, auc: f64) -> Self {
        Self { cardinality, auc }
    }

    /// Both objectives as minimization targets: `(cardinality, 1 - auc)`.
    pub fn min_image(&self) -> [f64; 2] {
        [self.cardinality, 1.0 - self.auc]
    }

    pub fn from_min_image(image: [f64; 2]) -> Self {
        Self::new(image[0], 1.0 - image[1])
    }
}

/// Output of training a solution's mask on a shard.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub model: LrModel,
    pub auc: f64,
    pub cardinality: f64,
}

/// One population member: key, mask, and (once evaluated) trained
/// coefficients with both objective scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub key: u64,
    pub mask: FeatureMask,
    pub eval: Option<Evaluation>,
    pub test_auc: Option<f64>,
}

impl Solution {
    pub fn new(key: u64, mask: FeatureMask) -> Self {
        Self {
            key,
            mask,
            eval: None,
            test_auc: None,
        }
    }

    /// Set-bit positions of the mask.
    pub fn selected(&self) -> Vec<usize> {
        self.mask.selected()
    }

    pub fn is_evaluated(&self) -> bool {
        self.eval.is_some()
    }

    pub fn auc(&self) -> Option<f64> {
        self.eval.as_ref().map(|e| e.auc)
    }

    pub fn cardinality(&self) -> Option<f64> {
        self.eval.as_ref().map(|e| e.cardinality)
    }

    pub fn objectives(&self) -> Option<ObjectivePair> {
        self.eval.as_ref().map(|e| ObjectivePair::new(e.cardinality, e.auc))
    }

    pub fn coefficients(&self) -> Option<&LrModel> {
        self.eval.as_ref().map(|e| &e.model)
    }

    /// Same content under a different key.
    pub fn rekeyed(&self, key: u64) -> Self {
        Self { key, ..self.clone() }
    }
}

pub type Population = Vec<Solution>;

/// Hands out fresh solution keys.
#[derive(Clone, Debug)]
pub struct KeySource {
    next: u64,
}

impl KeySource {
    pub fn starting_at(next: u64) -> Self {
        Self { next }
    }

    /// A source whose keys do not collide with any key in `pop`.
    pub fn after(pop: &[Solution]) -> Self {
        Self::starting_at(pop.iter().map(|s| s.key + 1).max().unwrap_or(0))
    }

    pub fn fresh(&mut self) -> u64 {
        let k = self.next;
        self.next += 1;
        k
    }
}
