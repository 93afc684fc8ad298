//! Per-island generation kernels for NSGA-II, NSPSO and MOEA/D.
//!
//! Every kernel keeps the population size fixed, repairs all-zero masks by
//! setting one random bit, and draws all randomness from the island's own
//! stream.

pub mod moead;
pub mod nsga2;
pub mod nspso;
mod variation;

use serde::{Deserialize, Serialize};

use crate::classifier::{evaluate_solution, EvalError, TrainConfig};
use crate::dataset::Shard;
use crate::mo::MoError;
use crate::solution::Population;

pub use moead::{
    moead_generation, moead_output, neighbor_update, neighborhoods, tchebycheff, uniform_weights,
    update_ideal, MoeadState,
};
pub use nsga2::nsga2_generation;
pub use nspso::{
    binarize, nspso_generation, position_update, select_gbest, update_pbest, velocity_update,
    PsoState,
};
pub use variation::{crossover_at, mutate_bits, one_point_crossover};

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sort(#[from] MoError),
    #[error("{0}")]
    Shape(String),
}

/// Which kernel an island runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nsga2,
    Nspso,
    Moead,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Nspso => "nspso",
            Algorithm::Moead => "moead",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nsga2" => Ok(Algorithm::Nsga2),
            "nspso" => Ok(Algorithm::Nspso),
            "moead" => Ok(Algorithm::Moead),
            other => Err(format!("unknown algorithm {other:?} (expected nsga2, nspso or moead)")),
        }
    }
}

/// Crossover and per-gene mutation probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub pc: f64,
    pub pm: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self { pc: 0.95, pm: 0.05 }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, p) in [("pc", self.pc), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} = {p} is not a probability"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    /// Inertia weight.
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    /// Constriction factor applied in the position update.
    pub omega: f64,
    /// Velocity components are clamped to `[-vmax, vmax]`.
    pub vmax: f64,
    /// Share of front 0, by crowding order, that gbest is drawn from.
    pub gbest_fraction: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            w: 0.9,
            c1: 0.4,
            c2: 1.6,
            omega: 1.0,
            vmax: 4.0,
            gbest_fraction: 0.05,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.w) {
            return Err(format!("inertia weight {} outside [0,1]", self.w));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err("c1 and c2 must be positive".into());
        }
        if self.vmax.is_nan() || self.vmax <= 0.0 {
            return Err("vmax must be positive".into());
        }
        if !(self.gbest_fraction > 0.0 && self.gbest_fraction <= 1.0) {
            return Err("gbest fraction must lie in (0,1]".into());
        }
        Ok(())
    }
}

/// Evaluate every solution that has no evaluation yet.
pub fn evaluate_missing(
    pop: Population,
    shard: &Shard<'_>,
    cfg: &TrainConfig,
) -> Result<Population, EvalError> {
    pop.into_iter()
        .map(|s| if s.is_evaluated() { Ok(s) } else { evaluate_solution(s, shard, cfg) })
        .collect()
}
