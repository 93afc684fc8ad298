//! The island-model driver.
//!
//! A run initializes a global population, then repeats `m_mig` times:
//! draw `k` overlapping sub-populations, evolve each on its own data shard
//! for `m_gen` generations (islands run concurrently), and merge the results
//! through non-dominated selection back to `n` solutions. The test phase
//! finally scores every survivor's stored coefficients on held-out rows.
//!
//! Randomness comes from child streams of the run seed keyed by
//! `(tag, island, migration)`, and island results are merged in island
//! order, so parallel and sequential execution give identical results.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    evaluate_missing, moead_generation, moead_output, nsga2_generation, nspso_generation, Algorithm,
    GaParams, KernelError, MoeadState, PsoParams, PsoState,
};
use crate::classifier::{evaluate_solution, score, ClassifierError, TrainConfig};
use crate::dataset::{shard_rows, DataError, Dataset, Shard};
use crate::mask::FeatureMask;
use crate::mo::{non_dominated, ns_select, MoError};
use crate::rng::{stream, tag, StreamRng};
use crate::solution::{KeySource, ObjectivePair, Population, Solution};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("island {island} in migration {migration}: {source}")]
    Island {
        island: usize,
        migration: usize,
        #[source]
        source: KernelError,
    },
    #[error("migration: {0}")]
    Migration(#[source] KernelError),
    #[error("solution {key} has no trained coefficients")]
    MissingCoefficients { key: u64 },
    #[error("solution {key}: {source}")]
    Test {
        key: u64,
        #[source]
        source: ClassifierError,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    /// Global population size.
    pub n: usize,
    /// Sub-population size per island.
    pub local_n: usize,
    /// Island (data shard) count.
    pub k: usize,
    /// Generations per migration.
    pub m_gen: usize,
    /// Number of migrations.
    pub m_mig: usize,
    pub seed: u64,
    pub ga: GaParams,
    pub pso: PsoParams,
    /// MOEA/D neighbourhood size.
    pub moead_t: usize,
    pub train: TrainConfig,
    /// Re-score every pooled solution on the full training set before the
    /// migration sort.
    pub reevaluate_on_migrate: bool,
    pub runs: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Nsga2,
            n: 20,
            local_n: 10,
            k: 4,
            m_gen: 10,
            m_mig: 1,
            seed: 0,
            ga: GaParams::default(),
            pso: PsoParams::default(),
            moead_t: 5,
            train: TrainConfig::default(),
            reevaluate_on_migrate: false,
            runs: 20,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let fail = |m: String| Err(EngineError::Config(m));
        if self.n < 2 {
            return fail(format!("population size {} must be at least 2", self.n));
        }
        if self.local_n < 2 || self.local_n > self.n {
            return fail(format!("sub-population size {} must lie in 2..={}", self.local_n, self.n));
        }
        if self.k == 0 {
            return fail("island count must be at least 1".into());
        }
        if self.m_gen == 0 {
            return fail("generations per migration must be at least 1".into());
        }
        if self.m_mig == 0 {
            return fail("migration count must be at least 1".into());
        }
        if self.k * self.local_n < self.n {
            return fail(format!(
                "{} islands of {} cannot refill a population of {}",
                self.k, self.local_n, self.n
            ));
        }
        if self.runs == 0 {
            return fail("run count must be at least 1".into());
        }
        self.ga.validate().map_err(EngineError::Config)?;
        if self.algorithm == Algorithm::Nspso {
            self.pso.validate().map_err(EngineError::Config)?;
        }
        if self.algorithm == Algorithm::Moead && (self.moead_t == 0 || self.moead_t > self.local_n) {
            return fail(format!(
                "neighbourhood size {} must lie in 1..={}",
                self.moead_t, self.local_n
            ));
        }
        let t = &self.train;
        if !(t.learning_rate > 0.0 && t.grad_tolerance > 0.0 && t.threshold > 0.0 && t.threshold < 1.0) {
            return fail("training settings must be positive with threshold in (0,1)".into());
        }
        Ok(())
    }
}

/// How islands are scheduled within one migration round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    /// One worker thread per island.
    Parallel,
    /// Islands one after another on the calling thread.
    Sequential,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WallTimes {
    pub init: f64,
    pub islands: Vec<f64>,
    pub migrate: Vec<f64>,
    pub test: f64,
    pub total: f64,
}

/// Global population statistics after one migration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MigrationRecord {
    pub max_auc: f64,
    pub min_cardinality: f64,
    /// Best AUC and cardinality among the solutions drawn into the islands,
    /// when they arrived already scored.
    pub drawn_max_auc: Option<f64>,
    pub drawn_min_cardinality: Option<f64>,
    /// Front 0 of the migrated global population.
    pub front0: Vec<ObjectivePair>,
    /// Front 0 of each island's returned population.
    pub island_fronts: Vec<Vec<ObjectivePair>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub final_population: Population,
    pub migrations: Vec<MigrationRecord>,
    /// Islands observed starting a round before the previous round closed.
    pub barrier_violations: usize,
    pub wall_times: WallTimes,
    pub seed: u64,
}

impl RunReport {
    /// Equal in everything but timing.
    pub fn same_outcome(&self, other: &RunReport) -> bool {
        self.final_population == other.final_population
            && self.migrations == other.migrations
            && self.barrier_violations == other.barrier_violations
            && self.seed == other.seed
    }

    /// Front 0 of the final population.
    pub fn final_front(&self) -> Vec<Solution> {
        non_dominated(&self.final_population).expect("final population is evaluated")
    }
}

/// `n` fair-coin masks with keys `0..n`; all-zero masks get one random bit.
pub fn init_population<R: Rng + ?Sized>(n: usize, n_features: usize, rng: &mut R) -> Population {
    (0..n as u64)
        .map(|key| {
            let mut mask = FeatureMask::random(n_features, rng);
            mask.repair(rng);
            Solution::new(key, mask)
        })
        .collect()
}

/// Independent draws of `local_n` solutions without replacement, one per
/// island. Islands may share solutions.
pub fn draw_subpopulations<R: Rng + ?Sized>(
    pop: &[Solution],
    k: usize,
    local_n: usize,
    rng: &mut R,
) -> Result<Vec<Population>, EngineError> {
    if local_n > pop.len() {
        return Err(EngineError::Config(format!(
            "cannot draw {local_n} solutions from {}",
            pop.len()
        )));
    }
    Ok((0..k)
        .map(|_| sample(rng, pop.len(), local_n).iter().map(|i| pop[i].clone()).collect())
        .collect())
}

/// Score unevaluated members on the shard, then run `m_gen` generations of
/// the configured kernel. Returns `local_n` evaluated solutions.
pub fn run_island(
    subpop: Population,
    shard: &Shard<'_>,
    cfg: &EngineConfig,
    rng: &mut StreamRng,
) -> Result<Population, KernelError> {
    let local_n = subpop.len();
    let mut pop = evaluate_missing(subpop, shard, &cfg.train)?;
    let mut keys = KeySource::after(&pop);
    match cfg.algorithm {
        Algorithm::Nsga2 => {
            for _ in 0..cfg.m_gen {
                pop = nsga2_generation(pop, &cfg.ga, shard, &cfg.train, &mut keys, rng)?;
            }
            Ok(pop)
        }
        Algorithm::Nspso => {
            let mut state = PsoState::new(&pop);
            for _ in 0..cfg.m_gen {
                (pop, state) = nspso_generation(pop, state, &cfg.pso, shard, &cfg.train, &mut keys, rng)?;
            }
            Ok(pop)
        }
        Algorithm::Moead => {
            let mut state = MoeadState::new(&pop, cfg.moead_t)?;
            for _ in 0..cfg.m_gen {
                (pop, state) = moead_generation(pop, state, &cfg.ga, shard, &cfg.train, &mut keys, rng)?;
            }
            moead_output(&pop, &state, local_n)
        }
    }
}

/// Pool the islands' populations (island order, then key), give the pool
/// fresh keys, optionally re-score on the full training set, and keep the
/// first `n` in non-dominated front order.
pub fn migrate(
    evolved: Vec<Population>,
    n: usize,
    reevaluate: Option<(&Dataset, &TrainConfig)>,
) -> Result<Population, EngineError> {
    let mut pool = Vec::new();
    for mut island in evolved {
        island.sort_by_key(|s| s.key);
        pool.extend(island);
    }
    if pool.len() < n {
        return Err(EngineError::Migration(KernelError::Sort(MoError::NotEnough {
            requested: n,
            available: pool.len(),
        })));
    }
    for (key, s) in pool.iter_mut().enumerate() {
        s.key = key as u64;
    }
    if let Some((train, tc)) = reevaluate {
        let full = Shard::full(train);
        pool = pool
            .into_iter()
            .map(|mut s| {
                s.eval = None;
                evaluate_solution(s, &full, tc)
            })
            .collect::<Result<_, _>>()
            .map_err(|e| EngineError::Migration(e.into()))?;
    }
    ns_select(&pool, n).map_err(|e| EngineError::Migration(e.into()))
}

/// Score every solution's stored coefficients on `test` without retraining.
pub fn test_phase(pop: Population, test: &Dataset, threshold: f64) -> Result<Population, EngineError> {
    pop.into_iter()
        .map(|mut s| {
            let key = s.key;
            let model = s.coefficients().ok_or(EngineError::MissingCoefficients { key })?;
            let (x, y) = crate::dataset::project(test, &s.mask)?;
            if model.weights.len() != x.cols() {
                return Err(EngineError::Test {
                    key,
                    source: ClassifierError::DimensionMismatch {
                        expected: x.cols(),
                        got: model.weights.len(),
                    },
                });
            }
            let auc = score(model, &x, &y, threshold).map_err(|source| EngineError::Test { key, source })?;
            s.test_auc = Some(auc);
            Ok(s)
        })
        .collect()
}

fn extremes(pop: &[Solution]) -> (f64, f64) {
    pop.iter().filter_map(Solution::objectives).fold(
        (f64::NEG_INFINITY, f64::INFINITY),
        |(a, c), o| (a.max(o.auc), c.min(o.cardinality)),
    )
}

fn front_objectives(pop: &[Solution]) -> Result<Vec<ObjectivePair>, EngineError> {
    Ok(non_dominated(pop)
        .map_err(|e| EngineError::Migration(e.into()))?
        .iter()
        .filter_map(Solution::objectives)
        .collect())
}

/// Execute one full run.
pub fn run(cfg: &EngineConfig, train: &Dataset, test: &Dataset, mode: Execution) -> Result<RunReport, EngineError> {
    cfg.validate()?;
    if train.n_features() != test.n_features() {
        return Err(EngineError::Config(format!(
            "train has {} features, test has {}",
            train.n_features(),
            test.n_features()
        )));
    }
    let started = Instant::now();
    let mut times = WallTimes::default();

    let shards = shard_rows(train, cfg.k, cfg.seed)?;
    let mut pop = init_population(cfg.n, train.n_features(), &mut stream(cfg.seed, &[tag::INIT]));
    times.init = started.elapsed().as_secs_f64();

    let pool = match mode {
        Execution::Parallel => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.k)
                .build()
                .map_err(|e| EngineError::Pool(e.to_string()))?,
        ),
        Execution::Sequential => None,
    };
    let finished: Vec<AtomicUsize> = (0..cfg.m_mig).map(|_| AtomicUsize::new(0)).collect();
    let violations = AtomicUsize::new(0);
    let mut migrations = Vec::with_capacity(cfg.m_mig);

    for mig in 0..cfg.m_mig {
        let t0 = Instant::now();
        let subpops = draw_subpopulations(&pop, cfg.k, cfg.local_n, &mut stream(cfg.seed, &[tag::DRAW, mig as u64]))?;
        let drawn = subpops
            .iter()
            .flatten()
            .all(Solution::is_evaluated)
            .then(|| extremes(&subpops.concat()));
        let task = |(island, subpop): (usize, Population)| {
            if mig > 0 && finished[mig - 1].load(Ordering::SeqCst) != cfg.k {
                violations.fetch_add(1, Ordering::SeqCst);
            }
            let mut rng = stream(cfg.seed, &[tag::ISLAND, island as u64, mig as u64]);
            let out = run_island(subpop, &shards[island], cfg, &mut rng)
                .map_err(|source| EngineError::Island { island, migration: mig, source });
            finished[mig].fetch_add(1, Ordering::SeqCst);
            out
        };
        let jobs: Vec<(usize, Population)> = subpops.into_iter().enumerate().collect();
        let evolved: Vec<Population> = match &pool {
            Some(p) => p.install(|| jobs.into_par_iter().map(task).collect::<Result<_, _>>())?,
            None => jobs.into_iter().map(task).collect::<Result<_, _>>()?,
        };
        if finished[mig].load(Ordering::SeqCst) != cfg.k {
            violations.fetch_add(1, Ordering::SeqCst);
        }
        times.islands.push(t0.elapsed().as_secs_f64());

        let t1 = Instant::now();
        let island_fronts = evolved.iter().map(|p| front_objectives(p)).collect::<Result<_, _>>()?;
        let reeval = cfg.reevaluate_on_migrate.then_some((train, &cfg.train));
        pop = migrate(evolved, cfg.n, reeval)?;
        let (max_auc, min_cardinality) = extremes(&pop);
        migrations.push(MigrationRecord {
            max_auc,
            min_cardinality,
            drawn_max_auc: drawn.map(|d| d.0),
            drawn_min_cardinality: drawn.map(|d| d.1),
            front0: front_objectives(&pop)?,
            island_fronts,
        });
        times.migrate.push(t1.elapsed().as_secs_f64());
    }

    let t2 = Instant::now();
    let final_population = test_phase(pop, test, cfg.train.threshold)?;
    times.test = t2.elapsed().as_secs_f64();
    times.total = started.elapsed().as_secs_f64();

    Ok(RunReport {
        final_population,
        migrations,
        barrier_violations: violations.into_inner(),
        wall_times: times,
        seed: cfg.seed,
    })
}

/// Sequential and parallel execution of the same configuration.
#[derive(Clone, Debug)]
pub struct ModeComparison {
    pub sequential: RunReport,
    pub parallel: RunReport,
    pub sequential_secs: f64,
    pub parallel_secs: f64,
}

impl ModeComparison {
    pub fn identical(&self) -> bool {
        self.sequential.same_outcome(&self.parallel)
    }
}

pub fn compare_modes(cfg: &EngineConfig, train: &Dataset, test: &Dataset) -> Result<ModeComparison, EngineError> {
    let t = Instant::now();
    let sequential = run(cfg, train, test, Execution::Sequential)?;
    let sequential_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let parallel = run(cfg, train, test, Execution::Parallel)?;
    let parallel_secs = t.elapsed().as_secs_f64();
    Ok(ModeComparison {
        sequential,
        parallel,
        sequential_secs,
        parallel_secs,
    })
}
