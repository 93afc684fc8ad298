use std::path::PathBuf;

use islandfs_core::algorithms::{GaParams, PsoParams};
use islandfs_core::dataset::{
    load_dense, load_sparse, random_oversample, stratified_split, DataError, MinMaxScaler,
};
use islandfs_core::engine::{run, EngineConfig, Execution};
use islandfs_core::metrics::{AucSource, SummaryOptions};
use islandfs_core::rng::{derive_seed, tag};
use islandfs_core::{Dataset, RunReport};

use crate::args::{AucArg, ExperimentArgs, Format};
use crate::CliError;

/// Everything needed to reproduce a batch of runs.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub data: PathBuf,
    pub format: Format,
    pub engine: EngineConfig,
    pub ros: bool,
    pub test_fraction: f64,
    pub summary: SummaryOptions,
    pub out: PathBuf,
}

impl From<AucArg> for AucSource {
    fn from(a: AucArg) -> Self {
        match a {
            AucArg::Train => AucSource::Train,
            AucArg::Test => AucSource::Test,
        }
    }
}

impl ExperimentSpec {
    pub fn from_args(a: &ExperimentArgs) -> Result<Self, CliError> {
        let engine = EngineConfig {
            algorithm: a.algo,
            n: a.pop,
            local_n: a.local.unwrap_or(a.pop / 2),
            k: a.islands,
            m_gen: a.gens,
            m_mig: a.migs,
            seed: a.seed,
            ga: GaParams { pc: a.pc, pm: a.pm },
            pso: PsoParams {
                w: a.w,
                c1: a.c1,
                c2: a.c2,
                ..PsoParams::default()
            },
            moead_t: a.t_neigh,
            reevaluate_on_migrate: a.reeval,
            runs: a.runs,
            ..EngineConfig::default()
        };
        engine.validate()?;
        Ok(Self {
            data: a.data.clone(),
            format: a.format,
            engine,
            ros: a.ros,
            test_fraction: a.test_fraction,
            summary: SummaryOptions {
                top_auc: a.summary_auc.into(),
                ..SummaryOptions::default()
            },
            out: a.out.clone(),
        })
    }

    /// Seed of repetition `run`.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.engine.seed.wrapping_add(run as u64)
    }
}

pub fn load(spec: &ExperimentSpec) -> Result<Dataset, CliError> {
    let loaded = match spec.format {
        Format::Dense => load_dense(&spec.data),
        Format::Sparse => load_sparse(&spec.data),
    };
    loaded.map_err(|e| match e {
        DataError::Io { path, source } => CliError::MissingInput { path, source },
        other => other.into(),
    })
}

/// Stratified split under the master seed, optional oversampling of the
/// training half, then min-max scaling fitted on the training half.
pub fn prepare(spec: &ExperimentSpec, ds: &Dataset) -> Result<(Dataset, Dataset), CliError> {
    let (mut train, test) = stratified_split(ds, spec.test_fraction, spec.engine.seed)?;
    if spec.ros {
        train = random_oversample(&train, derive_seed(spec.engine.seed, &[tag::OVERSAMPLE]));
    }
    let scaler = MinMaxScaler::fit(&train);
    Ok((scaler.transform(&train), scaler.transform(&test)))
}

pub fn run_all(spec: &ExperimentSpec, train: &Dataset, test: &Dataset) -> Result<Vec<RunReport>, CliError> {
    (0..spec.engine.runs)
        .map(|r| {
            let cfg = EngineConfig {
                seed: spec.run_seed(r),
                ..spec.engine.clone()
            };
            run(&cfg, train, test, Execution::Parallel).map_err(|e| CliError::Run { run: r, source: e })
        })
        .collect()
}
