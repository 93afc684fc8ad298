use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use islandfs_core::Algorithm;

#[derive(Debug, Parser)]
#[command(name = "islandfs", version, about = "Island-model bi-objective feature subset selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded repetitions and write fronts, a summary and EAF surfaces.
    Run(ExperimentArgs),
    /// Pooled t-test on the per-run hypervolumes of two summaries.
    Compare {
        summary_a: PathBuf,
        summary_b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Time one run sequentially and in parallel and check both agree.
    Bench(ExperimentArgs),
    /// Attainment surfaces of several front files, as CSV and SVG.
    Eaf {
        #[arg(required = true)]
        fronts: Vec<PathBuf>,
        /// Output CSV path; the SVG is written beside it.
        #[arg(long, default_value = "eaf.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = AucArg::Train)]
        auc: AucArg,
    },
    /// Write a planted-subset dataset in dense CSV form.
    Synth {
        #[arg(long, default_value_t = 500)]
        rows: usize,
        #[arg(long, default_value_t = 20)]
        features: usize,
        /// Comma-separated informative column indices.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        informative: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "planted.csv")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AucArg {
    Train,
    Test,
}

#[derive(Clone, Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Dense)]
    pub format: Format,
    #[arg(long, default_value = "nsga2")]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 20)]
    pub pop: usize,
    /// Sub-population size; half the population when omitted.
    #[arg(long)]
    pub local: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub islands: usize,
    #[arg(long, default_value_t = 10)]
    pub gens: usize,
    #[arg(long, default_value_t = 1)]
    pub migs: usize,
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.95)]
    pub pc: f64,
    #[arg(long, default_value_t = 0.05)]
    pub pm: f64,
    #[arg(long, default_value_t = 0.9)]
    pub w: f64,
    #[arg(long, default_value_t = 0.4)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.6)]
    pub c2: f64,
    #[arg(long = "t-neigh", default_value_t = 5)]
    pub t_neigh: usize,
    /// Random oversampling of the minority class in the training split.
    #[arg(long)]
    pub ros: bool,
    /// Re-score pooled solutions on the full training set at migration.
    #[arg(long)]
    pub reeval: bool,
    /// Share of rows held out for the test phase.
    #[arg(long = "test-frac", default_value_t = 0.3)]
    pub test_fraction: f64,
    /// AUC used for the per-run top solutions in the summary.
    #[arg(long = "summary-auc", value_enum, default_value_t = AucArg::Test)]
    pub summary_auc: AucArg,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}
