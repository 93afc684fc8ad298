use std::fs;
use std::path::{Path, PathBuf};

use islandfs_core::dataset::{synthetic, write_dense};
use islandfs_core::engine::{compare_modes, EngineConfig};
use islandfs_core::metrics::{eaf, speedup, summarize, t_test_pooled, AttainmentSurfaces, StatResult};
use islandfs_core::{ObjectivePair, RunReport};

use crate::args::AucArg;
use crate::experiment::{load, prepare, run_all, ExperimentSpec};
use crate::output::{
    front_rows, read_front, read_summary, render_svg, sig6, write_eaf, write_front, write_summary,
    SummaryFile,
};
use crate::CliError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn front_path(out: &Path, run: usize) -> PathBuf {
    out.join(format!("front_{run:03}.csv"))
}

pub struct RunOutcome {
    pub reports: Vec<RunReport>,
    pub summary: SummaryFile,
    pub files: Vec<PathBuf>,
}

fn train_fronts(reports: &[RunReport]) -> Vec<Vec<ObjectivePair>> {
    reports
        .iter()
        .map(|r| r.final_front().iter().filter_map(|s| s.objectives()).collect())
        .collect()
}

pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunOutcome, CliError> {
    let ds = load(spec)?;
    let (train, test) = prepare(spec, &ds)?;
    let reports = run_all(spec, &train, &test)?;

    fs::create_dir_all(&spec.out).map_err(io_err(&spec.out))?;
    let mut files = Vec::new();
    for (r, report) in reports.iter().enumerate() {
        let path = front_path(&spec.out, r);
        write_front(&path, &front_rows(&report.final_front())?)?;
        files.push(path);
    }

    let summary = SummaryFile {
        config: spec.engine.clone(),
        seeds: (0..spec.engine.runs).map(|r| spec.run_seed(r)).collect(),
        summary: summarize(&reports, spec.summary)?,
    };
    let path = spec.out.join("summary.json");
    write_summary(&path, &summary)?;
    files.push(path);

    let path = spec.out.join("eaf.csv");
    write_eaf(&path, &eaf(&train_fronts(&reports))?)?;
    files.push(path);

    Ok(RunOutcome { reports, summary, files })
}

pub fn cmd_compare(a: &Path, b: &Path, alpha: f64) -> Result<(StatResult, String), CliError> {
    let (sa, sb) = (read_summary(a)?, read_summary(b)?);
    let r = t_test_pooled(&sa.summary.hv, &sb.summary.hv, alpha)?;
    let text = format!(
        "t-statistic,p-value,reject,dof\n{},{},{},{}",
        sig6(r.t_statistic),
        sig6(r.p_value),
        if r.reject { "T" } else { "F" },
        r.dof
    );
    Ok((r, text))
}

pub struct BenchOutcome {
    pub sequential_secs: f64,
    pub parallel_secs: f64,
    pub ratio: f64,
}

impl BenchOutcome {
    pub fn report(&self) -> String {
        format!(
            "sequential_s,parallel_s,speedup\n{},{},{}",
            sig6(self.sequential_secs),
            sig6(self.parallel_secs),
            sig6(self.ratio)
        )
    }
}

pub fn cmd_bench(spec: &ExperimentSpec) -> Result<BenchOutcome, CliError> {
    let ds = load(spec)?;
    let (train, test) = prepare(spec, &ds)?;
    bench_prepared(&spec.engine, &train, &test)
}

/// Time sequential against parallel islands on already prepared data.
pub fn bench_prepared(
    cfg: &EngineConfig,
    train: &islandfs_core::Dataset,
    test: &islandfs_core::Dataset,
) -> Result<BenchOutcome, CliError> {
    let cmp = compare_modes(cfg, train, test)?;
    if !cmp.identical() {
        return Err(CliError::ModeMismatch);
    }
    Ok(BenchOutcome {
        sequential_secs: cmp.sequential_secs,
        parallel_secs: cmp.parallel_secs,
        ratio: speedup(cmp.sequential_secs, cmp.parallel_secs)?,
    })
}

pub fn cmd_eaf(fronts: &[PathBuf], out: &Path, auc: AucArg) -> Result<(AttainmentSurfaces, PathBuf), CliError> {
    let sets: Vec<Vec<ObjectivePair>> = fronts
        .iter()
        .map(|p| {
            Ok(read_front(p)?
                .iter()
                .map(|r| match auc {
                    AucArg::Train => r.train_objectives(),
                    AucArg::Test => r.test_objectives(),
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    let surfaces = eaf(&sets)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    write_eaf(out, &surfaces)?;
    let svg = out.with_extension("svg");
    fs::write(&svg, render_svg(&surfaces)).map_err(io_err(&svg))?;
    Ok((surfaces, svg))
}

pub fn cmd_synth(
    rows: usize,
    features: usize,
    informative: &[usize],
    noise: f64,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    if let Some(&j) = informative.iter().find(|&&j| j >= features) {
        return Err(CliError::Usage(format!("informative column {j} outside 0..{features}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(CliError::Usage(format!("noise level {noise} must be finite and non-negative")));
    }
    let ds = synthetic::planted_subset(rows, features, informative, noise, seed);
    let file = fs::File::create(out).map_err(io_err(out))?;
    write_dense(&ds, std::io::BufWriter::new(file))?;
    Ok(())
}
