use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::RunReport;
use crate::mo::front_indices;
use crate::solution::{ObjectivePair, Solution};

use super::{hypervolume, MetricsError};

/// Which AUC a statistic reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AucSource {
    Train,
    Test,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryOptions {
    /// AUC used to pick and average each run's top solution.
    pub top_auc: AucSource,
    /// AUC used for hypervolume.
    pub hv_auc: AucSource,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        Self {
            top_auc: AucSource::Test,
            hv_auc: AucSource::Train,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModalSubset {
    pub mask: String,
    pub count: usize,
    pub cardinality: f64,
    pub auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeastCardinal {
    pub run: usize,
    pub key: u64,
    pub mask: String,
    pub popcount: usize,
    pub cardinality: f64,
    pub auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub options: SummaryOptions,
    pub mean_cardinality: f64,
    pub mean_auc: f64,
    pub modal: ModalSubset,
    pub least_cardinal: LeastCardinal,
    pub mean_hv: f64,
    pub hv: Vec<f64>,
    pub wall_times: Vec<f64>,
}

fn auc_of(s: &Solution, src: AucSource) -> Option<f64> {
    match src {
        AucSource::Train => s.auc(),
        AucSource::Test => s.test_auc,
    }
}

struct Scored<'a> {
    run: usize,
    sol: &'a Solution,
    card: f64,
    auc: f64,
}

fn scored_front(run: usize, report: &RunReport, src: AucSource) -> Result<Vec<(Solution, f64, f64)>, MetricsError> {
    let what = match src {
        AucSource::Train => "train AUC",
        AucSource::Test => "test AUC",
    };
    let front = report.final_front();
    if front.is_empty() {
        return Err(MetricsError::MissingValues { run, what });
    }
    front
        .into_iter()
        .map(|s| {
            let card = s.cardinality().ok_or(MetricsError::MissingValues { run, what })?;
            let auc = auc_of(&s, src).ok_or(MetricsError::MissingValues { run, what })?;
            Ok((s, card, auc))
        })
        .collect()
}

/// Higher AUC, then lower cardinality, then lower key.
fn better(a: &Scored<'_>, b: &Scored<'_>) -> bool {
    a.auc
        .total_cmp(&b.auc)
        .then(b.card.total_cmp(&a.card))
        .then(b.sol.key.cmp(&a.sol.key))
        .is_gt()
}

fn run_hv(run: usize, report: &RunReport, src: AucSource) -> Result<f64, MetricsError> {
    let pts: Vec<ObjectivePair> = scored_front(run, report, src)?
        .into_iter()
        .map(|(_, c, a)| ObjectivePair::new(c, a))
        .collect();
    let nd: Vec<ObjectivePair> = front_indices(&pts)
        .into_iter()
        .next()
        .unwrap_or_default()
        .into_iter()
        .map(|i| pts[i])
        .collect();
    hypervolume(&nd)
}

/// Aggregate the final fronts of several runs.
pub fn summarize(reports: &[RunReport], options: SummaryOptions) -> Result<Summary, MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::Empty);
    }
    let fronts: Vec<Vec<(Solution, f64, f64)>> = reports
        .iter()
        .enumerate()
        .map(|(r, rep)| scored_front(r, rep, options.top_auc))
        .collect::<Result<_, _>>()?;

    let mut tops: Vec<Scored<'_>> = Vec::new();
    let mut all: Vec<Scored<'_>> = Vec::new();
    for (run, front) in fronts.iter().enumerate() {
        let mut top: Option<Scored<'_>> = None;
        for (sol, card, auc) in front {
            let s = Scored { run, sol, card: *card, auc: *auc };
            if top.as_ref().is_none_or(|t| better(&s, t)) {
                top = Some(Scored { ..s });
            }
            all.push(Scored { run, sol, card: *card, auc: *auc });
        }
        tops.extend(top);
    }

    let n = tops.len() as f64;
    let mean_cardinality = tops.iter().map(|t| t.card).sum::<f64>() / n;
    let mean_auc = tops.iter().map(|t| t.auc).sum::<f64>() / n;

    let mut groups: BTreeMap<String, (usize, f64, f64)> = BTreeMap::new();
    for t in &tops {
        let e = groups.entry(t.sol.mask.to_string()).or_insert((0, f64::INFINITY, f64::NEG_INFINITY));
        e.0 += 1;
        e.1 = e.1.min(t.card);
        e.2 = e.2.max(t.auc);
    }
    let (mask, (count, cardinality, auc)) = groups
        .into_iter()
        .max_by(|a, b| {
            let (x, y) = (&a.1, &b.1);
            x.0.cmp(&y.0)
                .then(x.2.total_cmp(&y.2))
                .then(y.1.total_cmp(&x.1))
                .then(b.0.cmp(&a.0))
        })
        .expect("at least one run");
    let modal = ModalSubset { mask, count, cardinality, auc };

    let max_auc = all.iter().map(|s| s.auc).fold(f64::NEG_INFINITY, f64::max);
    let least = all
        .iter()
        .filter(|s| s.auc >= max_auc - 1e-9)
        .min_by(|a, b| {
            a.sol
                .mask
                .popcount()
                .cmp(&b.sol.mask.popcount())
                .then(a.sol.key.cmp(&b.sol.key))
                .then(a.run.cmp(&b.run))
        })
        .expect("non-empty fronts");
    let least_cardinal = LeastCardinal {
        run: least.run,
        key: least.sol.key,
        mask: least.sol.mask.to_string(),
        popcount: least.sol.mask.popcount(),
        cardinality: least.card,
        auc: least.auc,
    };

    let hv: Vec<f64> = reports
        .iter()
        .enumerate()
        .map(|(r, rep)| run_hv(r, rep, options.hv_auc))
        .collect::<Result<_, _>>()?;
    let mean_hv = hv.iter().sum::<f64>() / hv.len() as f64;

    Ok(Summary {
        runs: reports.len(),
        options,
        mean_cardinality,
        mean_auc,
        modal,
        least_cardinal,
        mean_hv,
        hv,
        wall_times: reports.iter().map(|r| r.wall_times.total).collect(),
    })
}
