use serde::{Deserialize, Serialize};

use crate::solution::ObjectivePair;

use super::MetricsError;

/// Minimal points of the region attained by at least `level` runs, by
/// ascending cardinality (AUC then strictly increases along the list).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub level: usize,
    pub points: Vec<ObjectivePair>,
}

impl Surface {
    /// Some breakpoint has cardinality <= `z.cardinality` and AUC >= `z.auc`.
    pub fn attains(&self, z: &ObjectivePair) -> bool {
        self.points
            .iter()
            .any(|p| p.cardinality <= z.cardinality && p.auc >= z.auc)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttainmentSurfaces {
    pub runs: usize,
    pub best: Surface,
    pub median: Surface,
    pub worst: Surface,
}

/// Number of fronts containing a point that weakly dominates `z`.
pub fn attainment_count(fronts: &[Vec<ObjectivePair>], z: &ObjectivePair) -> usize {
    fronts
        .iter()
        .filter(|f| f.iter().any(|p| p.cardinality <= z.cardinality && p.auc >= z.auc))
        .count()
}

fn surface(fronts: &[Vec<ObjectivePair>], xs: &[f64], level: usize) -> Surface {
    let mut points: Vec<ObjectivePair> = Vec::new();
    let mut best_per_run = vec![f64::NEG_INFINITY; fronts.len()];
    for &x in xs {
        for (r, f) in fronts.iter().enumerate() {
            for p in f.iter().filter(|p| p.cardinality == x) {
                best_per_run[r] = best_per_run[r].max(p.auc);
            }
        }
        let mut sorted = best_per_run.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let auc = sorted[level - 1];
        if auc.is_finite() && points.last().is_none_or(|q| auc > q.auc) {
            points.push(ObjectivePair::new(x, auc));
        }
    }
    Surface { level, points }
}

/// Best (one run), median (`ceil(R/2)` runs) and worst (all runs)
/// attainment surfaces of `fronts`.
pub fn eaf(fronts: &[Vec<ObjectivePair>]) -> Result<AttainmentSurfaces, MetricsError> {
    if fronts.is_empty() {
        return Err(MetricsError::Empty);
    }
    let r = fronts.len();
    let mut xs: Vec<f64> = fronts.iter().flatten().map(|p| p.cardinality).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    Ok(AttainmentSurfaces {
        runs: r,
        best: surface(fronts, &xs, 1),
        median: surface(fronts, &xs, r.div_ceil(2)),
        worst: surface(fronts, &xs, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(c: f64, a: f64) -> ObjectivePair {
        ObjectivePair::new(c, a)
    }

    #[test]
    fn single_run_collapses() {
        let front = vec![op(0.3, 0.8), op(0.1, 0.6), op(0.5, 0.9)];
        let s = eaf(&[front]).unwrap();
        let expect = vec![op(0.1, 0.6), op(0.3, 0.8), op(0.5, 0.9)];
        assert_eq!(s.best.points, expect);
        assert_eq!(s.median.points, expect);
        assert_eq!(s.worst.points, expect);
    }

    #[test]
    fn two_runs_worst_is_common_region() {
        let fronts = vec![vec![op(0.1, 0.9)], vec![op(0.3, 0.95)]];
        let s = eaf(&fronts).unwrap();
        assert_eq!(s.worst.points, vec![op(0.3, 0.9)]);
        assert_eq!(s.best.points, vec![op(0.1, 0.9), op(0.3, 0.95)]);
        assert_eq!(s.median, Surface { level: 1, ..s.best.clone() });
        for i in 0..100 {
            for j in 0..100 {
                let z = op(i as f64 / 99.0, j as f64 / 99.0);
                assert_eq!(s.worst.attains(&z), attainment_count(&fronts, &z) == 2);
                assert_eq!(s.best.attains(&z), attainment_count(&fronts, &z) >= 1);
            }
        }
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(eaf(&[]), Err(MetricsError::Empty));
    }
}
