use crate::mo::dominates;
use crate::solution::ObjectivePair;

use super::MetricsError;

/// Area dominated by `front` relative to the worst corner (cardinality 1,
/// AUC 0). Points must be mutually non-dominated; duplicates are allowed.
pub fn hypervolume(front: &[ObjectivePair]) -> Result<f64, MetricsError> {
    for a in front {
        if let Some(b) = front.iter().find(|b| dominates(a, b)) {
            return Err(MetricsError::Dominated {
                cardinality: b.cardinality,
                auc: b.auc,
            });
        }
    }
    let mut pts: Vec<(f64, f64)> = front
        .iter()
        .map(|p| (p.cardinality.clamp(0.0, 1.0), p.auc.clamp(0.0, 1.0)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup();
    let mut area = 0.0;
    for (i, &(c, auc)) in pts.iter().enumerate() {
        let next = pts.get(i + 1).map_or(1.0, |p| p.0);
        area += (next - c) * auc;
    }
    Ok(area)
}
