use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use super::MetricsError;

pub fn speedup(t_sequential: f64, t_parallel: f64) -> Result<f64, MetricsError> {
    for t in [t_sequential, t_parallel] {
        if t.is_nan() || t <= 0.0 {
            return Err(MetricsError::NonPositiveTime(t));
        }
    }
    Ok(t_sequential / t_parallel)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    pub t_statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub dof: usize,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let ss = x.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    (m, ss / (n - 1.0))
}

/// Two-sided two-sample t-test with pooled variance.
pub fn t_test_pooled(a: &[f64], b: &[f64], alpha: f64) -> Result<StatResult, MetricsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(MetricsError::TooFewSamples(s.len()));
        }
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let dof = a.len() + b.len() - 2;
    let (m1, v1) = mean_var(a);
    let (m2, v2) = mean_var(b);
    let pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / dof as f64;
    let (t, p) = if pooled == 0.0 {
        if m1 == m2 {
            (0.0, 1.0)
        } else {
            ((m1 - m2).signum() * f64::INFINITY, 0.0)
        }
    } else {
        let t = (m1 - m2) / (pooled * (1.0 / n1 + 1.0 / n2)).sqrt();
        let d = dof as f64;
        (t, beta_reg(d / 2.0, 0.5, d / (d + t * t)).clamp(0.0, 1.0))
    };
    Ok(StatResult {
        t_statistic: t,
        p_value: p,
        reject: p < alpha,
        dof,
    })
}
