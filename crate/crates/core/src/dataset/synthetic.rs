//! Seeded synthetic datasets for tests, benchmarks and demos.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::Dataset;
use crate::rng::stream;

/// Features i.i.d. uniform on `[0,1]`; the label is the sign of
/// `sum(c[i] * (x[informative[i]] - 0.5)) + noise` with Gaussian noise of
/// standard deviation `noise_sd`. The coefficients are 1 except the last,
/// which is `1 - |informative|` when more than one feature is planted, so
/// the class boundary passes through the origin and a zero intercept
/// already fits it.
pub fn planted_subset(
    n_rows: usize,
    n_features: usize,
    informative: &[usize],
    noise_sd: f64,
    seed: u64,
) -> Dataset {
    assert!(informative.iter().all(|&j| j < n_features));
    let mut rng = stream(seed, &[0x5EED]);
    let noise = Normal::new(0.0, noise_sd).expect("finite noise level");
    let m = informative.len();
    let coef: Vec<f64> = (0..m)
        .map(|i| if m > 1 && i == m - 1 { 1.0 - m as f64 } else { 1.0 })
        .collect();
    let mut values = Vec::with_capacity(n_rows * n_features);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<f64> = (0..n_features).map(|_| rng.gen::<f64>()).collect();
        let score: f64 = informative
            .iter()
            .zip(&coef)
            .map(|(&j, c)| c * (row[j] - 0.5))
            .sum::<f64>()
            + noise.sample(&mut rng);
        labels.push(u8::from(score > 0.0));
        values.extend(row);
    }
    let names = (0..n_features).map(|j| format!("f{j}")).collect();
    Dataset::dense(values, n_features, labels, Some(names)).expect("both classes present")
}

/// Uniform features with labels drawn independently of them.
pub fn pure_noise(n_rows: usize, n_features: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed, &[0x0015E]);
    loop {
        let values: Vec<f64> = (0..n_rows * n_features).map(|_| rng.gen::<f64>()).collect();
        let labels: Vec<u8> = (0..n_rows).map(|_| u8::from(rng.gen_bool(0.5))).collect();
        if let Ok(ds) = Dataset::dense(values, n_features, labels, None) {
            return ds;
        }
    }
}
