use serde::{Deserialize, Serialize};

use super::{Dataset, Features};

/// Per-column min–max scaling fitted on one dataset (the training split) and
/// applied unchanged to others.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(ds: &Dataset) -> Self {
        let nf = ds.n_features();
        let (mut mins, mut maxs) = (vec![f64::INFINITY; nf], vec![f64::NEG_INFINITY; nf]);
        match ds.features() {
            Features::Dense(v) => {
                for row in v.chunks(nf) {
                    for (j, &x) in row.iter().enumerate() {
                        mins[j] = mins[j].min(x);
                        maxs[j] = maxs[j].max(x);
                    }
                }
            }
            Features::Sparse(rows) => {
                let mut stored = vec![0usize; nf];
                for row in rows {
                    for &(j, x) in row {
                        mins[j] = mins[j].min(x);
                        maxs[j] = maxs[j].max(x);
                        stored[j] += 1;
                    }
                }
                // unstored cells are zeros
                for j in 0..nf {
                    if stored[j] < rows.len() {
                        mins[j] = mins[j].min(0.0);
                        maxs[j] = maxs[j].max(0.0);
                    }
                }
            }
        }
        Self { mins, maxs }
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    /// Scaled value of `x` in column `j`; constant columns map to 0.
    pub fn scale(&self, j: usize, x: f64) -> f64 {
        let range = self.maxs[j] - self.mins[j];
        if range > 0.0 {
            (x - self.mins[j]) / range
        } else {
            0.0
        }
    }

    /// Apply the fitted transform. Sparse data stays sparse when every column
    /// minimum is zero (zeros stay zero); otherwise it is densified.
    pub fn transform(&self, ds: &Dataset) -> Dataset {
        assert_eq!(ds.n_features(), self.mins.len(), "scaler fitted on a different feature count");
        let nf = ds.n_features();
        let features = match ds.features() {
            Features::Sparse(rows) if self.mins.iter().all(|&m| m == 0.0) => Features::Sparse(
                rows.iter()
                    .map(|row| row.iter().map(|&(j, x)| (j, self.scale(j, x))).collect())
                    .collect(),
            ),
            _ => Features::Dense(
                (0..ds.n_rows())
                    .flat_map(|r| {
                        let row = ds.dense_row(r);
                        (0..nf).map(move |j| self.scale(j, row[j]))
                    })
                    .collect(),
            ),
        };
        ds.with_features(features, Some(self.clone()))
    }
}
