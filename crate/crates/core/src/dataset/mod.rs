//! Labeled binary-classification data: loading, splitting, balancing,
//! sharding across islands and projection onto feature subsets.

mod io;
mod scale;
mod split;
pub mod synthetic;

use std::path::PathBuf;

use crate::mask::FeatureMask;

pub use io::{load_dense, load_sparse, parse_dense, parse_sparse, write_dense};
pub use scale::MinMaxScaler;
pub use split::{random_oversample, shard_rows, stratified_split};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no data rows")]
    NoDataRows,
    #[error("empty file")]
    EmptyFile,
    #[error("single-class data: every label is {0}")]
    SingleClass(u8),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: label {value:?} is not a binary class label")]
    InvalidLabel { line: usize, value: String },
    #[error("line {line}: indices not increasing")]
    IndicesNotIncreasing { line: usize },
    #[error("class {class} has {count} rows, need at least {needed}")]
    ClassTooSmall { class: u8, count: usize, needed: usize },
    #[error("mask has length {got}, dataset has {expected} features")]
    MaskLength { expected: usize, got: usize },
    #[error("mask selects no features")]
    EmptyMask,
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

/// Dense row-major matrix of reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data does not match shape");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Feature storage, either dense row-major or per-row sparse lists of
/// `(column, value)` with strictly increasing columns.
#[derive(Clone, Debug, PartialEq)]
pub enum Features {
    Dense(Vec<f64>),
    Sparse(Vec<Vec<(usize, f64)>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    n_rows: usize,
    n_features: usize,
    features: Features,
    labels: Vec<u8>,
    feature_names: Option<Vec<String>>,
    scaling: Option<MinMaxScaler>,
}

impl Dataset {
    /// Build a dense dataset from row-major values.
    pub fn dense(
        values: Vec<f64>,
        n_features: usize,
        labels: Vec<u8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self, DataError> {
        if n_features == 0 {
            return Err(DataError::Invalid("at least one feature column is required".into()));
        }
        if values.len() != labels.len() * n_features {
            return Err(DataError::Invalid(format!(
                "{} values do not fill {} rows of {} features",
                values.len(),
                labels.len(),
                n_features
            )));
        }
        Self::finish(labels.len(), n_features, Features::Dense(values), labels, feature_names)
    }

    /// Build a sparse dataset; every index must be `< n_features` and
    /// strictly increasing within its row.
    pub fn sparse(
        rows: Vec<Vec<(usize, f64)>>,
        n_features: usize,
        labels: Vec<u8>,
    ) -> Result<Self, DataError> {
        if n_features == 0 {
            return Err(DataError::Invalid("at least one feature column is required".into()));
        }
        if rows.len() != labels.len() {
            return Err(DataError::Invalid("row and label counts differ".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(DataError::IndicesNotIncreasing { line: i + 1 });
            }
            if row.last().is_some_and(|&(c, _)| c >= n_features) {
                return Err(DataError::Invalid(format!("row {i}: column index out of range")));
            }
        }
        Self::finish(labels.len(), n_features, Features::Sparse(rows), labels, None)
    }

    fn finish(
        n_rows: usize,
        n_features: usize,
        features: Features,
        labels: Vec<u8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self, DataError> {
        if n_rows == 0 {
            return Err(DataError::NoDataRows);
        }
        if let Some(&bad) = labels.iter().find(|&&y| y > 1) {
            return Err(DataError::Invalid(format!("label {bad} outside {{0,1}}")));
        }
        let positives = labels.iter().filter(|&&y| y == 1).count();
        if positives == 0 {
            return Err(DataError::SingleClass(0));
        }
        if positives == n_rows {
            return Err(DataError::SingleClass(1));
        }
        if let Some(names) = &feature_names {
            if names.len() != n_features {
                return Err(DataError::Invalid("feature name count differs from feature count".into()));
            }
        }
        Ok(Self {
            n_rows,
            n_features,
            features,
            labels,
            feature_names,
            scaling: None,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, row: usize) -> u8 {
        self.labels[row]
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.features, Features::Sparse(_))
    }

    /// Scaling applied to this dataset, if any.
    pub fn scaling(&self) -> Option<&MinMaxScaler> {
        self.scaling.as_ref()
    }

    /// Row counts as `[class 0, class 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&y| y == 1).count();
        [self.n_rows - ones, ones]
    }

    /// Cell value; unstored sparse cells read as zero.
    pub fn value(&self, row: usize, col: usize) -> f64 {
        match &self.features {
            Features::Dense(v) => v[row * self.n_features + col],
            Features::Sparse(rows) => rows[row]
                .binary_search_by_key(&col, |&(c, _)| c)
                .map_or(0.0, |i| rows[row][i].1),
        }
    }

    pub fn dense_row(&self, row: usize) -> Vec<f64> {
        match &self.features {
            Features::Dense(v) => v[row * self.n_features..(row + 1) * self.n_features].to_vec(),
            Features::Sparse(rows) => {
                let mut out = vec![0.0; self.n_features];
                for &(c, x) in &rows[row] {
                    out[c] = x;
                }
                out
            }
        }
    }

    /// New dataset made of the given rows (duplicates allowed), in order.
    pub(crate) fn select_rows(&self, rows: &[usize]) -> Self {
        let features = match &self.features {
            Features::Dense(v) => Features::Dense(
                rows.iter()
                    .flat_map(|&r| v[r * self.n_features..(r + 1) * self.n_features].iter().copied())
                    .collect(),
            ),
            Features::Sparse(sr) => Features::Sparse(rows.iter().map(|&r| sr[r].clone()).collect()),
        };
        Self {
            n_rows: rows.len(),
            n_features: self.n_features,
            features,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            feature_names: self.feature_names.clone(),
            scaling: self.scaling.clone(),
        }
    }

    pub(crate) fn with_features(&self, features: Features, scaling: Option<MinMaxScaler>) -> Self {
        Self {
            features,
            scaling,
            ..self.clone()
        }
    }

    pub(crate) fn rows_of_class(&self, class: u8) -> Vec<usize> {
        (0..self.n_rows).filter(|&r| self.labels[r] == class).collect()
    }
}

/// A view of a subset of a dataset's rows, owned by one island.
#[derive(Clone, Debug)]
pub struct Shard<'a> {
    parent: &'a Dataset,
    row_ids: Vec<usize>,
}

impl<'a> Shard<'a> {
    pub fn new(parent: &'a Dataset, row_ids: Vec<usize>) -> Result<Self, DataError> {
        let mut seen = vec![false; parent.n_rows()];
        for &r in &row_ids {
            if r >= parent.n_rows() || std::mem::replace(&mut seen[r], true) {
                return Err(DataError::Invalid(format!("shard row {r} out of range or repeated")));
            }
        }
        Ok(Self { parent, row_ids })
    }

    /// Shard covering every row.
    pub fn full(parent: &'a Dataset) -> Self {
        Self {
            parent,
            row_ids: (0..parent.n_rows()).collect(),
        }
    }

    pub fn parent(&self) -> &'a Dataset {
        self.parent
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn len(&self) -> usize {
        self.row_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_ids.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.parent.n_features()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.row_ids.iter().filter(|&&r| self.parent.label(r) == 1).count();
        [self.row_ids.len() - ones, ones]
    }

    /// Columns selected by `mask` (ascending index order) for this shard's
    /// rows, together with the rows' labels.
    pub fn project(&self, mask: &FeatureMask) -> Result<(Matrix, Vec<u8>), DataError> {
        project_rows(self.parent, &self.row_ids, mask)
    }
}

pub(crate) fn project_rows(
    ds: &Dataset,
    rows: &[usize],
    mask: &FeatureMask,
) -> Result<(Matrix, Vec<u8>), DataError> {
    if mask.len() != ds.n_features() {
        return Err(DataError::MaskLength {
            expected: ds.n_features(),
            got: mask.len(),
        });
    }
    let selected = mask.selected();
    if selected.is_empty() {
        return Err(DataError::EmptyMask);
    }
    let cols = selected.len();
    let mut data = Vec::with_capacity(rows.len() * cols);
    match ds.features() {
        Features::Dense(v) => {
            let nf = ds.n_features();
            for &r in rows {
                let row = &v[r * nf..(r + 1) * nf];
                data.extend(selected.iter().map(|&c| row[c]));
            }
        }
        Features::Sparse(sr) => {
            let mut slot = vec![usize::MAX; ds.n_features()];
            for (k, &c) in selected.iter().enumerate() {
                slot[c] = k;
            }
            for &r in rows {
                let start = data.len();
                data.resize(start + cols, 0.0);
                for &(c, x) in &sr[r] {
                    if slot[c] != usize::MAX {
                        data[start + slot[c]] = x;
                    }
                }
            }
        }
    }
    let labels = rows.iter().map(|&r| ds.label(r)).collect();
    Ok((Matrix::new(rows.len(), cols, data), labels))
}

/// Project a whole dataset onto `mask`.
pub fn project(ds: &Dataset, mask: &FeatureMask) -> Result<(Matrix, Vec<u8>), DataError> {
    Shard::full(ds).project(mask)
}
