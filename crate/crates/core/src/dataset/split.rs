use rand::seq::SliceRandom;
use rand::Rng;

use super::{DataError, Dataset, Shard};
use crate::rng::{stream, tag};

/// Stratified random split; each class contributes
/// `round(count * test_fraction)` rows to the test half.
pub fn stratified_split(
    ds: &Dataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DataError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DataError::Invalid(format!("test fraction {test_fraction} outside (0,1)")));
    }
    let mut rng = stream(seed, &[tag::SPLIT]);
    let mut train = Vec::with_capacity(ds.n_rows());
    let mut test = Vec::new();
    for class in [0u8, 1] {
        let mut rows = ds.rows_of_class(class);
        let count = rows.len();
        let n_test = (count as f64 * test_fraction).round() as usize;
        if n_test == 0 || n_test == count {
            return Err(DataError::ClassTooSmall { class, count, needed: 2 });
        }
        rows.shuffle(&mut rng);
        test.extend_from_slice(&rows[..n_test]);
        train.extend_from_slice(&rows[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((ds.select_rows(&train), ds.select_rows(&test)))
}

/// Duplicate uniformly drawn minority rows until both classes have the same
/// count. Duplicates are appended after the original rows.
pub fn random_oversample(ds: &Dataset, seed: u64) -> Dataset {
    let [c0, c1] = ds.class_counts();
    if c0 == c1 {
        return ds.clone();
    }
    let minority = if c0 < c1 { 0 } else { 1 };
    let pool = ds.rows_of_class(minority);
    let missing = c0.abs_diff(c1);
    let mut rng = stream(seed, &[tag::OVERSAMPLE]);
    let mut rows: Vec<usize> = (0..ds.n_rows()).collect();
    rows.extend((0..missing).map(|_| pool[rng.gen_range(0..pool.len())]));
    ds.select_rows(&rows)
}

/// Partition the rows into `k` disjoint shards, stratified per class so
/// every shard sees both classes. Per-class shard sizes differ by at most
/// one; the second class continues the round-robin where the first stopped
/// so total sizes are balanced too.
pub fn shard_rows(ds: &Dataset, k: usize, seed: u64) -> Result<Vec<Shard<'_>>, DataError> {
    if k == 0 {
        return Err(DataError::Invalid("island count must be at least 1".into()));
    }
    let mut rng = stream(seed, &[tag::SHARD]);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut next = 0usize;
    for class in [0u8, 1] {
        let mut rows = ds.rows_of_class(class);
        if rows.len() < k {
            return Err(DataError::ClassTooSmall { class, count: rows.len(), needed: k });
        }
        rows.shuffle(&mut rng);
        for r in rows {
            buckets[next].push(r);
            next = (next + 1) % k;
        }
    }
    buckets
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            Shard::new(ds, b)
        })
        .collect()
}
