use std::fs;
use std::io::Write;
use std::path::Path;

use super::{DataError, Dataset};

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Load a comma-separated file whose first row is a header and whose last
/// column is named `label`.
pub fn load_dense(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    parse_dense(&read(path.as_ref())?)
}

pub fn parse_dense(text: &str) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| DataError::Parse { line: 1, message: e.to_string() })?
        .clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(DataError::EmptyFile);
    }
    if header.len() < 2 {
        return Err(DataError::Parse {
            line: 1,
            message: "need at least one feature column and a label column".into(),
        });
    }
    if &header[header.len() - 1] != "label" {
        return Err(DataError::Parse {
            line: 1,
            message: format!("last column must be named \"label\", found {:?}", &header[header.len() - 1]),
        });
    }
    let n_features = header.len() - 1;
    let names: Vec<String> = header.iter().take(n_features).map(str::to_owned).collect();

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| DataError::Parse { line, message: e.to_string() })?;
        if record.len() != header.len() {
            return Err(DataError::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        for (j, cell) in record.iter().take(n_features).enumerate() {
            let v: f64 = cell.parse().map_err(|_| DataError::Parse {
                line,
                message: format!("non-numeric value {cell:?} in column {:?}", &header[j]),
            })?;
            values.push(v);
        }
        labels.push(parse_label(&record[n_features], line, false)?);
    }
    if labels.is_empty() {
        return Err(DataError::NoDataRows);
    }
    Dataset::dense(values, n_features, labels, Some(names))
}

fn parse_label(token: &str, line: usize, signed: bool) -> Result<u8, DataError> {
    let invalid = || DataError::InvalidLabel { line, value: token.to_owned() };
    let v: f64 = token.parse().map_err(|_| invalid())?;
    match v {
        0.0 => Ok(0),
        1.0 => Ok(1),
        v if signed && v == -1.0 => Ok(0),
        _ => Err(invalid()),
    }
}

/// Load a `label idx:val idx:val ...` file with 1-based indices. Labels may
/// be `0/1` or `-1/+1`.
pub fn load_sparse(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    parse_sparse(&read(path.as_ref())?)
}

pub fn parse_sparse(text: &str) -> Result<Dataset, DataError> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut n_features = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let label = tokens.next().expect("non-empty line has a token");
        labels.push(parse_label(label, line, true)?);
        let mut row: Vec<(usize, f64)> = Vec::new();
        for tok in tokens {
            let malformed = || DataError::Parse {
                line,
                message: format!("malformed token {tok:?}"),
            };
            let (idx, val) = tok.split_once(':').ok_or_else(malformed)?;
            let idx: usize = idx.parse().map_err(|_| malformed())?;
            let val: f64 = val.parse().map_err(|_| malformed())?;
            if idx == 0 {
                return Err(DataError::Parse {
                    line,
                    message: "feature indices are 1-based".into(),
                });
            }
            let col = idx - 1;
            if row.last().is_some_and(|&(prev, _)| prev >= col) {
                return Err(DataError::IndicesNotIncreasing { line });
            }
            n_features = n_features.max(idx);
            row.push((col, val));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DataError::EmptyFile);
    }
    if n_features == 0 {
        return Err(DataError::Invalid("no feature values in file".into()));
    }
    Dataset::sparse(rows, n_features, labels)
}

/// Write `ds` in the dense CSV format read by [`load_dense`]. Values use the
/// shortest representation that parses back to the identical `f64`.
pub fn write_dense<W: Write>(ds: &Dataset, out: W) -> Result<(), DataError> {
    let to_io = |e: csv::Error| DataError::Io {
        path: "<writer>".into(),
        source: std::io::Error::other(e),
    };
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = match ds.feature_names() {
        Some(names) => names.to_vec(),
        None => (0..ds.n_features()).map(|j| format!("f{j}")).collect(),
    };
    header.push("label".into());
    w.write_record(&header).map_err(to_io)?;
    for r in 0..ds.n_rows() {
        let mut rec: Vec<String> = ds.dense_row(r).iter().map(|v| format!("{v:?}")).collect();
        rec.push(ds.label(r).to_string());
        w.write_record(&rec).map_err(to_io)?;
    }
    w.flush().map_err(|source| DataError::Io { path: "<writer>".into(), source })?;
    Ok(())
}
