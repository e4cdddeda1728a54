use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};
use crate::par;

use super::{FeatureMatrix, PreprocessReport};

const PARSE_CHUNK: usize = 1 << 15;

/// Output of [`load_csv`]: features with `NaN` for missing cells, raw label
/// strings for the retained rows, and the ingestion report.
#[derive(Debug, Clone)]
pub struct LoadedCsv {
    pub matrix: FeatureMatrix,
    pub labels: Vec<String>,
    pub report: PreprocessReport,
}

impl LoadedCsv {
    /// Appends another load with an identical header.
    pub fn concat(mut self, other: LoadedCsv) -> Result<Self> {
        if self.matrix.feature_names() != other.matrix.feature_names() {
            return Err(Error::SchemaMismatch {
                path: "<concat>".into(),
                detail: "files have different headers".into(),
            });
        }
        self.matrix.values.extend_from_slice(other.matrix.values());
        self.matrix.n_rows += other.matrix.n_rows();
        self.labels.extend(other.labels);
        self.report.rows_read += other.report.rows_read;
        self.report.rows_dropped += other.report.rows_dropped;
        for (k, v) in other.report.imputed_cells_per_column {
            *self.report.imputed_cells_per_column.entry(k).or_default() += v;
        }
        for (k, v) in other.report.class_counts {
            *self.report.class_counts.entry(k).or_default() += v;
        }
        Ok(self)
    }
}

fn parse_cell(s: &str) -> f64 {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => v,
        _ => f64::NAN,
    }
}

/// Reads a flow CSV. Every non-label column is parsed as `f64`; cells that do
/// not parse to a finite number are recorded as missing. Rows with an empty
/// label are dropped.
pub fn load_csv(path: &Path, label_column: &str, schema: Option<&[String]>) -> Result<LoadedCsv> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingLabelColumn {
            path: path.to_path_buf(),
            column: label_column.to_string(),
        })?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if let Some(expected) = schema {
        if expected != feature_names.as_slice() {
            let detail = if expected.len() != feature_names.len() {
                format!(
                    "expected {} feature columns, found {}",
                    expected.len(),
                    feature_names.len()
                )
            } else {
                let j = expected
                    .iter()
                    .zip(&feature_names)
                    .position(|(a, b)| a != b)
                    .unwrap_or(0);
                format!(
                    "column {j}: expected `{}`, found `{}`",
                    expected[j], feature_names[j]
                )
            };
            return Err(Error::SchemaMismatch {
                path: path.to_path_buf(),
                detail,
            });
        }
    }

    let n_features = feature_names.len();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows_read = 0usize;
    let mut rows_dropped = 0usize;
    let mut chunk: Vec<csv::StringRecord> = Vec::with_capacity(PARSE_CHUNK);
    let mut records = reader.records();
    loop {
        chunk.clear();
        for rec in records.by_ref().take(PARSE_CHUNK) {
            chunk.push(rec.map_err(csv_err)?);
        }
        if chunk.is_empty() {
            break;
        }
        rows_read += chunk.len();
        let parsed = par::map_slice(&chunk, |rec| {
            let label = rec.get(label_idx).unwrap_or("").trim();
            if label.is_empty() {
                return None;
            }
            let row: Vec<f64> = rec
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != label_idx)
                .map(|(_, cell)| parse_cell(cell))
                .collect();
            Some((label.to_string(), row))
        });
        for item in parsed {
            match item {
                Some((label, row)) => {
                    labels.push(label);
                    values.extend(row);
                }
                None => rows_dropped += 1,
            }
        }
    }
    if rows_read == 0 {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    debug_assert_eq!(values.len(), labels.len() * n_features);
    let mut matrix = FeatureMatrix::new(feature_names, values)?;
    matrix.n_rows = labels.len();

    let imputed_cells_per_column = matrix
        .feature_names()
        .iter()
        .cloned()
        .zip(matrix.missing_per_column())
        .collect();
    let mut class_counts = BTreeMap::new();
    for l in &labels {
        *class_counts.entry(l.clone()).or_default() += 1;
    }
    Ok(LoadedCsv {
        matrix,
        labels,
        report: PreprocessReport {
            rows_read,
            rows_dropped,
            imputed_cells_per_column,
            class_counts,
        },
    })
}
