//! Flow-record ingestion and preprocessing.

mod load;
mod preprocess;
mod taxonomy;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use load::{load_csv, LoadedCsv};
pub use preprocess::{
    downsample_majority, impute_missing, standardize, stratified_split, stratified_subsample,
    DatasetSplit, Imputer, Standardizer,
};
pub use taxonomy::{LabelTaxonomy, TaxonomyLevel, BENIGN_CATEGORY, CICIOT2023_FEATURES};

/// Dense row-major matrix of flow features. Missing cells are `NaN` until imputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    feature_names: Vec<String>,
    values: Vec<f64>,
    n_rows: usize,
}

impl FeatureMatrix {
    pub fn new(feature_names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let n_features = feature_names.len();
        let mut seen = HashSet::with_capacity(n_features);
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate feature name `{name}`"
                )));
            }
        }
        if n_features == 0 {
            if !values.is_empty() {
                return Err(Error::InvalidParameter(
                    "values given for a matrix without features".into(),
                ));
            }
            return Ok(Self {
                feature_names,
                values,
                n_rows: 0,
            });
        }
        if !values.len().is_multiple_of(n_features) {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: n_features,
            });
        }
        let n_rows = values.len() / n_features;
        Ok(Self {
            feature_names,
            values,
            n_rows,
        })
    }

    /// Builds a matrix from rows with generated names `f0, f1, ...`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        let names = (0..n_features).map(|j| format!("f{j}")).collect();
        let mut values = Vec::with_capacity(rows.len() * n_features);
        for row in rows {
            if row.len() != n_features {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: n_features,
                });
            }
            values.extend_from_slice(row);
        }
        let mut m = Self::new(names, values)?;
        m.n_rows = rows.len();
        Ok(m)
    }

    pub fn empty_like(&self) -> Self {
        Self {
            feature_names: self.feature_names.clone(),
            values: Vec::new(),
            n_rows: 0,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let f = self.n_features();
        &self.values[i * f..(i + 1) * f]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_features() + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Copies the given rows (repeats allowed) into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let f = self.n_features();
        let mut values = Vec::with_capacity(indices.len() * f);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            feature_names: self.feature_names.clone(),
            values,
            n_rows: indices.len(),
        }
    }

    /// Applies `f(column, value)` to every cell.
    pub(crate) fn map_cells(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let nf = self.n_features();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(k % nf, v))
            .collect();
        Self {
            feature_names: self.feature_names.clone(),
            values,
            n_rows: self.n_rows,
        }
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(|v| v.is_nan())
    }

    pub fn missing_per_column(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_features()];
        for row in self.rows() {
            for (c, v) in counts.iter_mut().zip(row) {
                if v.is_nan() {
                    *c += 1;
                }
            }
        }
        counts
    }

    pub fn check_features(&self, expected: usize) -> Result<()> {
        if self.n_features() != expected {
            return Err(Error::FeatureMismatch {
                expected,
                found: self.n_features(),
            });
        }
        Ok(())
    }
}

/// Class ids for each row together with the ordered class space they index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelVector {
    pub ids: Vec<usize>,
    pub class_names: Vec<String>,
    pub level: TaxonomyLevel,
}

impl LabelVector {
    pub fn new(ids: Vec<usize>, class_names: Vec<String>, level: TaxonomyLevel) -> Result<Self> {
        if let Some(&bad) = ids.iter().find(|&&id| id >= class_names.len()) {
            return Err(Error::InvalidParameter(format!(
                "class id {bad} outside 0..{}",
                class_names.len()
            )));
        }
        Ok(Self {
            ids,
            class_names,
            level,
        })
    }

    /// Encodes names against a fixed class list (e.g. one saved at preprocessing).
    pub fn from_names<S: AsRef<str>>(
        raw: &[S],
        class_names: &[String],
        level: TaxonomyLevel,
    ) -> Result<Self> {
        let index: BTreeMap<&str, usize> = class_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut unknown = Vec::new();
        let mut ids = Vec::with_capacity(raw.len());
        for name in raw {
            match index.get(name.as_ref()) {
                Some(&id) => ids.push(id),
                None => {
                    if !unknown.iter().any(|u: &String| u == name.as_ref()) {
                        unknown.push(name.as_ref().to_string());
                    }
                }
            }
        }
        if !unknown.is_empty() {
            return Err(Error::UnknownLabels(unknown));
        }
        Ok(Self {
            ids,
            class_names: class_names.to_vec(),
            level,
        })
    }

    /// Same class space, different ids.
    pub fn with_ids(&self, ids: Vec<usize>) -> Self {
        Self {
            ids,
            class_names: self.class_names.clone(),
            level: self.level,
        }
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        self.with_ids(indices.iter().map(|&i| self.ids[i]).collect())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn name_of(&self, row: usize) -> &str {
        &self.class_names[self.ids[row]]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &id in &self.ids {
            counts[id] += 1;
        }
        counts
    }

    /// Row indices of each class, ascending.
    pub fn rows_by_class(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.n_classes()];
        for (row, &id) in self.ids.iter().enumerate() {
            groups[id].push(row);
        }
        groups
    }
}

/// Maps raw attack names to `level` and assigns ids by first appearance.
pub fn encode_labels<S: AsRef<str>>(
    raw: &[S],
    taxonomy: &LabelTaxonomy,
    level: TaxonomyLevel,
) -> Result<LabelVector> {
    let mut unknown: Vec<String> = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut ids = Vec::with_capacity(raw.len());
    for name in raw {
        let name = name.as_ref();
        match taxonomy.map(name, level) {
            Some(mapped) => {
                let id = *index.entry(mapped).or_insert_with(|| {
                    class_names.push(mapped.to_string());
                    class_names.len() - 1
                });
                ids.push(id);
            }
            None => {
                if !unknown.iter().any(|u| u == name) {
                    unknown.push(name.to_string());
                }
            }
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownLabels(unknown));
    }
    LabelVector::new(ids, class_names, level)
}

/// Counts and cleaning actions recorded while loading and preprocessing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub imputed_cells_per_column: BTreeMap<String, usize>,
    pub class_counts: BTreeMap<String, usize>,
}

impl PreprocessReport {
    pub fn rows_retained(&self) -> usize {
        self.rows_read - self.rows_dropped
    }
}
