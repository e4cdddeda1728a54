//! Brute-force k-nearest-neighbour classifier under the Manhattan metric.
//!
//! Training rows are z-scored at fit time (statistics from the training rows
//! only) and every query is mapped through the same transform. Neighbour
//! selection is exact; distance ties go to the lower training index.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector, Standardizer};
use crate::error::{Error, Result};
use crate::par;
use crate::proba::{argmax, ProbaMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Uniform,
    #[default]
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub n_neighbors: usize,
    pub weighting: Weighting,
    /// Z-score features before measuring distances.
    pub standardize: bool,
}

impl KnnConfig {
    /// Five neighbours, inverse-distance weights.
    pub fn tuned() -> Self {
        Self {
            n_neighbors: 5,
            weighting: Weighting::Distance,
            standardize: true,
        }
    }
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self::tuned()
    }
}

/// `Σ |a_i − b_i|`.
pub fn manhattan_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(l1(a, b))
}

#[inline]
fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

#[inline]
fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnClassifier {
    pub config: KnnConfig,
    pub standardizer: Option<Standardizer>,
    /// Training rows after standardization.
    pub train: FeatureMatrix,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl KnnClassifier {
    pub fn fit(m: &FeatureMatrix, y: &LabelVector, config: &KnnConfig) -> Result<Self> {
        if m.n_rows() != y.len() {
            return Err(Error::LengthMismatch {
                left: m.n_rows(),
                right: y.len(),
            });
        }
        if m.n_rows() == 0 {
            return Err(Error::EmptyInput);
        }
        if config.n_neighbors == 0 {
            return Err(Error::InvalidParameter("n_neighbors must be ≥ 1".into()));
        }
        let (train, standardizer) = if config.standardize {
            let s = Standardizer::fit(m)?;
            (s.transform(m)?, Some(s))
        } else {
            (m.clone(), None)
        };
        Ok(Self {
            config: *config,
            standardizer,
            train,
            labels: y.ids.clone(),
            n_classes: y.n_classes(),
        })
    }

    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }

    fn scale(&self, row: &[f64]) -> Vec<f64> {
        match &self.standardizer {
            Some(s) => s.transform_row(row),
            None => row.to_vec(),
        }
    }

    /// Neighbours of an already-standardized query.
    fn kneighbors_scaled(&self, query: &[f64], k: usize) -> Vec<(usize, f64)> {
        let mut d: Vec<(f64, usize)> = self
            .train
            .rows()
            .enumerate()
            .map(|(i, r)| (l1(query, r), i))
            .collect();
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, by_distance_then_index);
            d.truncate(k);
        }
        d.sort_unstable_by(by_distance_then_index);
        d.into_iter().map(|(dist, i)| (i, dist)).collect()
    }

    /// The `k` stored rows closest to `query` (raw feature space), ascending.
    pub fn kneighbors(&self, query: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
        if query.len() != self.n_features() {
            return Err(Error::FeatureMismatch {
                expected: self.n_features(),
                found: query.len(),
            });
        }
        if k == 0 || k > self.train.n_rows() {
            return Err(Error::TooFewNeighbors {
                k,
                available: self.train.n_rows(),
            });
        }
        Ok(self.kneighbors_scaled(&self.scale(query), k))
    }

    fn vote(&self, neighbors: &[(usize, f64)]) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_classes];
        match self.config.weighting {
            Weighting::Uniform => {
                for &(i, _) in neighbors {
                    scores[self.labels[i]] += 1.0;
                }
            }
            Weighting::Distance => {
                let exact: Vec<usize> = neighbors
                    .iter()
                    .filter(|(_, d)| *d == 0.0)
                    .map(|&(i, _)| i)
                    .collect();
                if exact.is_empty() {
                    for &(i, d) in neighbors {
                        scores[self.labels[i]] += 1.0 / d;
                    }
                } else {
                    let share = 1.0 / exact.len() as f64;
                    for i in exact {
                        scores[self.labels[i]] += share;
                    }
                }
            }
        }
        let total: f64 = scores.iter().sum();
        scores.iter_mut().for_each(|s| *s /= total);
        scores
    }

    fn check_query(&self, m: &FeatureMatrix) -> Result<()> {
        m.check_features(self.n_features())?;
        if self.config.n_neighbors > self.train.n_rows() {
            return Err(Error::TooFewNeighbors {
                k: self.config.n_neighbors,
                available: self.train.n_rows(),
            });
        }
        Ok(())
    }

    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        self.check_query(m)?;
        let k = self.config.n_neighbors;
        let rows = par::map_range(m.n_rows(), |i| {
            let q = self.scale(m.row(i));
            self.vote(&self.kneighbors_scaled(&q, k))
        });
        Ok(ProbaMatrix::from_rows(self.n_classes, rows))
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        Ok(self.predict_proba(m)?.rows().map(argmax).collect())
    }
}
