use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_for, stream};

use super::{FeatureMatrix, LabelVector};

/// Per-column medians computed over non-missing cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Imputer {
    pub medians: Vec<f64>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

impl Imputer {
    pub fn fit(m: &FeatureMatrix) -> Result<Self> {
        let medians = (0..m.n_features())
            .map(|j| {
                let present: Vec<f64> = m.rows().map(|r| r[j]).filter(|v| !v.is_nan()).collect();
                if present.is_empty() {
                    Err(Error::ColumnAllMissing(m.feature_names()[j].clone()))
                } else {
                    Ok(median(present))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { medians })
    }

    pub fn transform(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        m.check_features(self.medians.len())?;
        Ok(m.map_cells(|j, v| if v.is_nan() { self.medians[j] } else { v }))
    }
}

/// Replaces each missing cell with its column median.
pub fn impute_missing(m: &FeatureMatrix) -> Result<FeatureMatrix> {
    if !m.has_missing() {
        return Ok(m.clone());
    }
    Imputer::fit(m)?.transform(m)
}

/// Z-scoring statistics fitted on training rows (population standard deviation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(train: &FeatureMatrix) -> Result<Self> {
        let n = train.n_rows();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let nf = train.n_features();
        let mut mean = vec![0.0; nf];
        for row in train.rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut var = vec![0.0; nf];
        for row in train.rows() {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                let d = v - m;
                *s += d * d;
            }
        }
        let std = var.into_iter().map(|s| (s / n as f64).sqrt()).collect();
        Ok(Self { mean, std })
    }

    pub fn transform(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        m.check_features(self.mean.len())?;
        Ok(m.map_cells(|j, v| {
            let s = self.std[j];
            if s > 0.0 {
                (v - self.mean[j]) / s
            } else {
                v
            }
        }))
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let s = self.std[j];
                if s > 0.0 {
                    (v - self.mean[j]) / s
                } else {
                    v
                }
            })
            .collect()
    }
}

/// Fits z-scoring on `train` and applies it to `apply_to`.
pub fn standardize(
    train: &FeatureMatrix,
    apply_to: &FeatureMatrix,
) -> Result<(FeatureMatrix, Standardizer)> {
    let s = Standardizer::fit(train)?;
    Ok((s.transform(apply_to)?, s))
}

/// Train/test partition with the indices it was drawn from.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: (FeatureMatrix, LabelVector),
    pub test: (FeatureMatrix, LabelVector),
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
    pub train_fraction: f64,
}

/// Largest-remainder allocation of `fraction` of each class, ties broken by
/// class id. With `keep_both_sides` every class keeps at least one row on each
/// side (requires counts ≥ 2).
pub(crate) fn allocate(counts: &[usize], fraction: f64, keep_both_sides: bool) -> Vec<usize> {
    let total: usize = counts.iter().sum();
    let mut lo = Vec::with_capacity(counts.len());
    let mut hi = Vec::with_capacity(counts.len());
    let mut rem = Vec::with_capacity(counts.len());
    for &c in counts {
        let q = c as f64 * fraction;
        let fl = (q + 1e-9).floor();
        let (mut l, mut h) = (fl as usize, (q - 1e-9).ceil().max(fl) as usize);
        h = h.min(c);
        if keep_both_sides && c >= 2 {
            l = l.max(1);
            h = h.min(c - 1);
        }
        lo.push(l);
        hi.push(h.max(l));
        rem.push((q - fl).max(0.0));
    }
    let floor_sum: usize = lo.iter().sum();
    let ceil_sum: usize = hi.iter().sum();
    let target = ((total as f64 * fraction).round() as usize).clamp(floor_sum, ceil_sum);
    let mut order: Vec<usize> = (0..counts.len()).filter(|&c| hi[c] > lo[c]).collect();
    order.sort_by(|&a, &b| rem[b].total_cmp(&rem[a]).then(a.cmp(&b)));
    let mut alloc = lo;
    for &c in order.iter().take(target - floor_sum) {
        alloc[c] += 1;
    }
    alloc
}

/// Partitions rows per class; returns (selected, rest), both ascending.
fn stratified_pick(
    y: &LabelVector,
    alloc: &[usize],
    seed: u64,
    stream_tag: u64,
) -> (Vec<usize>, Vec<usize>) {
    let mut picked = Vec::new();
    let mut rest = Vec::new();
    for (class, mut rows) in y.rows_by_class().into_iter().enumerate() {
        let mut rng = rng_for(seed, stream_tag, class as u64);
        rows.shuffle(&mut rng);
        let (a, b) = rows.split_at(alloc[class]);
        picked.extend_from_slice(a);
        rest.extend_from_slice(b);
    }
    picked.sort_unstable();
    rest.sort_unstable();
    (picked, rest)
}

fn check_rows(m: &FeatureMatrix, y: &LabelVector) -> Result<()> {
    if m.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: m.n_rows(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Seeded per-class split; each class contributes `round(count × fraction)`
/// rows to train, adjusted to hit the global train size.
pub fn stratified_split(
    m: &FeatureMatrix,
    y: &LabelVector,
    train_fraction: f64,
    seed: u64,
) -> Result<DatasetSplit> {
    check_rows(m, y)?;
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    let counts = y.class_counts();
    for (c, &n) in counts.iter().enumerate() {
        if n == 1 {
            return Err(Error::ClassTooSmall {
                class: y.class_names[c].clone(),
                count: n,
                needed: 2,
            });
        }
    }
    let alloc = allocate(&counts, train_fraction, true);
    let (train_indices, test_indices) = stratified_pick(y, &alloc, seed, stream::SPLIT);
    Ok(DatasetSplit {
        train: (m.select_rows(&train_indices), y.select(&train_indices)),
        test: (m.select_rows(&test_indices), y.select(&test_indices)),
        train_indices,
        test_indices,
        seed,
        train_fraction,
    })
}

/// Stratified sample of about `n_rows` rows; returns everything when
/// `n_rows ≥ m.n_rows()`. Selected rows keep their original order.
pub fn stratified_subsample(
    m: &FeatureMatrix,
    y: &LabelVector,
    n_rows: usize,
    seed: u64,
) -> Result<(FeatureMatrix, LabelVector, Vec<usize>)> {
    check_rows(m, y)?;
    if n_rows >= m.n_rows() {
        return Ok((m.clone(), y.clone(), (0..m.n_rows()).collect()));
    }
    let fraction = n_rows as f64 / m.n_rows() as f64;
    let alloc = allocate(&y.class_counts(), fraction, false);
    let (picked, _) = stratified_pick(y, &alloc, seed, stream::SUBSAMPLE);
    Ok((m.select_rows(&picked), y.select(&picked), picked))
}

/// Uniformly subsamples (without replacement) every class above `cap` down to
/// `cap` rows. Smaller classes are untouched.
pub fn downsample_majority(
    m: &FeatureMatrix,
    y: &LabelVector,
    cap_per_class: usize,
    seed: u64,
) -> Result<(FeatureMatrix, LabelVector)> {
    check_rows(m, y)?;
    if cap_per_class == 0 {
        return Err(Error::InvalidParameter("cap_per_class must be ≥ 1".into()));
    }
    let alloc: Vec<usize> = y
        .class_counts()
        .into_iter()
        .map(|c| c.min(cap_per_class))
        .collect();
    let (keep, _) = stratified_pick(y, &alloc, seed, stream::DOWNSAMPLE);
    Ok((m.select_rows(&keep), y.select(&keep)))
}
