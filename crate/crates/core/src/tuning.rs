//! Stratified k-fold cross-validation and exhaustive grid search.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, Imputer, LabelVector};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, aggregate, per_class, Averaging, ConfusionMatrix};
use crate::model::{Model, ModelKind, ModelParams, ParamValue};
use crate::par;
use crate::rng::{rng_for, stream};

/// Candidate values per hyperparameter name.
pub type ParamGrid = BTreeMap<String, Vec<ParamValue>>;

/// One (train, validation) pair of ascending row indices.
pub type Fold = (Vec<usize>, Vec<usize>);

/// Splits rows into `k` folds. Each class is shuffled with its own seeded
/// stream and dealt round-robin, so per-class fold sizes differ by at most
/// one. Dealing for class `c` starts where class `c − 1` stopped, which keeps
/// overall fold sizes within one of each other as well.
pub fn stratified_kfold(y: &LabelVector, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("folds must be ≥ 2, got {k}")));
    }
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut next = 0;
    for (class, mut rows) in y.rows_by_class().into_iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        if rows.len() < k {
            return Err(Error::ClassTooSmall {
                class: y.class_names[class].clone(),
                count: rows.len(),
                needed: k,
            });
        }
        rows.shuffle(&mut rng_for(seed, stream::KFOLD, class as u64));
        for r in rows {
            assigned[next].push(r);
            next = (next + 1) % k;
        }
    }
    let n = y.len();
    Ok(assigned
        .into_iter()
        .map(|mut val| {
            val.sort_unstable();
            let mut in_val = vec![false; n];
            val.iter().for_each(|&i| in_val[i] = true);
            let train = (0..n).filter(|&i| !in_val[i]).collect();
            (train, val)
        })
        .collect())
}

/// Every assignment in the grid. Keys are visited in sorted order with the
/// last key varying fastest.
pub fn combinations(grid: &ParamGrid) -> Result<Vec<BTreeMap<String, ParamValue>>> {
    if let Some((name, _)) = grid.iter().find(|(_, v)| v.is_empty()) {
        return Err(Error::InvalidParameter(format!("grid entry `{name}` has no values")));
    }
    let mut out = vec![BTreeMap::new()];
    for (name, values) in grid {
        out = out
            .into_iter()
            .flat_map(|partial| {
                values.iter().map(move |v| {
                    let mut next = partial.clone();
                    next.insert(name.clone(), v.clone());
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scoring {
    #[default]
    Accuracy,
    MacroF1,
}

impl Scoring {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Accuracy => "accuracy",
            Self::MacroF1 => "macro_f1",
        }
    }

    pub fn score(self, y_true: &LabelVector, y_pred: &[usize]) -> Result<f64> {
        match self {
            Self::Accuracy => accuracy(&y_true.ids, y_pred),
            Self::MacroF1 => {
                let cm = ConfusionMatrix::new(&y_true.ids, y_pred, &y_true.class_names)?;
                Ok(aggregate(&per_class(&cm), Averaging::Macro)?.f1)
            }
        }
    }
}

impl std::str::FromStr for Scoring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Self::Accuracy),
            "macro_f1" => Ok(Self::MacroF1),
            _ => Err(Error::InvalidParameter(format!(
                "unknown scoring `{s}` (expected accuracy or macro_f1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRecord {
    pub params: BTreeMap<String, ParamValue>,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation of `fold_scores`.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub model: ModelKind,
    pub folds: usize,
    pub scoring: Scoring,
    pub seed: u64,
    pub records: Vec<CvRecord>,
    /// Highest mean score; the earliest grid position wins ties.
    pub best_index: usize,
}

impl CvResult {
    pub fn best(&self) -> &CvRecord {
        &self.records[self.best_index]
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn describe(params: &BTreeMap<String, ParamValue>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

struct FoldData {
    train: (FeatureMatrix, LabelVector),
    val: (FeatureMatrix, LabelVector),
}

/// Missing values are filled from the fold's own training rows.
fn fold_data(m: &FeatureMatrix, y: &LabelVector, fold: &Fold) -> Result<FoldData> {
    let (tr, va) = fold;
    let mut xt = m.select_rows(tr);
    let mut xv = m.select_rows(va);
    if m.has_missing() {
        let imp = Imputer::fit(&xt)?;
        xt = imp.transform(&xt)?;
        xv = imp.transform(&xv)?;
    }
    Ok(FoldData {
        train: (xt, y.select(tr)),
        val: (xv, y.select(va)),
    })
}

/// Scores every grid cell by k-fold cross-validation, then refits the best
/// cell on all of `m`. `base` supplies values for parameters absent from the
/// grid and the seed.
pub fn grid_search(
    base: &ModelParams,
    m: &FeatureMatrix,
    y: &LabelVector,
    grid: &ParamGrid,
    folds: usize,
    seed: u64,
    scoring: Scoring,
) -> Result<(CvResult, Model)> {
    if m.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: m.n_rows(),
            right: y.len(),
        });
    }
    let cells = combinations(grid)?;
    let params: Vec<ModelParams> = cells
        .iter()
        .enumerate()
        .map(|(index, cell)| {
            base.with(cell).map_err(|e| Error::GridCell {
                index,
                params: describe(cell),
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let splits = stratified_kfold(y, folds, seed)?;
    let data: Vec<FoldData> = par::map_slice(&splits, |f| fold_data(m, y, f))
        .into_iter()
        .collect::<Result<_>>()?;

    let scores = par::map_range(cells.len() * folds, |job| {
        let (cell, f) = (job / folds, job % folds);
        let d = &data[f];
        Model::fit(&params[cell], &d.train.0, &d.train.1)
            .and_then(|model| model.predict(&d.val.0))
            .and_then(|pred| scoring.score(&d.val.1, &pred))
    });

    let mut scores = scores.into_iter();
    let mut records = Vec::with_capacity(cells.len());
    for (index, cell) in cells.into_iter().enumerate() {
        let fold_scores = scores
            .by_ref()
            .take(folds)
            .collect::<Result<Vec<f64>>>()
            .map_err(|e| Error::GridCell {
                index,
                params: describe(&cell),
                source: Box::new(e),
            })?;
        let (mean, std) = mean_std(&fold_scores);
        records.push(CvRecord {
            params: cell,
            fold_scores,
            mean,
            std,
        });
    }
    let best_index = records
        .iter()
        .enumerate()
        .fold(0, |best, (i, r)| if r.mean > records[best].mean { i } else { best });

    let full = if m.has_missing() {
        Imputer::fit(m)?.transform(m)?
    } else {
        m.clone()
    };
    let model = Model::fit(&params[best_index], &full, y)?;
    Ok((
        CvResult {
            model: base.kind(),
            folds,
            scoring,
            seed,
            records,
            best_index,
        },
        model,
    ))
}

fn grid(entries: Vec<(&str, Vec<ParamValue>)>) -> ParamGrid {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// The reported winning setting of each model plus one bracketing value on
/// either side of every numeric parameter.
pub fn default_grid(kind: ModelKind) -> ParamGrid {
    use ParamValue::{Float as F, Int as I};
    let s = |x: &str| ParamValue::Str(x.to_string());
    match kind {
        ModelKind::Dt => grid(vec![
            ("criterion", vec![s("entropy"), s("gini")]),
            ("max_depth", vec![I(20), I(30), I(40)]),
            ("max_features", vec![s("sqrt")]),
            ("min_samples_leaf", vec![I(2), I(5), I(10)]),
            ("min_samples_split", vec![I(5), I(10), I(20)]),
        ]),
        ModelKind::Rf => grid(vec![
            ("criterion", vec![s("gini")]),
            ("max_depth", vec![I(6), I(8), I(10)]),
            ("max_features", vec![s("sqrt")]),
            ("n_estimators", vec![I(100), I(200), I(300)]),
        ]),
        ModelKind::Gbm => grid(vec![
            ("learning_rate", vec![F(0.005), F(0.01), F(0.02)]),
            ("max_depth", vec![I(3), I(4), I(5)]),
            ("n_estimators", vec![I(400), I(500), I(600)]),
            ("subsample", vec![F(0.7), F(0.8), F(0.9)]),
        ]),
        ModelKind::Ada => grid(vec![
            ("algorithm", vec![s("SAMME.R")]),
            ("learning_rate", vec![F(0.05), F(0.1), F(0.2)]),
            ("n_estimators", vec![I(50), I(100), I(150)]),
        ]),
        ModelKind::Knn => grid(vec![
            ("metric", vec![s("manhattan")]),
            ("n_neighbors", vec![I(3), I(5), I(7)]),
            ("weights", vec![s("uniform"), s("distance")]),
        ]),
    }
}
