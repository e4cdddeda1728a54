//! Uniform surface over the five classifier kinds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector};
use crate::ensemble::{AdaBoost, AdaBoostConfig, ForestConfig, GbmConfig, GradientBoosting, RandomForest};
use crate::error::{Error, Result};
use crate::neighbors::{KnnClassifier, KnnConfig, Weighting};
use crate::proba::ProbaMatrix;
use crate::tree::{Criterion, DecisionTree, MaxFeatures, TreeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Dt,
    Rf,
    Gbm,
    Ada,
    Knn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [Self::Dt, Self::Rf, Self::Gbm, Self::Ada, Self::Knn];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dt => "dt",
            Self::Rf => "rf",
            Self::Gbm => "gbm",
            Self::Ada => "ada",
            Self::Knn => "knn",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Self::Dt => "Decision Tree",
            Self::Rf => "Random Forest",
            Self::Gbm => "Gradient Boosting",
            Self::Ada => "AdaBoost",
            Self::Knn => "K-Nearest Neighbor",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown model `{s}` (expected dt, rf, gbm, ada or knn)"
                ))
            })
    }
}

/// A hyperparameter value as it appears in grids and config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Null,
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bool(b) => write!(f, "{b}"),
            Self::Int(i) => write!(f, "{i}"),
            Self::Float(x) => write!(f, "{x}"),
            Self::Str(s) => write!(f, "{s}"),
            Self::Null => f.write_str("null"),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        Self::Str(v.to_string())
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

fn bad(name: &str, v: &ParamValue) -> Error {
    Error::InvalidParameter(format!("unsupported value `{v}` for `{name}`"))
}

fn as_usize(name: &str, v: &ParamValue) -> Result<usize> {
    match v {
        ParamValue::Int(i) if *i >= 0 => Ok(*i as usize),
        ParamValue::Float(x) if *x >= 0.0 && x.fract() == 0.0 => Ok(*x as usize),
        _ => Err(bad(name, v)),
    }
}

fn as_f64(name: &str, v: &ParamValue) -> Result<f64> {
    match v {
        ParamValue::Int(i) => Ok(*i as f64),
        ParamValue::Float(x) => Ok(*x),
        _ => Err(bad(name, v)),
    }
}

fn as_str<'a>(name: &str, v: &'a ParamValue) -> Result<&'a str> {
    match v {
        ParamValue::Str(s) => Ok(s),
        _ => Err(bad(name, v)),
    }
}

fn as_bool(name: &str, v: &ParamValue) -> Result<bool> {
    match v {
        ParamValue::Bool(b) => Ok(*b),
        _ => Err(bad(name, v)),
    }
}

fn set_tree_param(tree: &mut TreeConfig, name: &str, v: &ParamValue) -> Result<bool> {
    match name {
        "criterion" => {
            tree.criterion = match as_str(name, v)? {
                "gini" => Criterion::Gini,
                "entropy" => Criterion::Entropy,
                _ => return Err(bad(name, v)),
            }
        }
        "max_depth" => {
            tree.max_depth = match v {
                ParamValue::Null => None,
                ParamValue::Str(s) if s == "none" => None,
                other => Some(as_usize(name, other)?),
            }
        }
        "min_samples_split" => tree.min_samples_split = as_usize(name, v)?,
        "min_samples_leaf" => tree.min_samples_leaf = as_usize(name, v)?,
        "max_features" => {
            tree.max_features = match v {
                ParamValue::Null => MaxFeatures::All,
                ParamValue::Str(s) if s == "all" => MaxFeatures::All,
                ParamValue::Str(s) if s == "sqrt" => MaxFeatures::Sqrt,
                _ => return Err(bad(name, v)),
            }
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn tree_summary(t: &TreeConfig, out: &mut BTreeMap<String, ParamValue>) {
    let crit = match t.criterion {
        Criterion::Gini => "gini",
        Criterion::Entropy => "entropy",
    };
    out.insert("criterion".into(), crit.into());
    out.insert(
        "max_depth".into(),
        t.max_depth.map_or(ParamValue::Null, |d| ParamValue::Int(d as i64)),
    );
    out.insert("min_samples_split".into(), (t.min_samples_split as i64).into());
    out.insert("min_samples_leaf".into(), (t.min_samples_leaf as i64).into());
    let mf = match t.max_features {
        MaxFeatures::All => "all",
        MaxFeatures::Sqrt => "sqrt",
    };
    out.insert("max_features".into(), mf.into());
}

/// Hyperparameters of one model kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum ModelParams {
    Dt(TreeConfig),
    Rf(ForestConfig),
    Gbm(GbmConfig),
    Ada(AdaBoostConfig),
    Knn(KnnConfig),
}

impl ModelParams {
    /// The tuned setting reported for each kind.
    pub fn tuned(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Dt => Self::Dt(TreeConfig::tuned()),
            ModelKind::Rf => Self::Rf(ForestConfig::tuned()),
            ModelKind::Gbm => Self::Gbm(GbmConfig::tuned()),
            ModelKind::Ada => Self::Ada(AdaBoostConfig::tuned()),
            ModelKind::Knn => Self::Knn(KnnConfig::tuned()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Dt(_) => ModelKind::Dt,
            Self::Rf(_) => ModelKind::Rf,
            Self::Gbm(_) => ModelKind::Gbm,
            Self::Ada(_) => ModelKind::Ada,
            Self::Knn(_) => ModelKind::Knn,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            Self::Dt(c) => c.seed = seed,
            Self::Rf(c) => c.seed = seed,
            Self::Gbm(c) => c.seed = seed,
            Self::Ada(c) => c.seed = seed,
            Self::Knn(_) => {}
        }
        self
    }

    /// Sets one named hyperparameter (sklearn-style names).
    pub fn set(&mut self, name: &str, v: &ParamValue) -> Result<()> {
        let known = match self {
            Self::Dt(t) => set_tree_param(t, name, v)?,
            Self::Rf(c) => match name {
                "n_estimators" => {
                    c.n_estimators = as_usize(name, v)?;
                    true
                }
                "bootstrap" => {
                    c.bootstrap = as_bool(name, v)?;
                    true
                }
                _ => set_tree_param(&mut c.tree, name, v)?,
            },
            Self::Gbm(c) => {
                match name {
                    "n_estimators" => c.n_estimators = as_usize(name, v)?,
                    "learning_rate" => c.learning_rate = as_f64(name, v)?,
                    "max_depth" => c.max_depth = as_usize(name, v)?,
                    "subsample" => c.subsample = as_f64(name, v)?,
                    "min_samples_leaf" => c.min_samples_leaf = as_usize(name, v)?,
                    "max_bins" => c.max_bins = as_usize(name, v)?,
                    _ => return Err(unknown(name, ModelKind::Gbm)),
                }
                true
            }
            Self::Ada(c) => {
                match name {
                    "n_estimators" => c.n_estimators = as_usize(name, v)?,
                    "learning_rate" => c.learning_rate = as_f64(name, v)?,
                    "algorithm" => {
                        if as_str(name, v)? != "SAMME.R" {
                            return Err(bad(name, v));
                        }
                    }
                    "max_depth" => c.base_tree.max_depth = Some(as_usize(name, v)?),
                    _ => return Err(unknown(name, ModelKind::Ada)),
                }
                true
            }
            Self::Knn(c) => {
                match name {
                    "n_neighbors" => c.n_neighbors = as_usize(name, v)?,
                    "weights" => {
                        c.weighting = match as_str(name, v)? {
                            "uniform" => Weighting::Uniform,
                            "distance" => Weighting::Distance,
                            _ => return Err(bad(name, v)),
                        }
                    }
                    // only the L1 metric is implemented; `p = 1` is the same setting
                    "metric" if as_str(name, v)? == "manhattan" => {}
                    "p" if as_usize(name, v)? == 1 => {}
                    "metric" | "p" => return Err(bad(name, v)),
                    "standardize" => c.standardize = as_bool(name, v)?,
                    _ => return Err(unknown(name, ModelKind::Knn)),
                }
                true
            }
        };
        if known {
            Ok(())
        } else {
            Err(unknown(name, self.kind()))
        }
    }

    pub fn with(mut self, assignment: &BTreeMap<String, ParamValue>) -> Result<Self> {
        for (k, v) in assignment {
            self.set(k, v)?;
        }
        Ok(self)
    }

    /// Flat name → value view, as recorded in artifacts and reports.
    pub fn summary(&self) -> BTreeMap<String, ParamValue> {
        let mut out = BTreeMap::new();
        match self {
            Self::Dt(t) => tree_summary(t, &mut out),
            Self::Rf(c) => {
                tree_summary(&c.tree, &mut out);
                out.insert("n_estimators".into(), (c.n_estimators as i64).into());
                out.insert("bootstrap".into(), c.bootstrap.into());
            }
            Self::Gbm(c) => {
                out.insert("n_estimators".into(), (c.n_estimators as i64).into());
                out.insert("learning_rate".into(), c.learning_rate.into());
                out.insert("max_depth".into(), (c.max_depth as i64).into());
                out.insert("subsample".into(), c.subsample.into());
                out.insert("min_samples_leaf".into(), (c.min_samples_leaf as i64).into());
                out.insert("max_bins".into(), (c.max_bins as i64).into());
            }
            Self::Ada(c) => {
                out.insert("algorithm".into(), "SAMME.R".into());
                out.insert("n_estimators".into(), (c.n_estimators as i64).into());
                out.insert("learning_rate".into(), c.learning_rate.into());
                out.insert(
                    "max_depth".into(),
                    c.base_tree
                        .max_depth
                        .map_or(ParamValue::Null, |d| ParamValue::Int(d as i64)),
                );
            }
            Self::Knn(c) => {
                out.insert("n_neighbors".into(), (c.n_neighbors as i64).into());
                let w = match c.weighting {
                    Weighting::Uniform => "uniform",
                    Weighting::Distance => "distance",
                };
                out.insert("weights".into(), w.into());
                out.insert("metric".into(), "manhattan".into());
                out.insert("p".into(), 1i64.into());
                out.insert("standardize".into(), c.standardize.into());
            }
        }
        out
    }
}

fn unknown(name: &str, kind: ModelKind) -> Error {
    Error::InvalidParameter(format!("unknown parameter `{name}` for model `{kind}`"))
}

/// A fitted classifier of any kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "body", rename_all = "lowercase")]
pub enum Model {
    Dt(DecisionTree),
    Rf(RandomForest),
    Gbm(GradientBoosting),
    Ada(AdaBoost),
    Knn(KnnClassifier),
}

impl Model {
    pub fn fit(params: &ModelParams, m: &FeatureMatrix, y: &LabelVector) -> Result<Self> {
        Ok(match params {
            ModelParams::Dt(c) => Self::Dt(DecisionTree::fit(m, y, c)?),
            ModelParams::Rf(c) => Self::Rf(RandomForest::fit(m, y, c)?),
            ModelParams::Gbm(c) => Self::Gbm(GradientBoosting::fit(m, y, c)?),
            ModelParams::Ada(c) => Self::Ada(AdaBoost::fit(m, y, c)?),
            ModelParams::Knn(c) => Self::Knn(KnnClassifier::fit(m, y, c)?),
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Dt(_) => ModelKind::Dt,
            Self::Rf(_) => ModelKind::Rf,
            Self::Gbm(_) => ModelKind::Gbm,
            Self::Ada(_) => ModelKind::Ada,
            Self::Knn(_) => ModelKind::Knn,
        }
    }

    pub fn params(&self) -> ModelParams {
        match self {
            Self::Dt(t) => ModelParams::Dt(t.config),
            Self::Rf(f) => ModelParams::Rf(f.config),
            Self::Gbm(g) => ModelParams::Gbm(g.config),
            Self::Ada(a) => ModelParams::Ada(a.config),
            Self::Knn(k) => ModelParams::Knn(k.config),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Self::Dt(t) => t.n_features,
            Self::Rf(f) => f.n_features,
            Self::Gbm(g) => g.n_features,
            Self::Ada(a) => a.n_features,
            Self::Knn(k) => k.n_features(),
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Self::Dt(t) => t.n_classes,
            Self::Rf(f) => f.n_classes,
            Self::Gbm(g) => g.n_classes,
            Self::Ada(a) => a.n_classes,
            Self::Knn(k) => k.n_classes,
        }
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        match self {
            Self::Dt(t) => t.predict(m),
            Self::Rf(f) => f.predict(m),
            Self::Gbm(g) => g.predict(m),
            Self::Ada(a) => a.predict(m),
            Self::Knn(k) => k.predict(m),
        }
    }

    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        match self {
            Self::Dt(t) => t.predict_proba(m),
            Self::Rf(f) => f.predict_proba(m),
            Self::Gbm(g) => g.predict_proba(m),
            Self::Ada(a) => a.predict_proba(m),
            Self::Knn(k) => k.predict_proba(m),
        }
    }
}
