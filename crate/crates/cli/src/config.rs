//! Pipeline configuration loaded from TOML and overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use iotsentry::data::TaxonomyLevel;
use iotsentry::tuning::{default_grid, ParamGrid, Scoring};
use iotsentry::{ModelKind, ModelParams, ParamValue};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TuningConfig {
    pub folds: usize,
    pub scoring: Scoring,
    /// Stratified cap on the rows used for cross-validation.
    pub max_rows: Option<usize>,
}

impl Default for TuningConfig {
    fn default() -> Self {
        Self {
            folds: 5,
            scoring: Scoring::Accuracy,
            max_rows: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// A CSV file or a directory whose `*.csv` files are read in name order.
    pub dataset: Option<PathBuf>,
    pub label_column: String,
    pub level: TaxonomyLevel,
    pub train_fraction: f64,
    pub seed: u64,
    pub models: Vec<ModelKind>,
    pub out: PathBuf,
    /// Stratified cap on the rows kept from the dataset before splitting.
    pub max_rows: Option<usize>,
    /// Per-class cap applied to the training portion only.
    pub imbalance_cap: Option<usize>,
    /// Stratified cap on the rows the neighbour model stores.
    pub knn_max_rows: Option<usize>,
    pub tuning: TuningConfig,
    /// Hyperparameter overrides keyed by model name.
    pub params: BTreeMap<String, BTreeMap<String, ParamValue>>,
    /// Search grids keyed by model name; missing entries use the built-in grid.
    pub grids: BTreeMap<String, ParamGrid>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            label_column: "label".into(),
            level: TaxonomyLevel::Attack34,
            train_fraction: 0.8,
            seed: 42,
            models: ModelKind::ALL.to_vec(),
            out: PathBuf::from("out"),
            max_rows: None,
            imbalance_cap: None,
            knn_max_rows: Some(50_000),
            tuning: TuningConfig::default(),
            params: BTreeMap::new(),
            grids: BTreeMap::new(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            bail!("train_fraction must be in (0, 1), got {}", self.train_fraction);
        }
        if self.models.is_empty() {
            bail!("no models selected");
        }
        if self.tuning.folds < 2 {
            bail!("tuning.folds must be at least 2");
        }
        for (what, key) in self
            .params
            .keys()
            .map(|k| ("params", k))
            .chain(self.grids.keys().map(|k| ("grids", k)))
        {
            key.parse::<ModelKind>()
                .with_context(|| format!("in [{what}.{key}]"))?;
        }
        for kind in &self.models {
            self.model_params(*kind)?;
        }
        Ok(())
    }

    pub fn dataset(&self) -> Result<&Path> {
        self.dataset
            .as_deref()
            .context("no dataset given (set `dataset` in the config or pass --data)")
    }

    /// Tuned defaults with this config's overrides and seed applied.
    pub fn model_params(&self, kind: ModelKind) -> Result<ModelParams> {
        let mut p = ModelParams::tuned(kind).with_seed(self.seed);
        if let Some(overrides) = self.params.get(kind.as_str()) {
            p = p
                .with(overrides)
                .with_context(|| format!("in [params.{kind}]"))?;
        }
        Ok(p)
    }

    pub fn grid(&self, kind: ModelKind) -> ParamGrid {
        self.grids
            .get(kind.as_str())
            .cloned()
            .unwrap_or_else(|| default_grid(kind))
    }
}

/// Parses `dt,rf,gbm`.
pub fn parse_models(list: &str) -> Result<Vec<ModelKind>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|s| !s.trim().is_empty()) {
        let kind: ModelKind = part.parse()?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        bail!("empty model list");
    }
    Ok(out)
}
