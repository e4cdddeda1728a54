//! Versioned JSON persistence of fitted models.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Result};
use iotsentry::data::{FeatureMatrix, Standardizer, TaxonomyLevel};
use iotsentry::{Model, ModelKind, ParamValue};
use serde::{Deserialize, Serialize};

use crate::io::{read_json, write_json};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub n_rows: usize,
    /// Seconds since the Unix epoch; taken from `SOURCE_DATE_EPOCH` when set.
    pub trained_at: u64,
    /// `train` or `tune`.
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub kind: ModelKind,
    pub hyperparameters: BTreeMap<String, ParamValue>,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub level: TaxonomyLevel,
    pub standardization: Option<Standardizer>,
    pub metadata: TrainingMetadata,
    pub model: Model,
}

pub fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

impl ModelArtifact {
    pub fn new(
        model: Model,
        feature_names: Vec<String>,
        class_names: Vec<String>,
        level: TaxonomyLevel,
        metadata: TrainingMetadata,
    ) -> Self {
        let standardization = match &model {
            Model::Knn(k) => k.standardizer.clone(),
            _ => None,
        };
        Self {
            format_version: FORMAT_VERSION,
            kind: model.kind(),
            hyperparameters: model.params().summary(),
            feature_names,
            class_names,
            level,
            standardization,
            metadata,
            model,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let a: Self = read_json(path)?;
        if a.format_version != FORMAT_VERSION {
            bail!(
                "{}: unsupported model format version {} (expected {FORMAT_VERSION})",
                path.display(),
                a.format_version
            );
        }
        if a.kind != a.model.kind() {
            bail!("{}: header says `{}` but body is `{}`", path.display(), a.kind, a.model.kind());
        }
        Ok(a)
    }

    /// Fails unless `m` has exactly the training columns in the same order.
    pub fn check_schema(&self, m: &FeatureMatrix) -> Result<()> {
        if m.feature_names() != self.feature_names.as_slice() {
            let missing: Vec<&String> = self
                .feature_names
                .iter()
                .filter(|f| !m.feature_names().contains(f))
                .collect();
            bail!(
                "feature schema differs from the `{}` model ({} columns expected, {} found; missing: {:?})",
                self.kind,
                self.feature_names.len(),
                m.n_features(),
                missing
            );
        }
        Ok(())
    }
}

pub fn model_file(out: &Path, kind: ModelKind) -> std::path::PathBuf {
    out.join(format!("model_{kind}.json"))
}
