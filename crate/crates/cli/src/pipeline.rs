//! The preprocess, train, tune, evaluate and report stages.
//!
//! Every stage reads its inputs from, and writes its outputs to, the output
//! directory, so stages can be rerun independently.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use iotsentry::data::{
    downsample_majority, encode_labels, load_csv, stratified_split, stratified_subsample,
    FeatureMatrix, Imputer, LabelTaxonomy, LabelVector, LoadedCsv, PreprocessReport, TaxonomyLevel,
};
use iotsentry::metrics::{evaluate, Averaging, EvaluationReport};
use iotsentry::tuning::{grid_search, CvResult};
use iotsentry::{Model, ModelKind};
use serde::{Deserialize, Serialize};

use crate::artifact::{model_file, timestamp, ModelArtifact, TrainingMetadata};
use crate::config::PipelineConfig;
use crate::figures::{confusion_svg, roc_svg};
use crate::io::{csv_bytes, read_json, write_atomic, write_json};

pub const TRAIN_FILE: &str = "train.csv";
pub const TEST_FILE: &str = "test.csv";
pub const CLASSES_FILE: &str = "classes.json";
pub const PREPROCESS_FILE: &str = "preprocess_report.json";
pub const METRICS_FILE: &str = "metrics.json";
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_MD: &str = "report.md";

/// Class space and column layout shared by the materialized splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassIndex {
    pub level: TaxonomyLevel,
    pub label_column: String,
    /// Ordered by class id.
    pub classes: Vec<String>,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessSummary {
    /// Ingestion counts; `class_counts` holds raw attack labels.
    #[serde(flatten)]
    pub ingest: PreprocessReport,
    pub level: TaxonomyLevel,
    pub seed: u64,
    pub train_fraction: f64,
    pub rows_after_subsample: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_class_counts: BTreeMap<String, usize>,
    pub test_class_counts: BTreeMap<String, usize>,
    /// Training-portion medians used for columns that had missing cells.
    pub imputation_medians: BTreeMap<String, f64>,
}

/// One line of `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub model: ModelKind,
    pub level: TaxonomyLevel,
    pub scheme: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: PipelineConfig,
    pub preprocess: Option<PreprocessSummary>,
    pub evaluations: Vec<EvaluationReport>,
    pub cross_validation: Vec<CvResult>,
}

/// Per-model outcome of a stage that continues past individual failures.
pub type Outcomes<T> = Vec<(ModelKind, Result<T>)>;

pub fn failures<T>(outcomes: &Outcomes<T>) -> usize {
    outcomes.iter().filter(|(_, r)| r.is_err()).count()
}

fn dataset_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .with_context(|| format!("cannot list {}", path.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
            .collect();
        files.sort();
        if files.is_empty() {
            bail!("no .csv files in {}", path.display());
        }
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

/// Reads one CSV or every CSV of a directory; all files must share a header.
pub fn load_dataset(path: &Path, label_column: &str) -> Result<LoadedCsv> {
    let files = dataset_files(path)?;
    let mut all = load_csv(&files[0], label_column, None)?;
    for f in &files[1..] {
        let schema = all.matrix.feature_names().to_vec();
        all = all.concat(load_csv(f, label_column, Some(&schema))?)?;
    }
    Ok(all)
}

fn counts_by_name(y: &LabelVector) -> BTreeMap<String, usize> {
    y.class_names
        .iter()
        .cloned()
        .zip(y.class_counts())
        .filter(|(_, c)| *c > 0)
        .collect()
}

fn split_csv(m: &FeatureMatrix, y: &LabelVector, label_column: &str) -> Result<Vec<u8>> {
    let mut header: Vec<&str> = m.feature_names().iter().map(String::as_str).collect();
    header.push(label_column);
    let rows = m.rows().enumerate().map(|(i, r)| {
        let mut rec: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        rec.push(y.name_of(i).to_string());
        rec
    });
    csv_bytes(&header, rows)
}

/// Loads, encodes, optionally subsamples, splits, caps and imputes the
/// dataset, then writes the two splits and their description.
pub fn run_preprocess(cfg: &PipelineConfig) -> Result<PreprocessSummary> {
    let loaded = load_dataset(cfg.dataset()?, &cfg.label_column)?;
    let y = encode_labels(&loaded.labels, &LabelTaxonomy::ciciot2023(), cfg.level)?;
    let (m, y) = match cfg.max_rows {
        Some(n) => {
            let (m, y, _) = stratified_subsample(&loaded.matrix, &y, n, cfg.seed)?;
            (m, y)
        }
        None => (loaded.matrix, y),
    };
    let rows_after_subsample = m.n_rows();
    let split = stratified_split(&m, &y, cfg.train_fraction, cfg.seed).with_context(|| {
        format!(
            "splitting {rows_after_subsample} rows; every class needs at least two (raise or remove `max_rows`)"
        )
    })?;
    drop(m);
    let (mut xtr, mut ytr) = split.train;
    let (mut xte, yte) = split.test;
    if let Some(cap) = cfg.imbalance_cap {
        (xtr, ytr) = downsample_majority(&xtr, &ytr, cap, cfg.seed)?;
    }

    let mut imputation_medians = BTreeMap::new();
    if xtr.has_missing() || xte.has_missing() {
        let imputer = Imputer::fit(&xtr)?;
        let missing: Vec<usize> = xtr
            .missing_per_column()
            .iter()
            .zip(xte.missing_per_column())
            .map(|(a, b)| a + b)
            .collect();
        for (j, name) in xtr.feature_names().iter().enumerate() {
            if missing[j] > 0 {
                imputation_medians.insert(name.clone(), imputer.medians[j]);
            }
        }
        xtr = imputer.transform(&xtr)?;
        xte = imputer.transform(&xte)?;
    }

    let out = &cfg.out;
    write_atomic(&out.join(TRAIN_FILE), &split_csv(&xtr, &ytr, &cfg.label_column)?)?;
    write_atomic(&out.join(TEST_FILE), &split_csv(&xte, &yte, &cfg.label_column)?)?;
    write_json(
        &out.join(CLASSES_FILE),
        &ClassIndex {
            level: cfg.level,
            label_column: cfg.label_column.clone(),
            classes: ytr.class_names.clone(),
            feature_names: xtr.feature_names().to_vec(),
        },
    )?;
    let summary = PreprocessSummary {
        ingest: loaded.report,
        level: cfg.level,
        seed: cfg.seed,
        train_fraction: cfg.train_fraction,
        rows_after_subsample,
        train_rows: xtr.n_rows(),
        test_rows: xte.n_rows(),
        train_class_counts: counts_by_name(&ytr),
        test_class_counts: counts_by_name(&yte),
        imputation_medians,
    };
    write_json(&out.join(PREPROCESS_FILE), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

/// Reads a split written by [`run_preprocess`].
pub fn load_split(cfg: &PipelineConfig, split: Split) -> Result<(FeatureMatrix, LabelVector)> {
    let index_path = cfg.out.join(CLASSES_FILE);
    let index: ClassIndex = read_json(&index_path)
        .with_context(|| format!("no preprocessed data in {}; run `preprocess` first", cfg.out.display()))?;
    if index.level != cfg.level {
        bail!(
            "data in {} was preprocessed at level `{}` but `{}` was requested; rerun `preprocess`",
            cfg.out.display(),
            index.level,
            cfg.level
        );
    }
    let file = cfg.out.join(match split {
        Split::Train => TRAIN_FILE,
        Split::Test => TEST_FILE,
    });
    let loaded = load_csv(&file, &index.label_column, Some(&index.feature_names))?;
    let y = LabelVector::from_names(&loaded.labels, &index.classes, index.level)
        .with_context(|| format!("in {}", file.display()))?;
    Ok((loaded.matrix, y))
}

/// The neighbour model keeps at most `knn_max_rows` training rows.
fn rows_for(
    cfg: &PipelineConfig,
    kind: ModelKind,
    m: &FeatureMatrix,
    y: &LabelVector,
) -> Result<(FeatureMatrix, LabelVector)> {
    match (kind, cfg.knn_max_rows) {
        (ModelKind::Knn, Some(cap)) if cap < m.n_rows() => {
            let (m, y, _) = stratified_subsample(m, y, cap, cfg.seed)?;
            Ok((m, y))
        }
        _ => Ok((m.clone(), y.clone())),
    }
}

fn save_model(
    cfg: &PipelineConfig,
    model: Model,
    m: &FeatureMatrix,
    y: &LabelVector,
    origin: &str,
) -> Result<PathBuf> {
    let path = model_file(&cfg.out, model.kind());
    let artifact = ModelArtifact::new(
        model,
        m.feature_names().to_vec(),
        y.class_names.clone(),
        y.level,
        TrainingMetadata {
            seed: cfg.seed,
            n_rows: m.n_rows(),
            trained_at: timestamp(),
            origin: origin.into(),
        },
    );
    artifact.save(&path)?;
    Ok(path)
}

/// Fits every selected model with its configured hyperparameters.
pub fn run_train(cfg: &PipelineConfig) -> Result<Outcomes<PathBuf>> {
    let (m, y) = load_split(cfg, Split::Train)?;
    Ok(cfg
        .models
        .iter()
        .map(|&kind| {
            let res = (|| -> Result<_> {
                let params = cfg.model_params(kind)?;
                let (mm, yy) = rows_for(cfg, kind, &m, &y)?;
                let model = Model::fit(&params, &mm, &yy)?;
                save_model(cfg, model, &mm, &yy, "train")
            })();
            (kind, res.with_context(|| format!("training `{kind}`")))
        })
        .collect())
}

pub fn cv_file(out: &Path, kind: ModelKind) -> PathBuf {
    out.join(format!("cv_{kind}.json"))
}

/// Grid search with stratified k-fold CV on the training split; the refit
/// best model replaces `model_<kind>.json`.
pub fn run_tune(cfg: &PipelineConfig) -> Result<Outcomes<CvResult>> {
    let (mut m, mut y) = load_split(cfg, Split::Train)?;
    if let Some(n) = cfg.tuning.max_rows {
        let (ms, ys, _) = stratified_subsample(&m, &y, n, cfg.seed)?;
        (m, y) = (ms, ys);
    }
    Ok(cfg
        .models
        .iter()
        .map(|&kind| {
            let res = (|| -> Result<_> {
                let base = cfg.model_params(kind)?;
                let (mm, yy) = rows_for(cfg, kind, &m, &y)?;
                let (cv, model) = grid_search(
                    &base,
                    &mm,
                    &yy,
                    &cfg.grid(kind),
                    cfg.tuning.folds,
                    cfg.seed,
                    cfg.tuning.scoring,
                )?;
                write_json(&cv_file(&cfg.out, kind), &cv)?;
                save_model(cfg, model, &mm, &yy, "tune")?;
                Ok(cv)
            })();
            (kind, res.with_context(|| format!("tuning `{kind}`")))
        })
        .collect())
}

pub fn evaluation_file(out: &Path, kind: ModelKind) -> PathBuf {
    out.join(format!("evaluation_{kind}.json"))
}

fn write_figures(out: &Path, kind: ModelKind, report: &EvaluationReport) -> Result<()> {
    let cm = &report.confusion;
    let norm = cm.normalized();
    let mut rows = Vec::new();
    for (i, t) in cm.class_names.iter().enumerate() {
        for (j, p) in cm.class_names.iter().enumerate() {
            rows.push(vec![
                t.clone(),
                p.clone(),
                cm.counts[i][j].to_string(),
                norm[i][j].to_string(),
            ]);
        }
    }
    write_atomic(
        &out.join(format!("confusion_{kind}.csv")),
        &csv_bytes(&["true", "predicted", "count", "normalized"], rows)?,
    )?;
    let title = kind.display_name();
    write_atomic(
        &out.join(format!("confusion_{kind}.svg")),
        confusion_svg(&format!("{title}: normalized confusion matrix"), cm).as_bytes(),
    )?;

    let curves = report
        .roc_per_class
        .iter()
        .chain([&report.roc_macro, &report.roc_micro]);
    let roc_rows = curves.flat_map(|c| {
        c.points
            .iter()
            .map(move |&(x, y)| vec![c.tag.clone(), x.to_string(), y.to_string()])
    });
    write_atomic(
        &out.join(format!("roc_{kind}.csv")),
        &csv_bytes(&["curve", "fpr", "tpr"], roc_rows)?,
    )?;
    write_atomic(
        &out.join(format!("roc_{kind}.svg")),
        roc_svg(
            &format!("{title}: one-vs-rest ROC"),
            &report.roc_per_class,
            &report.roc_macro,
            &report.roc_micro,
        )
        .as_bytes(),
    )?;
    Ok(())
}

pub fn metric_records(report: &EvaluationReport, kind: ModelKind) -> Vec<MetricRecord> {
    [Averaging::Macro, Averaging::Weighted]
        .into_iter()
        .map(|scheme| {
            let a = report.aggregate(scheme);
            MetricRecord {
                model: kind,
                level: report.level,
                scheme: scheme.as_str().into(),
                precision: a.precision,
                recall: a.recall,
                f1: a.f1,
                accuracy: report.accuracy,
            }
        })
        .collect()
}

/// Scores each saved model on the test split and writes metrics and figures.
pub fn run_evaluate(cfg: &PipelineConfig) -> Result<Outcomes<EvaluationReport>> {
    let (m, y) = load_split(cfg, Split::Test)?;
    let outcomes: Outcomes<EvaluationReport> = cfg
        .models
        .iter()
        .map(|&kind| {
            let res = (|| -> Result<_> {
                let path = model_file(&cfg.out, kind);
                let artifact = ModelArtifact::load(&path)
                    .with_context(|| format!("no usable model at {}; run `train` or `tune` first", path.display()))?;
                artifact.check_schema(&m)?;
                if artifact.class_names != y.class_names {
                    bail!("class list of {} differs from the test split", path.display());
                }
                let proba = artifact.model.predict_proba(&m)?;
                let pred = artifact.model.predict(&m)?;
                let report = evaluate(kind.as_str(), &y, &pred, &proba)?;
                write_figures(&cfg.out, kind, &report)?;
                write_json(&evaluation_file(&cfg.out, kind), &report)?;
                Ok(report)
            })();
            (kind, res.with_context(|| format!("evaluating `{kind}`")))
        })
        .collect();
    let records: Vec<MetricRecord> = outcomes
        .iter()
        .filter_map(|(k, r)| r.as_ref().ok().map(|rep| metric_records(rep, *k)))
        .flatten()
        .collect();
    write_json(&cfg.out.join(METRICS_FILE), &records)?;
    Ok(outcomes)
}

fn fmt4(v: f64) -> String {
    if v.is_nan() {
        "n/a".into()
    } else {
        format!("{v:.4}")
    }
}

pub fn render_markdown(report: &RunReport) -> String {
    let mut s = String::from("# Evaluation report\n\n");
    if let Some(p) = &report.preprocess {
        let _ = writeln!(
            s,
            "Level `{}`, seed {}. {} rows read, {} dropped, {} kept after subsampling; {} training and {} test rows.\n",
            p.level,
            p.seed,
            p.ingest.rows_read,
            p.ingest.rows_dropped,
            p.rows_after_subsample,
            p.train_rows,
            p.test_rows
        );
    }
    if !report.evaluations.is_empty() {
        s.push_str("## Held-out test split\n\n");
        s.push_str("| Model | Accuracy | Precision (weighted) | Recall (weighted) | F1 (weighted) | Precision (macro) | Recall (macro) | F1 (macro) | ROC AUC (macro) |\n");
        s.push_str("|---|---|---|---|---|---|---|---|---|\n");
        for e in &report.evaluations {
            let name = e
                .model
                .parse::<ModelKind>()
                .map_or(e.model.clone(), |k| k.display_name().to_string());
            let _ = writeln!(
                s,
                "| {name} | {} | {} | {} | {} | {} | {} | {} | {} |",
                fmt4(e.accuracy),
                fmt4(e.weighted_avg.precision),
                fmt4(e.weighted_avg.recall),
                fmt4(e.weighted_avg.f1),
                fmt4(e.macro_avg.precision),
                fmt4(e.macro_avg.recall),
                fmt4(e.macro_avg.f1),
                fmt4(e.roc_macro.auc)
            );
        }
        let mut ranked: Vec<&EvaluationReport> = report.evaluations.iter().collect();
        ranked.sort_by(|a, b| b.accuracy.total_cmp(&a.accuracy));
        let order: Vec<&str> = ranked.iter().map(|e| e.model.as_str()).collect();
        let _ = writeln!(s, "\nRanked by accuracy: {}\n", order.join(" > "));
    }
    if !report.cross_validation.is_empty() {
        s.push_str("## Cross-validated grid search\n\n");
        s.push_str("| Model | Folds | Scoring | Cells | Best mean | Best std | Best parameters |\n");
        s.push_str("|---|---|---|---|---|---|---|\n");
        for cv in &report.cross_validation {
            let best = cv.best();
            let params: Vec<String> = best.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                cv.model.display_name(),
                cv.folds,
                cv.scoring.as_str(),
                cv.records.len(),
                fmt4(best.mean),
                fmt4(best.std),
                params.join(", ")
            );
        }
        s.push('\n');
    }
    s
}

/// Collects whatever earlier stages left in the output directory.
pub fn run_report(cfg: &PipelineConfig) -> Result<RunReport> {
    let out = &cfg.out;
    let preprocess_path = out.join(PREPROCESS_FILE);
    let preprocess = if preprocess_path.exists() {
        Some(read_json(&preprocess_path)?)
    } else {
        None
    };
    let mut evaluations = Vec::new();
    let mut cross_validation = Vec::new();
    for &kind in &cfg.models {
        let e = evaluation_file(out, kind);
        if e.exists() {
            evaluations.push(read_json(&e)?);
        }
        let c = cv_file(out, kind);
        if c.exists() {
            cross_validation.push(read_json(&c)?);
        }
    }
    if evaluations.is_empty() && cross_validation.is_empty() {
        bail!("nothing to report in {}; run `evaluate` or `tune` first", out.display());
    }
    let report = RunReport {
        config: cfg.clone(),
        preprocess,
        evaluations,
        cross_validation,
    };
    write_json(&out.join(REPORT_JSON), &report)?;
    write_atomic(&out.join(REPORT_MD), render_markdown(&report).as_bytes())?;
    Ok(report)
}
