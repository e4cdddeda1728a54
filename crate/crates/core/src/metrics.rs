//! Classification metrics: confusion matrices, precision/recall/F1/accuracy,
//! macro and support-weighted aggregation, and one-vs-rest ROC curves.

use serde::{Deserialize, Serialize};

use crate::data::{LabelVector, TaxonomyLevel};
use crate::error::{Error, Result};
use crate::proba::ProbaMatrix;

/// Points on the shared FPR grid used for macro-averaged ROC curves.
pub const MACRO_ROC_GRID: usize = 512;

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub class_names: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(y_true: &[usize], y_pred: &[usize], class_names: &[String]) -> Result<Self> {
        if y_true.len() != y_pred.len() {
            return Err(Error::LengthMismatch {
                left: y_true.len(),
                right: y_pred.len(),
            });
        }
        let k = class_names.len();
        let mut counts = vec![vec![0u64; k]; k];
        for (&t, &p) in y_true.iter().zip(y_pred) {
            if t >= k || p >= k {
                return Err(Error::InvalidParameter(format!(
                    "class id {} outside 0..{k}",
                    t.max(p)
                )));
            }
            counts[t][p] += 1;
        }
        Ok(Self {
            class_names: class_names.to_vec(),
            counts,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Rows divided by their sums; rows of absent classes stay all-zero.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let s: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| if s == 0 { 0.0 } else { c as f64 / s as f64 })
                    .collect()
            })
            .collect()
    }

    /// One-vs-rest counts `(TP, FP, FN, TN)` for class `k`.
    pub fn one_vs_rest(&self, k: usize) -> (u64, u64, u64, u64) {
        let tp = self.counts[k][k];
        let fp: u64 = (0..self.n_classes()).map(|i| self.counts[i][k]).sum::<u64>() - tp;
        let fn_: u64 = self.counts[k].iter().sum::<u64>() - tp;
        let tn = self.total() - tp - fp - fn_;
        (tp, fp, fn_, tn)
    }
}

/// A ratio with an explicit flag for the 0/0 case (reported as 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub value: f64,
    pub undefined: bool,
}

fn ratio(num: u64, den: u64) -> Ratio {
    if den == 0 {
        Ratio {
            value: 0.0,
            undefined: true,
        }
    } else {
        Ratio {
            value: num as f64 / den as f64,
            undefined: false,
        }
    }
}

/// `TP / (TP + FP)`.
pub fn precision(tp: u64, fp: u64) -> Ratio {
    ratio(tp, tp + fp)
}

/// `TP / (TP + FN)`.
pub fn recall(tp: u64, fn_: u64) -> Ratio {
    ratio(tp, tp + fn_)
}

/// Harmonic mean `2PR / (P + R)`, 0 when both are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Fraction of rows predicted correctly.
pub fn accuracy(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    let correct = y_true.iter().zip(y_pred).filter(|(a, b)| a == b).count();
    Ok(correct as f64 / y_true.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

impl ClassMetrics {
    pub fn support(&self) -> u64 {
        self.tp + self.fn_
    }
}

/// Per-class metrics for every class that occurs in the true or predicted labels.
pub fn per_class(cm: &ConfusionMatrix) -> Vec<ClassMetrics> {
    (0..cm.n_classes())
        .filter_map(|k| {
            let (tp, fp, fn_, tn) = cm.one_vs_rest(k);
            if tp + fp + fn_ == 0 {
                return None;
            }
            let p = precision(tp, fp);
            let r = recall(tp, fn_);
            Some(ClassMetrics {
                class: cm.class_names[k].clone(),
                tp,
                fp,
                fn_,
                tn,
                precision: p.value,
                recall: r.value,
                f1: f1(p.value, r.value),
                precision_undefined: p.undefined,
                recall_undefined: r.undefined,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Macro,
    Weighted,
}

impl Averaging {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Macro => "macro",
            Self::Weighted => "weighted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Macro = unweighted class mean; weighted = mean weighted by true-class
/// support. F1 is averaged from the per-class F1 values in both schemes.
pub fn aggregate(per_class: &[ClassMetrics], scheme: Averaging) -> Result<Aggregate> {
    if per_class.is_empty() {
        return Err(Error::EmptyInput);
    }
    let weights: Vec<f64> = match scheme {
        Averaging::Macro => vec![1.0; per_class.len()],
        Averaging::Weighted => per_class.iter().map(|c| c.support() as f64).collect(),
    };
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Ok(Aggregate {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        });
    }
    let avg = |f: fn(&ClassMetrics) -> f64| {
        per_class.iter().zip(&weights).map(|(c, w)| f(c) * w).sum::<f64>() / total
    };
    Ok(Aggregate {
        precision: avg(|c| c.precision),
        recall: avg(|c| c.recall),
        f1: avg(|c| c.f1),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// Class name, `macro` or `micro`.
    pub tag: String,
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`, non-decreasing in both.
    pub points: Vec<(f64, f64)>,
    /// `NaN` (serialized as `null`) when undefined.
    #[serde(with = "nan_as_null")]
    pub auc: f64,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Trapezoidal area under a polyline.
pub fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * 0.5)
        .sum()
}

/// ROC points for binary labels, one point per distinct score threshold
/// (descending), plus the `(0, 0)` origin.
pub fn roc_points(positive: &[bool], scores: &[f64]) -> Result<Vec<(f64, f64)>> {
    if positive.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: positive.len(),
            right: scores.len(),
        });
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 {
        return Err(Error::ClassAbsent("positive".into()));
    }
    if n_neg == 0 {
        return Err(Error::NoNegatives("positive".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
    }
    Ok(points)
}

/// One-vs-rest ROC of class `k` using column `k` of `proba` as the score.
pub fn roc_ovr(y_true: &LabelVector, proba: &ProbaMatrix, k: usize) -> Result<RocCurve> {
    check_proba(y_true, proba)?;
    let positive: Vec<bool> = y_true.ids.iter().map(|&t| t == k).collect();
    let name = y_true.class_names[k].clone();
    let points = roc_points(&positive, &proba.column(k)).map_err(|e| match e {
        Error::ClassAbsent(_) => Error::ClassAbsent(name.clone()),
        Error::NoNegatives(_) => Error::NoNegatives(name.clone()),
        other => other,
    })?;
    let auc = trapezoid(&points);
    Ok(RocCurve {
        tag: name,
        points,
        auc,
    })
}

fn check_proba(y_true: &LabelVector, proba: &ProbaMatrix) -> Result<()> {
    if proba.n_rows() != y_true.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: proba.n_rows(),
        });
    }
    if proba.n_classes() != y_true.n_classes() {
        return Err(Error::LengthMismatch {
            left: y_true.n_classes(),
            right: proba.n_classes(),
        });
    }
    Ok(())
}

/// TPR of a ROC polyline at `x`, taking the highest TPR on vertical segments.
fn tpr_at(points: &[(f64, f64)], x: f64) -> f64 {
    let i = points.partition_point(|p| p.0 <= x);
    if i == 0 {
        return points[0].1;
    }
    let (x0, y0) = points[i - 1];
    if i == points.len() || x0 == x {
        return y0;
    }
    let (x1, y1) = points[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Macro average over `classes`: per-class TPRs are interpolated onto a
/// shared FPR grid and averaged; the AUC is the mean of the per-class AUCs.
pub fn roc_macro_over(
    y_true: &LabelVector,
    proba: &ProbaMatrix,
    classes: &[usize],
) -> Result<(RocCurve, Vec<RocCurve>)> {
    if classes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let curves = classes
        .iter()
        .map(|&k| roc_ovr(y_true, proba, k))
        .collect::<Result<Vec<_>>>()?;
    let grid = MACRO_ROC_GRID;
    let mut points = vec![(0.0, 0.0)];
    for j in 0..grid {
        let x = j as f64 / (grid - 1) as f64;
        let mean = curves.iter().map(|c| tpr_at(&c.points, x)).sum::<f64>() / curves.len() as f64;
        points.push((x, mean));
    }
    let auc = curves.iter().map(|c| c.auc).sum::<f64>() / curves.len() as f64;
    Ok((
        RocCurve {
            tag: "macro".into(),
            points,
            auc,
        },
        curves,
    ))
}

/// Macro-averaged ROC over every class; errors if any class is absent.
pub fn roc_macro(y_true: &LabelVector, proba: &ProbaMatrix) -> Result<RocCurve> {
    let all: Vec<usize> = (0..y_true.n_classes()).collect();
    roc_macro_over(y_true, proba, &all).map(|(c, _)| c)
}

/// Micro average: every (row, class) cell treated as one binary decision.
pub fn roc_micro(y_true: &LabelVector, proba: &ProbaMatrix) -> Result<RocCurve> {
    check_proba(y_true, proba)?;
    let k = proba.n_classes();
    let mut positive = Vec::with_capacity(proba.n_rows() * k);
    let mut scores = Vec::with_capacity(proba.n_rows() * k);
    for (row, &t) in proba.rows().zip(&y_true.ids) {
        for (c, &s) in row.iter().enumerate() {
            positive.push(c == t);
            scores.push(s);
        }
    }
    let points = roc_points(&positive, &scores)?;
    let auc = trapezoid(&points);
    Ok(RocCurve {
        tag: "micro".into(),
        points,
        auc,
    })
}

/// Everything computed for one model on one labelled set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub level: TaxonomyLevel,
    pub n_rows: usize,
    pub accuracy: f64,
    pub macro_avg: Aggregate,
    pub weighted_avg: Aggregate,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: ConfusionMatrix,
    pub roc_per_class: Vec<RocCurve>,
    pub roc_macro: RocCurve,
    pub roc_micro: RocCurve,
}

impl EvaluationReport {
    pub fn aggregate(&self, scheme: Averaging) -> &Aggregate {
        match scheme {
            Averaging::Macro => &self.macro_avg,
            Averaging::Weighted => &self.weighted_avg,
        }
    }
}

/// Builds the full report. ROC curves cover the classes present in `y_true`
/// (when at least two are present).
pub fn evaluate(
    model: &str,
    y_true: &LabelVector,
    y_pred: &[usize],
    proba: &ProbaMatrix,
) -> Result<EvaluationReport> {
    let acc = accuracy(&y_true.ids, y_pred)?;
    let confusion = ConfusionMatrix::new(&y_true.ids, y_pred, &y_true.class_names)?;
    let per_class = per_class(&confusion);
    let present: Vec<usize> = y_true
        .class_counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, _)| k)
        .collect();
    let (roc_macro, roc_per_class) = if present.len() >= 2 {
        roc_macro_over(y_true, proba, &present)?
    } else {
        (
            RocCurve {
                tag: "macro".into(),
                points: vec![(0.0, 0.0), (1.0, 1.0)],
                auc: f64::NAN,
            },
            Vec::new(),
        )
    };
    let roc_micro = roc_micro(y_true, proba)?;
    Ok(EvaluationReport {
        model: model.to_string(),
        level: y_true.level,
        n_rows: y_true.len(),
        accuracy: acc,
        macro_avg: aggregate(&per_class, Averaging::Macro)?,
        weighted_avg: aggregate(&per_class, Averaging::Weighted)?,
        per_class,
        confusion,
        roc_per_class,
        roc_macro,
        roc_micro,
    })
}
