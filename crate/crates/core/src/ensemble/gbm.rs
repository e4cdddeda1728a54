//! Multinomial-deviance gradient boosting.
//!
//! Each stage fits one squared-error regression tree per class to the
//! softmax residuals `onehot − p` on a seeded row subsample, then replaces
//! each leaf value with the multi-class Newton step
//! `((K−1)/K) · Σr / Σ|r|(1−|r|)`.
//!
//! Split search runs on pre-binned features. When a feature has at most
//! `max_bins` distinct training values every bin holds exactly one value and
//! the cut points are the midpoints between consecutive distinct values, so
//! the search is exact; wider features are cut at quantiles.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector};
use crate::error::{Error, Result};
use crate::par;
use crate::proba::{argmax, softmax, ProbaMatrix};
use crate::rng::{rng_for, stream};
use crate::tree::{midpoint, GAIN_TOLERANCE};

use super::{check_xy, require_two_classes};

const PRIOR_FLOOR: f64 = 1e-12;
const NEWTON_EPS: f64 = 1e-150;
const UPDATE_CHUNK_ROWS: usize = 2_048;
/// Rows × features below which histograms are built on one thread.
const PARALLEL_WORK: usize = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub subsample: f64,
    pub min_samples_leaf: usize,
    pub max_bins: usize,
    pub seed: u64,
}

impl GbmConfig {
    /// 500 stages, learning rate 0.01, depth 4, 80% row subsampling.
    pub fn tuned() -> Self {
        Self {
            n_estimators: 500,
            learning_rate: 0.01,
            max_depth: 4,
            subsample: 0.8,
            min_samples_leaf: 1,
            max_bins: 255,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidParameter("learning_rate must be > 0".into()));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "subsample must be in (0, 1], got {}",
                self.subsample
            )));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidParameter("max_depth must be ≥ 1".into()));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidParameter("min_samples_leaf must be ≥ 1".into()));
        }
        if !(2..=u16::MAX as usize).contains(&self.max_bins) {
            return Err(Error::InvalidParameter("max_bins must be in [2, 65535]".into()));
        }
        Ok(())
    }
}

impl Default for GbmConfig {
    fn default() -> Self {
        Self::tuned()
    }
}

/// Per-feature cut points; bin `b` holds values in `(cut[b−1], cut[b]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinMapper {
    pub cuts: Vec<Vec<f64>>,
}

impl BinMapper {
    pub fn fit(m: &FeatureMatrix, max_bins: usize) -> Self {
        let cuts = par::map_range(m.n_features(), |f| {
            let mut sorted = m.column(f);
            sorted.sort_unstable_by(f64::total_cmp);
            let mut distinct = sorted.clone();
            distinct.dedup();
            if distinct.len() <= max_bins {
                return distinct.windows(2).map(|w| midpoint(w[0], w[1])).collect();
            }
            let n = sorted.len();
            let mut cuts: Vec<f64> = Vec::with_capacity(max_bins - 1);
            for b in 1..max_bins {
                let v = sorted[b * n / max_bins];
                let p = distinct.partition_point(|&d| d < v);
                if p > 0 {
                    let c = midpoint(distinct[p - 1], distinct[p]);
                    if cuts.last().is_none_or(|&last| c > last) {
                        cuts.push(c);
                    }
                }
            }
            cuts
        });
        Self { cuts }
    }

    #[inline]
    pub fn bin(&self, feature: usize, v: f64) -> u16 {
        self.cuts[feature].partition_point(|&c| c < v) as u16
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.cuts[feature].len() + 1
    }

    /// Column-major bin codes of every row.
    fn encode(&self, m: &FeatureMatrix) -> Vec<u16> {
        let n = m.n_rows();
        par::map_range(m.n_features(), |f| {
            (0..n).map(|i| self.bin(f, m.get(i, f))).collect::<Vec<u16>>()
        })
        .concat()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub nodes: Vec<RegressionNode>,
}

impl RegressionTree {
    #[inline]
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                RegressionNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => idx = if row[*feature] <= *threshold { *left } else { *right },
                RegressionNode::Leaf { value } => return *value,
            }
        }
    }
}

struct GrowCtx<'a> {
    bins: &'a [u16],
    mapper: &'a BinMapper,
    n_rows: usize,
    residual: &'a [f64],
    newton_scale: f64,
    config: &'a GbmConfig,
}

enum Grown {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Grown>,
        right: Box<Grown>,
    },
    Leaf(f64),
}

impl Grown {
    fn flatten_into(self, nodes: &mut Vec<RegressionNode>) -> usize {
        let idx = nodes.len();
        match self {
            Grown::Leaf(value) => nodes.push(RegressionNode::Leaf { value }),
            Grown::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                nodes.push(RegressionNode::Leaf { value: 0.0 });
                let l = left.flatten_into(nodes);
                let r = right.flatten_into(nodes);
                nodes[idx] = RegressionNode::Split {
                    feature,
                    threshold,
                    left: l,
                    right: r,
                };
            }
        }
        idx
    }
}

struct RegSplit {
    feature: usize,
    bin: usize,
    gain: f64,
}

impl GrowCtx<'_> {
    fn leaf_value(&self, rows: &[usize]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for &i in rows {
            let r = self.residual[i];
            num += r;
            den += r.abs() * (1.0 - r.abs());
        }
        if den.abs() < NEWTON_EPS {
            0.0
        } else {
            self.newton_scale * num / den
        }
    }

    fn histogram(&self, rows: &[usize], feature: usize) -> Histogram {
        let nb = self.mapper.n_bins(feature);
        let col = &self.bins[feature * self.n_rows..(feature + 1) * self.n_rows];
        let mut h = Histogram {
            sum: vec![0.0; nb],
            count: vec![0; nb],
        };
        for &i in rows {
            let b = col[i] as usize;
            h.sum[b] += self.residual[i];
            h.count[b] += 1;
        }
        h
    }

    fn histograms(&self, rows: &[usize]) -> Vec<Histogram> {
        let nf = self.mapper.cuts.len();
        if rows.len() * nf >= PARALLEL_WORK {
            par::map_range(nf, |f| self.histogram(rows, f))
        } else {
            (0..nf).map(|f| self.histogram(rows, f)).collect()
        }
    }

    fn scan(&self, h: &Histogram, feature: usize, n: usize, total_sum: f64) -> Option<RegSplit> {
        let nb = h.sum.len();
        let parent = total_sum * total_sum / n as f64;
        let min_leaf = self.config.min_samples_leaf;
        let (mut sl, mut nl) = (0.0, 0usize);
        let mut best: Option<RegSplit> = None;
        for b in 0..nb.saturating_sub(1) {
            if h.count[b] == 0 {
                continue;
            }
            sl += h.sum[b];
            nl += h.count[b];
            let nr = n - nl;
            if nl < min_leaf {
                continue;
            }
            if nr < min_leaf {
                break;
            }
            let sr = total_sum - sl;
            let gain = sl * sl / nl as f64 + sr * sr / nr as f64 - parent;
            if best
                .as_ref()
                .is_none_or(|bst| gain > bst.gain + GAIN_TOLERANCE)
            {
                best = Some(RegSplit { feature, bin: b, gain });
            }
        }
        best
    }

    /// `hist` holds this node's per-feature histograms; only the smaller
    /// child is rebuilt from rows, the larger is the difference.
    fn grow(&self, rows: Vec<usize>, hist: Vec<Histogram>, depth: usize) -> Grown {
        if depth >= self.config.max_depth || rows.len() < 2 {
            return Grown::Leaf(self.leaf_value(&rows));
        }
        let total: f64 = rows.iter().map(|&i| self.residual[i]).sum();
        let n = rows.len();
        let mut best: Option<RegSplit> = None;
        for (f, h) in hist.iter().enumerate() {
            if let Some(s) = self.scan(h, f, n, total) {
                if best.as_ref().is_none_or(|b| s.gain > b.gain + GAIN_TOLERANCE) {
                    best = Some(s);
                }
            }
        }
        let Some(split) = best.filter(|s| s.gain > GAIN_TOLERANCE) else {
            return Grown::Leaf(self.leaf_value(&rows));
        };
        let col = &self.bins[split.feature * self.n_rows..(split.feature + 1) * self.n_rows];
        let (l, r): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&i| col[i] as usize <= split.bin);
        let (lh, rh) = if depth + 1 >= self.config.max_depth {
            (Vec::new(), Vec::new())
        } else if l.len() <= r.len() {
            let small = self.histograms(&l);
            let large = subtract(hist, &small);
            (small, large)
        } else {
            let small = self.histograms(&r);
            let large = subtract(hist, &small);
            (large, small)
        };
        Grown::Split {
            feature: split.feature,
            threshold: self.mapper.cuts[split.feature][split.bin],
            left: Box::new(self.grow(l, lh, depth + 1)),
            right: Box::new(self.grow(r, rh, depth + 1)),
        }
    }
}

/// Residual sums and row counts per bin of one feature.
struct Histogram {
    sum: Vec<f64>,
    count: Vec<usize>,
}

fn subtract(mut parent: Vec<Histogram>, child: &[Histogram]) -> Vec<Histogram> {
    for (p, c) in parent.iter_mut().zip(child) {
        p.sum.iter_mut().zip(&c.sum).for_each(|(a, b)| *a -= b);
        p.count.iter_mut().zip(&c.count).for_each(|(a, b)| *a -= b);
    }
    parent
}

/// Mean negative log-likelihood of the true class.
pub fn multinomial_deviance(y: &[usize], proba: &ProbaMatrix) -> f64 {
    let total: f64 = y
        .iter()
        .zip(proba.rows())
        .map(|(&t, p)| -p[t].max(f64::MIN_POSITIVE).ln())
        .sum();
    total / y.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoosting {
    pub config: GbmConfig,
    pub n_features: usize,
    pub n_classes: usize,
    /// Log class priors.
    pub init_scores: Vec<f64>,
    /// `stages[s][k]` is stage `s`'s tree for class `k`.
    pub stages: Vec<Vec<RegressionTree>>,
}

impl GradientBoosting {
    pub fn fit(m: &FeatureMatrix, y: &LabelVector, config: &GbmConfig) -> Result<Self> {
        Self::fit_traced(m, y, config).map(|(model, _)| model)
    }

    /// Fits and returns the training deviance before any stage (entry 0) and
    /// after each stage.
    pub fn fit_traced(
        m: &FeatureMatrix,
        y: &LabelVector,
        config: &GbmConfig,
    ) -> Result<(Self, Vec<f64>)> {
        check_xy(m, y)?;
        require_two_classes(y)?;
        config.validate()?;
        let n = m.n_rows();
        let k = y.n_classes();
        let init_scores: Vec<f64> = y
            .class_counts()
            .iter()
            .map(|&c| (c as f64 / n as f64).max(PRIOR_FLOOR).ln())
            .collect();
        let mapper = BinMapper::fit(m, config.max_bins);
        let bins = mapper.encode(m);
        let mut raw: Vec<f64> = (0..n).flat_map(|_| init_scores.iter().copied()).collect();
        let mut model = Self {
            config: *config,
            n_features: m.n_features(),
            n_classes: k,
            init_scores,
            stages: Vec::with_capacity(config.n_estimators),
        };
        let deviance = |raw: &[f64]| {
            let proba = ProbaMatrix::from_rows(k, raw.chunks_exact(k).map(softmax).collect());
            multinomial_deviance(&y.ids, &proba)
        };
        let mut trace = vec![deviance(&raw)];
        let n_sub = ((config.subsample * n as f64).ceil() as usize).clamp(1, n);
        let newton_scale = (k as f64 - 1.0) / k as f64;

        for stage in 0..config.n_estimators {
            // residuals stored class-major: residuals[c * n + i]
            let mut residuals = vec![0.0; n * k];
            for (i, scores) in raw.chunks_exact(k).enumerate() {
                let p = softmax(scores);
                for c in 0..k {
                    let target = if y.ids[i] == c { 1.0 } else { 0.0 };
                    residuals[c * n + i] = target - p[c];
                }
            }
            let rows: Vec<usize> = if n_sub < n {
                let mut rng = rng_for(config.seed, stream::GBM_STAGE, stage as u64);
                let mut idx = sample(&mut rng, n, n_sub).into_vec();
                idx.sort_unstable();
                idx
            } else {
                (0..n).collect()
            };
            let trees = par::map_range(k, |c| {
                let ctx = GrowCtx {
                    bins: &bins,
                    mapper: &mapper,
                    n_rows: n,
                    residual: &residuals[c * n..(c + 1) * n],
                    newton_scale,
                    config,
                };
                let mut nodes = Vec::new();
                ctx.grow(rows.clone(), ctx.histograms(&rows), 0)
                    .flatten_into(&mut nodes);
                RegressionTree { nodes }
            });
            let lr = config.learning_rate;
            par::for_each_chunk_mut(&mut raw, UPDATE_CHUNK_ROWS * k, |chunk_idx, chunk| {
                let first = chunk_idx * UPDATE_CHUNK_ROWS;
                for (j, scores) in chunk.chunks_exact_mut(k).enumerate() {
                    let row = m.row(first + j);
                    for (s, t) in scores.iter_mut().zip(&trees) {
                        *s += lr * t.predict_row(row);
                    }
                }
            });
            model.stages.push(trees);
            trace.push(deviance(&raw));
        }
        Ok((model, trace))
    }

    pub fn raw_scores_row(&self, row: &[f64]) -> Vec<f64> {
        let mut scores = self.init_scores.clone();
        for stage in &self.stages {
            for (s, t) in scores.iter_mut().zip(stage) {
                *s += self.config.learning_rate * t.predict_row(row);
            }
        }
        scores
    }

    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        m.check_features(self.n_features)?;
        let rows = par::map_range(m.n_rows(), |i| softmax(&self.raw_scores_row(m.row(i))));
        Ok(ProbaMatrix::from_rows(self.n_classes, rows))
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        m.check_features(self.n_features)?;
        Ok(par::map_range(m.n_rows(), |i| argmax(&self.raw_scores_row(m.row(i)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::TaxonomyLevel;

    fn fixture(n: usize) -> (FeatureMatrix, LabelVector) {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![((i * 37) % 29) as f64 / 3.0, ((i * 11) % 13) as f64])
            .collect();
        let ids = rows
            .iter()
            .map(|r| if r[0] < 3.0 { 0 } else if r[1] < 6.0 { 1 } else { 2 })
            .collect();
        (
            FeatureMatrix::from_rows(&rows).unwrap(),
            LabelVector::new(ids, vec!["a".into(), "b".into(), "c".into()], TaxonomyLevel::Attack34)
                .unwrap(),
        )
    }

    #[test]
    fn init_scores_are_log_priors() {
        let m = FeatureMatrix::from_rows(&[vec![0.], vec![1.], vec![2.], vec![3.]]).unwrap();
        let y = LabelVector::new(vec![0, 1, 1, 1], vec!["a".into(), "b".into()], TaxonomyLevel::Binary2)
            .unwrap();
        let cfg = GbmConfig {
            n_estimators: 0,
            ..GbmConfig::tuned()
        };
        let model = GradientBoosting::fit(&m, &y, &cfg).unwrap();
        assert!((model.init_scores[0] - 0.25f64.ln()).abs() < 1e-15);
        assert!((model.init_scores[1] - 0.75f64.ln()).abs() < 1e-15);
        let p = model.predict_proba(&m).unwrap();
        assert!((p.row(2)[0] - 0.25).abs() < 1e-12);
        assert!((p.row(2)[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn deviance_non_increasing_without_subsampling() {
        let (m, y) = fixture(90);
        let cfg = GbmConfig {
            n_estimators: 40,
            learning_rate: 0.1,
            max_depth: 3,
            subsample: 1.0,
            ..GbmConfig::tuned()
        };
        let (_, trace) = GradientBoosting::fit_traced(&m, &y, &cfg).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{} -> {}", w[0], w[1]);
        }
        assert!(trace.last().unwrap() < &trace[0]);
    }

    #[test]
    fn subsampled_fit_still_descends_and_is_deterministic() {
        let (m, y) = fixture(120);
        let cfg = GbmConfig {
            n_estimators: 30,
            learning_rate: 0.1,
            seed: 9,
            ..GbmConfig::tuned()
        };
        let (a, trace) = GradientBoosting::fit_traced(&m, &y, &cfg).unwrap();
        assert!(trace.last().unwrap() < &trace[0]);
        let b = GradientBoosting::fit(&m, &y, &cfg).unwrap();
        assert_eq!(a, b);
        for r in a.predict_proba(&m).unwrap().rows() {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bins_are_exact_for_few_distinct_values() {
        let m = FeatureMatrix::from_rows(&[vec![3.], vec![1.], vec![2.], vec![1.]]).unwrap();
        let mapper = BinMapper::fit(&m, 255);
        assert_eq!(mapper.cuts[0], vec![1.5, 2.5]);
        assert_eq!(mapper.bin(0, 1.0), 0);
        assert_eq!(mapper.bin(0, 1.5), 0);
        assert_eq!(mapper.bin(0, 2.0), 1);
        assert_eq!(mapper.bin(0, 3.0), 2);
    }

    #[test]
    fn quantile_bins_are_capped() {
        let rows: Vec<Vec<f64>> = (0..1000).map(|i| vec![i as f64]).collect();
        let m = FeatureMatrix::from_rows(&rows).unwrap();
        let mapper = BinMapper::fit(&m, 16);
        assert!(mapper.n_bins(0) <= 16);
        assert!(mapper.cuts[0].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_config() {
        let (m, y) = fixture(20);
        let cfg = GbmConfig {
            subsample: 0.0,
            ..GbmConfig::tuned()
        };
        assert!(GradientBoosting::fit(&m, &y, &cfg).is_err());
        let y1 = y.with_ids(vec![2; 20]);
        assert!(GradientBoosting::fit(&m, &y1, &GbmConfig::tuned()).is_err());
    }
}
