use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector};
use crate::error::{Error, Result};
use crate::par;
use crate::proba::{argmax, softmax, ProbaMatrix};
use crate::rng::{derive_seed, stream};
use crate::tree::{DecisionTree, TrainView, TreeConfig};

use super::{check_xy, require_two_classes};

/// Lower clip applied to base-learner probabilities before taking logs.
pub const PROBA_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub base_tree: TreeConfig,
    pub seed: u64,
}

impl AdaBoostConfig {
    /// 100 rounds of depth-1 stumps at learning rate 0.1.
    pub fn tuned() -> Self {
        Self {
            n_estimators: 100,
            learning_rate: 0.1,
            base_tree: TreeConfig::stump(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::InvalidParameter("n_estimators must be ≥ 1".into()));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidParameter("learning_rate must be > 0".into()));
        }
        self.base_tree.validate()
    }
}

impl Default for AdaBoostConfig {
    fn default() -> Self {
        Self::tuned()
    }
}

fn clipped_log(p: &[f64]) -> Vec<f64> {
    p.iter().map(|&x| x.max(PROBA_FLOOR).ln()).collect()
}

/// Real-valued multi-class AdaBoost (SAMME.R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoost {
    pub config: AdaBoostConfig,
    pub n_features: usize,
    pub n_classes: usize,
    pub estimators: Vec<DecisionTree>,
}

/// SAMME.R per-round decision scores `(K−1)(log p_k − mean_j log p_j)`.
pub fn samme_r_scores(p: &[f64]) -> Vec<f64> {
    let k = p.len() as f64;
    let logp = clipped_log(p);
    let mean = logp.iter().sum::<f64>() / k;
    logp.into_iter().map(|l| (k - 1.0) * (l - mean)).collect()
}

impl AdaBoost {
    pub fn fit(m: &FeatureMatrix, y: &LabelVector, config: &AdaBoostConfig) -> Result<Self> {
        Self::fit_traced(m, y, config).map(|(model, _)| model)
    }

    /// Fits and also returns the sample weights: entry 0 is the uniform start,
    /// entry `t` the normalized weights after round `t`.
    pub fn fit_traced(
        m: &FeatureMatrix,
        y: &LabelVector,
        config: &AdaBoostConfig,
    ) -> Result<(Self, Vec<Vec<f64>>)> {
        check_xy(m, y)?;
        require_two_classes(y)?;
        config.validate()?;
        let n = m.n_rows();
        let k = y.n_classes();
        let kf = k as f64;
        let mut weights = vec![1.0 / n as f64; n];
        let mut trace = vec![weights.clone()];
        let mut estimators = Vec::with_capacity(config.n_estimators);
        for round in 0..config.n_estimators {
            let view = TrainView {
                m,
                y: &y.ids,
                n_classes: k,
                weights: Some(&weights),
            };
            let cfg = TreeConfig {
                seed: derive_seed(config.seed, stream::ADA_ROUND, round as u64),
                ..config.base_tree
            };
            let tree = DecisionTree::fit_rows(&view, (0..n).collect(), &cfg)?;
            let proba = par::map_range(n, |i| tree.predict_proba_row(m.row(i)));

            let degenerate = proba.iter().zip(&y.ids).all(|(p, &t)| p[t] == 1.0);
            if degenerate {
                // A perfect one-hot learner leaves nothing to reweight.
                if round == 0 {
                    estimators.push(tree);
                }
                break;
            }

            let scale = -config.learning_rate * (kf - 1.0) / kf;
            for ((w, p), &t) in weights.iter_mut().zip(&proba).zip(&y.ids) {
                let logp = clipped_log(p);
                let others: f64 = logp.iter().sum::<f64>() - logp[t];
                let inner = logp[t] - others / (kf - 1.0);
                *w *= (scale * inner).exp();
            }
            let total: f64 = weights.iter().sum();
            if !(total.is_finite() && total > 0.0) {
                break;
            }
            weights.iter_mut().for_each(|w| *w /= total);
            estimators.push(tree);
            trace.push(weights.clone());
        }
        Ok((
            Self {
                config: *config,
                n_features: m.n_features(),
                n_classes: k,
                estimators,
            },
            trace,
        ))
    }

    /// Sum of per-round SAMME.R scores for one row.
    pub fn decision_row(&self, row: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; self.n_classes];
        for t in &self.estimators {
            for (a, h) in acc.iter_mut().zip(samme_r_scores(&t.predict_proba_row(row))) {
                *a += h;
            }
        }
        acc
    }

    pub fn decision_function(&self, m: &FeatureMatrix) -> Result<Vec<Vec<f64>>> {
        m.check_features(self.n_features)?;
        Ok(par::map_range(m.n_rows(), |i| self.decision_row(m.row(i))))
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        m.check_features(self.n_features)?;
        Ok(par::map_range(m.n_rows(), |i| argmax(&self.decision_row(m.row(i)))))
    }

    /// Softmax of the decision scores averaged over rounds and scaled by `1/(K−1)`.
    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        m.check_features(self.n_features)?;
        let denom = (self.estimators.len().max(1) as f64) * (self.n_classes as f64 - 1.0);
        let rows = par::map_range(m.n_rows(), |i| {
            let d: Vec<f64> = self.decision_row(m.row(i)).iter().map(|s| s / denom).collect();
            softmax(&d)
        });
        Ok(ProbaMatrix::from_rows(self.n_classes, rows))
    }
}
