use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector};
use crate::error::{Error, Result};
use crate::par;
use crate::proba::{argmax, ProbaMatrix};
use crate::rng::{derive_seed, rng_for, stream};
use crate::tree::{Criterion, DecisionTree, MaxFeatures, TrainView, TreeConfig};

use super::check_xy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub tree: TreeConfig,
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestConfig {
    /// 200 gini trees of depth ≤ 8 with sqrt feature sampling.
    pub fn tuned() -> Self {
        Self {
            n_estimators: 200,
            tree: TreeConfig {
                criterion: Criterion::Gini,
                max_depth: Some(8),
                max_features: MaxFeatures::Sqrt,
                ..TreeConfig::default()
            },
            bootstrap: true,
            seed: 0,
        }
    }
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self::tuned()
    }
}

/// Bagged trees combined by plurality vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub config: ForestConfig,
    pub n_features: usize,
    pub n_classes: usize,
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn fit(m: &FeatureMatrix, y: &LabelVector, config: &ForestConfig) -> Result<Self> {
        check_xy(m, y)?;
        if config.n_estimators == 0 {
            return Err(Error::InvalidParameter("n_estimators must be ≥ 1".into()));
        }
        config.tree.validate()?;
        let view = TrainView::new(m, y);
        let n = m.n_rows();
        let trees = par::map_range(config.n_estimators, |t| {
            let tree_cfg = TreeConfig {
                seed: derive_seed(config.seed, stream::FOREST_TREE, t as u64),
                ..config.tree
            };
            let rows = if config.bootstrap {
                let mut rng = rng_for(config.seed, stream::FOREST_BOOTSTRAP, t as u64);
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit_rows(&view, rows, &tree_cfg)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config: *config,
            n_features: m.n_features(),
            n_classes: y.n_classes(),
            trees,
        })
    }

    /// Per-class vote counts for one row.
    pub fn votes(&self, row: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.n_classes];
        for t in &self.trees {
            votes[t.predict_row(row)] += 1;
        }
        votes
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        let votes = self.votes(row);
        // plurality, lowest id on ties
        let mut best = 0;
        for (k, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = k;
            }
        }
        best
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        m.check_features(self.n_features)?;
        Ok(par::map_range(m.n_rows(), |i| self.predict_row(m.row(i))))
    }

    /// Mean of the trees' leaf class frequencies.
    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        m.check_features(self.n_features)?;
        let k = self.n_classes;
        let rows = par::map_range(m.n_rows(), |i| {
            let mut acc = vec![0.0; k];
            for t in &self.trees {
                for (a, p) in acc.iter_mut().zip(t.predict_proba_row(m.row(i))) {
                    *a += p;
                }
            }
            let n = self.trees.len() as f64;
            acc.iter_mut().for_each(|a| *a /= n);
            acc
        });
        Ok(ProbaMatrix::from_rows(k, rows))
    }
}

/// Plurality over a list of votes; exposed for callers that vote outside a forest.
pub fn plurality(votes: &[usize], n_classes: usize) -> usize {
    let mut counts = vec![0.0; n_classes];
    for &v in votes {
        counts[v] += 1.0;
    }
    argmax(&counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::TaxonomyLevel;

    fn fixture(n: usize) -> (FeatureMatrix, LabelVector) {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let a = ((i * 7919) % 101) as f64;
                let b = ((i * 104_729) % 53) as f64;
                vec![a, b, (a * 0.3 + b) % 17.0]
            })
            .collect();
        let ids = rows
            .iter()
            .map(|r| if r[0] > 60.0 { 0 } else if r[1] > 25.0 { 1 } else { 2 })
            .collect();
        (
            FeatureMatrix::from_rows(&rows).unwrap(),
            LabelVector::new(ids, vec!["a".into(), "b".into(), "c".into()], TaxonomyLevel::Attack34)
                .unwrap(),
        )
    }

    #[test]
    fn single_tree_forest_equals_tree() {
        let (m, y) = fixture(120);
        let tree_cfg = TreeConfig {
            max_depth: Some(4),
            ..TreeConfig::default()
        };
        let cfg = ForestConfig {
            n_estimators: 1,
            tree: tree_cfg,
            bootstrap: false,
            seed: 3,
        };
        let f = RandomForest::fit(&m, &y, &cfg).unwrap();
        let t = DecisionTree::fit(&m, &y, &tree_cfg).unwrap();
        assert_eq!(f.predict(&m).unwrap(), t.predict(&m).unwrap());
    }

    #[test]
    fn deterministic_under_seed() {
        let (m, y) = fixture(150);
        let cfg = ForestConfig {
            n_estimators: 12,
            seed: 5,
            ..ForestConfig::tuned()
        };
        let a = RandomForest::fit(&m, &y, &cfg).unwrap();
        let b = RandomForest::fit(&m, &y, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn plurality_ties_to_lowest() {
        assert_eq!(plurality(&[1, 0], 2), 0);
        assert_eq!(plurality(&[0, 0, 1], 2), 0);
        assert_eq!(plurality(&[2, 1, 2], 3), 2);
    }

    #[test]
    fn two_tree_tie_goes_to_lower_class() {
        // Tree A predicts class 1 everywhere, tree B class 0 everywhere.
        let (m, _) = fixture(4);
        let leaf = |counts: Vec<f64>| DecisionTree {
            config: TreeConfig::default(),
            n_features: 3,
            n_classes: 2,
            nodes: vec![crate::tree::TreeNode::Leaf {
                class_counts: counts,
                n_samples: 1,
            }],
        };
        let forest = RandomForest {
            config: ForestConfig::tuned(),
            n_features: 3,
            n_classes: 2,
            trees: vec![leaf(vec![0.0, 1.0]), leaf(vec![1.0, 0.0])],
        };
        assert_eq!(forest.predict(&m).unwrap(), vec![0; 4]);
        let unanimous = RandomForest {
            trees: vec![leaf(vec![0.0, 1.0]), leaf(vec![0.0, 1.0]), leaf(vec![1.0, 0.0])],
            ..forest
        };
        assert_eq!(unanimous.predict(&m).unwrap(), vec![1; 4]);
    }

    #[test]
    fn proba_rows_sum_to_one() {
        let (m, y) = fixture(90);
        let cfg = ForestConfig {
            n_estimators: 7,
            ..ForestConfig::tuned()
        };
        let f = RandomForest::fit(&m, &y, &cfg).unwrap();
        for r in f.predict_proba(&m).unwrap().rows() {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
