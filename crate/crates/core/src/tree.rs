//! CART classification tree.
//!
//! Splits are searched over midpoints between consecutive distinct values of
//! each candidate feature and scored by weighted impurity decrease. A row goes
//! left iff `value <= threshold`. Ties in impurity decrease resolve to the
//! lower feature index, then the lower threshold.
//!
//! Sample weights (used by AdaBoost) enter the impurity and the leaf class
//! masses; `min_samples_leaf`/`min_samples_split` always count rows.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, LabelVector};
use crate::error::{Error, Result};
use crate::par;
use crate::proba::{argmax, normalize, ProbaMatrix};
use crate::rng::{derive_seed, stream, Rng};

/// Gains closer than this are treated as equal, so tie-breaking by
/// (feature, threshold) is not at the mercy of rounding.
pub const GAIN_TOLERANCE: f64 = 1e-12;

/// Node size above which children and candidate features are processed in parallel.
const PAR_NODE_ROWS: usize = 8_192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Gini,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    #[default]
    All,
    /// `⌈√F⌉` features per node.
    Sqrt,
}

impl MaxFeatures {
    pub fn count(self, n_features: usize) -> usize {
        match self {
            Self::All => n_features,
            Self::Sqrt => ((n_features as f64).sqrt().ceil() as usize).clamp(1, n_features.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub criterion: Criterion,
    /// `None` grows until the other stopping rules apply.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub max_features: MaxFeatures,
    pub seed: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            criterion: Criterion::Gini,
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: MaxFeatures::All,
            seed: 0,
        }
    }
}

impl TreeConfig {
    /// Tuned decision-tree setting: entropy, depth 30, split 10, leaf 5, sqrt features.
    pub fn tuned() -> Self {
        Self {
            criterion: Criterion::Entropy,
            max_depth: Some(30),
            min_samples_split: 10,
            min_samples_leaf: 5,
            max_features: MaxFeatures::Sqrt,
            seed: 0,
        }
    }

    /// Depth-1 stump over all features.
    pub fn stump() -> Self {
        Self {
            max_depth: Some(1),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth == Some(0) {
            return Err(Error::InvalidParameter("max_depth must be ≥ 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParameter("min_samples_split must be ≥ 2".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::InvalidParameter("min_samples_leaf must be ≥ 1".into()));
        }
        Ok(())
    }
}

fn check_counts(counts: &[f64]) -> Result<f64> {
    let total: f64 = counts.iter().sum();
    if counts.iter().any(|&c| c < 0.0) || total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidParameter(
            "class counts must be nonnegative with a positive sum".into(),
        ));
    }
    Ok(total)
}

/// Gini impurity `1 − Σ p_k²`.
pub fn gini(class_counts: &[f64]) -> Result<f64> {
    let total = check_counts(class_counts)?;
    Ok(1.0 - class_counts.iter().map(|c| (c / total).powi(2)).sum::<f64>())
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
pub fn entropy(class_counts: &[f64]) -> Result<f64> {
    let total = check_counts(class_counts)?;
    Ok(-class_counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|c| {
            let p = c / total;
            p * p.log2()
        })
        .sum::<f64>())
}

impl Criterion {
    pub fn impurity(self, class_counts: &[f64]) -> Result<f64> {
        match self {
            Self::Gini => gini(class_counts),
            Self::Entropy => entropy(class_counts),
        }
    }
}

/// Running statistic that lets impurity be updated in O(1) as rows move
/// between the two sides of a candidate split.
#[derive(Clone)]
struct Side {
    masses: Vec<f64>,
    total: f64,
    /// Σ c² for gini, Σ c·ln c for entropy.
    stat: f64,
}

#[inline]
fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

impl Side {
    fn new(criterion: Criterion, masses: Vec<f64>) -> Self {
        let total = masses.iter().sum();
        let stat = match criterion {
            Criterion::Gini => masses.iter().map(|c| c * c).sum(),
            Criterion::Entropy => masses.iter().map(|&c| xlnx(c)).sum(),
        };
        Self {
            masses,
            total,
            stat,
        }
    }

    #[inline]
    fn shift(&mut self, criterion: Criterion, class: usize, w: f64) {
        let old = self.masses[class];
        let new = old + w;
        self.masses[class] = new;
        self.total += w;
        self.stat += match criterion {
            Criterion::Gini => new * new - old * old,
            Criterion::Entropy => xlnx(new) - xlnx(old),
        };
    }

    #[inline]
    fn impurity(&self, criterion: Criterion) -> f64 {
        if self.total <= 0.0 {
            return 0.0;
        }
        let v = match criterion {
            Criterion::Gini => 1.0 - self.stat / (self.total * self.total),
            Criterion::Entropy => {
                (self.total * self.total.ln() - self.stat) / (self.total * std::f64::consts::LN_2)
            }
        };
        v.max(0.0)
    }
}

/// Training data as seen by the tree builder.
#[derive(Clone, Copy)]
pub struct TrainView<'a> {
    pub m: &'a FeatureMatrix,
    pub y: &'a [usize],
    pub n_classes: usize,
    /// Per-row sample weights indexed like `m`; `None` means all ones.
    pub weights: Option<&'a [f64]>,
}

impl<'a> TrainView<'a> {
    pub fn new(m: &'a FeatureMatrix, y: &'a LabelVector) -> Self {
        Self {
            m,
            y: &y.ids,
            n_classes: y.n_classes(),
            weights: None,
        }
    }

    #[inline]
    fn weight(&self, row: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[row])
    }

    fn masses(&self, rows: &[usize]) -> Vec<f64> {
        let mut masses = vec![0.0; self.n_classes];
        for &r in rows {
            masses[self.y[r]] += self.weight(r);
        }
        masses
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub feature_index: usize,
    pub threshold: f64,
    pub impurity_decrease: f64,
    pub left_count: usize,
    pub right_count: usize,
}

impl SplitCandidate {
    /// Whether `self` should replace `best` under the tie-breaking rule
    /// (candidates must be offered in ascending (feature, threshold) order).
    fn beats(&self, best: Option<&SplitCandidate>) -> bool {
        best.is_none_or(|b| self.impurity_decrease > b.impurity_decrease + GAIN_TOLERANCE)
    }
}

/// Midpoint of `a < b` that still satisfies `a <= t < b`.
pub fn midpoint(a: f64, b: f64) -> f64 {
    let t = 0.5 * a + 0.5 * b;
    if t < b && t >= a {
        t
    } else {
        a
    }
}

fn scan_feature(
    view: &TrainView<'_>,
    rows: &[usize],
    parent: &Side,
    parent_impurity: f64,
    feature: usize,
    config: &TreeConfig,
) -> Option<SplitCandidate> {
    let n = rows.len();
    let crit = config.criterion;
    let mut pairs: Vec<(f64, usize)> = rows.iter().map(|&r| (view.m.get(r, feature), r)).collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    if pairs[0].0 == pairs[n - 1].0 {
        return None;
    }
    let mut left = Side::new(crit, vec![0.0; view.n_classes]);
    let mut right = parent.clone();
    let total = parent.total;
    let mut best: Option<SplitCandidate> = None;
    for i in 0..n - 1 {
        let (v, r) = pairs[i];
        let w = view.weight(r);
        let k = view.y[r];
        left.shift(crit, k, w);
        right.shift(crit, k, -w);
        let next = pairs[i + 1].0;
        if v == next {
            continue;
        }
        let nl = i + 1;
        if nl < config.min_samples_leaf || n - nl < config.min_samples_leaf {
            continue;
        }
        let wl = left.total.max(0.0);
        let wr = right.total.max(0.0);
        let gain = parent_impurity
            - (wl / total) * left.impurity(crit)
            - (wr / total) * right.impurity(crit);
        let cand = SplitCandidate {
            feature_index: feature,
            threshold: midpoint(v, next),
            impurity_decrease: gain.max(0.0),
            left_count: nl,
            right_count: n - nl,
        };
        if cand.beats(best.as_ref()) {
            best = Some(cand);
        }
    }
    best
}

/// Best valid split of `rows` over `candidate_features` (scanned in ascending
/// index order), or `None` when the node is pure or nothing satisfies
/// `min_samples_leaf`.
pub fn best_split(
    view: &TrainView<'_>,
    rows: &[usize],
    config: &TreeConfig,
    candidate_features: &[usize],
) -> Option<SplitCandidate> {
    if rows.len() < 2 {
        return None;
    }
    let parent = Side::new(config.criterion, view.masses(rows));
    if parent.total <= 0.0 || parent.masses.iter().filter(|&&c| c > 0.0).count() <= 1 {
        return None;
    }
    let parent_impurity = parent.impurity(config.criterion);
    let mut features = candidate_features.to_vec();
    features.sort_unstable();
    let per_feature = if rows.len() * features.len() >= PAR_NODE_ROWS * 4 && features.len() > 1 {
        par::map_slice(&features, |&f| {
            scan_feature(view, rows, &parent, parent_impurity, f, config)
        })
    } else {
        features
            .iter()
            .map(|&f| scan_feature(view, rows, &parent, parent_impurity, f, config))
            .collect()
    };
    let mut best: Option<SplitCandidate> = None;
    for cand in per_feature.into_iter().flatten() {
        if cand.beats(best.as_ref()) {
            best = Some(cand);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Per-class training mass reaching the leaf (row counts when unweighted).
        class_counts: Vec<f64>,
        n_samples: usize,
    },
}

enum Built {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Built>,
        right: Box<Built>,
    },
    Leaf {
        class_counts: Vec<f64>,
        n_samples: usize,
    },
}

impl Built {
    fn flatten_into(self, nodes: &mut Vec<TreeNode>) -> usize {
        let idx = nodes.len();
        match self {
            Built::Leaf {
                class_counts,
                n_samples,
            } => nodes.push(TreeNode::Leaf {
                class_counts,
                n_samples,
            }),
            Built::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                nodes.push(TreeNode::Split {
                    feature,
                    threshold,
                    left: 0,
                    right: 0,
                });
                let l = left.flatten_into(nodes);
                let r = right.flatten_into(nodes);
                nodes[idx] = TreeNode::Split {
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

/// Feature candidates for one node: all features, or `k` non-constant
/// features drawn in a seeded random order (constant ones are skipped and do
/// not count towards `k`).
fn candidate_features(
    view: &TrainView<'_>,
    rows: &[usize],
    config: &TreeConfig,
    node_seed: u64,
) -> Vec<usize> {
    let nf = view.m.n_features();
    match config.max_features {
        MaxFeatures::All => (0..nf).collect(),
        MaxFeatures::Sqrt => {
            let k = config.max_features.count(nf);
            let mut order: Vec<usize> = (0..nf).collect();
            order.shuffle(&mut Rng::seed_from_u64(node_seed));
            let mut picked = Vec::with_capacity(k);
            for f in order {
                let first = view.m.get(rows[0], f);
                if rows.iter().any(|&r| view.m.get(r, f) != first) {
                    picked.push(f);
                    if picked.len() == k {
                        break;
                    }
                }
            }
            picked
        }
    }
}

fn build(
    view: &TrainView<'_>,
    rows: Vec<usize>,
    depth: usize,
    node_seed: u64,
    config: &TreeConfig,
) -> Built {
    let leaf = |rows: &[usize]| Built::Leaf {
        class_counts: view.masses(rows),
        n_samples: rows.len(),
    };
    if config.max_depth.is_some_and(|d| depth >= d) || rows.len() < config.min_samples_split {
        return leaf(&rows);
    }
    let candidates = candidate_features(view, &rows, config, node_seed);
    let Some(split) = best_split(view, &rows, config, &candidates) else {
        return leaf(&rows);
    };
    let (l_rows, r_rows): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&r| view.m.get(r, split.feature_index) <= split.threshold);
    drop(rows);
    let l_seed = derive_seed(node_seed, stream::TREE_NODE, 1);
    let r_seed = derive_seed(node_seed, stream::TREE_NODE, 2);
    let (left, right) = if l_rows.len() + r_rows.len() >= PAR_NODE_ROWS {
        par::join(
            || build(view, l_rows, depth + 1, l_seed, config),
            || build(view, r_rows, depth + 1, r_seed, config),
        )
    } else {
        (
            build(view, l_rows, depth + 1, l_seed, config),
            build(view, r_rows, depth + 1, r_seed, config),
        )
    };
    Built::Split {
        feature: split.feature_index,
        threshold: split.threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// Fitted classification tree stored as a flat node arena (root at 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub config: TreeConfig,
    pub n_features: usize,
    pub n_classes: usize,
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn fit(m: &FeatureMatrix, y: &LabelVector, config: &TreeConfig) -> Result<Self> {
        if m.n_rows() != y.len() {
            return Err(Error::LengthMismatch {
                left: m.n_rows(),
                right: y.len(),
            });
        }
        Self::fit_rows(&TrainView::new(m, y), (0..m.n_rows()).collect(), config)
    }

    /// Fits on the given rows of `view` (repeats allowed, e.g. a bootstrap draw).
    pub fn fit_rows(view: &TrainView<'_>, rows: Vec<usize>, config: &TreeConfig) -> Result<Self> {
        config.validate()?;
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let root_seed = derive_seed(config.seed, stream::TREE_NODE, 0);
        let built = build(view, rows, 0, root_seed, config);
        let mut nodes = Vec::new();
        built.flatten_into(&mut nodes);
        Ok(Self {
            config: *config,
            n_features: view.m.n_features(),
            n_classes: view.n_classes,
            nodes,
        })
    }

    /// Leaf class masses reached by `row`.
    pub fn leaf_counts(&self, row: &[f64]) -> &[f64] {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => idx = if row[*feature] <= *threshold { *left } else { *right },
                TreeNode::Leaf { class_counts, .. } => return class_counts,
            }
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(self.leaf_counts(row))
    }

    pub fn predict_proba_row(&self, row: &[f64]) -> Vec<f64> {
        normalize(self.leaf_counts(row))
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<usize>> {
        m.check_features(self.n_features)?;
        Ok(par::map_range(m.n_rows(), |i| self.predict_row(m.row(i))))
    }

    pub fn predict_proba(&self, m: &FeatureMatrix) -> Result<ProbaMatrix> {
        m.check_features(self.n_features)?;
        let rows = par::map_range(m.n_rows(), |i| self.predict_proba_row(m.row(i)));
        Ok(ProbaMatrix::from_rows(self.n_classes, rows))
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], idx: usize) -> usize {
            match &nodes[idx] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::TaxonomyLevel;

    fn dataset(rows: &[Vec<f64>], ids: &[usize], k: usize) -> (FeatureMatrix, LabelVector) {
        let names = (0..k).map(|c| format!("c{c}")).collect();
        (
            FeatureMatrix::from_rows(rows).unwrap(),
            LabelVector::new(ids.to_vec(), names, TaxonomyLevel::Attack34).unwrap(),
        )
    }

    #[test]
    fn gini_values() {
        assert_eq!(gini(&[10.0, 0.0]).unwrap(), 0.0);
        assert_eq!(gini(&[5.0, 5.0]).unwrap(), 0.5);
        assert!((gini(&[1.0, 1.0, 1.0, 1.0]).unwrap() - 0.75).abs() < 1e-15);
        assert!(gini(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[8.0, 8.0]).unwrap(), 1.0);
        assert_eq!(entropy(&[7.0, 0.0]).unwrap(), 0.0);
        // −(¼ log₂ ¼ + ¾ log₂ ¾)
        let expected = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((entropy(&[1.0, 3.0]).unwrap() - expected).abs() < 1e-12);
        assert!((entropy(&[1.0, 3.0]).unwrap() - 0.811278).abs() < 1e-6);
        assert!(entropy(&[0.0]).is_err());
    }

    #[test]
    fn incremental_side_matches_direct_impurity() {
        for crit in [Criterion::Gini, Criterion::Entropy] {
            let mut s = Side::new(crit, vec![3.0, 0.0, 2.0]);
            s.shift(crit, 1, 4.0);
            s.shift(crit, 0, -1.0);
            let direct = crit.impurity(&[2.0, 4.0, 2.0]).unwrap();
            assert!((s.impurity(crit) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn best_split_one_dimension() {
        let (m, y) = dataset(&[vec![1.], vec![2.], vec![9.], vec![10.]], &[0, 0, 1, 1], 2);
        let view = TrainView::new(&m, &y);
        let cfg = TreeConfig::default();
        let s = best_split(&view, &[0, 1, 2, 3], &cfg, &[0]).unwrap();
        assert_eq!(s.threshold, 5.5);
        assert!((s.impurity_decrease - 0.5).abs() < 1e-12);
        // brute force over the three midpoints
        let mut best = (f64::MIN, 0.0);
        for t in [1.5, 5.5, 9.5] {
            let left: Vec<f64> = [0, 1, 2, 3]
                .iter()
                .filter(|&&i| m.get(i, 0) <= t)
                .fold(vec![0.0, 0.0], |mut acc, &i| {
                    acc[y.ids[i]] += 1.0;
                    acc
                });
            let right = vec![2.0 - left[0], 2.0 - left[1]];
            let nl: f64 = left.iter().sum();
            let g = 0.5 - nl / 4.0 * gini(&left).unwrap() - (4.0 - nl) / 4.0 * gini(&right).unwrap();
            if g > best.0 {
                best = (g, t);
            }
        }
        assert_eq!(best.1, s.threshold);
    }

    #[test]
    fn best_split_none_cases() {
        let (m, y) = dataset(&[vec![1.], vec![2.], vec![3.]], &[1, 1, 1], 2);
        let view = TrainView::new(&m, &y);
        assert!(best_split(&view, &[0, 1, 2], &TreeConfig::default(), &[0]).is_none());

        let (m, y) = dataset(&[vec![1.], vec![2.], vec![3.], vec![4.]], &[0, 1, 0, 1], 2);
        let view = TrainView::new(&m, &y);
        let cfg = TreeConfig {
            min_samples_leaf: 3,
            ..TreeConfig::default()
        };
        assert!(best_split(&view, &[0, 1, 2, 3], &cfg, &[0]).is_none());
    }

    #[test]
    fn separable_data_is_memorized() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let ids: Vec<usize> = (0..20).map(|i| usize::from(i >= 12)).collect();
        let (m, y) = dataset(&rows, &ids, 2);
        let t = DecisionTree::fit(&m, &y, &TreeConfig::default()).unwrap();
        assert_eq!(t.predict(&m).unwrap(), ids);
    }

    #[test]
    fn depth_one_has_three_nodes() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 7) as f64, (i % 3) as f64]).collect();
        let ids: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let (m, y) = dataset(&rows, &ids, 3);
        let cfg = TreeConfig {
            max_depth: Some(1),
            ..TreeConfig::default()
        };
        let t = DecisionTree::fit(&m, &y, &cfg).unwrap();
        assert!(t.nodes.len() <= 3);
        assert!(t.depth() <= 1);
    }

    #[test]
    fn boundary_value_routes_left() {
        let (m, y) = dataset(&[vec![1.], vec![2.], vec![9.], vec![10.]], &[0, 0, 1, 1], 2);
        let t = DecisionTree::fit(&m, &y, &TreeConfig::default()).unwrap();
        let TreeNode::Split { threshold, .. } = t.nodes[0] else {
            panic!("root should split");
        };
        assert_eq!(threshold, 5.5);
        let probe = FeatureMatrix::from_rows(&[vec![5.5], vec![5.5 + 1e-9]]).unwrap();
        assert_eq!(t.predict(&probe).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_predictions_and_schema_errors() {
        let (m, y) = dataset(&[vec![1., 0.], vec![2., 0.]], &[0, 1], 2);
        let t = DecisionTree::fit(&m, &y, &TreeConfig::default()).unwrap();
        assert!(t.predict(&m.empty_like()).unwrap().is_empty());
        let wrong = FeatureMatrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(matches!(t.predict(&wrong), Err(Error::FeatureMismatch { .. })));
        let empty = m.empty_like();
        let y0 = y.with_ids(vec![]);
        assert!(matches!(
            DecisionTree::fit(&empty, &y0, &TreeConfig::default()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn leaf_proba_is_normalized_counts() {
        // one feature, leaf ends up with [3, 1] when depth is capped at 0 splits
        let (m, y) = dataset(&[vec![0.], vec![0.], vec![0.], vec![0.]], &[0, 0, 0, 1], 2);
        let t = DecisionTree::fit(&m, &y, &TreeConfig::default()).unwrap();
        assert_eq!(t.predict_proba(&m).unwrap().row(0), &[0.75, 0.25]);
        let (m, y) = dataset(&[vec![0.], vec![1.]], &[1, 1], 2);
        let t = DecisionTree::fit(&m, &y, &TreeConfig::default()).unwrap();
        assert_eq!(t.predict_proba(&m).unwrap().row(0), &[0.0, 1.0]);
    }

    #[test]
    fn leaves_respect_min_samples_leaf() {
        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![((i * 37) % 60) as f64, (i % 5) as f64]).collect();
        let ids: Vec<usize> = (0..60).map(|i| (i * 7) % 3).collect();
        let (m, y) = dataset(&rows, &ids, 3);
        let cfg = TreeConfig {
            min_samples_leaf: 5,
            min_samples_split: 10,
            ..TreeConfig::default()
        };
        let t = DecisionTree::fit(&m, &y, &cfg).unwrap();
        for n in &t.nodes {
            if let TreeNode::Leaf { n_samples, .. } = n {
                assert!(*n_samples >= 5);
            }
        }
    }

    #[test]
    fn sqrt_features_is_seeded() {
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|i| (0..9).map(|j| ((i * (j + 3)) % 17) as f64).collect())
            .collect();
        let ids: Vec<usize> = (0..80).map(|i| (i * 5 % 11) % 3).collect();
        let (m, y) = dataset(&rows, &ids, 3);
        let cfg = TreeConfig {
            max_features: MaxFeatures::Sqrt,
            seed: 11,
            ..TreeConfig::default()
        };
        let a = DecisionTree::fit(&m, &y, &cfg).unwrap();
        let b = DecisionTree::fit(&m, &y, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(MaxFeatures::Sqrt.count(46), 7);
        assert_eq!(MaxFeatures::Sqrt.count(9), 3);
    }
}
