//! Exhaustive CART: every midpoint of every feature, impurities recomputed
//! from class counts for each candidate.

use crate::{midpoints, GAIN_TOLERANCE};

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub entropy: bool,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

pub fn impurity(entropy: bool, counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    if entropy {
        -counts
            .iter()
            .filter(|&&c| c > 0.0)
            .map(|c| (c / total) * (c / total).log2())
            .sum::<f64>()
    } else {
        1.0 - counts.iter().map(|c| (c / total).powi(2)).sum::<f64>()
    }
}

pub fn counts(rows: &[usize], y: &[usize], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k];
    rows.iter().for_each(|&r| c[y[r]] += 1.0);
    c
}

/// `(feature, threshold, gain)`; candidates visited in (feature, threshold)
/// order and replaced only by a gain larger by more than the tolerance.
pub fn best_split(
    x: &[Vec<f64>],
    y: &[usize],
    k: usize,
    rows: &[usize],
    s: &Settings,
) -> Option<(usize, f64, f64)> {
    let parent = counts(rows, y, k);
    if rows.len() < 2 || parent.iter().filter(|&&c| c > 0.0).count() <= 1 {
        return None;
    }
    let n = rows.len() as f64;
    let p_imp = impurity(s.entropy, &parent);
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..x[0].len() {
        for t in midpoints(x, rows, f) {
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= t);
            if l.len() < s.min_samples_leaf || r.len() < s.min_samples_leaf {
                continue;
            }
            let gain = p_imp
                - l.len() as f64 / n * impurity(s.entropy, &counts(&l, y, k))
                - r.len() as f64 / n * impurity(s.entropy, &counts(&r, y, k));
            if best.is_none_or(|b| gain > b.2 + GAIN_TOLERANCE) {
                best = Some((f, t, gain));
            }
        }
    }
    best
}

pub enum Node {
    Leaf(Vec<f64>),
    Split(usize, f64, Box<Node>, Box<Node>),
}

impl Node {
    /// Class counts of the leaf reached by `row`.
    pub fn leaf(&self, row: &[f64]) -> &[f64] {
        match self {
            Node::Leaf(c) => c,
            Node::Split(f, t, l, r) => if row[*f] <= *t { l } else { r }.leaf(row),
        }
    }

    /// Majority class of the reached leaf, lowest id on ties.
    pub fn predict(&self, row: &[f64]) -> usize {
        let c = self.leaf(row);
        let mut best = 0;
        for (i, &v) in c.iter().enumerate() {
            if v > c[best] {
                best = i;
            }
        }
        best
    }
}

pub fn grow(x: &[Vec<f64>], y: &[usize], k: usize, rows: Vec<usize>, s: &Settings) -> Node {
    fn rec(x: &[Vec<f64>], y: &[usize], k: usize, rows: Vec<usize>, depth: usize, s: &Settings) -> Node {
        if s.max_depth.is_some_and(|d| depth >= d) || rows.len() < s.min_samples_split {
            return Node::Leaf(counts(&rows, y, k));
        }
        match best_split(x, y, k, &rows, s) {
            None => Node::Leaf(counts(&rows, y, k)),
            Some((f, t, _)) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= t);
                Node::Split(
                    f,
                    t,
                    Box::new(rec(x, y, k, l, depth + 1, s)),
                    Box::new(rec(x, y, k, r, depth + 1, s)),
                )
            }
        }
    }
    rec(x, y, k, rows, 0, s)
}
