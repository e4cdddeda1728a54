//! SAMME.R boosting of weighted Gini stumps on one feature, written out
//! round by round.

use crate::GAIN_TOLERANCE;

const FLOOR: f64 = 1e-10;

fn gini(m: &[f64]) -> f64 {
    let t: f64 = m.iter().sum();
    if t <= 0.0 {
        0.0
    } else {
        1.0 - m.iter().map(|c| (c / t).powi(2)).sum::<f64>()
    }
}

struct Stump {
    threshold: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl Stump {
    fn proba(&self, v: f64) -> &[f64] {
        if v <= self.threshold {
            &self.left
        } else {
            &self.right
        }
    }
}

fn fit_stump(x: &[f64], y: &[usize], w: &[f64], k: usize) -> Stump {
    let mass = |keep: &dyn Fn(f64) -> bool| {
        let mut m = vec![0.0; k];
        for i in 0..x.len() {
            if keep(x[i]) {
                m[y[i]] += w[i];
            }
        }
        m
    };
    let parent = mass(&|_| true);
    let total: f64 = parent.iter().sum();
    let mut vals = x.to_vec();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    let mut best: Option<(f64, f64)> = None;
    for p in vals.windows(2) {
        let t = (p[0] + p[1]) / 2.0;
        let l = mass(&|v| v <= t);
        let r = mass(&|v| v > t);
        let gain = gini(&parent)
            - l.iter().sum::<f64>() / total * gini(&l)
            - r.iter().sum::<f64>() / total * gini(&r);
        if best.is_none_or(|b| gain > b.1 + GAIN_TOLERANCE) {
            best = Some((t, gain));
        }
    }
    let threshold = best.expect("feature has at least two distinct values").0;
    let norm = |m: Vec<f64>| {
        let s: f64 = m.iter().sum();
        m.into_iter().map(|v| v / s).collect::<Vec<_>>()
    };
    Stump {
        threshold,
        left: norm(mass(&|v| v <= threshold)),
        right: norm(mass(&|v| v > threshold)),
    }
}

pub struct Run {
    /// Uniform start followed by the normalized weights after each round.
    pub weights: Vec<Vec<f64>>,
    /// Final class probabilities for each training row.
    pub proba: Vec<Vec<f64>>,
}

/// Assumes no round yields a perfect one-hot learner.
pub fn run(x: &[f64], y: &[usize], k: usize, rounds: usize, learning_rate: f64) -> Run {
    let n = x.len();
    let kf = k as f64;
    let mut w = vec![1.0 / n as f64; n];
    let mut weights = vec![w.clone()];
    let mut stumps = Vec::new();
    for _ in 0..rounds {
        let s = fit_stump(x, y, &w, k);
        for i in 0..n {
            let logp: Vec<f64> = s.proba(x[i]).iter().map(|v| v.max(FLOOR).ln()).collect();
            let others: f64 = (0..k).filter(|&c| c != y[i]).map(|c| logp[c]).sum();
            let inner = logp[y[i]] - others / (kf - 1.0);
            w[i] *= (-learning_rate * (kf - 1.0) / kf * inner).exp();
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        weights.push(w.clone());
        stumps.push(s);
    }
    let proba = x
        .iter()
        .map(|&xi| {
            let mut h = vec![0.0; k];
            for s in &stumps {
                let logp: Vec<f64> = s.proba(xi).iter().map(|v| v.max(FLOOR).ln()).collect();
                let mean = logp.iter().sum::<f64>() / kf;
                h.iter_mut().zip(&logp).for_each(|(a, l)| *a += (kf - 1.0) * (l - mean));
            }
            let scaled: Vec<f64> = h.iter().map(|v| v / (stumps.len() as f64 * (kf - 1.0))).collect();
            crate::softmax(&scaled)
        })
        .collect();
    Run { weights, proba }
}
