//! Multinomial boosting with exact-sort regression trees, full rows per stage.

use crate::{midpoints, softmax, GAIN_TOLERANCE};

enum Node {
    Leaf(f64),
    Split(usize, f64, Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, row: &[f64]) -> f64 {
        match self {
            Node::Leaf(v) => *v,
            Node::Split(f, t, l, r) => if row[*f] <= *t { l } else { r }.eval(row),
        }
    }
}

fn grow(x: &[Vec<f64>], r: &[f64], rows: Vec<usize>, depth: usize, max_depth: usize, k: usize) -> Node {
    let leaf = |rows: &[usize]| {
        let num: f64 = rows.iter().map(|&i| r[i]).sum();
        let den: f64 = rows.iter().map(|&i| r[i].abs() * (1.0 - r[i].abs())).sum();
        let kf = k as f64;
        Node::Leaf(if den.abs() < 1e-150 { 0.0 } else { (kf - 1.0) / kf * num / den })
    };
    if depth >= max_depth || rows.len() < 2 {
        return leaf(&rows);
    }
    let n = rows.len() as f64;
    let total: f64 = rows.iter().map(|&i| r[i]).sum();
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..x[0].len() {
        for t in midpoints(x, &rows, f) {
            let (l, rr): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= t);
            let sl: f64 = l.iter().map(|&i| r[i]).sum();
            let sr: f64 = rr.iter().map(|&i| r[i]).sum();
            let gain = sl * sl / l.len() as f64 + sr * sr / rr.len() as f64 - total * total / n;
            if best.is_none_or(|b| gain > b.2 + GAIN_TOLERANCE) {
                best = Some((f, t, gain));
            }
        }
    }
    match best {
        Some((f, t, g)) if g > GAIN_TOLERANCE => {
            let (l, rr): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= t);
            Node::Split(
                f,
                t,
                Box::new(grow(x, r, l, depth + 1, max_depth, k)),
                Box::new(grow(x, r, rr, depth + 1, max_depth, k)),
            )
        }
        _ => leaf(&rows),
    }
}

/// Mean training deviance before boosting and after each stage.
pub fn deviance_trajectory(
    x: &[Vec<f64>],
    y: &[usize],
    k: usize,
    stages: usize,
    learning_rate: f64,
    max_depth: usize,
) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![0.0; k];
    y.iter().for_each(|&t| c[t] += 1.0);
    let prior: Vec<f64> = c.iter().map(|v| (v / n as f64).max(1e-12).ln()).collect();
    let mut raw = vec![prior; n];
    let deviance = |raw: &[Vec<f64>]| {
        raw.iter().zip(y).map(|(s, &t)| -softmax(s)[t].ln()).sum::<f64>() / n as f64
    };
    let mut out = vec![deviance(&raw)];
    for _ in 0..stages {
        let p: Vec<Vec<f64>> = raw.iter().map(|s| softmax(s)).collect();
        let trees: Vec<Node> = (0..k)
            .map(|cls| {
                let r: Vec<f64> = (0..n).map(|i| (y[i] == cls) as u8 as f64 - p[i][cls]).collect();
                grow(x, &r, (0..n).collect(), 0, max_depth, k)
            })
            .collect();
        for (i, s) in raw.iter_mut().enumerate() {
            for (cls, t) in trees.iter().enumerate() {
                s[cls] += learning_rate * t.eval(&x[i]);
            }
        }
        out.push(deviance(&raw));
    }
    out
}
