//! Deliberately naive implementations that recompute everything from
//! scratch. They share no code with the library and exist only to be
//! compared against it.

pub mod auc;
pub mod cart;
pub mod gbm;
pub mod knn;
pub mod samme_r;

/// Gains within this distance are ties; the earlier candidate is kept.
pub const GAIN_TOLERANCE: f64 = 1e-12;

pub(crate) fn softmax(s: &[f64]) -> Vec<f64> {
    let m = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = s.iter().map(|v| (v - m).exp()).collect();
    let t: f64 = e.iter().sum();
    e.into_iter().map(|v| v / t).collect()
}

/// Distinct sorted values of `column` over `rows` and the midpoints between them.
pub(crate) fn midpoints(x: &[Vec<f64>], rows: &[usize], column: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = rows.iter().map(|&r| x[r][column]).collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
}
