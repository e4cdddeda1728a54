//! Neighbours by sorting every training row.

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
}

/// Indices of the `k` closest rows, ordered by (distance, index).
pub fn neighbors(train: &[Vec<f64>], q: &[f64], k: usize) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = train.iter().enumerate().map(|(i, r)| (l1(r, q), i)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    d.into_iter().take(k).map(|p| p.1).collect()
}

/// Vote shares; with inverse-distance weights, exact matches take all the
/// weight in equal parts.
pub fn proba(
    train: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    q: &[f64],
    k: usize,
    inverse_distance: bool,
) -> Vec<f64> {
    let nb = neighbors(train, q, k);
    let mut s = vec![0.0; n_classes];
    let exact: Vec<usize> = nb.iter().copied().filter(|&i| l1(&train[i], q) == 0.0).collect();
    if !inverse_distance {
        nb.iter().for_each(|&i| s[y[i]] += 1.0);
    } else if !exact.is_empty() {
        exact.iter().for_each(|&i| s[y[i]] += 1.0);
    } else {
        nb.iter().for_each(|&i| s[y[i]] += 1.0 / l1(&train[i], q));
    }
    let t: f64 = s.iter().sum();
    s.into_iter().map(|v| v / t).collect()
}
