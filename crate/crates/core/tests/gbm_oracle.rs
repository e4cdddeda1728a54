//! Training deviance against the exact-sort boosting reference.

mod common;

use common::{labels, matrix};
use iotsentry::ensemble::{GbmConfig, GradientBoosting};
use reference::gbm;

#[test]
fn deviance_matches_exact_reference_per_stage() {
    let n = 30;
    let k = 3;
    let x: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = ((i * 7919) % 101) as f64 / 10.0;
            let b = ((i * 104_729) % 97) as f64 / 7.0;
            vec![a, b]
        })
        .collect();
    let y: Vec<usize> = x
        .iter()
        .enumerate()
        .map(|(i, r)| if r[0] + 0.3 * r[1] < 6.0 { 0 } else if i % 4 == 0 { 2 } else { 1 + (r[1] > 6.0) as usize })
        .collect();
    let cfg = GbmConfig {
        n_estimators: 10,
        learning_rate: 0.3,
        max_depth: 3,
        subsample: 1.0,
        min_samples_leaf: 1,
        max_bins: 255,
        seed: 5,
    };
    let (_, trace) =
        GradientBoosting::fit_traced(&matrix(&x), &labels(y.clone(), k), &cfg).unwrap();
    let want = gbm::deviance_trajectory(&x, &y, k, cfg.n_estimators, cfg.learning_rate, cfg.max_depth);
    assert_eq!(trace.len(), want.len());
    for (s, (a, b)) in trace.iter().zip(&want).enumerate() {
        assert!((a - b).abs() < 1e-6, "stage {s}: {a} vs {b}");
    }
    assert!(want.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}
