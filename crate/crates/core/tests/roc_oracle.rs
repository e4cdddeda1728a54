//! ROC AUC against the Mann–Whitney rank statistic.

use iotsentry::metrics::{roc_points, trapezoid};
use proptest::prelude::*;
use reference::auc::mann_whitney;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn auc_equals_rank_statistic(
        data in prop::collection::vec((any::<bool>(), 0u8..12), 2..200),
    ) {
        let positive: Vec<bool> = data.iter().map(|d| d.0).collect();
        let scores: Vec<f64> = data.iter().map(|d| d.1 as f64 / 11.0).collect();
        prop_assume!(positive.iter().any(|&p| p) && positive.iter().any(|&p| !p));
        let pts = roc_points(&positive, &scores).unwrap();
        prop_assert_eq!(pts[0], (0.0, 0.0));
        prop_assert_eq!(*pts.last().unwrap(), (1.0, 1.0));
        prop_assert!(pts.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
        let auc = trapezoid(&pts);
        prop_assert!((auc - mann_whitney(&positive, &scores)).abs() < 1e-12);
    }
}
