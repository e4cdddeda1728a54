#![allow(dead_code)]

use iotsentry::data::{FeatureMatrix, LabelVector, TaxonomyLevel};
use proptest::prelude::*;

pub fn labels(ids: Vec<usize>, n_classes: usize) -> LabelVector {
    let names = (0..n_classes).map(|c| format!("c{c}")).collect();
    LabelVector::new(ids, names, TaxonomyLevel::Attack34).unwrap()
}

pub fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::from_rows(rows).unwrap()
}

/// Small labelled datasets on a coarse value grid, so ties are common.
pub fn small_dataset(
    max_rows: usize,
    max_features: usize,
    n_classes: usize,
) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    (2..=max_rows, 1..=max_features).prop_flat_map(move |(n, f)| {
        (
            prop::collection::vec(prop::collection::vec((0i32..6).prop_map(|v| v as f64 * 0.5), f), n),
            prop::collection::vec(0..n_classes, n),
        )
    })
}

/// Datasets with continuous features; distinct values almost surely.
pub fn continuous_dataset(
    rows: std::ops::RangeInclusive<usize>,
    n_features: usize,
    n_classes: usize,
) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    rows.prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(-100.0f64..100.0, n_features), n),
            prop::collection::vec(0..n_classes, n),
        )
    })
}
