//! Fitted models and predictions do not depend on the worker count.
#![cfg(feature = "parallel")]

mod common;

use common::{labels, matrix};
use iotsentry::data::stratified_split;
use iotsentry::ensemble::{AdaBoostConfig, ForestConfig, GbmConfig};
use iotsentry::neighbors::KnnConfig;
use iotsentry::tree::{MaxFeatures, TreeConfig};
use iotsentry::tuning::{grid_search, ParamGrid, Scoring};
use iotsentry::{Model, ModelKind, ModelParams, ParamValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Large enough to cross every parallel threshold.
fn dataset(n: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..6).map(|_| rng.gen_range(0.0..10.0f64).round()).collect())
        .collect();
    let y = x
        .iter()
        .map(|r| {
            let s = r[0] + 0.5 * r[1] - r[2];
            if rng.gen_bool(0.05) {
                rng.gen_range(0..4)
            } else if s < 0.0 {
                0
            } else if s < 5.0 {
                1
            } else if r[3] > 5.0 {
                2
            } else {
                3
            }
        })
        .collect();
    (x, y)
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn every_model_is_identical_across_thread_counts() {
    let (x, y) = dataset(20_000);
    let m = matrix(&x);
    let lv = labels(y, 4);
    let configs = [
        ModelParams::Dt(TreeConfig { seed: 4, ..TreeConfig::tuned() }),
        ModelParams::Rf(ForestConfig { n_estimators: 6, seed: 9, ..ForestConfig::tuned() }),
        ModelParams::Gbm(GbmConfig { n_estimators: 4, learning_rate: 0.1, seed: 2, ..GbmConfig::tuned() }),
        ModelParams::Ada(AdaBoostConfig { n_estimators: 5, ..AdaBoostConfig::tuned() }),
        ModelParams::Knn(KnnConfig::tuned()),
    ];
    let probe = m.select_rows(&(0..2_000).collect::<Vec<_>>());
    for params in configs {
        let serial = pool(1).install(|| Model::fit(&params, &m, &lv).unwrap());
        let wide = pool(4).install(|| Model::fit(&params, &m, &lv).unwrap());
        assert_eq!(serial, wide, "{}", params.kind());
        let ps = pool(1).install(|| serial.predict_proba(&probe).unwrap());
        let pw = pool(4).install(|| wide.predict_proba(&probe).unwrap());
        assert_eq!(ps, pw);
    }
}

#[test]
fn split_and_grid_search_are_identical_across_thread_counts() {
    let (x, y) = dataset(3_000);
    let m = matrix(&x);
    let lv = labels(y, 4);
    let a = pool(1).install(|| stratified_split(&m, &lv, 0.8, 42).unwrap());
    let b = pool(4).install(|| stratified_split(&m, &lv, 0.8, 42).unwrap());
    assert_eq!(a.train_indices, b.train_indices);

    let mut grid = ParamGrid::new();
    grid.insert("max_depth".into(), vec![ParamValue::Int(3), ParamValue::Int(6)]);
    grid.insert("max_features".into(), vec!["sqrt".into(), "all".into()]);
    let base = ModelParams::Dt(TreeConfig {
        max_features: MaxFeatures::Sqrt,
        ..TreeConfig::tuned()
    });
    let run = |t| {
        pool(t).install(|| grid_search(&base, &a.train.0, &a.train.1, &grid, 3, 42, Scoring::Accuracy).unwrap())
    };
    let (cv1, m1) = run(1);
    let (cv4, m4) = run(4);
    assert_eq!(cv1, cv4);
    assert_eq!(m1, m4);
    assert_eq!(cv1.model, ModelKind::Dt);
}
