//! Forest training and neighbour queries on one worker versus the default
//! pool. Build with `--no-default-features` for the pure sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iotsentry::data::{FeatureMatrix, LabelVector, TaxonomyLevel};
use iotsentry::ensemble::{ForestConfig, RandomForest};
use iotsentry::neighbors::{KnnClassifier, KnnConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(n: usize, features: usize, classes: usize) -> (FeatureMatrix, LabelVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..features).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    let ids = rows
        .iter()
        .map(|r| ((r[0] * classes as f64) as usize + (r[1] > 0.7) as usize) % classes)
        .collect();
    let names = (0..classes).map(|c| format!("c{c}")).collect();
    (
        FeatureMatrix::from_rows(&rows).unwrap(),
        LabelVector::new(ids, names, TaxonomyLevel::Attack34).unwrap(),
    )
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let label = format!("{}-threads", all.current_num_threads());
    vec![("1-thread".into(), one), (label, all)]
}

#[cfg(feature = "parallel")]
fn run<T>(pool: &(String, rayon::ThreadPool), f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    pool.1.install(f)
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(String, ())> {
    vec![("sequential".into(), ())]
}

#[cfg(not(feature = "parallel"))]
fn run<T>(_: &(String, ()), f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    f()
}

fn forest_fit(c: &mut Criterion) {
    let (m, y) = dataset(20_000, 46, 10);
    let cfg = ForestConfig {
        n_estimators: 32,
        ..ForestConfig::tuned()
    };
    let mut group = c.benchmark_group("forest_fit");
    group.sample_size(10);
    for pool in pools() {
        group.bench_function(BenchmarkId::from_parameter(&pool.0), |b| {
            b.iter(|| run(&pool, || RandomForest::fit(&m, &y, &cfg).unwrap()))
        });
    }
    group.finish();
}

fn knn_predict(c: &mut Criterion) {
    let (m, y) = dataset(20_000, 46, 10);
    let (q, _) = dataset(1_000, 46, 10);
    let knn = KnnClassifier::fit(&m, &y, &KnnConfig::tuned()).unwrap();
    let mut group = c.benchmark_group("knn_predict");
    group.sample_size(10);
    for pool in pools() {
        group.bench_function(BenchmarkId::from_parameter(&pool.0), |b| {
            b.iter(|| run(&pool, || knn.predict(&q).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, forest_fit, knn_predict);
criterion_main!(benches);
