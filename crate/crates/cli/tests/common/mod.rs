//! Synthetic flow records with the real column layout and attack names.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use iotsentry::data::CICIOT2023_FEATURES;
use iotsentry_cli::config::PipelineConfig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Attack names and their share of the rows.
pub const CLASSES: [(&str, f64); 6] = [
    ("DDoS-ICMP_Flood", 0.35),
    ("DoS-UDP_Flood", 0.25),
    ("Mirai-udpplain", 0.15),
    ("BenignTraffic", 0.12),
    ("Recon-PortScan", 0.08),
    ("DictionaryBruteForce", 0.05),
];

#[derive(Debug, Clone, Copy)]
pub struct Flows {
    pub rows: usize,
    pub seed: u64,
    /// Standard deviation of the noise around each class centre; centres are
    /// at least one unit apart on every informative column.
    pub noise: f64,
    /// Probability that a feature cell is left empty.
    pub missing: f64,
}

impl Flows {
    pub fn noisy(rows: usize) -> Self {
        Self { rows, seed: 1, noise: 0.9, missing: 0.01 }
    }

    pub fn separable(rows: usize) -> Self {
        Self { rows, seed: 2, noise: 0.05, missing: 0.0 }
    }

    /// Class of each row before shuffling: contiguous blocks sized by share.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut ids = Vec::with_capacity(self.rows);
        let mut cum = 0.0;
        for (c, (_, share)) in CLASSES.iter().enumerate() {
            cum += share;
            let end = if c + 1 == CLASSES.len() { self.rows } else { (cum * self.rows as f64).round() as usize };
            ids.resize(end.max(ids.len()), c);
        }
        ids
    }

    pub fn csv(&self) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut ids = self.class_ids();
        ids.shuffle(&mut rng);
        let mut out = CICIOT2023_FEATURES.join(",");
        out.push_str(",label\n");
        for &c in &ids {
            for j in 0..CICIOT2023_FEATURES.len() {
                let centre = ((c * 7 + j * 3) % 11) as f64;
                if rng.gen_bool(self.missing) {
                    out.push(',');
                    continue;
                }
                let z: f64 = rng.gen_range(-1.0..1.0) + rng.gen_range(-1.0..1.0);
                out.push_str(&format!("{},", centre + self.noise * z));
            }
            out.push_str(CLASSES[c].0);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, dir: &Path) -> PathBuf {
        let path = dir.join(format!("flows_{}_{}.csv", self.rows, self.seed));
        std::fs::write(&path, self.csv()).unwrap();
        path
    }
}

/// Small, fast settings for every model kind.
pub fn quick_config(data: PathBuf, out: PathBuf) -> PipelineConfig {
    let text = r#"
        [params.rf]
        n_estimators = 12
        [params.gbm]
        n_estimators = 15
        learning_rate = 0.2
        max_depth = 3
        [params.ada]
        n_estimators = 10
        learning_rate = 0.5
    "#;
    let mut cfg = PipelineConfig::from_toml(text).unwrap();
    cfg.dataset = Some(data);
    cfg.out = out;
    cfg
}
