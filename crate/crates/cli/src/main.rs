use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use iotsentry::data::TaxonomyLevel;
use iotsentry_cli::config::{parse_models, PipelineConfig};
use iotsentry_cli::pipeline::{
    failures, run_evaluate, run_preprocess, run_report, run_train, run_tune, Outcomes,
};

/// Train, tune and evaluate intrusion classifiers on IoT flow records.
#[derive(Parser)]
#[command(name = "iotsentry", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for every stochastic step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated subset of dt,rf,gbm,ada,knn.
    #[arg(long, global = true)]
    models: Option<String>,
    /// Label granularity: attack34, category10 or binary2.
    #[arg(long, global = true)]
    level: Option<TaxonomyLevel>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Dataset CSV file or directory of CSV files.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Impute, encode, split and write train/test files.
    Preprocess,
    /// Fit each model with its configured hyperparameters.
    Train,
    /// Grid-search each model with stratified k-fold cross-validation.
    Tune,
    /// Score saved models on the test split.
    Evaluate,
    /// Summarize evaluation and tuning results.
    Report,
    /// Preprocess, train (or tune), evaluate and report in one go.
    Run {
        /// Tune instead of training with fixed hyperparameters.
        #[arg(long)]
        tune: bool,
    },
}

impl Common {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(m) = &self.models {
            cfg.models = parse_models(m)?;
        }
        if let Some(l) = self.level {
            cfg.level = l;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(d) = &self.data {
            cfg.dataset = Some(d.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report<T>(stage: &str, outcomes: &Outcomes<T>, describe: impl Fn(&T) -> String) -> usize {
    for (kind, r) in outcomes {
        match r {
            Ok(v) => println!("{stage} {kind}: {}", describe(v)),
            Err(e) => eprintln!("{stage} {kind} failed: {e:#}"),
        }
    }
    failures(outcomes)
}

fn run(cli: Cli) -> Result<usize> {
    let cfg = cli.common.resolve()?;
    let mut failed = 0;
    let preprocess = |cfg: &PipelineConfig| -> Result<()> {
        let s = run_preprocess(cfg)?;
        println!(
            "preprocess: {} rows read, {} train / {} test rows in {}",
            s.ingest.rows_read,
            s.train_rows,
            s.test_rows,
            cfg.out.display()
        );
        Ok(())
    };
    let train = |cfg: &PipelineConfig| -> Result<usize> {
        Ok(report("train", &run_train(cfg)?, |p| p.display().to_string()))
    };
    let tune = |cfg: &PipelineConfig| -> Result<usize> {
        Ok(report("tune", &run_tune(cfg)?, |cv| {
            let b = cv.best();
            format!("best mean {} {:.4} ± {:.4} over {} cells", cv.scoring.as_str(), b.mean, b.std, cv.records.len())
        }))
    };
    let evaluate = |cfg: &PipelineConfig| -> Result<usize> {
        Ok(report("evaluate", &run_evaluate(cfg)?, |e| {
            format!("accuracy {:.4}, weighted F1 {:.4}", e.accuracy, e.weighted_avg.f1)
        }))
    };
    let summarize = |cfg: &PipelineConfig| -> Result<()> {
        run_report(cfg)?;
        println!("report: {}", cfg.out.join("report.md").display());
        Ok(())
    };
    match cli.command {
        Command::Preprocess => preprocess(&cfg)?,
        Command::Train => failed += train(&cfg)?,
        Command::Tune => failed += tune(&cfg)?,
        Command::Evaluate => failed += evaluate(&cfg)?,
        Command::Report => summarize(&cfg)?,
        Command::Run { tune: with_tuning } => {
            preprocess(&cfg)?;
            failed += if with_tuning { tune(&cfg)? } else { train(&cfg)? };
            failed += evaluate(&cfg)?;
            summarize(&cfg)?;
        }
    }
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = iotsentry_cli::configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
