//! Batch pipeline around the `iotsentry` library: configuration, stage
//! runners, model persistence and figure output.

pub mod artifact;
pub mod config;
pub mod figures;
pub mod io;
pub mod pipeline;

use anyhow::{bail, Result};

pub const THREADS_ENV: &str = "IOTSENTRY_THREADS";

/// Parses a worker cap; unset or empty means no cap.
pub fn parse_threads(value: Option<&str>) -> Result<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
    }
}

/// Applies `IOTSENTRY_THREADS` to the global worker pool. Returns the cap in
/// effect, if any. Must run before any parallel work.
pub fn configure_threads() -> Result<Option<usize>> {
    let cap = parse_threads(std::env::var(THREADS_ENV).ok().as_deref())?;
    #[cfg(feature = "parallel")]
    if let Some(n) = cap {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow::anyhow!("cannot size the worker pool: {e}"))?;
    }
    Ok(cap)
}
