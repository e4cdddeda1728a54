//! Multi-class intrusion detection on IoT flow records: data preparation,
//! tree ensembles, nearest neighbours, cross-validated tuning and metrics.

pub mod data;
pub mod ensemble;
pub mod error;
pub mod metrics;
pub mod model;
pub mod neighbors;
pub mod par;
pub mod proba;
pub mod rng;
pub mod tree;
pub mod tuning;

pub use error::{Error, Result};
pub use model::{Model, ModelKind, ModelParams, ParamValue};
