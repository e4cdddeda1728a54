//! Tree ensembles: bagged forest, SAMME.R AdaBoost and multinomial gradient boosting.

mod adaboost;
mod forest;
mod gbm;

pub use adaboost::{samme_r_scores, AdaBoost, AdaBoostConfig, PROBA_FLOOR};
pub use forest::{plurality, ForestConfig, RandomForest};
pub use gbm::{multinomial_deviance, BinMapper, GbmConfig, GradientBoosting, RegressionNode, RegressionTree};

use crate::data::{FeatureMatrix, LabelVector};
use crate::error::{Error, Result};

pub(crate) fn check_xy(m: &FeatureMatrix, y: &LabelVector) -> Result<()> {
    if m.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            left: m.n_rows(),
            right: y.len(),
        });
    }
    if m.n_rows() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

pub(crate) fn require_two_classes(y: &LabelVector) -> Result<()> {
    let present = y.class_counts().iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::SingleClass(present));
    }
    Ok(())
}
