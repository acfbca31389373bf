//! Good/bad permutation classification against a partitioned family and the
//! Monte Carlo estimators built on it.

mod classify;
mod mc;

use serde::Serialize;

use crate::counting::CountError;
use crate::randmodels::RandModelError;

pub use classify::{classify, Classification, GroupRef, Witness};
pub use mc::{
    gbar_star_exact, mc_bad_fraction, mc_expected_h, mc_expected_h_family, mc_fbar_and_bound, mc_gbar_star,
    ratio_report, union_bound_bad_fraction, EstimateReport, GStarEstimate, HEstimate, RatioReport, MIN_SAMPLES,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimateError {
    #[error("window {0:?} is not owned by any element or leftover edge of the family")]
    FamilyIncomplete(Vec<usize>),
    #[error("no good permutation among {0} samples")]
    InsufficientGoodSamples(usize),
    #[error("family kind mismatch: {0}")]
    FamilyKindMismatch(String),
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("permutation has {got} vertices, family has {n}")]
    WrongOrder { got: usize, n: usize },
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    RandModel(#[from] RandModelError),
}

/// Sample mean with a 3-sigma normal interval half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub ci3: f64,
    pub count: u64,
}

impl MeanEstimate {
    pub fn from_sums(count: u64, sum: f64, sumsq: f64) -> Self {
        if count == 0 {
            return Self {
                mean: f64::NAN,
                ci3: f64::NAN,
                count,
            };
        }
        let c = count as f64;
        let mean = sum / c;
        let var = if count > 1 {
            ((sumsq - c * mean * mean) / (c - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            mean,
            ci3: 3.0 * (var / c).sqrt(),
            count,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.mean).abs() <= self.ci3
    }
}
