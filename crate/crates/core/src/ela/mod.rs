//! Sampling and exploratory landscape analysis features.

mod features;
mod lhs;
mod meta;
mod nbc;
mod normalize;

pub use features::{compute_features, FeatureVector, FEATURE_NAMES};
pub use lhs::{lhs_design, lhs_sample, Provenance, SampleSet};
pub use meta::{linear_fit, meta_model_r2, quadratic_fit, Fit};
pub use nbc::{nearest_better, nearest_better_ratio, NearestBetter};
pub use normalize::{normalize_features, NormalizedFeatures};

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}
