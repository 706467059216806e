//! Online schedulers that use predictions: one driven by predicted lengths
//! and a predicted average load, one driven by a predicted load vector.

mod classes;
mod combined;
mod cover_filter;
mod noise;
mod online_covering;

use std::collections::BTreeMap;

pub use classes::{classify, LengthClasses, CLASS_TOLERANCE};
pub use combined::{combined_algorithm, combined_with_trace, CombinedTrace, Route};
pub use cover_filter::CoverFilter;
pub use noise::{apply_noise, NoiseParams};
pub use online_covering::{
    narrow_beta, online_covering_algorithm, CoveringPlacement, LoadForecast, OnlineCovering,
};

use crate::model::{to_f64, Instance, IntervalId, LoadMode};

/// Predicted average load plus a predicted length for every interval.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgLoadPrediction {
    pub v_avg: f64,
    pub lengths: BTreeMap<IntervalId, f64>,
}

impl AvgLoadPrediction {
    /// The true values: average of the ceiled load vector and true lengths.
    pub fn exact(instance: &Instance) -> Self {
        let v_avg = to_f64(&instance.load_vector(LoadMode::Ceiled).v_avg());
        let lengths = instance
            .intervals()
            .iter()
            .map(|iv| (iv.id(), iv.len() as f64))
            .collect();
        AvgLoadPrediction { v_avg, lengths }
    }
}

/// What a predicted scheduler is given.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictionBundle {
    AvgLoad(AvgLoadPrediction),
    LoadVector(LoadForecast),
}
