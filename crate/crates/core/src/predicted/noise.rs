use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AvgLoadPrediction;
use crate::error::{Error, Result};
use crate::model::Instance;

/// Multiplicative error levels: the average load is off by a factor of at
/// most `1 + delta` either way, and each length is under-predicted by at
/// most `1 + alpha` and over-predicted by at most `1 + lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    pub delta: f64,
    pub alpha: f64,
    pub lambda: f64,
}

impl NoiseParams {
    pub fn new(delta: f64, alpha: f64, lambda: f64) -> Result<Self> {
        for (name, value) in [("delta", delta), ("alpha", alpha), ("lambda", lambda)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "noise parameter {name} must be a non-negative number, got {value}"
                )));
            }
        }
        Ok(NoiseParams {
            delta,
            alpha,
            lambda,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.delta == 0.0 && self.alpha == 0.0 && self.lambda == 0.0
    }
}

/// Draws noisy predictions around the truth: `v'_avg` uniform in
/// `[v/(1+delta), v(1+delta)]` and each `l'` uniform in
/// `[l/(1+alpha), l(1+lambda)]`, clamped to at least 1. Deterministic in
/// `seed`.
pub fn apply_noise(truth: &Instance, noise: NoiseParams, seed: u64) -> Result<AvgLoadPrediction> {
    let noise = NoiseParams::new(noise.delta, noise.alpha, noise.lambda)?;
    let exact = AvgLoadPrediction::exact(truth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = exact.v_avg;
    let v_avg = rng.gen_range(v / (1.0 + noise.delta)..=v * (1.0 + noise.delta));
    let mut lengths = BTreeMap::new();
    for iv in truth.intervals() {
        let l = iv.len() as f64;
        let noisy = rng.gen_range(l / (1.0 + noise.alpha)..=l * (1.0 + noise.lambda));
        lengths.insert(iv.id(), noisy.max(1.0));
    }
    Ok(AvgLoadPrediction { v_avg, lengths })
}
