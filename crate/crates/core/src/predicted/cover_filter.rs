use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{from_units, Interval, Rational};
use crate::offline::CoverMode;

/// Per-step integer accumulator that grows to whatever steps are touched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Timeline {
    origin: i64,
    units: Vec<i128>,
}

impl Timeline {
    pub fn add(&mut self, start: i64, end: i64, w: i128) {
        if start >= end {
            return;
        }
        if self.units.is_empty() {
            self.origin = start;
        } else if start < self.origin {
            let shift = (self.origin - start) as usize;
            self.units.splice(0..0, std::iter::repeat(0).take(shift));
            self.origin = start;
        }
        let hi = (end - self.origin) as usize;
        if self.units.len() < hi {
            self.units.resize(hi, 0);
        }
        for u in &mut self.units[(start - self.origin) as usize..hi] {
            *u += w;
        }
    }

    pub fn get(&self, t: i64) -> i128 {
        let i = t - self.origin;
        if i < 0 || i as usize >= self.units.len() {
            0
        } else {
            self.units[i as usize]
        }
    }
}

/// Online filter that accepts an interval iff the predicted load minus the
/// load it has already rejected is at most `theta` at some step of the
/// interval. Accepted intervals form a cover of what was offered.
#[derive(Debug, Clone)]
pub struct CoverFilter {
    mode: CoverMode,
    scale: i128,
    theta: i128,
    /// Predictions are rounded down to multiples of this many units.
    grain: i128,
    accepted: Timeline,
    rejected: Timeline,
    offered: Timeline,
}

impl CoverFilter {
    /// `scale` is the number of units per unit of capacity; it must be a
    /// multiple of 2 and of every size denominator that will be offered.
    /// In uniform mode `grain` is the common size (`1/g`) the predictions are
    /// rounded down to; non-uniform filters use exact predictions.
    pub fn new(mode: CoverMode, scale: i128, grain: Rational) -> Result<Self> {
        if scale <= 0 || scale % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "filter scale {scale} must be a positive even number"
            )));
        }
        let theta = match mode {
            CoverMode::Uniform => scale,
            CoverMode::NonUniform => scale / 2,
        };
        let grain = match mode {
            CoverMode::Uniform => units_of(&grain, scale)?,
            CoverMode::NonUniform => 1,
        };
        if grain <= 0 {
            return Err(Error::InvalidParameter("filter grain must be positive".into()));
        }
        Ok(CoverFilter {
            mode,
            scale,
            theta,
            grain,
            accepted: Timeline::default(),
            rejected: Timeline::default(),
            offered: Timeline::default(),
        })
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }

    /// Acceptance threshold: 1 for uniform sizes, 1/2 otherwise.
    pub fn theta(&self) -> Rational {
        from_units(self.theta, self.scale)
    }

    /// Prediction as the filter sees it: rounded down to the grain.
    pub fn rounded(&self, predicted: &Rational) -> Rational {
        from_units(self.round_units(predicted), self.scale)
    }

    fn round_units(&self, predicted: &Rational) -> i128 {
        if predicted <= &Rational::zero() {
            return 0;
        }
        let u = (predicted * Rational::from_integer(self.scale)).floor().to_integer();
        u.div_euclid(self.grain) * self.grain
    }

    /// Offers `interval`; `predicted(t)` is the load estimate at step `t`.
    /// Every step of the interval is evaluated, so forecast errors surface
    /// even when an early step already accepts.
    pub fn offer(
        &mut self,
        interval: &Interval,
        predicted: impl FnMut(i64) -> Result<Rational>,
    ) -> Result<bool> {
        let w = units_of(interval.size(), self.scale)?;
        self.offer_units(interval.start(), interval.end(), w, predicted)
    }

    pub(crate) fn offer_units(
        &mut self,
        start: i64,
        end: i64,
        w: i128,
        mut predicted: impl FnMut(i64) -> Result<Rational>,
    ) -> Result<bool> {
        let mut accept = false;
        for t in start..end {
            let v = self.round_units(&predicted(t)?);
            if v - self.rejected.get(t) <= self.theta {
                accept = true;
            }
        }
        if accept {
            self.accepted.add(start, end, w);
        } else {
            self.rejected.add(start, end, w);
        }
        self.offered.add(start, end, w);
        Ok(accept)
    }

    pub fn accepted_at(&self, t: i64) -> Rational {
        from_units(self.accepted.get(t), self.scale)
    }

    pub fn rejected_at(&self, t: i64) -> Rational {
        from_units(self.rejected.get(t), self.scale)
    }

    pub fn offered_at(&self, t: i64) -> Rational {
        from_units(self.offered.get(t), self.scale)
    }
}

fn units_of(size: &Rational, scale: i128) -> Result<i128> {
    let u = size * Rational::from_integer(scale);
    if !u.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "size {size} is not a multiple of 1/{scale}"
        )));
    }
    Ok(u.to_integer())
}
