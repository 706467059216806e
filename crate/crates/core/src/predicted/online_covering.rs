use num_traits::Zero;

use super::cover_filter::CoverFilter;
use crate::error::{Error, Result};
use crate::model::{ratio, Instance, Interval, IntervalId, LoadMode, MachinePool, Rational, Schedule};
use crate::offline::CoverMode;
use crate::packers::FirstFit;

/// Predicted load vector with a finite lookahead: at time `now` only steps
/// `now .. now + window` may be queried.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadForecast {
    origin: i64,
    values: Vec<Rational>,
    window: i64,
    narrow_beta: Rational,
}

impl LoadForecast {
    /// `values[i]` predicts the load at step `origin + i`; steps outside are
    /// predicted empty. `narrow_beta` is the largest size among intervals of
    /// size at most 1/4.
    pub fn new(
        origin: i64,
        values: Vec<Rational>,
        window: i64,
        narrow_beta: Rational,
    ) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidParameter(format!(
                "forecast window must be at least 1, got {window}"
            )));
        }
        if let Some(v) = values.iter().find(|v| **v < Rational::zero()) {
            return Err(Error::InvalidParameter(format!("negative load forecast {v}")));
        }
        if narrow_beta < Rational::zero() || narrow_beta > ratio(1, 4) {
            return Err(Error::InvalidParameter(format!(
                "narrow size bound {narrow_beta} is outside [0, 1/4]"
            )));
        }
        Ok(LoadForecast {
            origin,
            values,
            window,
            narrow_beta,
        })
    }

    /// Perfect forecast: the raw load vector, a window as long as the longest
    /// interval, and the true narrow size bound.
    pub fn exact(instance: &Instance) -> Self {
        let v = instance.load_vector(LoadMode::Raw);
        LoadForecast {
            origin: instance.origin(),
            values: v.values(),
            window: instance.max_len(),
            narrow_beta: narrow_beta(instance),
        }
    }

    pub fn with_window(mut self, window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidParameter(format!(
                "forecast window must be at least 1, got {window}"
            )));
        }
        self.window = window;
        Ok(self)
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn narrow_beta(&self) -> Rational {
        self.narrow_beta
    }

    /// Predicted load at `t`, queried at time `now`.
    pub fn at(&self, now: i64, t: i64) -> Result<Rational> {
        if t >= now + self.window {
            return Err(Error::ForecastWindow {
                time: t,
                window_end: now + self.window,
            });
        }
        Ok(self.value(t))
    }

    /// Predicted load at `t` with no window check.
    pub fn value(&self, t: i64) -> Rational {
        let i = t - self.origin;
        if i < 0 || i as usize >= self.values.len() {
            Rational::zero()
        } else {
            self.values[i as usize]
        }
    }
}

/// Largest size among intervals of size at most 1/4 (0 if none).
pub fn narrow_beta(instance: &Instance) -> Rational {
    instance
        .intervals()
        .iter()
        .map(|iv| *iv.size())
        .filter(|s| *s <= ratio(1, 4))
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringPlacement {
    /// Sizes above 1/4 on non-uniform instances get a machine of their own.
    Dedicated,
    /// Accepted by the filter copy with this 1-based index.
    Copy(usize),
}

/// Online covering scheduler: a chain of cover filters, copy `i` seeing the
/// forecast lowered by `(i - 1)` covers' worth of load. Each copy packs what
/// it accepts with its own First-Fit; rejections pass down the chain.
pub struct OnlineCovering<'a> {
    forecast: &'a LoadForecast,
    mode: CoverMode,
    scale: i128,
    grain: Rational,
    /// Load one copy is guaranteed to absorb wherever demand remains.
    shift: Rational,
    filters: Vec<CoverFilter>,
    packers: Vec<FirstFit>,
    pairs: Vec<Vec<(IntervalId, u32)>>,
    dedicated: Vec<IntervalId>,
    decisions: Vec<(IntervalId, CoveringPlacement)>,
    now: i64,
}

impl<'a> OnlineCovering<'a> {
    /// Scheduler for the intervals of `instance`, which fixes the size unit
    /// and the uniform/non-uniform variant; intervals are still revealed one
    /// at a time through [`OnlineCovering::arrive`].
    pub fn new(instance: &Instance, forecast: &'a LoadForecast) -> Self {
        let (mode, grain, shift) = match instance.granularity() {
            Some(g) => (CoverMode::Uniform, ratio(1, g as i128), ratio(1, 1)),
            None => (
                CoverMode::NonUniform,
                ratio(1, instance.scale()),
                ratio(1, 2) - forecast.narrow_beta(),
            ),
        };
        OnlineCovering {
            forecast,
            mode,
            scale: instance.scale(),
            grain,
            shift,
            filters: Vec::new(),
            packers: Vec::new(),
            pairs: Vec::new(),
            dedicated: Vec::new(),
            decisions: Vec::new(),
            now: i64::MIN,
        }
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }

    /// Per-copy load guarantee: 1 for uniform sizes, `1/2 - beta_n` otherwise.
    pub fn shift(&self) -> Rational {
        self.shift
    }

    /// Filter copies created so far, copy 1 first.
    pub fn filters(&self) -> &[CoverFilter] {
        &self.filters
    }

    pub fn decisions(&self) -> &[(IntervalId, CoveringPlacement)] {
        &self.decisions
    }

    /// Prediction handed to copy `copy` (1-based) for step `t`:
    /// `(v'_t - (copy - 1) * shift)^+`.
    pub fn overestimate(&self, copy: usize, t: i64) -> Rational {
        overestimate(self.forecast.value(t), copy, self.shift)
    }

    pub fn arrive(&mut self, interval: &Interval) -> Result<CoveringPlacement> {
        let now = interval.start();
        if now < self.now {
            return Err(Error::Precondition(format!(
                "interval {} arrives at {now} after time {}",
                interval.id(),
                self.now
            )));
        }
        self.now = now;
        let placement = if self.mode == CoverMode::NonUniform && *interval.size() > ratio(1, 4) {
            self.dedicated.push(interval.id());
            CoveringPlacement::Dedicated
        } else {
            let w = (interval.size() * Rational::from_integer(self.scale)).to_integer();
            let mut copy = 0;
            loop {
                if copy == self.filters.len() {
                    self.filters
                        .push(CoverFilter::new(self.mode, self.scale, self.grain)?);
                    self.packers.push(FirstFit::new(self.scale));
                    self.pairs.push(Vec::new());
                }
                let (forecast, shift) = (self.forecast, self.shift);
                let accepted =
                    self.filters[copy].offer_units(interval.start(), interval.end(), w, |t| {
                        Ok(overestimate(forecast.at(now, t)?, copy + 1, shift))
                    })?;
                if accepted {
                    let m = self.packers[copy].place(interval.start(), interval.end(), w);
                    self.pairs[copy].push((interval.id(), m));
                    break;
                }
                copy += 1;
            }
            CoveringPlacement::Copy(copy + 1)
        };
        self.decisions.push((interval.id(), placement));
        Ok(placement)
    }

    /// Final schedule: copy 1's machines first, dedicated machines last.
    pub fn schedule(&self, instance: &Instance) -> Result<Schedule> {
        let mut pool = MachinePool::new();
        for group in &self.pairs {
            pool.add_group(group.iter().copied());
        }
        for &id in &self.dedicated {
            pool.dedicated(id);
        }
        pool.into_schedule(instance)
    }
}

fn overestimate(v: Rational, copy: usize, shift: Rational) -> Rational {
    let lowered = v - shift * Rational::from_integer(copy as i128 - 1);
    lowered.max(Rational::zero())
}

/// Runs the online covering scheduler over `instance` in arrival order.
pub fn online_covering_algorithm(instance: &Instance, forecast: &LoadForecast) -> Result<Schedule> {
    let mut alg = OnlineCovering::new(instance, forecast);
    for p in instance.arrival_order() {
        alg.arrive(&instance.intervals()[p])?;
    }
    alg.schedule(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate_schedule;

    fn inst(list: &[(i64, i64, Rational)]) -> Instance {
        Instance::new(
            list.iter()
                .enumerate()
                .map(|(i, &(s, e, w))| Interval::new(i as u32 + 1, s, e, w).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_copies_each_take_about_one_unit() {
        let h = ratio(1, 2);
        let instance = inst(&[(0, 4, h), (0, 4, h), (0, 4, h), (0, 4, h)]);
        let forecast = LoadForecast::exact(&instance);
        let mut alg = OnlineCovering::new(&instance, &forecast);
        let mut placements = Vec::new();
        for iv in instance.intervals() {
            placements.push(alg.arrive(iv).unwrap());
        }
        // Copy 1 sees v' = 2: rejects 1/2 and 1, accepts at 1. Copy 2 sees 1.
        assert_eq!(
            placements,
            vec![
                CoveringPlacement::Copy(2),
                CoveringPlacement::Copy(2),
                CoveringPlacement::Copy(1),
                CoveringPlacement::Copy(1),
            ]
        );
        let s = alg.schedule(&instance).unwrap();
        validate_schedule(&instance, &s).unwrap();
        assert_eq!(s.cost().unwrap(), 8);
    }

    #[test]
    fn wide_items_are_dedicated() {
        let instance = inst(&[(0, 3, ratio(1, 3)), (0, 2, ratio(1, 8))]);
        let forecast = LoadForecast::exact(&instance);
        assert_eq!(forecast.narrow_beta(), ratio(1, 8));
        let mut alg = OnlineCovering::new(&instance, &forecast);
        assert_eq!(
            alg.arrive(&instance.intervals()[0]).unwrap(),
            CoveringPlacement::Dedicated
        );
        assert_eq!(
            alg.arrive(&instance.intervals()[1]).unwrap(),
            CoveringPlacement::Copy(1)
        );
        assert_eq!(alg.shift(), ratio(3, 8));
        let s = alg.schedule(&instance).unwrap();
        assert_eq!(s.machine_count(), 2);
    }

    #[test]
    fn short_window_is_an_error() {
        let instance = inst(&[(0, 5, ratio(1, 2))]);
        let forecast = LoadForecast::exact(&instance).with_window(3).unwrap();
        let err = online_covering_algorithm(&instance, &forecast).unwrap_err();
        assert_eq!(
            err,
            Error::ForecastWindow {
                time: 3,
                window_end: 3
            }
        );
    }

    #[test]
    fn forecast_rejects_bad_parameters() {
        assert!(LoadForecast::new(0, vec![ratio(-1, 2)], 3, ratio(0, 1)).is_err());
        assert!(LoadForecast::new(0, vec![], 0, ratio(0, 1)).is_err());
        assert!(LoadForecast::new(0, vec![], 2, ratio(1, 2)).is_err());
    }

    #[test]
    fn zero_forecast_accepts_in_first_copy() {
        let instance = inst(&[(0, 2, ratio(1, 2)), (0, 2, ratio(1, 2)), (0, 2, ratio(1, 2))]);
        let forecast = LoadForecast::new(0, vec![], 10, ratio(0, 1)).unwrap();
        let s = online_covering_algorithm(&instance, &forecast).unwrap();
        validate_schedule(&instance, &s).unwrap();
        assert_eq!(s.machine_count(), 2);
    }
}
