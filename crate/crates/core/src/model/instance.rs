use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};

use super::{
    common_scale, compute_load_vector, to_units, Interval, IntervalId, LoadMode, LoadVector,
    Rational,
};
use crate::error::{Error, Result};

/// A validated set of intervals plus the statistics the algorithms branch on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    intervals: Vec<Interval>,
    units: Vec<i128>,
    scale: i128,
    index: HashMap<IntervalId, usize>,
    granularity: Option<u32>,
    origin: i64,
    end: i64,
    min_len: i64,
    max_len: i64,
    beta: Rational,
}

impl Instance {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(intervals.len());
        for iv in &intervals {
            if !seen.insert(iv.id()) {
                return Err(Error::DuplicateInterval(iv.id()));
            }
        }
        let scale = common_scale(intervals.iter().map(Interval::size))?;
        let units = intervals.iter().map(|iv| to_units(iv.size(), scale)).collect();
        let index = intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| (iv.id(), i))
            .collect();
        let granularity = uniform_granularity(&intervals);
        let origin = intervals.iter().map(Interval::start).min().unwrap_or(0);
        let end = intervals.iter().map(Interval::end).max().unwrap_or(origin);
        let min_len = intervals.iter().map(Interval::len).min().unwrap_or(1);
        let max_len = intervals.iter().map(Interval::len).max().unwrap_or(1);
        let beta = intervals
            .iter()
            .map(|iv| *iv.size())
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(Instance {
            intervals,
            units,
            scale,
            index,
            granularity,
            origin,
            end,
            min_len,
            max_len,
            beta,
        })
    }

    pub fn empty() -> Self {
        Instance::new(Vec::new()).expect("empty instance is valid")
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn get(&self, id: IntervalId) -> Option<&Interval> {
        self.index.get(&id).map(|&i| &self.intervals[i])
    }

    pub(crate) fn position(&self, id: IntervalId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Size of the interval at `idx` in multiples of `1 / scale()`.
    pub(crate) fn units(&self, idx: usize) -> i128 {
        self.units[idx]
    }

    /// Common denominator of all sizes (always a multiple of 4).
    pub fn scale(&self) -> i128 {
        self.scale
    }

    /// `Some(g)` iff every size is exactly `1/g`.
    pub fn granularity(&self) -> Option<u32> {
        self.granularity
    }

    pub fn is_uniform(&self) -> bool {
        self.granularity.is_some()
    }

    /// Ratio of the longest to the shortest interval length (1 when empty).
    pub fn mu(&self) -> Rational {
        Rational::new(self.max_len as i128, self.min_len as i128)
    }

    pub fn mu_f64(&self) -> f64 {
        self.max_len as f64 / self.min_len as f64
    }

    pub fn min_len(&self) -> i64 {
        self.min_len
    }

    pub fn max_len(&self) -> i64 {
        self.max_len
    }

    /// Largest interval size (0 when empty).
    pub fn beta(&self) -> Rational {
        self.beta
    }

    /// Earliest start time; the load vector is indexed from here.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Latest end time.
    pub fn end(&self) -> i64 {
        self.end
    }

    /// Horizon length `T` after shifting the earliest start to 0.
    pub fn horizon(&self) -> i64 {
        self.end - self.origin
    }

    pub fn load_vector(&self, mode: LoadMode) -> LoadVector {
        compute_load_vector(self, mode)
    }

    /// Intervals matching `keep`, as a fresh instance.
    pub fn filter(&self, mut keep: impl FnMut(&Interval) -> bool) -> Instance {
        let kept = self.intervals.iter().filter(|iv| keep(iv)).cloned().collect();
        Instance::new(kept).expect("subset of a valid instance is valid")
    }

    /// Intervals at the given positions, as a fresh instance.
    pub(crate) fn select(&self, positions: &[usize]) -> Instance {
        let kept = positions.iter().map(|&i| self.intervals[i].clone()).collect();
        Instance::new(kept).expect("subset of a valid instance is valid")
    }

    /// Positions sorted by `(start, id)`: the arrival order every online
    /// scheduler consumes.
    pub(crate) fn arrival_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.intervals.len()).collect();
        order.sort_by_key(|&i| (self.intervals[i].start(), self.intervals[i].id()));
        order
    }
}

fn uniform_granularity(intervals: &[Interval]) -> Option<u32> {
    let first = intervals.first()?.size();
    if !first.numer().is_one() {
        return None;
    }
    if intervals.iter().any(|iv| iv.size() != first) {
        return None;
    }
    u32::try_from(*first.denom()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn iv(id: u32, s: i64, e: i64, num: i128, den: i128) -> Interval {
        Interval::new(id, s, e, ratio(num, den)).unwrap()
    }

    #[test]
    fn derived_statistics() {
        let inst = Instance::new(vec![iv(1, 2, 4, 1, 2), iv(2, 3, 9, 1, 3)]).unwrap();
        assert_eq!(inst.mu(), ratio(3, 1));
        assert_eq!(inst.beta(), ratio(1, 2));
        assert_eq!(inst.origin(), 2);
        assert_eq!(inst.horizon(), 7);
        assert_eq!(inst.granularity(), None);
        assert_eq!(inst.scale(), 12);
        assert_eq!(inst.units(1), 4);
    }

    #[test]
    fn detects_uniform_granularity() {
        let inst = Instance::new(vec![iv(1, 0, 4, 1, 2), iv(2, 0, 2, 2, 4)]).unwrap();
        assert_eq!(inst.granularity(), Some(2));
        let inst = Instance::new(vec![iv(1, 0, 4, 2, 5), iv(2, 0, 2, 2, 5)]).unwrap();
        assert_eq!(inst.granularity(), None);
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = Instance::new(vec![iv(1, 0, 4, 1, 2), iv(1, 0, 2, 1, 2)]).unwrap_err();
        assert_eq!(err, Error::DuplicateInterval(IntervalId(1)));
    }

    #[test]
    fn empty_instance_is_degenerate_but_valid() {
        let inst = Instance::empty();
        assert_eq!(inst.horizon(), 0);
        assert_eq!(inst.mu(), ratio(1, 1));
        assert_eq!(inst.beta(), ratio(0, 1));
    }
}
