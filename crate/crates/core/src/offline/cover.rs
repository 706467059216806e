use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{
    load_units, pick_intersecting, ratio, to_units, Candidate, Instance, LoadVector, LoadMode,
    Rational,
};

/// Which cover a round of the covering algorithm extracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Sizes all `1/g`: a `[1, 2]`-cover.
    Uniform,
    /// Sizes below `1/2`: a `[1/2 - beta, 1]`-cover.
    NonUniform,
}

/// Subset of a working instance whose load stays within `[min(v_t, lower),
/// upper]` at every step.
#[derive(Debug, Clone)]
pub struct Cover {
    pub members: Instance,
    pub lower: Rational,
    pub upper: Rational,
    /// Positions of the members in the working instance.
    pub(crate) positions: Vec<usize>,
}

impl Cover {
    pub fn load(&self) -> LoadVector {
        self.members.load_vector(LoadMode::Raw)
    }
}

/// Extracts a cover, choosing the mode from the instance's sizes.
pub fn extract_cover(working: &Instance) -> Result<Cover> {
    let mode = if working.is_uniform() {
        CoverMode::Uniform
    } else {
        CoverMode::NonUniform
    };
    extract_cover_in(working, mode)
}

/// Starts from the whole set and, while some step carries more than the upper
/// bound, removes an interval whose own span stays above half of it.
pub fn extract_cover_in(working: &Instance, mode: CoverMode) -> Result<Cover> {
    let beta = working.beta();
    let (lower, upper) = match mode {
        CoverMode::Uniform => (Rational::one(), ratio(2, 1)),
        CoverMode::NonUniform => {
            if beta >= ratio(1, 2) {
                return Err(Error::Precondition(format!(
                    "non-uniform cover needs sizes below 1/2, largest is {beta}"
                )));
            }
            (ratio(1, 2) - beta, Rational::one())
        }
    };
    if working.is_empty() {
        return Ok(Cover {
            members: Instance::empty(),
            lower,
            upper,
            positions: Vec::new(),
        });
    }
    let scale = working.scale();
    let upper_units = to_units(&upper, scale);
    let origin = working.origin();
    let all: Vec<usize> = (0..working.len()).collect();
    let mut load = load_units(working, &all, origin, working.horizon() as usize);
    let mut kept = vec![true; working.len()];
    let ivs = working.intervals();

    let mut t = 0usize;
    while t < load.len() {
        if load[t] <= upper_units {
            t += 1;
            continue;
        }
        let step = origin + t as i64;
        let cands: Vec<Candidate> = (0..working.len())
            .filter(|&p| kept[p] && ivs[p].contains(step))
            .map(|p| Candidate {
                key: p,
                id: ivs[p].id(),
                start: ivs[p].start(),
                end: ivs[p].end(),
                units: working.units(p),
            })
            .collect();
        let pick = pick_intersecting(&cands, upper_units)
            .expect("load above the bound guarantees a removable interval");
        let p = cands[pick].key;
        kept[p] = false;
        let iv = &ivs[p];
        for slot in &mut load[(iv.start() - origin) as usize..(iv.end() - origin) as usize] {
            *slot -= working.units(p);
        }
    }

    let positions: Vec<usize> = (0..working.len()).filter(|&p| kept[p]).collect();
    Ok(Cover {
        members: working.select(&positions),
        lower,
        upper,
        positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;

    fn halves(spans: &[(i64, i64)]) -> Instance {
        Instance::new(
            spans
                .iter()
                .enumerate()
                .map(|(i, &(s, e))| Interval::new(i as u32 + 1, s, e, ratio(1, 2)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn check_cover(working: &Instance, cover: &Cover) {
        let v = working.load_vector(LoadMode::Raw);
        let c = cover.members.load_vector(LoadMode::Raw);
        for (t, vt) in v.iter() {
            let ct = c.at(t);
            assert!(ct <= cover.upper, "t={t}: {ct} above {}", cover.upper);
            assert!(ct >= vt.min(cover.lower), "t={t}: {ct} below min({vt}, {})", cover.lower);
        }
    }

    #[test]
    fn light_instance_is_its_own_cover() {
        let inst = halves(&[(0, 4), (0, 2), (1, 3), (2, 4)]);
        let cover = extract_cover(&inst).unwrap();
        assert_eq!(cover.members.len(), 4);
        check_cover(&inst, &cover);
    }

    #[test]
    fn load_of_exactly_two_is_kept_and_above_is_peeled() {
        let inst = halves(&[(0, 4), (0, 2), (1, 3), (2, 4), (1, 3)]);
        let cover = extract_cover(&inst).unwrap();
        assert_eq!(cover.members.len(), 5);

        let inst = halves(&[(0, 4), (0, 2), (1, 3), (2, 4), (1, 3), (1, 3)]);
        let cover = extract_cover(&inst).unwrap();
        assert_eq!(cover.members.len(), 5);
        check_cover(&inst, &cover);
        let c = cover.load();
        for t in 1..3 {
            assert!(c.at(t) >= ratio(1, 1) && c.at(t) <= ratio(2, 1));
        }
    }

    #[test]
    fn non_uniform_singleton_and_precondition() {
        let inst = Instance::new(vec![Interval::new(1, 0, 3, ratio(2, 5)).unwrap()]).unwrap();
        let cover = extract_cover(&inst).unwrap();
        assert_eq!(cover.members.len(), 1);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 3, ratio(1, 2)).unwrap(),
            Interval::new(2, 0, 3, ratio(1, 3)).unwrap(),
        ])
        .unwrap();
        assert!(extract_cover(&inst).is_err());
    }
}
