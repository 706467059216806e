use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ratio, Instance, MachinePool, Rational, Schedule};
use crate::packers::harmonic_class;

use super::{covering_algorithm, density_algorithm};

/// Offline scheduler applied to each size class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseScheduler {
    Covering,
    Density,
}

impl BaseScheduler {
    pub fn run(self, instance: &Instance) -> Result<Schedule> {
        match self {
            BaseScheduler::Covering => covering_algorithm(instance),
            BaseScheduler::Density => density_algorithm(instance),
        }
    }
}

impl std::str::FromStr for BaseScheduler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covering" => Ok(BaseScheduler::Covering),
            "density" => Ok(BaseScheduler::Density),
            _ => Err(Error::InvalidParameter(format!("unknown base scheduler {s:?}"))),
        }
    }
}

impl fmt::Display for BaseScheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseScheduler::Covering => write!(f, "covering"),
            BaseScheduler::Density => write!(f, "density"),
        }
    }
}

/// Class `j < k` for sizes in `(1/(j+1), 1/j]`, class `k` for sizes up to `1/k`.
pub fn size_class(size: &Rational, k: usize) -> usize {
    harmonic_class(size, k)
}

/// Schedules each size class separately with `base`. Classes `j < k` fit
/// exactly `j` intervals per machine, so their sizes are rounded up to `1/j`
/// and scheduled as a uniform instance; rounding up keeps the schedule
/// feasible for the true sizes.
pub fn partition_algorithm(instance: &Instance, k: usize, base: BaseScheduler) -> Result<Schedule> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "partition needs k >= 3, got {k}"
        )));
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (p, iv) in instance.intervals().iter().enumerate() {
        classes[size_class(iv.size(), k) - 1].push(p);
    }
    let mut pool = MachinePool::new();
    for (idx, positions) in classes.iter().enumerate() {
        if positions.is_empty() {
            continue;
        }
        let j = idx + 1;
        let members = instance.select(positions);
        let sub = if j < k {
            let rounded = members
                .intervals()
                .iter()
                .map(|iv| iv.with_size(ratio(1, j as i128)))
                .collect();
            Instance::new(rounded)?
        } else {
            members
        };
        let schedule = base.run(&sub)?;
        pool.add_group(
            schedule
                .machines()
                .iter()
                .flat_map(|m| m.assignments().iter().map(move |&(iid, _)| (iid, m.id().0))),
        );
    }
    pool.into_schedule(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_schedule, Interval};

    fn inst(sizes: &[Rational]) -> Instance {
        Instance::new(
            sizes
                .iter()
                .enumerate()
                .map(|(i, s)| Interval::new(i as u32 + 1, 0, 3 + i as i64, *s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_small_class_matches_base() {
        let i = inst(&[ratio(1, 5), ratio(1, 4), ratio(1, 7)]);
        let p = partition_algorithm(&i, 4, BaseScheduler::Covering).unwrap();
        let b = covering_algorithm(&i).unwrap();
        assert_eq!(p.cost().unwrap(), b.cost().unwrap());
    }

    #[test]
    fn three_sizes_three_classes() {
        let i = inst(&[ratio(3, 5), ratio(2, 5), ratio(1, 5)]);
        assert_eq!(size_class(&ratio(3, 5), 3), 1);
        assert_eq!(size_class(&ratio(2, 5), 3), 2);
        assert_eq!(size_class(&ratio(1, 5), 3), 3);
        let p = partition_algorithm(&i, 3, BaseScheduler::Covering).unwrap();
        validate_schedule(&i, &p).unwrap();
        assert_eq!(p.machine_count(), 3);
    }

    #[test]
    fn halves_land_in_class_two() {
        let h = ratio(1, 2);
        let a = Instance::new(vec![
            Interval::new(1, 0, 4, h).unwrap(),
            Interval::new(2, 0, 2, h).unwrap(),
            Interval::new(3, 1, 3, h).unwrap(),
            Interval::new(4, 2, 4, h).unwrap(),
        ])
        .unwrap();
        let p = partition_algorithm(&a, 3, BaseScheduler::Covering).unwrap();
        assert_eq!(p, covering_algorithm(&a).unwrap());
    }

    #[test]
    fn rejects_small_k() {
        assert!(partition_algorithm(&Instance::empty(), 2, BaseScheduler::Covering).is_err());
    }
}
