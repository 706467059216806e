use crate::error::{Error, Result};
use crate::model::{Instance, IntervalId, MachineId, Schedule};

pub const DEFAULT_OPT_CAP: usize = 8;

#[derive(Debug, Clone)]
pub struct OptResult {
    pub cost: i64,
    pub witness: Schedule,
}

/// Minimum total active time over all assignments, for instances of at most
/// [`DEFAULT_OPT_CAP`] intervals.
pub fn brute_force_opt(instance: &Instance) -> Result<OptResult> {
    brute_force_opt_capped(instance, DEFAULT_OPT_CAP)
}

struct Search<'a> {
    starts: Vec<i64>,
    ends: Vec<i64>,
    units: Vec<i128>,
    capacity: i128,
    /// Interval positions (in arrival order) on each open label.
    labels: Vec<Vec<usize>>,
    current: Vec<u32>,
    best_cost: i64,
    best: Vec<u32>,
    instance: &'a Instance,
}

impl Search<'_> {
    /// Active time of a label; its members are in start order.
    fn label_cost(&self, members: &[usize]) -> i64 {
        let mut cost = 0;
        let mut reach = i64::MIN;
        for &p in members {
            let (s, e) = (self.starts[p], self.ends[p]);
            if e <= reach {
                continue;
            }
            cost += e - s.max(reach);
            reach = e;
        }
        cost
    }

    fn fits(&self, label: usize, p: usize) -> bool {
        // Members all start no later than p, so the load peaks at p's start.
        let s = self.starts[p];
        let load: i128 = self.labels[label]
            .iter()
            .filter(|&&q| self.ends[q] > s)
            .map(|&q| self.units[q])
            .sum();
        load + self.units[p] <= self.capacity
    }

    fn run(&mut self, p: usize, cost: i64) {
        if cost >= self.best_cost {
            return;
        }
        if p == self.starts.len() {
            self.best_cost = cost;
            self.best = self.current.clone();
            return;
        }
        // Interval p may join any used label or open the next fresh one.
        for label in 0..=self.labels.len() {
            let fresh = label == self.labels.len();
            if fresh {
                self.labels.push(Vec::new());
            } else if !self.fits(label, p) {
                continue;
            }
            let before = self.label_cost(&self.labels[label]);
            self.labels[label].push(p);
            let after = self.label_cost(&self.labels[label]);
            self.current.push(label as u32);
            self.run(p + 1, cost - before + after);
            self.current.pop();
            self.labels[label].pop();
            if fresh {
                self.labels.pop();
            }
        }
    }
}

/// Same as [`brute_force_opt`] with an explicit size cap.
pub fn brute_force_opt_capped(instance: &Instance, cap: usize) -> Result<OptResult> {
    if instance.len() > cap {
        return Err(Error::TooLarge {
            len: instance.len(),
            cap,
        });
    }
    let order = instance.arrival_order();
    let ivs = instance.intervals();
    let mut search = Search {
        starts: order.iter().map(|&p| ivs[p].start()).collect(),
        ends: order.iter().map(|&p| ivs[p].end()).collect(),
        units: order.iter().map(|&p| instance.units(p)).collect(),
        capacity: instance.scale(),
        labels: Vec::new(),
        current: Vec::new(),
        best_cost: i64::MAX,
        best: Vec::new(),
        instance,
    };
    search.run(0, 0);
    let cost = if instance.is_empty() { 0 } else { search.best_cost };
    let pairs: Vec<(IntervalId, MachineId)> = order
        .iter()
        .zip(&search.best)
        .map(|(&p, &label)| (ivs[p].id(), MachineId(label + 1)))
        .collect();
    let witness = Schedule::from_assignment(search.instance, pairs)?;
    Ok(OptResult { cost, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, validate_schedule, Interval};

    #[test]
    fn single_interval() {
        let inst = Instance::new(vec![Interval::new(1, 2, 9, ratio(1, 3)).unwrap()]).unwrap();
        let opt = brute_force_opt(&inst).unwrap();
        assert_eq!(opt.cost, 7);
    }

    #[test]
    fn instance_a_optimum() {
        let h = ratio(1, 2);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 4, h).unwrap(),
            Interval::new(2, 0, 2, h).unwrap(),
            Interval::new(3, 1, 3, h).unwrap(),
            Interval::new(4, 2, 4, h).unwrap(),
        ])
        .unwrap();
        let opt = brute_force_opt(&inst).unwrap();
        assert_eq!(opt.cost, 6);
        validate_schedule(&inst, &opt.witness).unwrap();
        assert_eq!(opt.witness.cost().unwrap(), 6);
    }

    #[test]
    fn disjoint_full_intervals() {
        let one = ratio(1, 1);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 3, one).unwrap(),
            Interval::new(2, 5, 9, one).unwrap(),
        ])
        .unwrap();
        let opt = brute_force_opt(&inst).unwrap();
        assert_eq!(opt.cost, 7);
        let split = Schedule::from_assignment(
            &inst,
            [(IntervalId(1), MachineId(1)), (IntervalId(2), MachineId(2))],
        )
        .unwrap();
        assert_eq!(split.cost().unwrap(), opt.cost);
    }

    #[test]
    fn empty_and_too_large() {
        assert_eq!(brute_force_opt(&Instance::empty()).unwrap().cost, 0);
        let ivs = (0..9)
            .map(|i| Interval::new(i, 0, 1, ratio(1, 9)).unwrap())
            .collect();
        let inst = Instance::new(ivs).unwrap();
        assert!(matches!(brute_force_opt(&inst), Err(Error::TooLarge { .. })));
    }
}
