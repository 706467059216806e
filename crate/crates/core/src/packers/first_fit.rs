use num_integer::Integer;

use crate::error::{Error, Result};
use crate::model::{Instance, Interval, IntervalId, MachineId, Schedule};

#[derive(Debug, Clone)]
struct FfMachine {
    opened_at: i64,
    load: i128,
    /// (end, units) of the intervals still running.
    running: Vec<(i64, i128)>,
}

/// Incremental dynamic First-Fit over machines of capacity `capacity` units.
///
/// Arrivals must come in nondecreasing start order. Because nothing already
/// placed starts later than the newcomer, a machine admits it for its whole
/// span iff it admits it at its start.
#[derive(Debug, Clone)]
pub(crate) struct FirstFit {
    capacity: i128,
    machines: Vec<FfMachine>,
    now: i64,
}

impl FirstFit {
    pub fn new(capacity: i128) -> Self {
        FirstFit {
            capacity,
            machines: Vec::new(),
            now: i64::MIN,
        }
    }

    /// Drops intervals that ended at or before `t`.
    fn advance(&mut self, t: i64) {
        debug_assert!(t >= self.now, "arrivals out of order");
        self.now = t;
        for m in &mut self.machines {
            if m.running.iter().any(|&(e, _)| e <= t) {
                m.running.retain(|&(e, _)| e > t);
                m.load = m.running.iter().map(|&(_, w)| w).sum();
            }
        }
    }

    /// Places an interval and returns the local machine index it went to.
    pub fn place(&mut self, start: i64, end: i64, units: i128) -> u32 {
        self.advance(start);
        let pick = self
            .machines
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.running.is_empty() && m.load + units <= self.capacity)
            .min_by_key(|&(i, m)| (m.opened_at, i))
            .map(|(i, _)| i);
        let idx = match pick {
            Some(i) => i,
            None => match self.machines.iter().position(|m| m.running.is_empty()) {
                Some(i) => {
                    self.machines[i].opened_at = start;
                    i
                }
                None => {
                    self.machines.push(FfMachine {
                        opened_at: start,
                        load: 0,
                        running: Vec::new(),
                    });
                    self.machines.len() - 1
                }
            },
        };
        let m = &mut self.machines[idx];
        m.running.push((end, units));
        m.load += units;
        idx as u32
    }

    /// Machines hosting at least one interval at step `t`.
    pub fn active_machines(&mut self, t: i64) -> usize {
        self.advance(t);
        self.machines.iter().filter(|m| !m.running.is_empty()).count()
    }

    /// Multiplies capacity and all recorded sizes by `factor`, for switching
    /// to a finer size unit mid-stream.
    fn refine(&mut self, factor: i128) {
        self.capacity *= factor;
        for m in &mut self.machines {
            m.load *= factor;
            for r in &mut m.running {
                r.1 *= factor;
            }
        }
    }
}

/// First-Fit as a standalone online scheduler that accepts arbitrary
/// rational sizes one interval at a time.
#[derive(Debug, Clone)]
pub struct OnlineFirstFit {
    ff: FirstFit,
    scale: i128,
    assigned: Vec<(Interval, MachineId)>,
}

impl Default for OnlineFirstFit {
    fn default() -> Self {
        OnlineFirstFit::new()
    }
}

impl OnlineFirstFit {
    pub fn new() -> Self {
        OnlineFirstFit {
            ff: FirstFit::new(1),
            scale: 1,
            assigned: Vec::new(),
        }
    }

    /// Places an interval; arrivals must come in nondecreasing start order.
    pub fn arrive(&mut self, interval: &Interval) -> Result<MachineId> {
        if let Some((last, _)) = self.assigned.last() {
            if interval.start() < last.start() {
                return Err(Error::Precondition(format!(
                    "interval {} arrives at {} after time {}",
                    interval.id(),
                    interval.start(),
                    last.start()
                )));
            }
        }
        let den = *interval.size().denom();
        if self.scale % den != 0 {
            let next = self.scale.lcm(&den);
            self.ff.refine(next / self.scale);
            self.scale = next;
        }
        let units = interval.size().numer() * (self.scale / den);
        let m = MachineId(self.ff.place(interval.start(), interval.end(), units) + 1);
        self.assigned.push((interval.clone(), m));
        Ok(m)
    }

    /// Machines hosting at least one interval at `t` (not before the last
    /// arrival).
    pub fn active_machines(&mut self, t: i64) -> usize {
        self.ff.active_machines(t)
    }

    /// Schedule of everything placed so far.
    pub fn schedule(&self) -> Result<Schedule> {
        let inst = Instance::new(self.assigned.iter().map(|(iv, _)| iv.clone()).collect())?;
        Schedule::from_assignment(&inst, self.assigned.iter().map(|(iv, m)| (iv.id(), *m)))
    }
}

/// First-Fit over the intervals at `positions`, in arrival order. Returns
/// `(interval, local machine index)` pairs.
pub(crate) fn first_fit_positions(instance: &Instance, positions: &[usize]) -> Vec<(IntervalId, u32)> {
    let mut order = positions.to_vec();
    let ivs = instance.intervals();
    order.sort_by_key(|&p| (ivs[p].start(), ivs[p].id()));
    let mut ff = FirstFit::new(instance.scale());
    order
        .into_iter()
        .map(|p| {
            let iv = &ivs[p];
            (iv.id(), ff.place(iv.start(), iv.end(), instance.units(p)))
        })
        .collect()
}

/// Dynamic First-Fit: each arriving interval goes to the open machine with
/// the earliest opening time that can host it; otherwise a machine opens.
pub fn first_fit_dynamic(instance: &Instance) -> Result<Schedule> {
    let all: Vec<usize> = (0..instance.len()).collect();
    let pairs = first_fit_positions(instance, &all);
    Schedule::from_assignment(
        instance,
        pairs.into_iter().map(|(iid, m)| (iid, MachineId(m + 1))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, validate_schedule, Interval, LoadMode};

    fn instance_a() -> Instance {
        let h = ratio(1, 2);
        Instance::new(vec![
            Interval::new(1, 0, 4, h).unwrap(),
            Interval::new(2, 0, 2, h).unwrap(),
            Interval::new(3, 1, 3, h).unwrap(),
            Interval::new(4, 2, 4, h).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn instance_a_placement() {
        let inst = instance_a();
        let s = first_fit_dynamic(&inst).unwrap();
        validate_schedule(&inst, &s).unwrap();
        let a = s.assignment();
        assert_eq!(a[&IntervalId(1)], MachineId(1));
        assert_eq!(a[&IntervalId(2)], MachineId(1));
        assert_eq!(a[&IntervalId(3)], MachineId(2));
        assert_eq!(a[&IntervalId(4)], MachineId(1));
        // m1 is busy on [0,4), m2 on [1,3).
        assert_eq!(s.cost().unwrap(), 6);
    }

    #[test]
    fn single_interval_one_machine() {
        let inst = Instance::new(vec![Interval::new(1, 3, 9, ratio(1, 3)).unwrap()]).unwrap();
        let s = first_fit_dynamic(&inst).unwrap();
        assert_eq!(s.machine_count(), 1);
        assert_eq!(s.cost().unwrap(), 6);
    }

    #[test]
    fn unit_items_one_machine_per_unit_of_load() {
        let one = ratio(1, 1);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 3, one).unwrap(),
            Interval::new(2, 1, 4, one).unwrap(),
            Interval::new(3, 2, 5, one).unwrap(),
        ])
        .unwrap();
        let s = first_fit_dynamic(&inst).unwrap();
        assert_eq!(s.machine_count(), 3);
        let v = inst.load_vector(LoadMode::Ceiled);
        for (t, vt) in v.iter() {
            assert_eq!(s.active_at(t) as i128, vt.to_integer());
        }
    }

    #[test]
    fn earliest_opened_machine_wins() {
        // m1 empties at 2 and reopens at 3, so m2 (opened at 1) is older.
        let q = ratio(1, 4);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 2, ratio(1, 1)).unwrap(),
            Interval::new(2, 1, 9, ratio(3, 4)).unwrap(),
            Interval::new(3, 3, 9, ratio(1, 2)).unwrap(),
            Interval::new(4, 4, 9, q).unwrap(),
        ])
        .unwrap();
        let s = first_fit_dynamic(&inst).unwrap();
        validate_schedule(&inst, &s).unwrap();
        let a = s.assignment();
        assert_eq!(a[&IntervalId(3)], MachineId(1));
        assert_eq!(a[&IntervalId(4)], MachineId(2));
    }

    #[test]
    fn online_wrapper_matches_batch_run() {
        let inst = Instance::new(vec![
            Interval::new(1, 0, 4, ratio(1, 2)).unwrap(),
            Interval::new(2, 0, 2, ratio(1, 3)).unwrap(),
            Interval::new(3, 1, 3, ratio(2, 5)).unwrap(),
            Interval::new(4, 2, 4, ratio(1, 2)).unwrap(),
        ])
        .unwrap();
        let batch = first_fit_dynamic(&inst).unwrap();
        let mut online = OnlineFirstFit::new();
        for iv in inst.intervals() {
            online.arrive(iv).unwrap();
        }
        assert_eq!(online.schedule().unwrap(), batch);
        assert_eq!(online.active_machines(2), 2);
        assert_eq!(online.active_machines(3), 1);
    }

    #[test]
    fn departure_frees_capacity_for_same_step_arrival() {
        let one = ratio(1, 1);
        let inst = Instance::new(vec![
            Interval::new(1, 0, 2, one).unwrap(),
            Interval::new(2, 2, 4, one).unwrap(),
        ])
        .unwrap();
        let s = first_fit_dynamic(&inst).unwrap();
        assert_eq!(s.machine_count(), 1);
        assert_eq!(s.cost().unwrap(), 4);
    }
}
