use std::collections::BTreeMap;

use super::{Instance, IntervalId, MachineId};
use crate::error::{Error, Result};

/// Half-open span of time steps `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: i64,
    pub end: i64,
}

impl Span {
    pub fn new(start: i64, end: i64) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> i64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// Sorted, disjoint union of `spans`. Touching spans merge.
pub(crate) fn union_of(spans: impl IntoIterator<Item = Span>) -> Vec<Span> {
    let mut spans: Vec<Span> = spans.into_iter().filter(|s| !s.is_empty()).collect();
    spans.sort();
    let mut out: Vec<Span> = Vec::with_capacity(spans.len());
    for s in spans {
        match out.last_mut() {
            Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
            _ => out.push(s),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    id: MachineId,
    segments: Vec<Span>,
    assignments: Vec<(IntervalId, Span)>,
}

impl Machine {
    /// Machine with explicitly given activity segments, as read back from a
    /// stored schedule. Use [`Schedule::from_assignment`] to derive segments.
    pub fn new(id: MachineId, segments: Vec<Span>, assignments: Vec<(IntervalId, Span)>) -> Self {
        Machine {
            id,
            segments,
            assignments,
        }
    }

    pub fn id(&self) -> MachineId {
        self.id
    }

    pub fn segments(&self) -> &[Span] {
        &self.segments
    }

    pub fn assignments(&self) -> &[(IntervalId, Span)] {
        &self.assignments
    }

    /// Total active time; errors if segments overlap or are out of order.
    pub fn active_time(&self) -> Result<i64> {
        let mut total = 0;
        let mut prev_end = i64::MIN;
        for seg in &self.segments {
            if seg.is_empty() || seg.start < prev_end {
                return Err(Error::OverlappingSegments { machine: self.id });
            }
            total += seg.len();
            prev_end = seg.end;
        }
        Ok(total)
    }

    pub fn is_active_at(&self, t: i64) -> bool {
        self.segments.iter().any(|s| s.start <= t && t < s.end)
    }
}

/// Interval to machine assignment with per-machine activity segments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    machines: Vec<Machine>,
}

impl Schedule {
    /// Builds machines from `(interval, machine)` pairs; each machine is
    /// active exactly on the union of its intervals' spans.
    pub fn from_assignment(
        instance: &Instance,
        pairs: impl IntoIterator<Item = (IntervalId, MachineId)>,
    ) -> Result<Self> {
        let mut by_machine: BTreeMap<MachineId, Vec<(IntervalId, Span)>> = BTreeMap::new();
        for (iid, mid) in pairs {
            let iv = instance.get(iid).ok_or_else(|| {
                Error::Precondition(format!("interval {iid} is not part of the instance"))
            })?;
            by_machine.entry(mid).or_default().push((iid, iv.span()));
        }
        let machines = by_machine
            .into_iter()
            .map(|(id, mut assignments)| {
                assignments.sort_by_key(|&(iid, span)| (span.start, iid));
                let segments = union_of(assignments.iter().map(|&(_, s)| s));
                Machine {
                    id,
                    segments,
                    assignments,
                }
            })
            .collect();
        Ok(Schedule { machines })
    }

    pub fn from_machines(mut machines: Vec<Machine>) -> Self {
        machines.sort_by_key(Machine::id);
        Schedule { machines }
    }

    pub fn machines(&self) -> &[Machine] {
        &self.machines
    }

    pub fn machine_count(&self) -> usize {
        self.machines.len()
    }

    /// Interval to machine map. If an interval was assigned more than once
    /// (only possible for hand-built schedules) the last machine wins.
    pub fn assignment(&self) -> BTreeMap<IntervalId, MachineId> {
        self.machines
            .iter()
            .flat_map(|m| m.assignments.iter().map(move |&(iid, _)| (iid, m.id)))
            .collect()
    }

    pub fn machine_of(&self, interval: IntervalId) -> Option<MachineId> {
        self.machines
            .iter()
            .find(|m| m.assignments.iter().any(|&(iid, _)| iid == interval))
            .map(Machine::id)
    }

    pub fn cost(&self) -> Result<i64> {
        schedule_cost(self)
    }

    /// Number of machines active at step `t`.
    pub fn active_at(&self, t: i64) -> usize {
        self.machines.iter().filter(|m| m.is_active_at(t)).count()
    }

    /// Largest number of simultaneously active machines.
    pub fn peak_machines(&self) -> usize {
        let mut events: Vec<(i64, i64)> = self
            .machines
            .iter()
            .flat_map(|m| m.segments.iter().flat_map(|s| [(s.start, 1), (s.end, -1)]))
            .collect();
        events.sort_by_key(|&(t, d)| (t, d));
        let mut cur = 0i64;
        let mut peak = 0i64;
        for (_, d) in events {
            cur += d;
            peak = peak.max(cur);
        }
        peak as usize
    }
}

/// Collects assignments from independent sub-schedulers, giving each
/// sub-scheduler's local machine indices fresh global ids.
#[derive(Debug, Default)]
pub(crate) struct MachinePool {
    next: u32,
    pairs: Vec<(IntervalId, MachineId)>,
}

impl MachinePool {
    pub fn new() -> Self {
        MachinePool {
            next: 1,
            pairs: Vec::new(),
        }
    }

    /// Adds a group whose machines are numbered `0..` locally; returns the
    /// number of distinct machines it used.
    pub fn add_group(&mut self, group: impl IntoIterator<Item = (IntervalId, u32)>) -> usize {
        let mut remap: BTreeMap<u32, MachineId> = BTreeMap::new();
        let group: Vec<(IntervalId, u32)> = group.into_iter().collect();
        for &(_, local) in &group {
            remap.entry(local).or_insert(MachineId(0));
        }
        for (i, id) in remap.values_mut().enumerate() {
            *id = MachineId(self.next + i as u32);
        }
        self.next += remap.len() as u32;
        self.pairs
            .extend(group.into_iter().map(|(iid, local)| (iid, remap[&local])));
        remap.len()
    }

    /// A machine of its own for one interval.
    pub fn dedicated(&mut self, interval: IntervalId) {
        self.add_group([(interval, 0)]);
    }

    pub fn into_schedule(self, instance: &Instance) -> Result<Schedule> {
        Schedule::from_assignment(instance, self.pairs)
    }
}

/// Total active machine time: the sum over machines of their segment lengths.
pub fn schedule_cost(schedule: &Schedule) -> Result<i64> {
    schedule.machines.iter().map(Machine::active_time).sum()
}
