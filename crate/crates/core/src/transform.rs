//! Non-clairvoyant dynamic scheduler built on a bounded-space static packer:
//! every static bin is backed by a machine, and a machine whose bin is still
//! open but whose intervals have all departed is frozen until the bin gets
//! its next item, at which point a fresh machine takes over the bin.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Instance, IntervalId, MachineId, Rational, Schedule, Span};
use crate::packers::{BinId, BoundedSpacePacker, PackerKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineState {
    Open,
    Frozen,
    Closed,
}

#[derive(Debug, Clone)]
pub struct TransformMachine {
    pub id: MachineId,
    pub bin: BinId,
    pub state: MachineState,
    pub segments: Vec<Span>,
    running: usize,
    open_since: i64,
    bin_active: bool,
}

/// Event-driven wrapper around a static packer. Arrivals carry only time and
/// size; the end time is learned when the departure event comes.
pub struct DynamicTransform {
    packer: Box<dyn BoundedSpacePacker + Send>,
    /// Machine currently backing each open bin.
    bins: HashMap<BinId, usize>,
    machines: Vec<TransformMachine>,
    host: HashMap<IntervalId, usize>,
    assignments: Vec<(IntervalId, MachineId)>,
    id_base: u32,
}

impl DynamicTransform {
    pub fn new(packer: Box<dyn BoundedSpacePacker + Send>) -> Self {
        DynamicTransform::with_id_base(packer, 1)
    }

    /// Machine ids start at `id_base`.
    pub fn with_id_base(packer: Box<dyn BoundedSpacePacker + Send>, id_base: u32) -> Self {
        DynamicTransform {
            packer,
            bins: HashMap::new(),
            machines: Vec::new(),
            host: HashMap::new(),
            assignments: Vec::new(),
            id_base,
        }
    }

    fn new_machine(&mut self, bin: BinId) -> usize {
        let id = MachineId(self.id_base + self.machines.len() as u32);
        self.machines.push(TransformMachine {
            id,
            bin,
            state: MachineState::Open,
            segments: Vec::new(),
            running: 0,
            open_since: 0,
            bin_active: true,
        });
        self.machines.len() - 1
    }

    pub fn arrive(&mut self, interval: IntervalId, time: i64, size: &Rational) -> Result<MachineId> {
        let placement = self.packer.place(size)?;
        for bin in &placement.closed {
            if let Some(idx) = self.bins.remove(bin) {
                let m = &mut self.machines[idx];
                m.bin_active = false;
                if m.state == MachineState::Frozen {
                    m.state = MachineState::Closed;
                }
            }
        }
        if let Some(bin) = placement.opened {
            let idx = self.new_machine(bin);
            self.bins.insert(bin, idx);
        }
        let mut idx = *self
            .bins
            .get(&placement.bin)
            .ok_or_else(|| Error::Precondition(format!("packer used unknown bin {}", placement.bin)))?;
        if self.machines[idx].state == MachineState::Frozen {
            self.machines[idx].state = MachineState::Closed;
            idx = self.new_machine(placement.bin);
            self.bins.insert(placement.bin, idx);
        }
        let m = &mut self.machines[idx];
        if m.running == 0 {
            m.open_since = time;
        }
        m.running += 1;
        m.state = MachineState::Open;
        self.host.insert(interval, idx);
        self.assignments.push((interval, m.id));
        Ok(m.id)
    }

    pub fn depart(&mut self, interval: IntervalId, time: i64) -> Result<()> {
        let idx = self
            .host
            .remove(&interval)
            .ok_or_else(|| Error::Precondition(format!("interval {interval} is not running")))?;
        let m = &mut self.machines[idx];
        m.running -= 1;
        if m.running == 0 {
            m.segments.push(Span::new(m.open_since, time));
            m.state = if m.bin_active {
                MachineState::Frozen
            } else {
                MachineState::Closed
            };
        }
        Ok(())
    }

    pub fn machines(&self) -> &[TransformMachine] {
        &self.machines
    }

    pub fn assignments(&self) -> &[(IntervalId, MachineId)] {
        &self.assignments
    }

    pub fn bins_opened(&self) -> usize {
        self.packer.bins_opened()
    }

    /// Active machine time accumulated by completed segments.
    pub fn accrued_cost(&self) -> i64 {
        self.machines
            .iter()
            .flat_map(|m| m.segments.iter())
            .map(Span::len)
            .sum()
    }
}

/// Departure-before-arrival event order for a whole instance: `(time, is
/// arrival, id, position)`.
pub(crate) fn event_order(instance: &Instance) -> Vec<(i64, bool, IntervalId, usize)> {
    let mut events = Vec::with_capacity(instance.len() * 2);
    for (p, iv) in instance.intervals().iter().enumerate() {
        events.push((iv.start(), true, iv.id(), p));
        events.push((iv.end(), false, iv.id(), p));
    }
    events.sort();
    events
}

/// Runs the transform over an instance and returns the schedule together
/// with the driver, so callers can inspect machine states and bin counts.
pub fn run_transform(instance: &Instance, kind: PackerKind) -> Result<(Schedule, DynamicTransform)> {
    let mut driver = DynamicTransform::new(kind.build()?);
    for (time, arrival, id, p) in event_order(instance) {
        if arrival {
            driver.arrive(id, time, instance.intervals()[p].size())?;
        } else {
            driver.depart(id, time)?;
        }
    }
    let schedule = Schedule::from_assignment(instance, driver.assignments().iter().copied())?;
    Ok((schedule, driver))
}

pub fn dynamic_transform(instance: &Instance, kind: PackerKind) -> Result<Schedule> {
    run_transform(instance, kind).map(|(s, _)| s)
}
