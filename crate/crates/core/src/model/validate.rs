use std::collections::BTreeMap;

use thiserror::Error;

use super::schedule::union_of;
use super::{from_units, Instance, IntervalId, MachineId, Rational, Schedule, Span};

/// First problem found by [`validate_schedule`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("machine {machine}: interval {interval} is not part of the instance")]
    UnknownInterval {
        machine: MachineId,
        interval: IntervalId,
    },
    #[error("interval {interval} is assigned more than once")]
    AssignedTwice { interval: IntervalId },
    #[error("machine {machine}: interval {interval} runs on {span:?}, not its own span")]
    SpanMismatch {
        machine: MachineId,
        interval: IntervalId,
        span: Span,
    },
    #[error("interval {interval} is unassigned")]
    Unassigned { interval: IntervalId },
    #[error("machine {machine} at t={time}: load {load} exceeds capacity 1")]
    Overload {
        machine: MachineId,
        time: i64,
        load: Rational,
    },
    #[error("machine {machine}: segments differ from the union of its intervals")]
    SegmentMismatch { machine: MachineId },
}

/// Checks, in order: every assignment names a real interval on its own span
/// exactly once; no interval is left out; no machine exceeds capacity at any
/// step; machine segments equal the union of assigned spans.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Result<(), Violation> {
    let mut owner: BTreeMap<IntervalId, MachineId> = BTreeMap::new();
    for m in schedule.machines() {
        for &(iid, span) in m.assignments() {
            let Some(iv) = instance.get(iid) else {
                return Err(Violation::UnknownInterval {
                    machine: m.id(),
                    interval: iid,
                });
            };
            if iv.span() != span {
                return Err(Violation::SpanMismatch {
                    machine: m.id(),
                    interval: iid,
                    span,
                });
            }
            if owner.insert(iid, m.id()).is_some() {
                return Err(Violation::AssignedTwice { interval: iid });
            }
        }
    }

    let mut ids: Vec<IntervalId> = instance.intervals().iter().map(|iv| iv.id()).collect();
    ids.sort();
    if let Some(&missing) = ids.iter().find(|id| !owner.contains_key(id)) {
        return Err(Violation::Unassigned { interval: missing });
    }

    let scale = instance.scale();
    for m in schedule.machines() {
        let mut events: Vec<(i64, i128)> = Vec::with_capacity(2 * m.assignments().len());
        for &(iid, span) in m.assignments() {
            let pos = instance.position(iid).expect("checked above");
            let w = instance.units(pos);
            events.push((span.start, w));
            events.push((span.end, -w));
        }
        events.sort();
        let mut load = 0i128;
        let mut i = 0;
        while i < events.len() {
            let t = events[i].0;
            while i < events.len() && events[i].0 == t {
                load += events[i].1;
                i += 1;
            }
            if load > scale {
                return Err(Violation::Overload {
                    machine: m.id(),
                    time: t,
                    load: from_units(load, scale),
                });
            }
        }
    }

    for m in schedule.machines() {
        let expected = union_of(m.assignments().iter().map(|&(_, s)| s));
        if expected != m.segments() {
            return Err(Violation::SegmentMismatch { machine: m.id() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, Interval, Machine};

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

    fn assign(inst: &Instance, list: &[(u32, u32)]) -> Schedule {
        Schedule::from_assignment(
            inst,
            list.iter().map(|&(i, m)| (IntervalId(i), MachineId(m))),
        )
        .unwrap()
    }

    #[test]
    fn accepts_two_machine_schedule() {
        let inst = instance_a();
        let s = assign(&inst, &[(1, 1), (2, 1), (3, 2), (4, 2)]);
        assert_eq!(validate_schedule(&inst, &s), Ok(()));
    }

    #[test]
    fn reports_overload_with_time_and_amount() {
        let inst = instance_a();
        let s = assign(&inst, &[(1, 1), (2, 1), (3, 1), (4, 2)]);
        assert_eq!(
            validate_schedule(&inst, &s),
            Err(Violation::Overload {
                machine: MachineId(1),
                time: 1,
                load: ratio(3, 2)
            })
        );
    }

    #[test]
    fn reports_unassigned_interval() {
        let inst = instance_a();
        let s = assign(&inst, &[(1, 1), (2, 1), (3, 2)]);
        assert_eq!(
            validate_schedule(&inst, &s),
            Err(Violation::Unassigned {
                interval: IntervalId(4)
            })
        );
    }

    #[test]
    fn reports_structural_problems() {
        let inst = instance_a();
        let m1 = Machine::new(
            MachineId(1),
            vec![Span::new(0, 4)],
            vec![(IntervalId(1), Span::new(0, 4)), (IntervalId(2), Span::new(0, 2))],
        );
        let m2 = Machine::new(
            MachineId(2),
            vec![Span::new(0, 4)],
            vec![
                (IntervalId(3), Span::new(1, 3)),
                (IntervalId(4), Span::new(2, 4)),
            ],
        );
        let s = Schedule::from_machines(vec![m1.clone(), m2]);
        assert_eq!(
            validate_schedule(&inst, &s),
            Err(Violation::SegmentMismatch {
                machine: MachineId(2)
            })
        );

        let dup = Machine::new(
            MachineId(2),
            vec![Span::new(0, 4)],
            vec![(IntervalId(1), Span::new(0, 4))],
        );
        let s = Schedule::from_machines(vec![m1.clone(), dup]);
        assert_eq!(
            validate_schedule(&inst, &s),
            Err(Violation::AssignedTwice {
                interval: IntervalId(1)
            })
        );

        let ghost = Machine::new(
            MachineId(2),
            vec![Span::new(0, 1)],
            vec![(IntervalId(9), Span::new(0, 1))],
        );
        let s = Schedule::from_machines(vec![m1, ghost]);
        assert!(matches!(
            validate_schedule(&inst, &s),
            Err(Violation::UnknownInterval { .. })
        ));
    }
}
