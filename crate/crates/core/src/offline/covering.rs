use crate::error::Result;
use crate::model::{ratio, Instance, MachinePool, Schedule};
use crate::packers::first_fit_positions;

use super::cover::{extract_cover_in, CoverMode};

/// Per-round record of a covering run, for inspection in tests and reports.
#[derive(Debug, Clone, Default)]
pub struct CoveringTrace {
    /// Machines First-Fit used for each extracted cover.
    pub machines_per_round: Vec<usize>,
    /// Intervals that got a machine of their own up front.
    pub dedicated: usize,
}

/// Covering algorithm: peel covers off the instance and pack each with
/// First-Fit. For non-uniform sizes every interval above 1/4 first gets its
/// own machine.
pub fn covering_algorithm(instance: &Instance) -> Result<Schedule> {
    let mode = if instance.is_uniform() {
        CoverMode::Uniform
    } else {
        CoverMode::NonUniform
    };
    covering_with_trace(instance, mode).map(|(s, _)| s)
}

/// Covering algorithm with the size regime fixed by the caller, returning
/// per-round machine counts alongside the schedule.
pub fn covering_with_trace(
    instance: &Instance,
    mode: CoverMode,
) -> Result<(Schedule, CoveringTrace)> {
    let uniform = mode == CoverMode::Uniform;
    let mut pool = MachinePool::new();
    let mut trace = CoveringTrace::default();
    let quarter = ratio(1, 4);
    let mut working = if uniform {
        instance.clone()
    } else {
        for iv in instance.intervals().iter().filter(|iv| *iv.size() > quarter) {
            pool.dedicated(iv.id());
            trace.dedicated += 1;
        }
        instance.filter(|iv| *iv.size() <= quarter)
    };
    while !working.is_empty() {
        let cover = extract_cover_in(&working, mode)?;
        let all: Vec<usize> = (0..cover.members.len()).collect();
        let used = pool.add_group(first_fit_positions(&cover.members, &all));
        trace.machines_per_round.push(used);
        let mut taken = vec![false; working.len()];
        for &p in &cover.positions {
            taken[p] = true;
        }
        let rest: Vec<usize> = (0..working.len()).filter(|&p| !taken[p]).collect();
        working = working.select(&rest);
    }
    Ok((pool.into_schedule(instance)?, trace))
}
