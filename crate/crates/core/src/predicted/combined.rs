use std::collections::BTreeMap;

use super::{AvgLoadPrediction, LengthClasses, CLASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{from_units, to_f64, Instance, IntervalId, MachinePool, Rational, Schedule};
use crate::packers::{FirstFit, PackerKind};
use crate::transform::{event_order, DynamicTransform};

/// How one interval was handled by the combined scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub interval: IntervalId,
    pub predicted_length: f64,
    pub class: usize,
    /// Load of alive intervals of the same class at arrival, newcomer included.
    pub class_load: Rational,
    pub to_first_fit: bool,
}

#[derive(Debug, Clone)]
pub struct CombinedTrace {
    pub classes: LengthClasses,
    pub routes: Vec<Route>,
    /// Machines used by the shared First-Fit pool.
    pub first_fit_machines: usize,
    /// Machines used per class by the transform copies.
    pub transform_machines: BTreeMap<usize, usize>,
}

impl CombinedTrace {
    /// Largest class index that received an interval (0 when empty).
    pub fn max_class(&self) -> usize {
        self.routes.iter().map(|r| r.class).max().unwrap_or(0)
    }
}

/// Length-class scheduler driven by predicted lengths and a predicted
/// average load. Within each class, arrivals whose class load stays below
/// `q_j` share one First-Fit pool; the rest go to the class's own copy of
/// the packer transform.
pub fn combined_algorithm(
    instance: &Instance,
    prediction: &AvgLoadPrediction,
    packer: PackerKind,
) -> Result<Schedule> {
    combined_with_trace(instance, prediction, packer).map(|(s, _)| s)
}

pub fn combined_with_trace(
    instance: &Instance,
    prediction: &AvgLoadPrediction,
    packer: PackerKind,
) -> Result<(Schedule, CombinedTrace)> {
    let classes = LengthClasses::new(prediction.v_avg)?;
    let scale = instance.scale();
    let mut class_of = vec![0usize; instance.len()];
    let mut to_ff = vec![false; instance.len()];
    let mut class_load: BTreeMap<usize, i128> = BTreeMap::new();
    let mut ff = FirstFit::new(scale);
    let mut ff_pairs = Vec::new();
    let mut copies: BTreeMap<usize, DynamicTransform> = BTreeMap::new();
    let mut routes = Vec::with_capacity(instance.len());

    for (time, arrival, id, p) in event_order(instance) {
        let iv = &instance.intervals()[p];
        let w = instance.units(p);
        if !arrival {
            *class_load.get_mut(&class_of[p]).expect("class seen on arrival") -= w;
            if !to_ff[p] {
                copies
                    .get_mut(&class_of[p])
                    .expect("copy created on arrival")
                    .depart(id, time)?;
            }
            continue;
        }
        let predicted = *prediction
            .lengths
            .get(&id)
            .ok_or(Error::MissingPrediction(id))?;
        let j = classes.classify(predicted)?;
        let load = class_load.entry(j).or_insert(0);
        *load += w;
        let load = from_units(*load, scale);
        let first_fit = to_f64(&load) <= classes.threshold(j) + CLASS_TOLERANCE;
        class_of[p] = j;
        to_ff[p] = first_fit;
        if first_fit {
            ff_pairs.push((id, ff.place(iv.start(), iv.end(), w)));
        } else {
            let copy = match copies.entry(j) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(DynamicTransform::with_id_base(packer.build()?, 0))
                }
            };
            copy.arrive(id, time, iv.size())?;
        }
        routes.push(Route {
            interval: id,
            predicted_length: predicted,
            class: j,
            class_load: load,
            to_first_fit: first_fit,
        });
    }

    let mut pool = MachinePool::new();
    let first_fit_machines = pool.add_group(ff_pairs);
    let mut transform_machines = BTreeMap::new();
    for (j, copy) in &copies {
        let used = pool.add_group(copy.assignments().iter().map(|&(iid, m)| (iid, m.0)));
        transform_machines.insert(*j, used);
    }
    let schedule = pool.into_schedule(instance)?;
    Ok((
        schedule,
        CombinedTrace {
            classes,
            routes,
            first_fit_machines,
            transform_machines,
        },
    ))
}
