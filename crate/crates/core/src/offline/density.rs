use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bounds::density_threshold;
use crate::error::{Error, Result};
use crate::model::{
    from_units, ratio, to_f64, Instance, Interval, LoadMode, MachinePool, Rational, Schedule, Span,
};

use super::cover::CoverMode;
use super::covering::covering_with_trace;

/// Relative slack when comparing a load against the `2 + 4 ln mu` threshold.
const THRESHOLD_SLACK: f64 = 1e-12;

/// Intervals active at one step that fit together on a single short-lived
/// machine.
#[derive(Debug, Clone)]
pub struct DenseSet {
    pub members: Vec<Interval>,
    pub anchor: i64,
    /// Raw load of the working instance at `anchor`.
    pub anchor_load: Rational,
    /// `D = 2 + 4 ln mu` for the working instance.
    pub threshold: f64,
    /// `sqrt(D / v_t)`.
    pub epsilon: f64,
    /// Shortest length admitted to the chosen length class.
    pub class_len: f64,
    /// Lower target `1/c` for the total size.
    pub target: Rational,
    /// Total size of the members.
    pub size: Rational,
    /// Time the hosting machine stays active.
    pub span: Span,
    pub(crate) positions: Vec<usize>,
}

impl DenseSet {
    /// `class_len * (1 + 2 epsilon)`.
    pub fn span_limit(&self) -> f64 {
        self.class_len * (1.0 + 2.0 * self.epsilon)
    }
}

fn meets_threshold(load: f64, threshold: f64) -> bool {
    load >= threshold * (1.0 - THRESHOLD_SLACK)
}

/// Length class of ratio `r >= 1`: the `i` with `(1+eps)^(i-1) <= r < (1+eps)^i`.
fn length_class(r: f64, eps: f64) -> i32 {
    let base = 1.0 + eps;
    let mut i = (r.ln() / base.ln()).floor() as i32 + 1;
    while i > 1 && base.powi(i - 1) > r {
        i -= 1;
    }
    while base.powi(i) <= r {
        i += 1;
    }
    i
}

/// Buckets the intervals active at `t` by length class and start time and
/// packs one machine's worth from the heaviest bucket. Requires the raw load
/// at `t` to be at least `2 + 4 ln mu`.
pub fn extract_dense_set(working: &Instance, t: i64) -> Result<DenseSet> {
    let ivs = working.intervals();
    let active: Vec<usize> = (0..ivs.len()).filter(|&p| ivs[p].contains(t)).collect();
    let scale = working.scale();
    let load_units: i128 = active.iter().map(|&p| working.units(p)).sum();
    let anchor_load = from_units(load_units, scale);
    let v = to_f64(&anchor_load);
    let d = density_threshold(working.mu_f64());
    if !meets_threshold(v, d) {
        return Err(Error::Precondition(format!(
            "load {v:.4} at t={t} is below the density threshold {d:.4}"
        )));
    }
    let eps = (d / v).sqrt().min(1.0);
    let unit_len = working.min_len() as f64;

    let mut buckets: BTreeMap<(i32, i64), (i128, Vec<usize>)> = BTreeMap::new();
    for &p in &active {
        let iv = &ivs[p];
        let i = length_class(iv.len() as f64 / unit_len, eps);
        let ell = unit_len * (1.0 + eps).powi(i - 1);
        let base = t as f64 - ell * (1.0 + eps);
        let j = (((iv.start() as f64 - base) / (eps * ell)).ceil() as i64).max(1);
        let slot = buckets.entry((i, j)).or_insert((0, Vec::new()));
        slot.0 += working.units(p);
        slot.1.push(p);
    }
    let mut best: Option<(&(i32, i64), &(i128, Vec<usize>))> = None;
    for entry in &buckets {
        if best.is_none_or(|b| entry.1 .0 > b.1 .0) {
            best = Some(entry);
        }
    }
    let (&(class, _), (bucket_units, bucket)) = best.expect("load above threshold is nonempty");
    if *bucket_units < scale {
        return Err(Error::Precondition(format!(
            "no bucket at t={t} reaches unit load"
        )));
    }

    let mut chosen: Vec<usize> = Vec::new();
    let target = match working.granularity() {
        Some(g) => {
            let mut by_id = bucket.clone();
            by_id.sort_by_key(|&p| ivs[p].id());
            chosen.extend(by_id.into_iter().take(g as usize));
            Rational::one()
        }
        None => {
            let mut by_size = bucket.clone();
            by_size.sort_by(|&a, &b| ivs[b].size().cmp(ivs[a].size()).then(ivs[a].id().cmp(&ivs[b].id())));
            let mut used = 0i128;
            for p in by_size {
                if used + working.units(p) <= scale {
                    used += working.units(p);
                    chosen.push(p);
                }
            }
            ratio(1, 2).max(Rational::one() - working.beta())
        }
    };
    chosen.sort_unstable();
    let size: Rational = chosen.iter().map(|&p| *ivs[p].size()).sum();
    let start = chosen.iter().map(|&p| ivs[p].start()).min().unwrap_or(t);
    let end = chosen.iter().map(|&p| ivs[p].end()).max().unwrap_or(t);
    Ok(DenseSet {
        members: chosen.iter().map(|&p| ivs[p].clone()).collect(),
        anchor: t,
        anchor_load,
        threshold: d,
        epsilon: eps,
        class_len: unit_len * (1.0 + eps).powi(class - 1),
        target,
        size,
        span: Span::new(start, end),
        positions: chosen,
    })
}

#[derive(Debug, Clone, Default)]
pub struct DensityTrace {
    pub dense_sets: Vec<DenseSet>,
    /// Intervals left for the covering pass.
    pub residue: usize,
}

/// Density algorithm: while the peak raw load is at least `2 + 4 ln mu`,
/// pack a dense set from the peak onto one machine; cover the rest.
pub fn density_algorithm(instance: &Instance) -> Result<Schedule> {
    density_with_trace(instance).map(|(s, _)| s)
}

pub fn density_with_trace(instance: &Instance) -> Result<(Schedule, DensityTrace)> {
    let mode = if instance.is_uniform() {
        CoverMode::Uniform
    } else {
        CoverMode::NonUniform
    };
    let mut pool = MachinePool::new();
    let mut trace = DensityTrace::default();
    let mut working = instance.clone();
    while !working.is_empty() {
        let v = working.load_vector(LoadMode::Raw);
        let peak = to_f64(&v.norm_inf());
        if !meets_threshold(peak, density_threshold(working.mu_f64())) {
            break;
        }
        let t = v.argmax().expect("nonempty load vector");
        let dense = extract_dense_set(&working, t)?;
        debug_assert!(dense.size > Rational::zero());
        pool.add_group(dense.members.iter().map(|iv| (iv.id(), 0)));
        let mut taken = vec![false; working.len()];
        for &p in &dense.positions {
            taken[p] = true;
        }
        let rest: Vec<usize> = (0..working.len()).filter(|&p| !taken[p]).collect();
        working = working.select(&rest);
        trace.dense_sets.push(dense);
    }
    trace.residue = working.len();
    let (rest, _) = covering_with_trace(&working, mode)?;
    pool.add_group(
        rest.machines()
            .iter()
            .flat_map(|m| m.assignments().iter().map(move |&(iid, _)| (iid, m.id().0))),
    );
    Ok((pool.into_schedule(instance)?, trace))
}
