use num_traits::Zero;

use super::{from_units, Instance, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoadMode {
    /// `v_t` is the plain sum of active sizes.
    Raw,
    /// `v_t` is that sum rounded up to the next integer.
    Ceiled,
}

/// Per-step demand over the instance horizon `[origin, origin + T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadVector {
    origin: i64,
    units: Vec<i128>,
    scale: i128,
    mode: LoadMode,
}

pub fn compute_load_vector(instance: &Instance, mode: LoadMode) -> LoadVector {
    let positions: Vec<usize> = (0..instance.len()).collect();
    let mut units = load_units(
        instance,
        &positions,
        instance.origin(),
        instance.horizon() as usize,
    );
    let scale = instance.scale();
    if mode == LoadMode::Ceiled {
        for u in &mut units {
            *u = (*u + scale - 1).div_euclid(scale) * scale;
        }
    }
    LoadVector {
        origin: instance.origin(),
        units,
        scale,
        mode,
    }
}

/// Raw per-step load, in units, of the intervals at `positions` over
/// `[origin, origin + len)`. Parts of intervals outside the window are dropped.
pub(crate) fn load_units(
    instance: &Instance,
    positions: &[usize],
    origin: i64,
    len: usize,
) -> Vec<i128> {
    let mut diff = vec![0i128; len + 1];
    let hi = origin + len as i64;
    for &p in positions {
        let iv = &instance.intervals()[p];
        let s = iv.start().max(origin);
        let e = iv.end().min(hi);
        if s >= e {
            continue;
        }
        let w = instance.units(p);
        diff[(s - origin) as usize] += w;
        diff[(e - origin) as usize] -= w;
    }
    let mut acc = 0i128;
    let mut out = Vec::with_capacity(len);
    for d in diff.iter().take(len) {
        acc += d;
        out.push(acc);
    }
    out
}

impl LoadVector {
    pub fn mode(&self) -> LoadMode {
        self.mode
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Number of steps `T`.
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// `v_t`; zero outside the horizon.
    pub fn at(&self, t: i64) -> Rational {
        from_units(self.units_at(t), self.scale)
    }

    pub(crate) fn units_at(&self, t: i64) -> i128 {
        let i = t - self.origin;
        if i < 0 || i as usize >= self.units.len() {
            0
        } else {
            self.units[i as usize]
        }
    }

    pub fn values(&self) -> Vec<Rational> {
        self.units.iter().map(|&u| from_units(u, self.scale)).collect()
    }

    /// `(t, v_t)` pairs over the horizon.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Rational)> + '_ {
        self.units
            .iter()
            .enumerate()
            .map(move |(i, &u)| (self.origin + i as i64, from_units(u, self.scale)))
    }

    /// Steps with positive load.
    pub fn norm0(&self) -> i64 {
        self.units.iter().filter(|&&u| u > 0).count() as i64
    }

    pub fn norm1(&self) -> Rational {
        from_units(self.units.iter().sum(), self.scale)
    }

    pub fn norm_inf(&self) -> Rational {
        from_units(self.units.iter().copied().max().unwrap_or(0), self.scale)
    }

    /// `norm1 / T`, zero for an empty horizon.
    pub fn v_avg(&self) -> Rational {
        if self.units.is_empty() {
            Rational::zero()
        } else {
            self.norm1() / Rational::from_integer(self.units.len() as i128)
        }
    }

    /// Earliest step attaining the maximum load.
    pub fn argmax(&self) -> Option<i64> {
        let max = self.units.iter().copied().max()?;
        let i = self.units.iter().position(|&u| u == max)?;
        Some(self.origin + i as i64)
    }
}
