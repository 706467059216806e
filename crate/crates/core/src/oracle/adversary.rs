use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{ratio, to_f64, Instance, Interval, LoadMode, MachineId, Rational, Schedule};
use crate::packers::OnlineFirstFit;

/// An online scheduler the adversary can probe between requests.
pub trait OnlineVictim {
    fn arrive(&mut self, interval: &Interval) -> Result<MachineId>;

    /// Machines active at `t`; `t` is never earlier than the last arrival.
    fn active_machines(&mut self, t: i64) -> usize;
}

impl OnlineVictim for OnlineFirstFit {
    fn arrive(&mut self, interval: &Interval) -> Result<MachineId> {
        OnlineFirstFit::arrive(self, interval)
    }

    fn active_machines(&mut self, t: i64) -> usize {
        OnlineFirstFit::active_machines(self, t)
    }
}

/// Derived parameters of one adversary run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryParams {
    pub a: Rational,
    pub mu: i64,
    /// Request size `sqrt(2a / ln mu)`, rounded down to a multiple of 1/10000.
    pub size: Rational,
    /// `sqrt(2a ln mu)`.
    pub n: f64,
    /// Machine count at which a round stops: `ceil(n)`.
    pub guard: usize,
    /// Longest request exponent: lengths are `2^i` for `i = 0..=max_exp`,
    /// clipped to `mu`.
    pub max_exp: u32,
}

const SIZE_GRID: i128 = 10_000;

impl AdversaryParams {
    pub fn new(a: Rational, mu: i64) -> Result<Self> {
        if mu < 2 {
            return Err(Error::InvalidParameter(format!("mu must be at least 2, got {mu}")));
        }
        let ln_mu = (mu as f64).ln();
        let af = to_f64(&a);
        if af <= 0.0 || af >= ln_mu / 2.0 {
            return Err(Error::Precondition(format!(
                "target load {a} must lie in (0, ln(mu)/2 = {:.4})",
                ln_mu / 2.0
            )));
        }
        let w = (2.0 * af / ln_mu).sqrt();
        let units = ((w * SIZE_GRID as f64).floor() as i128).max(1);
        let n = (2.0 * af * ln_mu).sqrt();
        let max_exp = (mu as f64).log2().ceil() as u32;
        Ok(AdversaryParams {
            a,
            mu,
            size: ratio(units, SIZE_GRID),
            n,
            guard: n.ceil() as usize,
            max_exp,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AdversaryTranscript {
    pub params: AdversaryParams,
    pub instance: Instance,
    pub schedule: Schedule,
    /// `(t, requests emitted, victim machines when the round ended)`.
    pub rounds: Vec<(i64, usize, usize)>,
    /// Horizon after appending idle time so the average load is at most `a`.
    pub horizon: i64,
}

impl AdversaryTranscript {
    /// Raw `||v||_1` of the generated requests.
    pub fn total_load(&self) -> Rational {
        self.instance.load_vector(LoadMode::Raw).norm1()
    }

    pub fn average_load(&self) -> Rational {
        if self.horizon == 0 {
            return Rational::from_integer(0);
        }
        self.total_load() / Rational::from_integer(self.horizon as i128)
    }
}

/// Runs the adaptive adversary for `t = 1..=mu`: at each step it keeps
/// releasing requests of doubling length while the victim has fewer than
/// `ceil(sqrt(2a ln mu))` active machines.
pub fn adversary_generate<V: OnlineVictim + ?Sized>(
    a: Rational,
    mu: i64,
    victim: &mut V,
) -> Result<AdversaryTranscript> {
    let params = AdversaryParams::new(a, mu)?;
    let mut intervals = Vec::new();
    let mut pairs = Vec::new();
    let mut rounds = Vec::with_capacity(mu as usize);
    let mut next_id = 1u32;
    for t in 1..=mu {
        let mut emitted = 0;
        for i in 0..=params.max_exp {
            if victim.active_machines(t) >= params.guard {
                break;
            }
            let len = (1i64 << i).min(mu);
            let iv = Interval::new(next_id, t, t + len, params.size)?;
            next_id += 1;
            let m = victim.arrive(&iv)?;
            pairs.push((iv.id(), m));
            intervals.push(iv);
            emitted += 1;
        }
        rounds.push((t, emitted, victim.active_machines(t)));
    }
    let instance = Instance::new(intervals)?;
    let schedule = Schedule::from_assignment(&instance, pairs)?;
    let natural = instance.horizon();
    let total = instance.load_vector(LoadMode::Raw).norm1();
    let stretched = (total / params.a).floor().to_integer().to_i64().unwrap_or(i64::MAX);
    Ok(AdversaryTranscript {
        params,
        instance,
        schedule,
        rounds,
        horizon: natural.max(stretched),
    })
}
