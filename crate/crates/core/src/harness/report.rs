use std::fmt::{self, Write as _};
use std::time::Duration;

use crate::model::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(Rational),
    Approx(f64),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => write!(f, "{r}"),
            BoundValue::Approx(x) => write!(f, "{x:.6}"),
        }
    }
}

/// One cost ceiling evaluated against a run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub value: BoundValue,
    pub holds: bool,
}

impl BoundCheck {
    pub fn exact(name: &'static str, value: Rational, cost: i64) -> Self {
        BoundCheck {
            name,
            holds: Rational::from_integer(cost as i128) <= value,
            value: BoundValue::Exact(value),
        }
    }

    pub fn approx(name: &'static str, value: f64, cost: i64) -> Self {
        BoundCheck {
            name,
            holds: cost as f64 <= value * (1.0 + 1e-12),
            value: BoundValue::Approx(value),
        }
    }
}

/// Metrics and bound checks of one run, printable as `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub algorithm: String,
    pub input: String,
    pub seed: u64,
    pub intervals: usize,
    pub horizon: i64,
    pub cost: i64,
    pub machines: usize,
    pub norm0: i64,
    pub norm1_raw: Rational,
    pub norm1_ceiled: Rational,
    pub norm_inf: Rational,
    pub v_avg: Rational,
    pub mu: Rational,
    pub beta: Rational,
    pub opt: Option<i64>,
    pub bounds: Vec<BoundCheck>,
    pub violations: Vec<String>,
    pub wall_time: Duration,
}

impl Report {
    /// `cost / ||v||_1` with raw loads (0 for an empty instance).
    pub fn ratio(&self) -> f64 {
        let l1 = to_f64(&self.norm1_raw);
        if l1 == 0.0 {
            0.0
        } else {
            self.cost as f64 / l1
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Text form; wall time is left out unless asked for so that reports of
    /// the same seed compare byte for byte.
    pub fn to_text(&self, wall_time: bool) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            writeln!(out, "{k} = {v}").expect("writing to a string");
        };
        kv("algorithm", &self.algorithm);
        kv("input", &self.input);
        kv("seed", &self.seed);
        kv("intervals", &self.intervals);
        kv("horizon", &self.horizon);
        kv("cost", &self.cost);
        kv("machines", &self.machines);
        kv("norm0", &self.norm0);
        kv("norm1_raw", &self.norm1_raw);
        kv("norm1_ceiled", &self.norm1_ceiled);
        kv("norm_inf", &self.norm_inf);
        kv("v_avg", &self.v_avg);
        kv("mu", &self.mu);
        kv("beta", &self.beta);
        match self.opt {
            Some(opt) => kv("opt", &opt),
            None => kv("opt", &"n/a"),
        }
        kv("ratio", &format!("{:.6}", self.ratio()));
        for b in &self.bounds {
            kv(&format!("bound.{}", b.name), &b.value);
            kv(&format!("bound.{}.holds", b.name), &b.holds);
        }
        kv("violations", &self.violations.len());
        for (i, v) in self.violations.iter().enumerate() {
            kv(&format!("violation.{i}"), v);
        }
        if wall_time {
            kv("wall_time_ms", &format!("{:.3}", self.wall_time.as_secs_f64() * 1e3));
        }
        out
    }
}
