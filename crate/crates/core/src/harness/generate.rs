//! Seeded workload generators.
//!
//! Spec strings look like `uniform:g=2,n=20,t=50,len=1-10`,
//! `nonuniform:beta=1/4,n=20,t=50,len=log:16,den=100` and
//! `adversarial:a=2,mu=64`. Length distributions are a fixed length (`4`),
//! a uniform range (`1-10`) or log-uniform up to a maximum (`log:64`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{parse_rational, ratio, Instance, Interval, Rational};
use crate::oracle::adversary_generate;
use crate::packers::OnlineFirstFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthDist {
    Fixed(i64),
    Range(i64, i64),
    LogUniform(i64),
}

impl LengthDist {
    fn sample(&self, rng: &mut impl Rng) -> i64 {
        match *self {
            LengthDist::Fixed(l) => l,
            LengthDist::Range(lo, hi) => rng.gen_range(lo..=hi),
            LengthDist::LogUniform(max) => {
                let x: f64 = rng.gen_range(0.0..=(max as f64).ln());
                (x.exp().floor() as i64).clamp(1, max)
            }
        }
    }
}

impl FromStr for LengthDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad length distribution {s:?}"));
        let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        let dist = if let Some(max) = s.strip_prefix("log:") {
            LengthDist::LogUniform(num(max)?)
        } else if let Some((lo, hi)) = s.split_once('-') {
            LengthDist::Range(num(lo)?, num(hi)?)
        } else {
            LengthDist::Fixed(num(s)?)
        };
        let ok = match dist {
            LengthDist::Fixed(l) | LengthDist::LogUniform(l) => l >= 1,
            LengthDist::Range(lo, hi) => lo >= 1 && lo <= hi,
        };
        if ok {
            Ok(dist)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for LengthDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthDist::Fixed(l) => write!(f, "{l}"),
            LengthDist::Range(lo, hi) => write!(f, "{lo}-{hi}"),
            LengthDist::LogUniform(max) => write!(f, "log:{max}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// `n` intervals of size `1/g` starting in `[0, t)` and ending by `t`.
    Uniform {
        g: u32,
        n: usize,
        t: i64,
        len: LengthDist,
    },
    /// Sizes `k/den` drawn uniformly from `(0, beta]`.
    NonUniform {
        beta: Rational,
        den: i128,
        n: usize,
        t: i64,
        len: LengthDist,
    },
    /// Requests produced by the adaptive adversary playing against First-Fit.
    Adversarial { a: Rational, mu: i64 },
}

fn parse_params(body: &str) -> Result<BTreeMap<&str, &str>> {
    let mut out = BTreeMap::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {part:?}")))?;
        out.insert(k.trim(), v.trim());
    }
    Ok(out)
}

fn take<T: FromStr>(params: &mut BTreeMap<&str, &str>, key: &str, default: Option<T>) -> Result<T> {
    match params.remove(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad value for {key}: {v:?}"))),
        None => default.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}"))),
    }
}

fn take_rational(params: &mut BTreeMap<&str, &str>, key: &str, default: Option<Rational>) -> Result<Rational> {
    match params.remove(key) {
        Some(v) => parse_rational(v),
        None => default.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}"))),
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let mut p = parse_params(body)?;
        let spec = match kind.trim() {
            "uniform" => GeneratorSpec::Uniform {
                g: take(&mut p, "g", None)?,
                n: take(&mut p, "n", None)?,
                t: take(&mut p, "t", None)?,
                len: take(&mut p, "len", Some(LengthDist::Fixed(1)))?,
            },
            "nonuniform" => GeneratorSpec::NonUniform {
                beta: take_rational(&mut p, "beta", Some(ratio(1, 1)))?,
                den: take(&mut p, "den", Some(100))?,
                n: take(&mut p, "n", None)?,
                t: take(&mut p, "t", None)?,
                len: take(&mut p, "len", Some(LengthDist::Fixed(1)))?,
            },
            "adversarial" => GeneratorSpec::Adversarial {
                a: take_rational(&mut p, "a", None)?,
                mu: take(&mut p, "mu", None)?,
            },
            other => {
                return Err(Error::InvalidParameter(format!("unknown generator {other:?}")));
            }
        };
        if let Some(k) = p.keys().next() {
            return Err(Error::InvalidParameter(format!("unknown parameter {k:?} for {kind}")));
        }
        spec.check()?;
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Uniform { g, n, t, len } => {
                write!(f, "uniform:g={g},n={n},t={t},len={len}")
            }
            GeneratorSpec::NonUniform {
                beta,
                den,
                n,
                t,
                len,
            } => write!(f, "nonuniform:beta={beta},n={n},t={t},len={len},den={den}"),
            GeneratorSpec::Adversarial { a, mu } => write!(f, "adversarial:a={a},mu={mu}"),
        }
    }
}

impl GeneratorSpec {
    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            GeneratorSpec::Uniform { g, t, .. } => {
                if *g == 0 {
                    return bad("g must be at least 1".into());
                }
                if *t < 1 {
                    return bad(format!("horizon t={t} must be at least 1"));
                }
            }
            GeneratorSpec::NonUniform { beta, den, t, .. } => {
                if *den < 1 || *beta <= Rational::from_integer(0) || *beta > Rational::from_integer(1) {
                    return bad(format!("beta={beta} must be in (0, 1] and den={den} positive"));
                }
                if (beta * Rational::from_integer(*den)).floor() < Rational::from_integer(1) {
                    return bad(format!("no size k/{den} fits below beta={beta}"));
                }
                if *t < 1 {
                    return bad(format!("horizon t={t} must be at least 1"));
                }
            }
            GeneratorSpec::Adversarial { .. } => {}
        }
        Ok(())
    }
}

fn place(rng: &mut impl Rng, len: &LengthDist, horizon: i64) -> (i64, i64) {
    let l = len.sample(rng).min(horizon);
    let start = rng.gen_range(0..=horizon - l);
    (start, start + l)
}

/// Deterministic in `(spec, seed)`.
pub fn generate_instance(spec: &GeneratorSpec, seed: u64) -> Result<Instance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = match spec {
        GeneratorSpec::Uniform { g, n, t, len } => {
            let size = ratio(1, *g as i128);
            (0..*n)
                .map(|i| {
                    let (s, e) = place(&mut rng, len, *t);
                    Interval::new(i as u32 + 1, s, e, size)
                })
                .collect::<Result<Vec<_>>>()?
        }
        GeneratorSpec::NonUniform {
            beta,
            den,
            n,
            t,
            len,
        } => {
            let top = (beta * Rational::from_integer(*den)).floor().to_integer();
            (0..*n)
                .map(|i| {
                    let (s, e) = place(&mut rng, len, *t);
                    let k = rng.gen_range(1..=top);
                    Interval::new(i as u32 + 1, s, e, ratio(k, *den))
                })
                .collect::<Result<Vec<_>>>()?
        }
        GeneratorSpec::Adversarial { a, mu } => {
            let mut victim = OnlineFirstFit::new();
            return Ok(adversary_generate(*a, *mu, &mut victim)?.instance);
        }
    };
    Instance::new(intervals)
}
