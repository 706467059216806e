use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use super::generate::{generate_instance, GeneratorSpec};
use super::report::{BoundCheck, Report};
use super::trace::{ingest_trace, read_load_sidecar};
use crate::bounds::{
    combined_noise_bound, covering_bound, density_ceiling, first_fit_bound, online_covering_bound,
    partition_bound, small_beta_bound, transform_bound, COMBINED_CONSTANT,
};
use crate::error::{Error, Result};
use crate::model::{validate_schedule, Instance, IntervalId, LoadMode, Rational, Schedule};
use crate::offline::{covering_algorithm, density_algorithm, partition_algorithm, BaseScheduler};
use crate::oracle::{brute_force_opt_capped, DEFAULT_OPT_CAP};
use crate::packers::{first_fit_dynamic, PackerKind};
use crate::predicted::{
    apply_noise, combined_algorithm, narrow_beta, online_covering_algorithm, AvgLoadPrediction,
    LoadForecast, NoiseParams,
};
use crate::transform::dynamic_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    FirstFit,
    Covering,
    Density,
    Partition { k: usize, base: BaseScheduler },
    Transform(PackerKind),
    /// `None` picks Next-Fit for uniform instances and Harmonic(6) otherwise.
    Combined(Option<PackerKind>),
    OnlineCovering,
}

impl Algorithm {
    /// Every scheduler with default parameters.
    pub fn all() -> Vec<Algorithm> {
        vec![
            Algorithm::FirstFit,
            Algorithm::Covering,
            Algorithm::Density,
            Algorithm::Partition {
                k: 4,
                base: BaseScheduler::Covering,
            },
            Algorithm::Partition {
                k: 6,
                base: BaseScheduler::Density,
            },
            Algorithm::Transform(PackerKind::NextFit),
            Algorithm::Transform(PackerKind::Harmonic(6)),
            Algorithm::Combined(None),
            Algorithm::OnlineCovering,
        ]
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// `first-fit`, `covering`, `density`, `partition[:k=4,base=covering]`,
    /// `transform:<packer>`, `combined[:<packer>]`, `online-covering`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad = || Error::InvalidParameter(format!("unknown algorithm {s:?}"));
        Ok(match (name, arg) {
            ("first-fit", None) => Algorithm::FirstFit,
            ("covering", None) => Algorithm::Covering,
            ("density", None) => Algorithm::Density,
            ("online-covering", None) => Algorithm::OnlineCovering,
            ("combined", None) => Algorithm::Combined(None),
            ("combined", Some(p)) => Algorithm::Combined(Some(p.parse()?)),
            ("transform", Some(p)) => Algorithm::Transform(p.parse()?),
            ("partition", arg) => {
                let mut k = 4;
                let mut base = BaseScheduler::Covering;
                for part in arg.unwrap_or("").split(',').filter(|p| !p.is_empty()) {
                    match part.split_once('=') {
                        Some(("k", v)) => k = v.parse().map_err(|_| bad())?,
                        Some(("base", v)) => base = v.parse()?,
                        _ => return Err(bad()),
                    }
                }
                Algorithm::Partition { k, base }
            }
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::FirstFit => write!(f, "first-fit"),
            Algorithm::Covering => write!(f, "covering"),
            Algorithm::Density => write!(f, "density"),
            Algorithm::Partition { k, base } => write!(f, "partition:k={k},base={base}"),
            Algorithm::Transform(p) => write!(f, "transform:{p}"),
            Algorithm::Combined(None) => write!(f, "combined"),
            Algorithm::Combined(Some(p)) => write!(f, "combined:{p}"),
            Algorithm::OnlineCovering => write!(f, "online-covering"),
        }
    }
}

/// Default packer for the combined algorithm.
pub fn default_packer(instance: &Instance) -> PackerKind {
    if instance.is_uniform() {
        PackerKind::NextFit
    } else {
        PackerKind::Harmonic(6)
    }
}

/// Predictions handed to the schedulers that use them.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub avg_load: AvgLoadPrediction,
    pub forecast: LoadForecast,
}

impl Predictions {
    pub fn exact(instance: &Instance) -> Self {
        Predictions {
            avg_load: AvgLoadPrediction::exact(instance),
            forecast: LoadForecast::exact(instance),
        }
    }
}

pub fn run_algorithm(
    algorithm: Algorithm,
    instance: &Instance,
    predictions: &Predictions,
) -> Result<Schedule> {
    match algorithm {
        Algorithm::FirstFit => first_fit_dynamic(instance),
        Algorithm::Covering => covering_algorithm(instance),
        Algorithm::Density => density_algorithm(instance),
        Algorithm::Partition { k, base } => partition_algorithm(instance, k, base),
        Algorithm::Transform(p) => dynamic_transform(instance, p),
        Algorithm::Combined(p) => combined_algorithm(
            instance,
            &predictions.avg_load,
            p.unwrap_or_else(|| default_packer(instance)),
        ),
        Algorithm::OnlineCovering => online_covering_algorithm(instance, &predictions.forecast),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Generator(GeneratorSpec),
    Trace(PathBuf),
}

impl fmt::Display for InputSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSource::Generator(g) => write!(f, "{g}"),
            InputSource::Trace(p) => write!(f, "trace:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub input: InputSource,
    /// Drives the generator and the noise draws.
    pub seed: u64,
    pub noise: NoiseParams,
    /// Overrides the (possibly noisy) average load prediction.
    pub v_avg: Option<f64>,
    /// Per-step load forecast replacing the exact load vector.
    pub load_forecast: Option<PathBuf>,
    /// Forecast lookahead; defaults to the longest interval length.
    pub window: Option<i64>,
    /// Brute-force OPT is computed for instances with at most this many
    /// intervals (0 disables it).
    pub opt_cap: usize,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, input: InputSource) -> Self {
        ExperimentConfig {
            algorithm,
            input,
            seed: 0,
            noise: NoiseParams::default(),
            v_avg: None,
            load_forecast: None,
            window: None,
            opt_cap: DEFAULT_OPT_CAP,
        }
    }
}

/// Everything one run produced.
#[derive(Debug, Clone)]
pub struct Run {
    pub instance: Instance,
    pub schedule: Schedule,
    pub report: Report,
}

/// Seed of the noise draws, kept apart from the generator's stream.
fn noise_seed(seed: u64) -> u64 {
    seed ^ 0x6e6f_6973_795f_7072
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    execute(config).map(|r| r.report)
}

/// Generator or trace, then scheduler, validator and bound checks.
pub fn execute(config: &ExperimentConfig) -> Result<Run> {
    let (instance, trace_lengths) = match &config.input {
        InputSource::Generator(spec) => (generate_instance(spec, config.seed)?, Default::default()),
        InputSource::Trace(path) => {
            let data = ingest_trace(path)?;
            (data.instance, data.predicted_lengths)
        }
    };

    let mut avg_load = apply_noise(&instance, config.noise, noise_seed(config.seed))?;
    let noise_model = trace_lengths.is_empty() && config.v_avg.is_none();
    if !trace_lengths.is_empty() {
        avg_load.lengths = trace_lengths
            .into_iter()
            .map(|(id, l): (IntervalId, f64)| (id, l.max(1.0)))
            .collect();
    }
    if let Some(v) = config.v_avg {
        avg_load.v_avg = v;
    }
    let mut forecast = match &config.load_forecast {
        Some(path) => forecast_from_sidecar(&read_load_sidecar(path)?, &instance)?,
        None => LoadForecast::exact(&instance),
    };
    if let Some(w) = config.window {
        forecast = forecast.with_window(w)?;
    }
    let exact_forecast = config.load_forecast.is_none();
    let predictions = Predictions { avg_load, forecast };

    let clock = Instant::now();
    let schedule = run_algorithm(config.algorithm, &instance, &predictions)?;
    let wall_time = clock.elapsed();

    let opt = if config.opt_cap > 0 && instance.len() <= config.opt_cap {
        Some(brute_force_opt_capped(&instance, config.opt_cap)?.cost)
    } else {
        None
    };
    let mut report = evaluate(config, &instance, &schedule, opt, noise_model && exact_forecast)?;
    report.wall_time = wall_time;
    Ok(Run {
        instance,
        schedule,
        report,
    })
}

fn forecast_from_sidecar(values: &[(i64, Rational)], instance: &Instance) -> Result<LoadForecast> {
    let origin = values.first().map_or(instance.origin(), |&(t, _)| t);
    let last = values.last().map_or(origin - 1, |&(t, _)| t);
    let mut dense = vec![Rational::from_integer(0); (last - origin + 1).max(0) as usize];
    for &(t, v) in values {
        dense[(t - origin) as usize] = v;
    }
    LoadForecast::new(origin, dense, instance.max_len(), narrow_beta(instance))
}

/// Validates the schedule and evaluates every ceiling that applies to the
/// algorithm and the instance.
fn evaluate(
    config: &ExperimentConfig,
    instance: &Instance,
    schedule: &Schedule,
    opt: Option<i64>,
    exact_predictions: bool,
) -> Result<Report> {
    let raw = instance.load_vector(LoadMode::Raw);
    let ceiled = instance.load_vector(LoadMode::Ceiled);
    let cost = schedule.cost()?;
    let mut violations = Vec::new();
    if let Err(v) = validate_schedule(instance, schedule) {
        violations.push(format!("invalid schedule: {v}"));
    }
    if Rational::from_integer(cost as i128) < raw.norm1() {
        violations.push(format!("cost {cost} is below the load bound {}", raw.norm1()));
    }
    if let Some(opt) = opt {
        if cost < opt {
            violations.push(format!("cost {cost} is below the optimum {opt}"));
        }
    }

    let mut bounds = Vec::new();
    let small_beta = |bounds: &mut Vec<BoundCheck>| {
        if let Some(b) = small_beta_bound(instance) {
            bounds.push(BoundCheck::exact("small_beta", b, cost));
        }
    };
    match config.algorithm {
        Algorithm::FirstFit => bounds.push(BoundCheck::exact("first_fit", first_fit_bound(instance), cost)),
        Algorithm::Covering => {
            bounds.push(BoundCheck::exact("covering", covering_bound(instance), cost));
            small_beta(&mut bounds);
        }
        Algorithm::OnlineCovering if config.load_forecast.is_none() => {
            bounds.push(BoundCheck::exact(
                "online_covering",
                online_covering_bound(instance),
                cost,
            ));
            small_beta(&mut bounds);
        }
        Algorithm::OnlineCovering => {}
        Algorithm::Density => {
            bounds.push(BoundCheck::approx("density", density_ceiling(instance), cost))
        }
        Algorithm::Partition { k, .. } => {
            if let (Some(opt), true) = (opt, k >= 4) {
                bounds.push(BoundCheck::exact("partition", partition_bound(k, instance, opt), cost));
            }
        }
        Algorithm::Transform(p) => {
            if let Some(opt) = opt {
                bounds.push(BoundCheck::exact("transform", transform_bound(p, instance, opt), cost));
            }
        }
        Algorithm::Combined(_) => {
            if let (Some(opt), true, true) = (opt, instance.is_uniform(), exact_predictions) {
                let n = config.noise;
                let b = combined_noise_bound(instance, opt, n.delta, n.alpha, n.lambda, COMBINED_CONSTANT);
                bounds.push(BoundCheck::approx("combined_noise", b, cost));
            }
        }
    }
    for b in &bounds {
        if !b.holds {
            violations.push(format!("cost {cost} exceeds bound {} = {}", b.name, b.value));
        }
    }

    Ok(Report {
        algorithm: config.algorithm.to_string(),
        input: config.input.to_string(),
        seed: config.seed,
        intervals: instance.len(),
        horizon: instance.horizon(),
        cost,
        machines: schedule.machine_count(),
        norm0: raw.norm0(),
        norm1_raw: raw.norm1(),
        norm1_ceiled: ceiled.norm1(),
        norm_inf: raw.norm_inf(),
        v_avg: ceiled.v_avg(),
        mu: instance.mu(),
        beta: instance.beta(),
        opt,
        bounds,
        violations,
        wall_time: Default::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::all() {
            assert_eq!(alg.to_string().parse::<Algorithm>().unwrap(), alg);
        }
        assert_eq!(
            "combined:harmonic-4".parse::<Algorithm>().unwrap(),
            Algorithm::Combined(Some(PackerKind::Harmonic(4)))
        );
        assert!("transform".parse::<Algorithm>().is_err());
        assert!("partition:k=x".parse::<Algorithm>().is_err());
        assert!("greedy".parse::<Algorithm>().is_err());
    }

    #[test]
    fn generated_runs_report_bounds() {
        let spec: GeneratorSpec = "uniform:g=2,n=6,t=8,len=1-4".parse().unwrap();
        for alg in Algorithm::all() {
            let cfg = ExperimentConfig::new(alg, InputSource::Generator(spec.clone()));
            let report = run_experiment(&cfg).unwrap();
            assert!(report.passed(), "{alg}: {:?}", report.violations);
            assert!(report.opt.is_some());
            assert!(report.cost >= report.opt.unwrap());
        }
    }

    #[test]
    fn report_text_is_deterministic() {
        let spec: GeneratorSpec = "nonuniform:beta=1/2,n=12,t=20,len=1-6".parse().unwrap();
        let mut cfg = ExperimentConfig::new(Algorithm::Combined(None), InputSource::Generator(spec));
        cfg.noise = NoiseParams::new(0.25, 0.25, 1.0).unwrap();
        cfg.seed = 11;
        let a = run_experiment(&cfg).unwrap().to_text(false);
        let b = run_experiment(&cfg).unwrap().to_text(false);
        assert_eq!(a, b);
        assert!(a.contains("cost = "));
        assert!(!a.contains("wall_time_ms"));
    }
}
