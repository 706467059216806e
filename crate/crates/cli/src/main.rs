use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dynbin::harness::{
    emit_load_sidecar, emit_schedule, emit_trace, execute, generate_instance, ingest_trace,
    parse_schedule, run_sweep, Algorithm, ExperimentConfig, GeneratorSpec, InputSource,
};
use dynbin::predicted::{apply_noise, NoiseParams};
use dynbin::{validate_schedule, LoadMode};

#[derive(Parser)]
#[command(name = "dynbin", version, about = "Run and check dynamic bin packing schedulers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule one instance and print a report.
    Run(RunArgs),
    /// Write a generated instance as a trace.
    Generate(GenerateArgs),
    /// Re-check a stored schedule against its trace.
    Verify(VerifyArgs),
    /// Run one configuration over a range of seeds.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Generator spec, e.g. `uniform:g=2,n=20,t=50,len=1-10`.
    #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
    generator: Option<String>,
    /// Trace file with `id, arrival, departure, size[, predicted_length]` lines.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct PredictionArgs {
    /// Relative error of the average load prediction.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Relative under-prediction of lengths.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Relative over-prediction of lengths.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Average load handed to the combined scheduler instead of the drawn one.
    #[arg(long)]
    v_avg: Option<f64>,
    /// Per-step load forecast (`t, load` lines) for the online covering scheduler.
    #[arg(long)]
    load_forecast: Option<PathBuf>,
    /// Forecast lookahead in steps; defaults to the longest interval.
    #[arg(long)]
    window: Option<i64>,
    /// Largest instance for which the optimum is brute-forced (0 disables).
    #[arg(long, default_value_t = dynbin::oracle::DEFAULT_OPT_CAP)]
    opt_cap: usize,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algorithm: String,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    predictions: PredictionArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the schedule as `machine, interval` lines.
    #[arg(long)]
    schedule_out: Option<PathBuf>,
    /// Include the scheduler's wall time in the report.
    #[arg(long)]
    wall_time: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    generator: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append predicted lengths drawn with `--alpha`/`--lambda` noise.
    #[arg(long)]
    with_predictions: bool,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Also write the exact per-step load as a forecast sidecar.
    #[arg(long)]
    load_out: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    algorithm: String,
    #[arg(long)]
    generator: String,
    /// Seed range `start..end`.
    #[arg(long, default_value = "0..100")]
    seeds: String,
    #[command(flatten)]
    predictions: PredictionArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_seeds(text: &str) -> Result<Range<u64>> {
    let Some((a, b)) = text.split_once("..") else {
        bail!("seed range must look like start..end, got {text:?}");
    };
    let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
    if a >= b {
        bail!("seed range {text:?} is empty");
    }
    Ok(a..b)
}

fn config(algorithm: &str, input: InputSource, seed: u64, p: &PredictionArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(algorithm.parse::<Algorithm>()?, input);
    cfg.seed = seed;
    cfg.noise = NoiseParams::new(p.delta, p.alpha, p.lambda)?;
    cfg.v_avg = p.v_avg;
    cfg.load_forecast = p.load_forecast.clone();
    cfg.window = p.window;
    cfg.opt_cap = p.opt_cap;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<bool> {
    let input = match (args.input.generator, args.input.trace) {
        (Some(g), None) => InputSource::Generator(g.parse::<GeneratorSpec>()?),
        (None, Some(t)) => InputSource::Trace(t),
        _ => bail!("give exactly one of --generator and --trace"),
    };
    let cfg = config(&args.algorithm, input, args.seed, &args.predictions)?;
    let run = execute(&cfg)?;
    write_out(args.output.as_deref(), &run.report.to_text(args.wall_time))?;
    if let Some(path) = &args.schedule_out {
        write_out(Some(path), &emit_schedule(&run.schedule))?;
    }
    for v in &run.report.violations {
        eprintln!("violation: {v}");
    }
    Ok(run.report.passed())
}

fn generate(args: GenerateArgs) -> Result<bool> {
    let spec: GeneratorSpec = args.generator.parse()?;
    let instance = generate_instance(&spec, args.seed)?;
    let predicted = if args.with_predictions {
        let noise = NoiseParams::new(0.0, args.alpha, args.lambda)?;
        Some(apply_noise(&instance, noise, args.seed)?.lengths)
    } else {
        None
    };
    let mut text = format!("# generator {spec} seed {}\n", args.seed);
    text.push_str(&emit_trace(&instance, predicted.as_ref()));
    write_out(args.output.as_deref(), &text)?;
    if let Some(path) = &args.load_out {
        let loads: Vec<_> = instance.load_vector(LoadMode::Raw).iter().collect();
        write_out(Some(path), &emit_load_sidecar(&loads))?;
    }
    Ok(true)
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let data = ingest_trace(&args.trace)?;
    let text = fs::read_to_string(&args.schedule)
        .with_context(|| format!("reading {}", args.schedule.display()))?;
    let schedule = parse_schedule(&text, &data.instance)?;
    match validate_schedule(&data.instance, &schedule) {
        Ok(()) => {
            println!("valid = true");
            println!("cost = {}", schedule.cost()?);
            println!("machines = {}", schedule.machine_count());
            Ok(true)
        }
        Err(v) => {
            println!("valid = false");
            eprintln!("violation: {v}");
            Ok(false)
        }
    }
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let input = InputSource::Generator(args.generator.parse()?);
    let cfg = config(&args.algorithm, input, 0, &args.predictions)?;
    let report = run_sweep(&cfg, parse_seeds(&args.seeds)?)?;
    write_out(args.output.as_deref(), &report.to_text())?;
    for seed in report.failing_seeds() {
        eprintln!("violation at seed {seed}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
