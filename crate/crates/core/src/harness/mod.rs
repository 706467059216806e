//! Trace files, workload generators, the experiment runner and its reports.
//! This is the only part of the crate that touches the file system.

mod experiment;
mod generate;
mod report;
mod sweep;
mod trace;

pub use experiment::{
    default_packer, execute, run_algorithm, run_experiment, Algorithm, ExperimentConfig,
    InputSource, Predictions, Run,
};
pub use generate::{generate_instance, GeneratorSpec, LengthDist};
pub use report::{BoundCheck, BoundValue, Report};
pub use sweep::{run_sweep, SweepReport};
pub use trace::{
    emit_load_sidecar, emit_schedule, emit_trace, ingest_trace, parse_load_sidecar,
    parse_schedule, parse_trace, read_load_sidecar, TraceData,
};
