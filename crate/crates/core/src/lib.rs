//! Schedulers for dynamic bin packing: intervals (VM requests) with a start,
//! an end and a size in `(0, 1]` are placed on unit-capacity machines, and the
//! cost is the total time machines spend active.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod model;
pub mod offline;
pub mod oracle;
pub mod packers;
pub mod predicted;
pub mod transform;

pub use error::{Error, Result};
pub use model::{
    compute_load_vector, schedule_cost, select_intersecting_interval, validate_schedule,
    Instance, Interval, IntervalId, LoadMode, LoadVector, Machine, MachineId, Rational,
    Schedule, Span, Violation,
};
