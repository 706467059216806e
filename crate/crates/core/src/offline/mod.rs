//! Offline schedulers that see the whole instance up front.

mod cover;
mod covering;
mod density;
mod partition;

pub use cover::{extract_cover, extract_cover_in, Cover, CoverMode};
pub use covering::{covering_algorithm, covering_with_trace, CoveringTrace};
pub use density::{density_algorithm, density_with_trace, extract_dense_set, DenseSet, DensityTrace};
pub use partition::{partition_algorithm, size_class, BaseScheduler};
