//! Exact reference answers for tiny inputs, the load lower bound, and the
//! adaptive adversary against online schedulers.

mod adversary;
mod brute_force;
mod static_opt;

pub use adversary::{adversary_generate, AdversaryParams, AdversaryTranscript, OnlineVictim};
pub use brute_force::{brute_force_opt, brute_force_opt_capped, OptResult, DEFAULT_OPT_CAP};
pub use static_opt::{brute_force_static_opt, STATIC_OPT_CAP};

use crate::model::{Instance, LoadMode, Rational};

/// `||v||_1` of the instance: no schedule can cost less.
pub fn lower_bound_l1(instance: &Instance, mode: LoadMode) -> Rational {
    instance.load_vector(mode).norm1()
}
