//! Exact Monte-Carlo simulation of Grover-based minimization.
//!
//! Every objective value is enumerated once into a sorted [`Landscape`].
//! For a threshold `y` the marked set is the prefix of ranks with value
//! below `y`, so one measurement after `L` Grover iterations is simulated by
//! choosing "good" with probability `sin^2((2L+1) theta)` and then a uniform
//! rank inside the chosen class. This is exact for amplitude amplification
//! from the uniform superposition.

mod aggregate;
mod classical;
mod gas;
mod landscape;

pub use aggregate::{average_curve, cdf, quantile, Convergence, QueryDomain, QueryStats, Step};
pub use classical::{run_classical_exhaustive, ClassicalSearch, ClassicalTrace, Shuffler};
pub use gas::{
    run_bbht, run_gas, sample_measurement, BbhtTrace, EngineConfig, EngineVariant, GasTrace,
    InitialThreshold, Iteration, Measurement, TargetSet, Termination, CONVENTIONAL_LAMBDA,
    PROPOSED_LAMBDA,
};
pub use landscape::{build_landscape, Landscape, DEFAULT_MAX_Q1, HARD_MAX_Q1};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for trial `trial` of a run seeded with `seed`.
///
/// ChaCha is counter based: each trial gets its own stream of the same key,
/// so trials are reproducible independently of scheduling order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform rotation count on `{0, .., ceil(k) - 1}`.
pub(crate) fn draw_rotations<R: rand::Rng + ?Sized>(k: f64, rng: &mut R) -> u64 {
    let upper = libm::ceil(k).max(1.0) as u64;
    rng.gen_range(0..upper)
}
