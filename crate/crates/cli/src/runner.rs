use rayon::prelude::*;

/// Runs `trials` independent trials on the rayon pool, returning results in
/// trial order. `f` receives per-thread scratch state from `init`.
pub fn run_trials_with<S, T, I, F>(trials: u64, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> T + Sync + Send,
{
    (0..trials).into_par_iter().map_init(init, |s, trial| f(s, trial)).collect()
}

pub fn run_trials<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    run_trials_with(trials, || (), |_, trial| f(trial))
}

/// Derives an independent master seed for each named stream of a run.
pub fn stream_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
