use alloc::vec::Vec;

use rand::Rng;

use super::aggregate::{Convergence, Step};
use super::draw_rotations;
use super::landscape::Landscape;
use crate::bounds::success_prob_l;
use crate::{Error, Result};

/// Growth factor of the conventional loop.
pub const CONVENTIONAL_LAMBDA: f64 = 1.34;
/// Growth factor of the proposed loop, tuned for few marked states.
pub const PROPOSED_LAMBDA: f64 = 1.44;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EngineVariant {
    Bbht,
    GasConventional,
    GasProposed,
    ClassicalExhaustive,
}

impl EngineVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineVariant::Bbht => "bbht",
            EngineVariant::GasConventional => "gas-conventional",
            EngineVariant::GasProposed => "gas-proposed",
            EngineVariant::ClassicalExhaustive => "classical-exhaustive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InitialThreshold {
    /// Measure the uniform superposition once and use that value.
    RandomSample,
    /// Start from a known bound.
    Fixed(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Termination {
    /// Stop once nothing lies below the threshold.
    ReachMinimum,
    /// Stop after this many measurements, or earlier at the minimum.
    MaxClassicalQueries(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EngineConfig {
    pub variant: EngineVariant,
    pub lambda: f64,
    pub k_cap: f64,
    pub y0: InitialThreshold,
    pub termination: Termination,
}

impl EngineConfig {
    /// Random initial threshold, `lambda = 1.34`, cap `sqrt(2^q1)`.
    pub fn conventional(q1: u32) -> Self {
        Self {
            variant: EngineVariant::GasConventional,
            lambda: CONVENTIONAL_LAMBDA,
            k_cap: libm::sqrt(libm::ldexp(1.0, q1 as i32)),
            y0: InitialThreshold::RandomSample,
            termination: Termination::ReachMinimum,
        }
    }

    /// Threshold `y0` from the bound on the optimum, `lambda = 1.44`, cap `k_cap`.
    pub fn proposed(y0: i64, k_cap: f64) -> Self {
        Self {
            variant: EngineVariant::GasProposed,
            lambda: PROPOSED_LAMBDA,
            k_cap,
            y0: InitialThreshold::Fixed(y0),
            termination: Termination::ReachMinimum,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_termination(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    fn validate(&self) -> Result<()> {
        // lambda = 1 is allowed: it pins k and turns the loop into plain sampling.
        if self.lambda.is_nan() || self.lambda < 1.0 {
            return Err(Error::InvalidParams("lambda must be at least 1"));
        }
        if self.k_cap.is_nan() || self.k_cap < 1.0 {
            return Err(Error::InvalidParams("k_cap must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Measurement {
    pub index: u64,
    pub value: i64,
    /// `value` is below the threshold the measurement was made against.
    pub good: bool,
}

/// One simulated measurement of `G^L A_y |0>`.
pub fn sample_measurement<R: Rng + ?Sized>(
    landscape: &Landscape,
    y: i64,
    rotations: u64,
    rng: &mut R,
) -> Measurement {
    let n = landscape.size();
    let t = landscape.count_below(y);
    let good = t == n || (t > 0 && rng.gen::<f64>() < success_prob_l(rotations, t, n));
    let rank = if good { rng.gen_range(0..t) } else { rng.gen_range(t..n) };
    let (index, value) = landscape.at_rank(rank);
    Measurement { index, value, good }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Iteration {
    pub rotations: u64,
    pub index: u64,
    pub value: i64,
    /// Threshold in force when this measurement was made.
    pub threshold: i64,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasTrace {
    pub variant: EngineVariant,
    pub iterations: Vec<Iteration>,
    pub initial_threshold: i64,
    pub final_threshold: i64,
    /// Assignment behind `final_threshold`, if one was measured.
    pub best_index: Option<u64>,
    pub classical_queries: u64,
    pub quantum_queries: u64,
    pub reached_minimum: bool,
    pub convergence: Convergence,
}

/// Runs one GAS trial: draw `L` from `{0, .., ceil(k) - 1}`, measure, and on
/// an improvement move the threshold to the measured value and reset `k` to
/// 1; otherwise grow `k` by `lambda` up to `k_cap`.
pub fn run_gas<R: Rng + ?Sized>(landscape: &Landscape, config: &EngineConfig, rng: &mut R) -> Result<GasTrace> {
    config.validate()?;
    let mut iterations = Vec::new();
    let mut steps = Vec::new();
    let mut classical = 0u64;
    let mut quantum = 0u64;
    let mut best_index = None;

    let mut threshold = match config.y0 {
        InitialThreshold::Fixed(y0) => {
            steps.push(Step { classical: 0, quantum: 0, value: y0 });
            y0
        }
        InitialThreshold::RandomSample => {
            let rank = rng.gen_range(0..landscape.size());
            let (index, value) = landscape.at_rank(rank);
            classical = 1;
            iterations.push(Iteration { rotations: 0, index, value, threshold: value, improved: true });
            steps.push(Step { classical, quantum, value });
            best_index = Some(index);
            value
        }
    };
    let initial_threshold = threshold;
    let budget = match config.termination {
        Termination::ReachMinimum => u64::MAX,
        Termination::MaxClassicalQueries(q) => q,
    };

    let mut k = 1.0f64;
    while landscape.count_below(threshold) > 0 && classical < budget {
        let rotations = draw_rotations(k, rng);
        let m = sample_measurement(landscape, threshold, rotations, rng);
        classical += 1;
        quantum += rotations;
        let improved = m.value < threshold;
        iterations.push(Iteration { rotations, index: m.index, value: m.value, threshold, improved });
        if improved {
            threshold = m.value;
            best_index = Some(m.index);
            k = 1.0;
            steps.push(Step { classical, quantum, value: threshold });
        } else {
            k = (config.lambda * k).min(config.k_cap);
        }
    }

    let reached_minimum = threshold <= landscape.min_value();
    Ok(GasTrace {
        variant: config.variant,
        iterations,
        initial_threshold,
        final_threshold: threshold,
        best_index,
        classical_queries: classical,
        quantum_queries: quantum,
        reached_minimum,
        convergence: Convergence {
            steps,
            optimum_at: reached_minimum.then_some(Step { classical, quantum, value: threshold }),
        },
    })
}

/// The marked assignments of a plain Grover search over a landscape.
#[derive(Debug, Clone)]
pub struct TargetSet {
    targets: Vec<u64>,
    size: u64,
}

impl TargetSet {
    /// Marks every assignment for which `is_target(index, value)` holds.
    pub fn new(landscape: &Landscape, mut is_target: impl FnMut(u64, i64) -> bool) -> Self {
        let targets = (0..landscape.size())
            .map(|rank| landscape.at_rank(rank))
            .filter(|&(x, v)| is_target(x, v))
            .map(|(x, _)| x)
            .collect();
        Self { targets, size: landscape.size() }
    }

    pub fn len(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.size
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BbhtTrace {
    pub found: u64,
    pub rotations: Vec<u64>,
    pub classical_queries: u64,
    pub quantum_queries: u64,
}

/// BBHT search with `k0 = 1` and `k <- min(lambda k, sqrt(N))`.
pub fn run_bbht<R: Rng + ?Sized>(
    targets: &TargetSet,
    lambda: f64,
    max_queries: u64,
    rng: &mut R,
) -> Result<BbhtTrace> {
    if lambda.is_nan() || lambda < 1.0 {
        return Err(Error::InvalidParams("lambda must be at least 1"));
    }
    let n = targets.size;
    let t = targets.len();
    let k_cap = libm::sqrt(n as f64);
    let mut k = 1.0f64;
    let mut rotations = Vec::new();
    let mut quantum = 0u64;
    while (rotations.len() as u64) < max_queries {
        let l = draw_rotations(k, rng);
        rotations.push(l);
        quantum += l;
        let hit = t == n || (t > 0 && rng.gen::<f64>() < success_prob_l(l, t, n));
        if hit {
            let found = targets.targets[rng.gen_range(0..t) as usize];
            return Ok(BbhtTrace {
                found,
                classical_queries: rotations.len() as u64,
                quantum_queries: quantum,
                rotations,
            });
        }
        k = (lambda * k).min(k_cap);
    }
    Err(Error::Exhausted { queries: max_queries })
}
