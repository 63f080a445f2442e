//! Problem setup and the benchmark comparing search strategies.

use cwc_gas_core::bounds::{k_opt_upper, t_lower_from_table};
use cwc_gas_core::code::{build_combinatorial_matrix, reduce_matrix, BitMatrix, CodeParams};
use cwc_gas_core::engine::{
    average_curve, build_landscape, cdf, run_gas, trial_rng, ClassicalSearch, Convergence, EngineConfig,
    GasTrace, Landscape, QueryDomain, QueryStats,
};
use cwc_gas_core::qubo::{build_objective, compute_bounds, BoundsReport, QuboProblem, Variant};
use serde::Serialize;

use crate::runner::{run_trials, run_trials_with, stream_seed};
use crate::{CliError, Result};

/// Reduced matrix, both objectives and their bounds for one parameter set.
#[derive(Debug, Clone)]
pub struct Instance {
    pub params: CodeParams,
    pub pprime: BitMatrix,
    pub e_prime: QuboProblem,
    pub e_double_prime: QuboProblem,
    pub bounds_prime: BoundsReport,
    pub bounds_double_prime: BoundsReport,
    /// `None` when the solution-count bound does not apply.
    pub t_lower: Option<u64>,
    pub k_opt_upper: Option<u64>,
}

impl Instance {
    pub fn new(params: CodeParams) -> Result<Self> {
        if params.is_degenerate() {
            return Err(CliError::Params(format!(
                "{params} is degenerate: d = 2w, so A(n, d, w) = {} and no search is needed",
                params.degenerate_max_codewords()
            )));
        }
        let p = build_combinatorial_matrix(params.n, params.w)?;
        let pprime = reduce_matrix(&p, &params)?;
        if pprime.len() < (params.m - 1) as usize {
            return Err(CliError::Params(format!(
                "only {} candidate rows remain after fixing the first codeword, fewer than M - 1 = {}",
                pprime.len(),
                params.m - 1
            )));
        }
        let e_prime = build_objective(&pprime, &params, Variant::EPrime)?;
        let e_double_prime = build_objective(&pprime, &params, Variant::EDoublePrime)?;
        let q1 = pprime.len() as u64;
        let bounds_prime = compute_bounds(&params, q1, e_prime.l, Variant::EPrime)?;
        let bounds_double_prime = compute_bounds(&params, q1, e_prime.l, Variant::EDoublePrime)?;
        let t_lower = t_lower_from_table(&params).ok();
        let k_opt_upper = t_lower.and_then(|t| k_opt_upper(t, q1 as u32).ok());
        Ok(Self { params, pprime, e_prime, e_double_prime, bounds_prime, bounds_double_prime, t_lower, k_opt_upper })
    }

    pub fn q1(&self) -> u32 {
        self.pprime.len() as u32
    }

    pub fn qubo(&self, variant: Variant) -> &QuboProblem {
        match variant {
            Variant::EPrime => &self.e_prime,
            _ => &self.e_double_prime,
        }
    }

    /// Rotation cap for the proposed search: the bound when available,
    /// otherwise `sqrt(2^q1)`.
    pub fn proposed_cap(&self) -> f64 {
        self.k_opt_upper.map_or_else(|| ((1u64 << self.q1()) as f64).sqrt(), |k| k as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Random initial threshold on `E'`, `lambda = 1.34`, cap `sqrt(2^q1)`.
    GasConventional,
    /// Bound-based threshold on `E''`, `lambda = 1.44`, capped rotation range.
    GasProposed,
    /// Random-order evaluation of every weight `M - 1` assignment.
    ClassicalExhaustive,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::GasConventional => "gas-conventional",
            Strategy::GasProposed => "gas-proposed",
            Strategy::ClassicalExhaustive => "classical-exhaustive",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Strategy::GasConventional => 1,
            Strategy::GasProposed => 2,
            Strategy::ClassicalExhaustive => 3,
        }
    }

    /// Whether the quantum-domain query count is meaningful.
    pub fn has_quantum_domain(self) -> bool {
        self != Strategy::ClassicalExhaustive
    }
}

#[derive(Debug, Clone)]
pub struct BenchSettings {
    pub strategies: Vec<Strategy>,
    pub trials: u64,
    pub seed: u64,
    pub lambda: Option<f64>,
    pub max_q1: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrategySummary {
    pub strategy: Strategy,
    pub trials: u64,
    pub reached_optimum: u64,
    pub lambda: Option<f64>,
    pub k_cap: Option<f64>,
    pub initial_threshold: Option<String>,
    pub classical: Option<QueryStats>,
    pub quantum: Option<QueryStats>,
}

#[derive(Debug, Clone)]
pub struct StrategyRun {
    pub summary: StrategySummary,
    pub convergences: Vec<Convergence>,
    /// Full traces, kept only for the GAS strategies.
    pub traces: Vec<GasTrace>,
}

impl StrategyRun {
    pub fn strategy(&self) -> Strategy {
        self.summary.strategy
    }

    pub fn queries(&self, domain: QueryDomain) -> Vec<u64> {
        self.convergences.iter().filter_map(|c| c.queries_to_optimum(domain)).collect()
    }

    pub fn curve(&self, domain: QueryDomain) -> Vec<(u64, f64)> {
        average_curve(&self.convergences, domain)
    }

    pub fn cdf(&self, domain: QueryDomain) -> Vec<(u64, f64)> {
        cdf(&self.convergences, domain)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Reduction {
    /// `1 - mean(proposed) / mean(conventional)`.
    pub mean: f64,
    /// `1 - median(proposed) / median(conventional)`.
    pub median: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reductions {
    pub metric: &'static str,
    pub classical: Reduction,
    pub quantum: Reduction,
}

fn reduction(proposed: &QueryStats, conventional: &QueryStats) -> Reduction {
    Reduction {
        mean: 1.0 - proposed.mean / conventional.mean,
        median: 1.0 - proposed.median as f64 / conventional.median as f64,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub params: CodeParams,
    pub trials: u64,
    pub seed: u64,
    pub strategies: Vec<StrategySummary>,
    pub reductions: Option<Reductions>,
}

pub struct BenchReport {
    pub runs: Vec<StrategyRun>,
    pub summary: BenchSummary,
}

impl BenchReport {
    pub fn run(&self, strategy: Strategy) -> Option<&StrategyRun> {
        self.runs.iter().find(|r| r.strategy() == strategy)
    }
}

fn gas_run(landscape: &Landscape, config: EngineConfig, strategy: Strategy, settings: &BenchSettings) -> Result<StrategyRun> {
    let seed = stream_seed(settings.seed, strategy.tag());
    let traces = run_trials(settings.trials, |trial| run_gas(landscape, &config, &mut trial_rng(seed, trial)))
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let convergences: Vec<Convergence> = traces.iter().map(|t| t.convergence.clone()).collect();
    let stats = |domain| QueryStats::from_samples(&queries_of(&convergences, domain));
    Ok(StrategyRun {
        summary: StrategySummary {
            strategy,
            trials: settings.trials,
            reached_optimum: traces.iter().filter(|t| t.reached_minimum).count() as u64,
            lambda: Some(config.lambda),
            k_cap: Some(config.k_cap),
            initial_threshold: Some(match config.y0 {
                cwc_gas_core::engine::InitialThreshold::RandomSample => "random-sample".into(),
                cwc_gas_core::engine::InitialThreshold::Fixed(y) => y.to_string(),
            }),
            classical: stats(QueryDomain::Classical),
            quantum: stats(QueryDomain::Quantum),
        },
        convergences,
        traces,
    })
}

fn queries_of(convergences: &[Convergence], domain: QueryDomain) -> Vec<u64> {
    convergences.iter().filter_map(|c| c.queries_to_optimum(domain)).collect()
}

/// Runs the requested strategies on `instance`.
pub fn bench(instance: &Instance, settings: &BenchSettings) -> Result<BenchReport> {
    if settings.trials == 0 {
        return Err(CliError::Params("trials must be at least 1".into()));
    }
    let mut runs = Vec::new();
    for &strategy in &settings.strategies {
        let run = match strategy {
            Strategy::GasConventional => {
                let landscape = build_landscape(&instance.e_prime, settings.max_q1)?;
                let mut config = EngineConfig::conventional(instance.q1());
                if let Some(l) = settings.lambda {
                    config = config.with_lambda(l);
                }
                gas_run(&landscape, config, strategy, settings)?
            }
            Strategy::GasProposed => {
                let landscape = build_landscape(&instance.e_double_prime, settings.max_q1)?;
                let mut config = EngineConfig::proposed(instance.bounds_double_prime.y0, instance.proposed_cap());
                if let Some(l) = settings.lambda {
                    config = config.with_lambda(l);
                }
                gas_run(&landscape, config, strategy, settings)?
            }
            Strategy::ClassicalExhaustive => classical_run(instance, settings)?,
        };
        runs.push(run);
    }

    let find = |s: Strategy| runs.iter().find(|r| r.strategy() == s).map(|r| &r.summary);
    let reductions = match (find(Strategy::GasProposed), find(Strategy::GasConventional)) {
        (Some(p), Some(c)) => match (&p.classical, &c.classical, &p.quantum, &c.quantum) {
            (Some(pc), Some(cc), Some(pq), Some(cq)) => Some(Reductions {
                metric: "1 - mean(proposed) / mean(conventional) over queries-to-optimum; median likewise",
                classical: reduction(pc, cc),
                quantum: reduction(pq, cq),
            }),
            _ => None,
        },
        _ => None,
    };
    let summary = BenchSummary {
        params: instance.params,
        trials: settings.trials,
        seed: settings.seed,
        strategies: runs.iter().map(|r| r.summary.clone()).collect(),
        reductions,
    };
    Ok(BenchReport { runs, summary })
}

fn classical_run(instance: &Instance, settings: &BenchSettings) -> Result<StrategyRun> {
    let search = ClassicalSearch::new(&instance.e_prime, instance.params.m - 1)?;
    let seed = stream_seed(settings.seed, Strategy::ClassicalExhaustive.tag());
    let traces = run_trials_with(settings.trials, || search.shuffler(), |shuffler, trial| {
        search.run(shuffler, &mut trial_rng(seed, trial))
    });
    let convergences: Vec<Convergence> = traces.into_iter().map(|t| t.convergence).collect();
    Ok(StrategyRun {
        summary: StrategySummary {
            strategy: Strategy::ClassicalExhaustive,
            trials: settings.trials,
            reached_optimum: convergences.iter().filter(|c| c.optimum_at.is_some()).count() as u64,
            lambda: None,
            k_cap: None,
            initial_threshold: None,
            classical: QueryStats::from_samples(&queries_of(&convergences, QueryDomain::Classical)),
            quantum: None,
        },
        convergences,
        traces: Vec::new(),
    })
}
