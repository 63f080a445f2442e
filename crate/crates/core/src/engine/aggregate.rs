use alloc::vec::Vec;

/// Best-so-far objective value after the given query counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Step {
    pub classical: u64,
    pub quantum: u64,
    pub value: i64,
}

/// Step function of one trace plus the point at which the minimum was hit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Convergence {
    /// Strictly decreasing in `value`, nondecreasing in both counters.
    pub steps: Vec<Step>,
    pub optimum_at: Option<Step>,
}

impl Convergence {
    pub fn queries_to_optimum(&self, domain: QueryDomain) -> Option<u64> {
        self.optimum_at.map(|s| domain.of(&s))
    }

    /// Best-so-far value after `queries` queries; before the first step the
    /// first recorded value is reported.
    pub fn value_at(&self, queries: u64, domain: QueryDomain) -> Option<i64> {
        let first = self.steps.first()?;
        let idx = self.steps.partition_point(|s| domain.of(s) <= queries);
        Some(if idx == 0 { first.value } else { self.steps[idx - 1].value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum QueryDomain {
    /// Number of measurements.
    Classical,
    /// Number of Grover operator applications.
    Quantum,
}

impl QueryDomain {
    pub fn of(self, step: &Step) -> u64 {
        match self {
            QueryDomain::Classical => step.classical,
            QueryDomain::Quantum => step.quantum,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QueryDomain::Classical => "classical",
            QueryDomain::Quantum => "quantum",
        }
    }
}

/// Mean best-so-far value across traces as a step function.
///
/// Each returned `(q, v)` means the average is `v` from query `q` up to the
/// next point. Only change points are emitted; the last value carries on.
/// Traces without steps are ignored.
pub fn average_curve(traces: &[Convergence], domain: QueryDomain) -> Vec<(u64, f64)> {
    let mut events: Vec<(u64, i64)> = Vec::new();
    let mut total: i128 = 0;
    let mut count = 0u64;
    for trace in traces {
        let Some(first) = trace.steps.first() else { continue };
        count += 1;
        total += i128::from(first.value);
        for w in trace.steps.windows(2) {
            events.push((domain.of(&w[1]), w[1].value - w[0].value));
        }
    }
    if count == 0 {
        return Vec::new();
    }
    events.sort_unstable_by_key(|e| e.0);
    let mean = |sum: i128| sum as f64 / count as f64;
    let mut curve = Vec::with_capacity(events.len() + 1);
    curve.push((0, mean(total)));
    let mut i = 0;
    while i < events.len() {
        let q = events[i].0;
        while i < events.len() && events[i].0 == q {
            total += i128::from(events[i].1);
            i += 1;
        }
        match curve.last_mut() {
            Some(last) if last.0 == q => last.1 = mean(total),
            _ => curve.push((q, mean(total))),
        }
    }
    curve
}

/// Empirical CDF of queries-to-optimum, evaluated at each distinct sample.
///
/// Traces that never reached the optimum count in the denominator only.
pub fn cdf(traces: &[Convergence], domain: QueryDomain) -> Vec<(u64, f64)> {
    let mut hits: Vec<u64> = traces.iter().filter_map(|t| t.queries_to_optimum(domain)).collect();
    hits.sort_unstable();
    let n = traces.len() as f64;
    let mut out: Vec<(u64, f64)> = Vec::new();
    for (i, &q) in hits.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == q => last.1 = p,
            _ => out.push((q, p)),
        }
    }
    out
}

/// Smallest sample `x` with empirical `F(x) >= p`. `sorted` must be ascending.
pub fn quantile(sorted: &[u64], p: f64) -> Option<u64> {
    if sorted.is_empty() || !(0.0..=1.0).contains(&p) {
        return None;
    }
    let n = sorted.len();
    let rank = libm::ceil(p * n as f64) as usize;
    Some(sorted[rank.clamp(1, n) - 1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QueryStats {
    pub count: u64,
    pub mean: f64,
    pub median: u64,
    pub min: u64,
    pub max: u64,
}

impl QueryStats {
    pub fn from_samples(samples: &[u64]) -> Option<Self> {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let sum: u128 = sorted.iter().map(|&q| u128::from(q)).sum();
        Some(Self {
            count: sorted.len() as u64,
            mean: sum as f64 / sorted.len().max(1) as f64,
            median: quantile(&sorted, 0.5)?,
            min: *sorted.first()?,
            max: *sorted.last()?,
        })
    }
}
