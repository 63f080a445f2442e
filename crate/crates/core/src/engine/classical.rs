use alloc::vec::Vec;

use rand::Rng;

use super::aggregate::{Convergence, Step};
use crate::math::binomial;
use crate::qubo::QuboProblem;
use crate::{Error, Result};

/// Upper bound on the number of candidates held in memory.
pub const MAX_CANDIDATES: u64 = 1 << 26;

/// All assignments of a fixed Hamming weight with their objective values.
#[derive(Debug, Clone)]
pub struct ClassicalSearch {
    masks: Vec<u64>,
    values: Vec<i64>,
    min_value: i64,
}

impl ClassicalSearch {
    /// Enumerates every assignment of `qubo` with exactly `weight` ones.
    pub fn new(qubo: &QuboProblem, weight: u32) -> Result<Self> {
        let q1 = qubo.q1 as u32;
        if q1 > 63 || weight > q1 || weight == 0 {
            return Err(Error::InvalidParams("weight must lie in 1..=q1 with q1 < 64"));
        }
        let total = binomial(u64::from(q1), u64::from(weight)).unwrap_or(u64::MAX);
        if total > MAX_CANDIDATES {
            return Err(Error::Resource { what: "classical candidates", requested: total, limit: MAX_CANDIDATES });
        }
        let mut masks = Vec::with_capacity(total as usize);
        let mut mask = (1u64 << weight) - 1;
        let end = 1u64 << q1;
        while mask < end {
            masks.push(mask);
            // Next mask with the same popcount.
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            mask = ripple | (((mask ^ ripple) >> 2) / low);
        }
        let values: Vec<i64> = masks.iter().map(|&m| qubo.evaluate_mask(m)).collect();
        let min_value = values.iter().copied().min().ok_or(Error::NoSolution)?;
        Ok(Self { masks, values, min_value })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn min_value(&self) -> i64 {
        self.min_value
    }

    pub fn shuffler(&self) -> Shuffler {
        Shuffler::new(self.len())
    }

    /// Visits candidates in shuffled order until the minimum is found,
    /// calling `observe(mask, value)` on each evaluation.
    pub fn run_observed<R: Rng + ?Sized>(
        &self,
        shuffler: &mut Shuffler,
        rng: &mut R,
        mut observe: impl FnMut(u64, i64),
    ) -> ClassicalTrace {
        shuffler.reset();
        let mut steps: Vec<Step> = Vec::new();
        let mut best = i64::MAX;
        let mut best_mask = 0;
        let mut queries = 0u64;
        while let Some(i) = shuffler.next(rng) {
            let (mask, value) = (self.masks[i], self.values[i]);
            queries += 1;
            observe(mask, value);
            if value < best {
                best = value;
                best_mask = mask;
                steps.push(Step { classical: queries, quantum: 0, value });
            }
            if value == self.min_value {
                break;
            }
        }
        let optimum_at = steps.last().copied();
        ClassicalTrace {
            classical_queries: queries,
            best_mask,
            best_value: best,
            convergence: Convergence { steps, optimum_at },
        }
    }

    pub fn run<R: Rng + ?Sized>(&self, shuffler: &mut Shuffler, rng: &mut R) -> ClassicalTrace {
        self.run_observed(shuffler, rng, |_, _| {})
    }
}

/// Incremental Fisher-Yates shuffle of `0..n` that can be rewound cheaply.
///
/// Only the swaps made since the last reset are undone, so a trial that stops
/// early costs time proportional to its own length.
#[derive(Debug, Clone)]
pub struct Shuffler {
    order: Vec<u32>,
    undo: Vec<(u32, u32)>,
    pos: usize,
}

impl Shuffler {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "shuffler size exceeds u32");
        Self { order: (0..n as u32).collect(), undo: Vec::new(), pos: 0 }
    }

    /// Next element of a uniformly random permutation, or `None` when exhausted.
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        let n = self.order.len();
        if self.pos == n {
            return None;
        }
        let j = rng.gen_range(self.pos..n);
        self.order.swap(self.pos, j);
        self.undo.push((self.pos as u32, j as u32));
        self.pos += 1;
        Some(self.order[self.pos - 1] as usize)
    }

    pub fn reset(&mut self) {
        while let Some((i, j)) = self.undo.pop() {
            self.order.swap(i as usize, j as usize);
        }
        self.pos = 0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassicalTrace {
    pub classical_queries: u64,
    pub best_mask: u64,
    pub best_value: i64,
    pub convergence: Convergence,
}

/// One exhaustive-search trial with a fresh shuffler.
pub fn run_classical_exhaustive<R: Rng + ?Sized>(search: &ClassicalSearch, rng: &mut R) -> ClassicalTrace {
    search.run(&mut search.shuffler(), rng)
}
