use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::QuboProblem;
use crate::{Error, Result};

/// Default guard on the number of enumerated variables.
pub const DEFAULT_MAX_Q1: u32 = 26;
/// Assignment indices are stored as `u32`.
pub const HARD_MAX_Q1: u32 = 32;

/// All `2^q1` objective values in ascending order, with the assignment behind each rank.
#[derive(Debug, Clone)]
pub struct Landscape {
    q1: u32,
    values: Vec<i64>,
    perm: Vec<u32>,
}

impl Landscape {
    pub fn q1(&self) -> u32 {
        self.q1
    }

    /// `N = 2^q1`.
    pub fn size(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `perm[rank]` is the assignment mask holding the `rank`-th smallest value.
    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn min_value(&self) -> i64 {
        self.values[0]
    }

    pub fn max_value(&self) -> i64 {
        self.values[self.values.len() - 1]
    }

    /// Number of assignments with value strictly below `y`.
    pub fn count_below(&self, y: i64) -> u64 {
        self.values.partition_point(|&v| v < y) as u64
    }

    /// `(assignment, value)` at `rank`.
    pub fn at_rank(&self, rank: u64) -> (u64, i64) {
        let r = rank as usize;
        (u64::from(self.perm[r]), self.values[r])
    }
}

/// Enumerates every assignment of `qubo` in Gray-code order, one variable
/// flip (and `O(q1)` work) per step, then sorts by value.
pub fn build_landscape(qubo: &QuboProblem, max_q1: u32) -> Result<Landscape> {
    let q1 = qubo.q1 as u32;
    let limit = max_q1.min(HARD_MAX_Q1);
    if q1 > limit {
        return Err(Error::Resource {
            what: "landscape variables",
            requested: u64::from(q1),
            limit: u64::from(limit),
        });
    }
    let n = qubo.q1;
    let sym = qubo.symmetric();
    let size = 1usize << q1;

    let mut raw = vec![0i64; size];
    // field[c] = sum of sym[c][j] over currently set j != c.
    let mut field = vec![0i64; n];
    let mut x = 0u64;
    let mut value = qubo.constant;
    raw[0] = value;
    for i in 1..size {
        let j = i.trailing_zeros() as usize;
        let bit = 1u64 << j;
        let delta = sym[j * n + j] + field[j];
        let sign = if x & bit == 0 { 1 } else { -1 };
        value += sign * delta;
        x ^= bit;
        let column = &sym[j * n..(j + 1) * n];
        for (c, f) in field.iter_mut().enumerate() {
            if c != j {
                *f += sign * column[c];
            }
        }
        raw[x as usize] = value;
    }

    let mut keyed: Vec<(i64, u32)> = raw.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    drop(raw);
    // Ties keep ascending assignment order.
    keyed.sort_unstable();
    let (values, perm) = keyed.into_iter().unzip();
    Ok(Landscape { q1, values, perm })
}
