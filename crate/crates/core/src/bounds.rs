//! Success probabilities, rotation counts and solution-count bounds.
//!
//! Probabilities follow the uniform-superposition amplitude amplification
//! model: with `t` marked items out of `N` and `theta = asin(sqrt(t / N))`,
//! `L` Grover iterations succeed with probability `sin^2((2L + 1) theta)`,
//! and drawing `L` uniformly from `{0, .., ceil(k) - 1}` succeeds with
//! probability `P_k = 1/2 - sin(4 k theta) / (4 k sin(2 theta))`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use crate::code::CodeParams;
use crate::math::{binomial, factorial};
use crate::{Error, Result};

/// `asin(sqrt(t / N))`.
pub fn rotation_angle(t: u64, n: u64) -> f64 {
    libm::asin(libm::sqrt(t as f64 / n as f64))
}

/// Probability that `L` Grover iterations yield one of `t` solutions out of `n`.
pub fn success_prob_l(l: u64, t: u64, n: u64) -> f64 {
    debug_assert!(t <= n && n >= 1);
    if t == 0 {
        return 0.0;
    }
    let theta = rotation_angle(t, n);
    let s = libm::sin((2 * l + 1) as f64 * theta);
    (s * s).clamp(0.0, 1.0)
}

/// `floor(pi/4 * sqrt(N / t))`, the iteration count maximizing [`success_prob_l`].
pub fn l_opt(t: u64, n: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::NoSolution);
    }
    if t > n {
        return Err(Error::InvalidParams("t must not exceed N"));
    }
    Ok(libm::floor(FRAC_PI_4 * libm::sqrt(n as f64 / t as f64)) as u64)
}

/// Success probability of one round when `L` is uniform on `{0, .., k - 1}`.
pub fn success_prob_k(k: f64, t: u64, n: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::NoSolution);
    }
    if t > n {
        return Err(Error::InvalidParams("t must not exceed N"));
    }
    if t == n {
        return Ok(1.0);
    }
    let theta = rotation_angle(t, n);
    Ok(prob_k_at(k, theta))
}

fn prob_k_at(k: f64, theta: f64) -> f64 {
    0.5 - libm::sin(4.0 * k * theta) / (4.0 * k * libm::sin(2.0 * theta))
}

/// Known `A(n, d, w)` for `n <= 8`, `1 <= w <= n`, even `2 <= d <= 2w`,
/// obtained by exhaustive search (see [`crate::code::max_code_size`]).
#[rustfmt::skip]
const KNOWN_A: &[(u8, u8, u8, u8)] = &[
    (1,2,1,1),
    (2,2,1,2),(2,2,2,1),(2,4,2,1),
    (3,2,1,3),(3,2,2,3),(3,4,2,1),(3,2,3,1),(3,4,3,1),(3,6,3,1),
    (4,2,1,4),(4,2,2,6),(4,4,2,2),(4,2,3,4),(4,4,3,1),(4,6,3,1),(4,2,4,1),(4,4,4,1),(4,6,4,1),(4,8,4,1),
    (5,2,1,5),(5,2,2,10),(5,4,2,2),(5,2,3,10),(5,4,3,2),(5,6,3,1),(5,2,4,5),(5,4,4,1),(5,6,4,1),(5,8,4,1),
    (5,2,5,1),(5,4,5,1),(5,6,5,1),(5,8,5,1),(5,10,5,1),
    (6,2,1,6),(6,2,2,15),(6,4,2,3),(6,2,3,20),(6,4,3,4),(6,6,3,2),(6,2,4,15),(6,4,4,3),(6,6,4,1),(6,8,4,1),
    (6,2,5,6),(6,4,5,1),(6,6,5,1),(6,8,5,1),(6,10,5,1),(6,2,6,1),(6,4,6,1),(6,6,6,1),(6,8,6,1),(6,10,6,1),
    (6,12,6,1),
    (7,2,1,7),(7,2,2,21),(7,4,2,3),(7,2,3,35),(7,4,3,7),(7,6,3,2),(7,2,4,35),(7,4,4,7),(7,6,4,2),(7,8,4,1),
    (7,2,5,21),(7,4,5,3),(7,6,5,1),(7,8,5,1),(7,10,5,1),(7,2,6,7),(7,4,6,1),(7,6,6,1),(7,8,6,1),(7,10,6,1),
    (7,12,6,1),(7,2,7,1),(7,4,7,1),(7,6,7,1),(7,8,7,1),(7,10,7,1),(7,12,7,1),(7,14,7,1),
    (8,2,1,8),(8,2,2,28),(8,4,2,4),(8,2,3,56),(8,4,3,8),(8,6,3,2),(8,2,4,70),(8,4,4,14),(8,6,4,2),(8,8,4,2),
    (8,2,5,56),(8,4,5,8),(8,6,5,2),(8,8,5,1),(8,10,5,1),(8,2,6,28),(8,4,6,4),(8,6,6,1),(8,8,6,1),(8,10,6,1),
    (8,12,6,1),(8,2,7,8),(8,4,7,1),(8,6,7,1),(8,8,7,1),(8,10,7,1),(8,12,7,1),(8,14,7,1),(8,2,8,1),(8,4,8,1),
    (8,6,8,1),(8,8,8,1),(8,10,8,1),(8,12,8,1),(8,14,8,1),(8,16,8,1),
];

/// Looks up `A(n, d, w)` in the built-in table.
pub fn known_a(n: u32, d: u32, w: u32) -> Option<u32> {
    if w > n {
        return Some(0);
    }
    if d > 2 * w && w <= n && n <= 8 {
        return Some(1);
    }
    KNOWN_A
        .iter()
        .find(|&&(tn, td, tw, _)| (u32::from(tn), u32::from(td), u32::from(tw)) == (n, d, w))
        .map(|&(.., a)| u32::from(a))
}

/// Lower bound on the number of optimal assignments of the reduced problem.
///
/// Requires `w <= d` and `A(n-1, d, w) < M - 1`; `a_prev` is `A(n-1, d, w)`.
/// Returns `w!` when `w - d/2 = 1` and `min_{2 <= i <= w-d/2} C(w, i)` otherwise.
pub fn t_lower(params: &CodeParams, a_prev: u32) -> Result<u64> {
    if params.w > params.d {
        return Err(Error::BoundInapplicable("needs w <= d"));
    }
    if a_prev >= params.m - 1 {
        return Err(Error::BoundInapplicable("needs A(n-1, d, w) < M - 1"));
    }
    let overlap = params.max_overlap();
    match overlap {
        0 => Err(Error::BoundInapplicable("needs w - d/2 >= 1")),
        1 => factorial(u64::from(params.w)).ok_or(Error::Overflow("w!")),
        _ => (2..=u64::from(overlap))
            .map(|i| binomial(u64::from(params.w), i).ok_or(Error::Overflow("C(w, i)")))
            .try_fold(u64::MAX, |acc, c| c.map(|c| acc.min(c))),
    }
}

/// [`t_lower`] with `A(n-1, d, w)` taken from the built-in table.
pub fn t_lower_from_table(params: &CodeParams) -> Result<u64> {
    let a_prev = known_a(params.n - 1, params.d, params.w)
        .ok_or(Error::BoundInapplicable("A(n-1, d, w) is not in the built-in table"))?;
    t_lower(params, a_prev)
}

/// `ceil((1 + sqrt 2) / 2 * sqrt(2^q1 / t_low))`, the upper end of the
/// interval holding the optimal rotation-range cap.
pub fn k_opt_upper(t_low: u64, q1: u32) -> Result<u64> {
    if t_low == 0 {
        return Err(Error::NoSolution);
    }
    let n = libm::ldexp(1.0, q1 as i32);
    Ok(libm::ceil((1.0 + SQRT_2) / 2.0 * libm::sqrt(n / t_low as f64)) as u64)
}

/// Default bisection tolerance on `k`.
pub const DEFAULT_K_TOLERANCE: f64 = 1e-9;

/// Above this `t / 2^q1` the small-ratio approximation behind
/// [`k_opt_upper`] is reported as questionable.
pub const DEFAULT_SMALL_RATIO: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KoptResult {
    /// Minimizer of `k / P_k(t)` over `interval`.
    pub k_opt: f64,
    /// `k / P_k(t)` at `k_opt`: expected measurements per success.
    pub cost: f64,
    pub interval: (f64, f64),
    /// Interior stationary points and both interval ends, in increasing order.
    pub extrema: Vec<f64>,
    pub ratio: f64,
    /// `t / 2^q1` exceeded the small-ratio threshold.
    pub ratio_warning: bool,
}

/// `h(k) = k / P_k(t)`, the expected number of measurements per success.
pub fn expected_cost(k: f64, t: u64, n: u64) -> Result<f64> {
    Ok(k / success_prob_k(k, t, n)?)
}

/// The sign of `dh/dk` equals the sign of this function for `k > 0`.
fn cost_slope(k: f64, theta: f64) -> f64 {
    let alpha = libm::sin(2.0 * theta);
    let phase = 4.0 * k * theta;
    2.0 * k * alpha - 2.0 * libm::sin(phase) + phase * libm::cos(phase)
}

/// Minimizes `k / P_k(t)` over `[1, k_opt_upper(t, q1)]`.
///
/// The interval is cut into pieces no wider than a quarter period of
/// `sin(4 k theta)`, sign changes of the derivative are refined by bisection
/// to `tolerance`, and the best of the stationary points and both ends wins.
pub fn k_opt(t: u64, q1: u32, tolerance: f64) -> Result<KoptResult> {
    if q1 >= 63 {
        return Err(Error::InvalidParams("q1 must be below 63"));
    }
    let n = 1u64 << q1;
    if t == 0 {
        return Err(Error::NoSolution);
    }
    if t > n {
        return Err(Error::InvalidParams("t must not exceed 2^q1"));
    }
    let upper = (k_opt_upper(t, q1)? as f64).max(1.0);
    let ratio = t as f64 / n as f64;
    let ratio_warning = ratio > DEFAULT_SMALL_RATIO;
    let cost = |k: f64| k / success_prob_k(k, t, n).unwrap_or(1.0);

    let mut extrema = Vec::new();
    extrema.push(1.0);
    if t < n {
        let theta = rotation_angle(t, n);
        extrema.extend(slope_roots(theta, 1.0, upper, tolerance.max(f64::EPSILON)));
    }
    if upper > 1.0 {
        extrema.push(upper);
    }

    let (k_best, cost_best) = extrema
        .iter()
        .map(|&k| (k, cost(k)))
        .fold((1.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(KoptResult {
        k_opt: k_best,
        cost: cost_best,
        interval: (1.0, upper),
        extrema,
        ratio,
        ratio_warning,
    })
}

fn slope_roots(theta: f64, lo: f64, hi: f64, tolerance: f64) -> Vec<f64> {
    const MIN_SEGMENTS: f64 = 64.0;
    let quarter_period = PI / (8.0 * theta);
    let step = quarter_period.min((hi - lo) / MIN_SEGMENTS);
    let mut roots = Vec::new();
    if step.is_nan() || step <= 0.0 {
        return roots;
    }
    let mut a = lo;
    let mut fa = cost_slope(a, theta);
    while a < hi {
        let b = (a + step).min(hi);
        let fb = cost_slope(b, theta);
        if fa == 0.0 {
            if a > lo {
                roots.push(a);
            }
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(|k| cost_slope(k, theta), a, b, fa, tolerance));
        }
        a = b;
        fa = fb;
    }
    roots
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, tolerance: f64) -> f64 {
    while b - a > tolerance {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
