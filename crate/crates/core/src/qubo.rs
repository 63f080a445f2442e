//! Integer QUBO objectives for the reduced constant-weight code search.
//!
//! With `P'` the reduced combinatorial matrix (rows `p'_r`, `q1` of them) and
//! `K = M - 1` codewords still to choose,
//!
//! ```text
//! f'(x) = sum_{r < r'} <p'_r, p'_r'>^l x_r x_r'
//! g'(x) = (sum_r x_r - K)^2
//! E(x)  = f'(x) + rho g'(x)
//! ```
//!
//! Expanding `g'` gives the upper-triangular matrix stored here: diagonal
//! `rho (1 - 2K)`, off-diagonal `<p'_r, p'_r'>^l + 2 rho` and constant
//! `rho K^2`. The two variants differ only in `rho`: the plain penalty
//! (`E'`, larger than any `f'`) or the tighter one derived from the bound
//! on the optimum (`E''`), which also shrinks the value register.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::code::{row_inner_product, BitMatrix, CodeParams};
use crate::math::{binomial_checked, ceil_log2, pow_checked};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Variant {
    /// Penalty `rho' = C(q1, 2)(w - 1)^l + 1`.
    EPrime,
    /// Penalty `rho'' = C(M-1, 2)(w - d/2)^l + 1`.
    EDoublePrime,
    /// Hand-built matrix with no formulation behind it.
    Custom,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::EPrime => "e-prime",
            Variant::EDoublePrime => "e-double-prime",
            Variant::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "e-prime" => Some(Variant::EPrime),
            "e-double-prime" => Some(Variant::EDoublePrime),
            "custom" => Some(Variant::Custom),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper-triangular integer QUBO `E(x) = x^T Q x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuboProblem {
    pub q1: usize,
    /// Row-major `q1 x q1`; entries below the diagonal are zero.
    coeffs: Vec<i64>,
    pub constant: i64,
    pub l: u32,
    pub rho: i64,
    /// Two's complement width of the value register.
    pub q2: u32,
    pub variant: Variant,
}

impl QuboProblem {
    /// Builds a problem from a dense row-major matrix; the lower triangle must be zero.
    pub fn from_dense(
        q1: usize,
        coeffs: Vec<i64>,
        constant: i64,
        l: u32,
        rho: i64,
        q2: u32,
        variant: Variant,
    ) -> Result<Self> {
        if coeffs.len() != q1 * q1 {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: q1 * q1 });
        }
        for r in 0..q1 {
            if coeffs[r * q1..r * q1 + r].iter().any(|&c| c != 0) {
                return Err(Error::InvalidParams("QUBO matrix must be upper triangular"));
            }
        }
        Ok(Self { q1, coeffs, constant, l, rho, q2, variant })
    }

    /// A hand-built problem; `q2` is the narrowest width holding every `E(x) - y`
    /// for thresholds `y` between the minimum and maximum value.
    pub fn custom(q1: usize, coeffs: Vec<i64>, constant: i64) -> Result<Self> {
        if q1 > 20 {
            return Err(Error::Resource { what: "custom QUBO variables", requested: q1 as u64, limit: 20 });
        }
        let mut problem = Self::from_dense(q1, coeffs, constant, 0, 0, 0, Variant::Custom)?;
        let (lo, hi) = (0..1u64 << q1)
            .map(|x| problem.evaluate_mask(x))
            .fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        problem.q2 = register_width_for(lo - hi, hi - lo);
        Ok(problem)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.coeffs[r * self.q1 + c]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn with_q2(mut self, q2: u32) -> Self {
        self.q2 = q2;
        self
    }

    /// `x^T Q x + constant` with `x_r = x[r]`.
    pub fn evaluate(&self, x: &[bool]) -> Result<i64> {
        if x.len() != self.q1 {
            return Err(Error::LengthMismatch { left: x.len(), right: self.q1 });
        }
        let mut acc = self.constant;
        for r in (0..self.q1).filter(|&r| x[r]) {
            let row = &self.coeffs[r * self.q1..(r + 1) * self.q1];
            acc += (r..self.q1).filter(|&c| x[c]).map(|c| row[c]).sum::<i64>();
        }
        Ok(acc)
    }

    /// [`evaluate`](Self::evaluate) with `x_r` = bit `r` of `mask`; needs `q1 <= 64`.
    pub fn evaluate_mask(&self, mask: u64) -> i64 {
        debug_assert!(self.q1 <= 64);
        let mut acc = self.constant;
        let mut rest = mask;
        while rest != 0 {
            let r = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = &self.coeffs[r * self.q1..(r + 1) * self.q1];
            acc += row[r];
            let mut higher = rest;
            while higher != 0 {
                let c = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                acc += row[c];
            }
        }
        acc
    }

    /// Symmetric interaction matrix: `sym[r][c] = Q[min][max]` for `r != c`, diagonal kept.
    pub fn symmetric(&self) -> Vec<i64> {
        let n = self.q1;
        let mut sym = vec![0; n * n];
        for r in 0..n {
            for c in r..n {
                let v = self.coeffs[r * n + c];
                sym[r * n + c] = v;
                sym[c * n + r] = v;
            }
        }
        sym
    }
}

/// Narrowest `q2` with `-2^(q2-1) <= lo` and `hi < 2^(q2-1)`.
pub fn register_width_for(lo: i64, hi: i64) -> u32 {
    (1..64).find(|&q2| {
        let half = 1i64 << (q2 - 1);
        -half <= lo && hi < half
    })
    .unwrap_or(64)
}

/// Smallest integer `l` with `C(M, 2) (2w - d)^l < (2w - d + 2)^l`, i.e.
/// `floor(log C(M,2) / log(1 + 2/(2w - d)) + 1)` evaluated without rounding.
pub fn exponent_l(params: &CodeParams) -> Result<u32> {
    if params.is_degenerate() {
        return Err(Error::Degenerate { max_codewords: params.degenerate_max_codewords() });
    }
    let pairs = BigUint::from(binomial_checked(u64::from(params.m), 2, "C(M, 2)")?);
    let gap = 2 * params.w - params.d;
    let (mut lhs, mut rhs) = (pairs, BigUint::from(1u32));
    for l in 0..=MAX_EXPONENT {
        if lhs < rhs {
            return Ok(l);
        }
        lhs *= gap;
        rhs *= gap + 2;
    }
    Err(Error::Overflow("exponent l"))
}

/// `l` beyond this cannot produce coefficients that fit in an `i64` anyway.
const MAX_EXPONENT: u32 = 4096;

/// Objective bounds used to pick the penalty, register width and initial threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundsReport {
    pub variant: Variant,
    pub q1: u64,
    pub l: u32,
    /// Upper bound on `f'`: `C(q1, 2)(w - 1)^l`.
    pub f_bar: i64,
    /// Maximum of `g'` over all assignments.
    pub g_bar: i64,
    pub rho: i64,
    /// `f_bar + rho g_bar`.
    pub e_max_bar: i64,
    /// Largest objective a valid code can have: `C(M-1, 2)(w - d/2)^l`.
    pub e_min_bar: i64,
    /// Initial threshold `e_min_bar + 1`.
    pub y0: i64,
    /// `ceil(log2 e_max_bar) + 1`.
    pub q2: u32,
}

pub fn compute_bounds(params: &CodeParams, q1: u64, l: u32, variant: Variant) -> Result<BoundsReport> {
    if q1 == 0 {
        return Err(Error::InvalidParams("q1 must be positive"));
    }
    let k = i64::from(params.m - 1);
    let q1_pairs = binomial_checked(q1, 2, "C(q1, 2)")?;
    let f_bar = i64::try_from(q1_pairs)
        .ok()
        .and_then(|p| p.checked_mul(pow_checked(i64::from(params.w) - 1, l, "(w-1)^l").ok()?))
        .ok_or(Error::Overflow("f_bar"))?;
    let q1_signed = i64::try_from(q1).map_err(|_| Error::Overflow("q1"))?;
    let g_bar = if 2 * k < q1_signed { (q1_signed - k).pow(2) } else { k * k };
    let k_pairs = binomial_checked(u64::from(params.m - 1), 2, "C(M-1, 2)")? as i64;
    let e_min_bar = k_pairs
        .checked_mul(pow_checked(i64::from(params.max_overlap()), l, "(w-d/2)^l")?)
        .ok_or(Error::Overflow("e_min_bar"))?;
    let rho = match variant {
        Variant::EPrime => f_bar.checked_add(1).ok_or(Error::Overflow("rho'"))?,
        Variant::EDoublePrime => e_min_bar + 1,
        Variant::Custom => return Err(Error::InvalidParams("custom problems have no bounds")),
    };
    let e_max_bar = rho
        .checked_mul(g_bar)
        .and_then(|p| p.checked_add(f_bar))
        .ok_or(Error::Overflow("e_max_bar"))?;
    let q2 = ceil_log2(e_max_bar.max(1) as u64) + 1;
    Ok(BoundsReport {
        variant,
        q1,
        l,
        f_bar,
        g_bar,
        rho,
        e_max_bar,
        e_min_bar,
        y0: e_min_bar + 1,
        q2,
    })
}

/// Builds `E'` or `E''` over the rows of `pprime`.
pub fn build_objective(pprime: &BitMatrix, params: &CodeParams, variant: Variant) -> Result<QuboProblem> {
    if pprime.n() != params.n {
        return Err(Error::LengthMismatch { left: pprime.n() as usize, right: params.n as usize });
    }
    let l = exponent_l(params)?;
    let q1 = pprime.len();
    let bounds = compute_bounds(params, q1 as u64, l, variant)?;
    let rho = bounds.rho;
    let k = i64::from(params.m - 1);

    let diagonal = rho.checked_mul(1 - 2 * k).ok_or(Error::Overflow("diagonal coefficient"))?;
    let pair_penalty = rho.checked_mul(2).ok_or(Error::Overflow("pair penalty"))?;
    let constant = rho.checked_mul(k * k).ok_or(Error::Overflow("constant"))?;
    // Inner products only take values 0..=w, so precompute their powers.
    let powers = (0..=params.w)
        .map(|ip| pow_checked(i64::from(ip), l, "inner product power"))
        .collect::<Result<Vec<_>>>()?;

    let mut coeffs = vec![0i64; q1 * q1];
    for r in 0..q1 {
        coeffs[r * q1 + r] = diagonal;
        for c in r + 1..q1 {
            let ip = row_inner_product(pprime.row(r), pprime.row(c)) as usize;
            coeffs[r * q1 + c] = powers[ip]
                .checked_add(pair_penalty)
                .ok_or(Error::Overflow("pair coefficient"))?;
        }
    }
    Ok(QuboProblem { q1, coeffs, constant, l, rho, q2: bounds.q2, variant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_combinatorial_matrix, decode_mask, min_distance, reduce_matrix, validate_code};

    fn reference() -> (CodeParams, BitMatrix) {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        let p = build_combinatorial_matrix(7, 3).unwrap();
        let reduced = reduce_matrix(&p, &params).unwrap();
        (params, reduced)
    }

    const X_OPT: &str = "1000010100100011000000";

    fn x_opt() -> Vec<bool> {
        X_OPT.bytes().map(|b| b == b'1').collect()
    }

    /// `l` by the floating-point formula, for comparison away from boundaries.
    fn l_by_logs(params: &CodeParams) -> u32 {
        let pairs = (params.m * (params.m - 1) / 2) as f64;
        let ratio = 1.0 + 2.0 / (2 * params.w - params.d) as f64;
        (pairs.ln() / ratio.ln() + 1.0).floor() as u32
    }

    #[test]
    fn exponent_l_examples() {
        let (params, _) = reference();
        assert_eq!(exponent_l(&params).unwrap(), 5);
        for (n, w, d) in [(7, 3, 4), (9, 4, 2), (10, 5, 6)] {
            assert_eq!(exponent_l(&CodeParams::new(n, w, d, 2).unwrap()).unwrap(), 1);
        }
        assert!(matches!(
            exponent_l(&CodeParams::new(7, 3, 6, 2).unwrap()),
            Err(Error::Degenerate { max_codewords: 2 })
        ));
    }

    #[test]
    fn exponent_l_matches_logs_and_upper_bound() {
        for w in 1..=8u32 {
            for d in (2..2 * w).step_by(2) {
                for m in 2..=40u32 {
                    let params = CodeParams::new(20, w, d, m).unwrap();
                    let l = exponent_l(&params).unwrap();
                    let pairs = f64::from(m * (m - 1) / 2);
                    let ratio = 1.0 + 2.0 / f64::from(2 * w - d);
                    let x = pairs.ln() / ratio.ln();
                    // Away from integer boundaries the float formula is reliable.
                    if (x - x.round()).abs() > 1e-9 {
                        assert_eq!(l, l_by_logs(&params), "{params}");
                    }
                    assert!(f64::from(l) > x);
                    if d >= w {
                        // 2w - d <= w, so the log ratio is at least ln(1 + 2/w).
                        let loose = pairs.ln() / (1.0 + 2.0 / f64::from(w)).ln();
                        assert!(f64::from(l) <= loose.floor() + 1.0, "{params}");
                    }
                }
            }
        }
    }

    #[test]
    fn exponent_l_near_boundaries() {
        // 3 * 2^l < 4^l first holds at l = 2.
        assert_eq!(exponent_l(&CodeParams::new(9, 3, 4, 3).unwrap()).unwrap(), 2);
        // 6 * 4^l < 6^l first holds at l = 5 (1.5^4 = 5.06, 1.5^5 = 7.59).
        assert_eq!(exponent_l(&CodeParams::new(9, 4, 4, 4).unwrap()).unwrap(), 5);
        // C(2,2) = 1: log ratio is exactly 0 and l must still be strictly larger.
        assert_eq!(exponent_l(&CodeParams::new(9, 4, 4, 2).unwrap()).unwrap(), 1);
    }

    #[test]
    fn exponent_l_is_not_bounded_by_half_log_pairs() {
        // The tempting bound l <= floor(ln C(M,2) / 2 + 1) would need
        // ln(1 + 2/(2w - d)) >= 2, which never holds; the reference instance breaks it.
        let (params, _) = reference();
        let l = exponent_l(&params).unwrap();
        let half_log = (21f64.ln() / 2.0 + 1.0).floor() as u32;
        assert_eq!((l, half_log), (5, 2));
    }

    #[test]
    fn golden_instance_double_prime() {
        let (params, reduced) = reference();
        let q = build_objective(&reduced, &params, Variant::EDoublePrime).unwrap();
        assert_eq!(q.q1, 22);
        assert_eq!(q.q2, 15);
        assert_eq!(q.l, 5);
        assert_eq!(q.rho, 16);
        assert_eq!(q.constant, 576);
        for r in 0..22 {
            assert_eq!(q.get(r, r), -176);
            for c in 0..r {
                assert_eq!(q.get(r, c), 0);
            }
            for c in r + 1..22 {
                assert!([32, 33, 64].contains(&q.get(r, c)));
            }
        }
        // First row of the published matrix.
        let first: [i64; 22] = [
            -176, 64, 64, 64, 64, 33, 64, 33, 33, 33, 33, 32, 64, 33, 33, 33, 33, 32, 64, 64, 33, 33,
        ];
        assert_eq!(&q.coeffs()[..22], &first);
    }

    #[test]
    fn golden_instance_prime() {
        let (params, reduced) = reference();
        let q = build_objective(&reduced, &params, Variant::EPrime).unwrap();
        assert_eq!(q.rho, 7393);
        assert_eq!(q.q2, 22);
        assert_eq!(q.constant, 7393 * 36);
    }

    #[test]
    fn bounds_for_reference_instance() {
        let (params, _) = reference();
        let b = compute_bounds(&params, 22, 5, Variant::EDoublePrime).unwrap();
        assert_eq!(b.f_bar, 7392);
        assert_eq!(b.g_bar, 256);
        assert_eq!(b.e_min_bar, 15);
        assert_eq!(b.rho, 16);
        assert_eq!(b.e_max_bar, 11488);
        assert_eq!(b.y0, 16);
        assert_eq!(b.q2, 15);
        let b = compute_bounds(&params, 22, 5, Variant::EPrime).unwrap();
        assert_eq!(b.rho, 7393);
        assert_eq!(b.e_max_bar, 1_900_000);
        assert_eq!(b.q2, 22);
        assert_eq!(b.y0, 16);
        assert!(compute_bounds(&params, 0, 5, Variant::EPrime).is_err());
    }

    #[test]
    fn g_bar_branches() {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        // 2(M-1) = 12 equals q1: second branch.
        assert_eq!(compute_bounds(&params, 12, 5, Variant::EPrime).unwrap().g_bar, 36);
        assert_eq!(compute_bounds(&params, 13, 5, Variant::EPrime).unwrap().g_bar, 49);
        assert_eq!(compute_bounds(&params, 5, 5, Variant::EPrime).unwrap().g_bar, 36);
    }

    #[test]
    fn evaluate_reference_points() {
        let (params, reduced) = reference();
        let q = build_objective(&reduced, &params, Variant::EDoublePrime).unwrap();
        assert_eq!(q.evaluate(&x_opt()).unwrap(), 15);
        assert_eq!(q.evaluate(&[false; 22]).unwrap(), 576);
        let mask = crate::code::bits_to_mask(&x_opt());
        assert_eq!(q.evaluate_mask(mask), 15);
        assert_eq!(q.evaluate_mask(0), 576);
        assert!(q.evaluate(&[true; 3]).is_err());
    }

    /// Term-by-term `f' + rho g'` straight from the rows.
    fn objective_oracle(reduced: &BitMatrix, params: &CodeParams, rho: i64, l: u32, mask: u64) -> i64 {
        let chosen: Vec<u64> =
            (0..reduced.len()).filter(|&r| mask >> r & 1 == 1).map(|r| reduced.row(r)).collect();
        let mut f = 0i64;
        for i in 0..chosen.len() {
            for j in i + 1..chosen.len() {
                f += i64::from((chosen[i] & chosen[j]).count_ones()).pow(l);
            }
        }
        let g = (chosen.len() as i64 - i64::from(params.m - 1)).pow(2);
        f + rho * g
    }

    #[test]
    fn evaluate_matches_term_oracle_exhaustively() {
        for (n, w, d, m) in [(5, 2, 2, 3), (5, 3, 2, 4), (5, 2, 2, 5), (6, 3, 4, 4), (4, 2, 2, 3)] {
            let params = CodeParams::new(n, w, d, m).unwrap();
            let p = build_combinatorial_matrix(n, w).unwrap();
            let reduced = reduce_matrix(&p, &params).unwrap();
            for variant in [Variant::EPrime, Variant::EDoublePrime] {
                let q = build_objective(&reduced, &params, variant).unwrap();
                for mask in 0..1u64 << q.q1 {
                    let expected = objective_oracle(&reduced, &params, q.rho, q.l, mask);
                    assert_eq!(q.evaluate_mask(mask), expected, "{params} {variant} {mask:b}");
                    let bits = crate::code::mask_to_bits(mask, q.q1);
                    assert_eq!(q.evaluate(&bits).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn popcount_m_minus_1_decodes_to_m_rows_of_weight_w() {
        let (params, reduced) = reference();
        let mut mask = 0b11_1111u64;
        for _ in 0..200 {
            let code = decode_mask(mask, &reduced, &params).unwrap();
            assert_eq!(code.len(), 7);
            assert!(code.rows().iter().all(|r| r.count_ones() == 3));
            let report = validate_code(&code, &params);
            assert!(report.row_count_ok && report.weights_ok);
            // Next mask with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }

    #[test]
    fn separation_property_on_small_instances() {
        // Valid codes stay at or below C(M-1,2)(w-d/2)^l; invalid ones reach (w-d/2+1)^l.
        for (n, w, d, m) in [(6, 3, 4, 4), (7, 3, 4, 5), (6, 2, 2, 4), (7, 4, 4, 4)] {
            let params = CodeParams::new(n, w, d, m).unwrap();
            let p = build_combinatorial_matrix(n, w).unwrap();
            let reduced = reduce_matrix(&p, &params).unwrap();
            let q = build_objective(&reduced, &params, Variant::EDoublePrime).unwrap();
            let b = compute_bounds(&params, q.q1 as u64, q.l, Variant::EDoublePrime).unwrap();
            let floor_invalid = i64::from(params.max_overlap() + 1).pow(q.l);
            let k = params.m - 1;
            for mask in (0..1u64 << q.q1).filter(|x| x.count_ones() == k) {
                let f = q.evaluate_mask(mask);
                let code = decode_mask(mask, &reduced, &params).unwrap();
                if min_distance(&code).unwrap() >= params.d {
                    assert!(f <= b.e_min_bar, "{params} {mask:b}");
                } else {
                    assert!(f >= floor_invalid, "{params} {mask:b}");
                }
            }
        }
    }

    #[test]
    fn penalty_dominance_on_small_instances() {
        for (n, w, d, m) in [(6, 3, 4, 4), (7, 3, 4, 5), (6, 2, 2, 4)] {
            let params = CodeParams::new(n, w, d, m).unwrap();
            let p = build_combinatorial_matrix(n, w).unwrap();
            let reduced = reduce_matrix(&p, &params).unwrap();
            for variant in [Variant::EPrime, Variant::EDoublePrime] {
                let q = build_objective(&reduced, &params, variant).unwrap();
                let b = compute_bounds(&params, q.q1 as u64, q.l, variant).unwrap();
                let half = 1i64 << (q.q2 - 1);
                let mut lo = i64::MAX;
                let mut hi = i64::MIN;
                for mask in 0..1u64 << q.q1 {
                    let v = q.evaluate_mask(mask);
                    lo = lo.min(v);
                    hi = hi.max(v);
                    assert!(v <= b.e_max_bar);
                    if mask.count_ones() != params.m - 1 {
                        assert!(v >= b.y0, "{params} {variant} {mask:b}");
                    }
                }
                // Every threshold between min and max keeps E(x) - y in range.
                assert!(hi - lo < half && lo - hi >= -half);
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let params = CodeParams::new(40, 20, 2, 60).unwrap();
        let b = compute_bounds(&params, 1 << 30, 60, Variant::EPrime);
        assert!(matches!(b, Err(Error::Overflow(_))));
    }

    #[test]
    fn custom_problem_width() {
        let q = QuboProblem::custom(2, vec![1, 0, 0, 2], 0).unwrap();
        assert_eq!((0..4).map(|m| q.evaluate_mask(m)).collect::<Vec<_>>(), [0, 1, 2, 3]);
        // E - y spans [-3, 3].
        assert_eq!(q.q2, 3);
        assert!(QuboProblem::custom(2, vec![1, 0, 5, 2], 0).is_err());
        assert_eq!(register_width_for(-4, 3), 3);
        assert_eq!(register_width_for(-5, 3), 4);
    }
}
