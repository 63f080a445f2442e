//! Constant-weight codewords as fixed-width bit rows.
//!
//! A row of length `n` is stored in the low `n` bits of a `u64`, column 0 in
//! the most significant of those bits, so `0b1110000` with `n = 7` prints as
//! `1110000`.

use alloc::vec::Vec;
use core::fmt;

use crate::math::binomial;
use crate::{Error, Result};

/// Longest supported codeword.
pub const MAX_LENGTH: u32 = 63;

/// Largest combinatorial matrix [`build_combinatorial_matrix`] will allocate.
pub const MAX_ROWS: u64 = 1 << 26;

/// The search condition `(n, w, d, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CodeParams {
    pub n: u32,
    pub w: u32,
    pub d: u32,
    pub m: u32,
}

impl CodeParams {
    pub fn new(n: u32, w: u32, d: u32, m: u32) -> Result<Self> {
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::InvalidParams("n must be in 1..=63"));
        }
        if w == 0 || w > n {
            return Err(Error::InvalidParams("w must satisfy 0 < w <= n"));
        }
        if d == 0 || d % 2 == 1 {
            return Err(Error::InvalidParams(
                "d must be a positive even integer (equal-weight words are at even distance)",
            ));
        }
        if d > 2 * w {
            return Err(Error::InvalidParams("d must not exceed 2w"));
        }
        if m < 2 {
            return Err(Error::InvalidParams("M must be at least 2"));
        }
        Ok(Self { n, w, d, m })
    }

    /// `d = 2w`: codewords must have pairwise disjoint supports.
    pub fn is_degenerate(&self) -> bool {
        self.d == 2 * self.w
    }

    /// Closed-form answer of the degenerate case, `floor(n / w)` codewords.
    pub fn degenerate_max_codewords(&self) -> u32 {
        self.n / self.w
    }

    /// Largest inner product two codewords may share, `w - d/2`.
    pub fn max_overlap(&self) -> u32 {
        self.w - self.d / 2
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, w={}, d={}, M={})", self.n, self.w, self.d, self.m)
    }
}

/// An ordered list of binary rows of common length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: u32,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: u32, rows: Vec<u64>) -> Result<Self> {
        if n > MAX_LENGTH {
            return Err(Error::InvalidParams("row length must be at most 63"));
        }
        if rows.iter().any(|&r| r >> n != 0) {
            return Err(Error::InvalidParams("row has bits beyond column n"));
        }
        Ok(Self { n, rows })
    }

    pub fn empty(n: u32) -> Self {
        Self { n, rows: Vec::new() }
    }

    /// Parses rows written as `'0'`/`'1'` strings; every row must have the same length.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::LengthMismatch { left: n, right: row.len() });
            }
            out.push(parse_row(row)?);
        }
        Self::new(n as u32, out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Value of column `col` (0 = leftmost) in row `row`.
    pub fn get(&self, row: usize, col: u32) -> bool {
        (self.rows[row] >> (self.n - 1 - col)) & 1 == 1
    }

    pub fn push(&mut self, row: u64) -> Result<()> {
        if row >> self.n != 0 {
            return Err(Error::InvalidParams("row has bits beyond column n"));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Reorders columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n as usize {
            return Err(Error::LengthMismatch { left: self.n as usize, right: perm.len() });
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 {
                return Err(Error::InvalidParams("not a permutation of the columns"));
            }
            seen |= 1 << p;
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                perm.iter().enumerate().fold(0u64, |acc, (j, &src)| {
                    let bit = (r >> (self.n - 1 - src)) & 1;
                    acc | bit << (self.n - 1 - j as u32)
                })
            })
            .collect();
        Ok(Self { n: self.n, rows })
    }

    /// Writes row `i` as a `'0'`/`'1'` string.
    pub fn fmt_row(&self, i: usize, f: &mut impl fmt::Write) -> fmt::Result {
        for col in 0..self.n {
            f.write_char(if self.get(i, col) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows.len() {
            self.fmt_row(i, f)?;
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Parses a `'0'`/`'1'` string, leftmost character = column 0.
pub fn parse_row(s: &str) -> Result<u64> {
    if s.len() > MAX_LENGTH as usize {
        return Err(Error::InvalidParams("row length must be at most 63"));
    }
    s.bytes().try_fold(0u64, |acc, b| match b {
        b'0' => Ok(acc << 1),
        b'1' => Ok(acc << 1 | 1),
        _ => Err(Error::InvalidParams("rows may only contain '0' and '1'")),
    })
}

/// The `binomial(n, w)` rows of weight `w` in the recursive order
/// `[1 | P(n-1, w-1); 0 | P(n-1, w)]`.
pub fn build_combinatorial_matrix(n: u32, w: u32) -> Result<BitMatrix> {
    if w > n {
        return Err(Error::InvalidParams("w must not exceed n"));
    }
    if n > MAX_LENGTH {
        return Err(Error::InvalidParams("n must be at most 63"));
    }
    let count = binomial(u64::from(n), u64::from(w)).unwrap_or(u64::MAX);
    if count > MAX_ROWS {
        return Err(Error::Resource {
            what: "combinatorial matrix rows",
            requested: count,
            limit: MAX_ROWS,
        });
    }
    let mut rows = Vec::with_capacity(count as usize);
    push_combinations(n, w, 0, &mut rows);
    Ok(BitMatrix { n, rows })
}

fn push_combinations(n: u32, w: u32, prefix: u64, out: &mut Vec<u64>) {
    if w == 0 {
        out.push(prefix << n);
    } else if w == n {
        out.push(prefix << n | ((1u64 << n) - 1));
    } else {
        push_combinations(n - 1, w - 1, prefix << 1 | 1, out);
        push_combinations(n - 1, w, prefix << 1, out);
    }
}

fn check_lengths(a: &[u8], b: &[u8]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// Number of positions where the 0/1 vectors differ.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> Result<u32> {
    check_lengths(a, b)?;
    Ok(a.iter().zip(b).filter(|(x, y)| (**x != 0) != (**y != 0)).count() as u32)
}

/// `sum_i a_i b_i` over 0/1 vectors.
pub fn inner_product(a: &[u8], b: &[u8]) -> Result<u32> {
    check_lengths(a, b)?;
    Ok(a.iter().zip(b).filter(|(x, y)| **x != 0 && **y != 0).count() as u32)
}

/// Hamming distance of two packed rows.
#[inline]
pub fn row_distance(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Inner product of two packed rows.
#[inline]
pub fn row_inner_product(a: u64, b: u64) -> u32 {
    (a & b).count_ones()
}

/// Drops the first row `p0` and every row closer than `d` to it.
///
/// The row count equals `sum_{i=0}^{w-d/2} C(w, i) C(n-w, w-i)` when `p` is
/// the full combinatorial matrix.
pub fn reduce_matrix(p: &BitMatrix, params: &CodeParams) -> Result<BitMatrix> {
    if p.n != params.n {
        return Err(Error::LengthMismatch { left: p.n as usize, right: params.n as usize });
    }
    let Some(&p0) = p.rows.first() else {
        return Ok(BitMatrix::empty(p.n));
    };
    let rows = p.rows[1..]
        .iter()
        .copied()
        .filter(|&r| row_distance(p0, r) >= params.d)
        .collect();
    Ok(BitMatrix { n: p.n, rows })
}

/// Closed-form row count of [`reduce_matrix`].
pub fn reduced_row_count(params: &CodeParams) -> Option<u64> {
    let (n, w) = (u64::from(params.n), u64::from(params.w));
    (0..=u64::from(params.max_overlap())).try_fold(0u64, |acc, i| {
        let term = binomial(w, i)?.checked_mul(binomial(n - w, w - i)?)?;
        acc.checked_add(term)
    })
}

/// Smallest pairwise Hamming distance among the rows.
pub fn min_distance(code: &BitMatrix) -> Result<u32> {
    min_distance_pair(code).map(|(_, _, d)| d)
}

fn min_distance_pair(code: &BitMatrix) -> Result<(usize, usize, u32)> {
    if code.len() < 2 {
        return Err(Error::InvalidParams("minimum distance needs at least two rows"));
    }
    let mut best = (0, 1, u32::MAX);
    for (i, &a) in code.rows.iter().enumerate() {
        for (j, &b) in code.rows.iter().enumerate().skip(i + 1) {
            let dist = row_distance(a, b);
            if dist < best.2 {
                best = (i, j, dist);
            }
        }
    }
    Ok(best)
}

/// The codebook selected by `x`: `p0` followed by every row `r` of `pprime`
/// with `x[r] = 1`.
pub fn decode_solution(x: &[bool], pprime: &BitMatrix, params: &CodeParams) -> Result<BitMatrix> {
    if x.len() != pprime.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: pprime.len() });
    }
    let p0 = first_codeword(params.n, params.w);
    let mut rows = Vec::with_capacity(params.m as usize);
    rows.push(p0);
    rows.extend(x.iter().zip(&pprime.rows).filter(|(&on, _)| on).map(|(_, &r)| r));
    Ok(BitMatrix { n: pprime.n, rows })
}

/// Same as [`decode_solution`] with `x` packed as a bit mask (`x_r` = bit `r`).
pub fn decode_mask(x: u64, pprime: &BitMatrix, params: &CodeParams) -> Result<BitMatrix> {
    let q1 = pprime.len();
    if q1 < 64 && x >> q1 != 0 {
        return Err(Error::InvalidParams("assignment has bits beyond q1"));
    }
    decode_solution(&mask_to_bits(x, q1), pprime, params)
}

/// `p0`: `w` ones followed by `n - w` zeros, the first row of `P(n, w)`.
pub fn first_codeword(n: u32, w: u32) -> u64 {
    ((1u64 << w) - 1) << (n - w)
}

/// Unpacks `x_r` = bit `r` of `mask` into a `len`-element vector.
pub fn mask_to_bits(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|r| r < 64 && mask >> r & 1 == 1).collect()
}

/// Packs `x` into a mask with `x_r` at bit `r`. `x` must have at most 64 entries.
pub fn bits_to_mask(x: &[bool]) -> u64 {
    debug_assert!(x.len() <= 64);
    x.iter().enumerate().fold(0, |acc, (r, &b)| acc | u64::from(b) << r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    RowCount { expected: u32, found: u32 },
    Length { row: u32 },
    Weight { row: u32, weight: u32 },
    Distance { first: u32, second: u32, distance: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::RowCount { expected, found } => {
                write!(f, "expected {expected} codewords, found {found}")
            }
            Violation::Length { row } => write!(f, "row {row} has the wrong length"),
            Violation::Weight { row, weight } => write!(f, "row {row} has weight {weight}"),
            Violation::Distance { first, second, distance } => {
                write!(f, "rows {first} and {second} are at distance {distance}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub row_count_ok: bool,
    pub lengths_ok: bool,
    pub weights_ok: bool,
    /// `None` when the code has fewer than two rows.
    pub min_distance: Option<u32>,
    pub distance_ok: bool,
    /// First violation in the order: count, lengths, weights, distance.
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks a codebook against `(n, w, d, M)`.
pub fn validate_code(code: &BitMatrix, params: &CodeParams) -> ValidationReport {
    let mut violations = Vec::new();

    let row_count_ok = code.len() == params.m as usize;
    if !row_count_ok {
        violations.push(Violation::RowCount { expected: params.m, found: code.len() as u32 });
    }
    let lengths_ok = code.n == params.n;
    if !lengths_ok && !code.is_empty() {
        violations.push(Violation::Length { row: 0 });
    }
    let bad_weight = code
        .rows
        .iter()
        .enumerate()
        .find(|(_, r)| r.count_ones() != params.w)
        .map(|(i, r)| Violation::Weight { row: i as u32, weight: r.count_ones() });
    let weights_ok = bad_weight.is_none();
    violations.extend(bad_weight);

    let pair = min_distance_pair(code).ok();
    let distance_ok = pair.is_none_or(|(_, _, dist)| dist >= params.d);
    if let Some((a, b, dist)) = pair.filter(|_| !distance_ok) {
        violations.push(Violation::Distance { first: a as u32, second: b as u32, distance: dist });
    }

    ValidationReport {
        row_count_ok,
        lengths_ok,
        weights_ok,
        min_distance: pair.map(|(_, _, d)| d),
        distance_ok,
        first_violation: violations.first().copied(),
    }
}

/// Largest codebook size supported by [`max_code_size`].
pub const MAX_EXHAUSTIVE_WORDS: u64 = 128;

/// `A(n, d, w)` by exhaustive maximum-clique search over `P(n, w)`.
///
/// Only for tiny instances: `binomial(n, w)` must be at most 128.
pub fn max_code_size(n: u32, d: u32, w: u32) -> Result<u32> {
    if w > n {
        return Ok(0);
    }
    let words = binomial(u64::from(n), u64::from(w)).unwrap_or(u64::MAX);
    if words > MAX_EXHAUSTIVE_WORDS {
        return Err(Error::Resource {
            what: "exhaustive code search words",
            requested: words,
            limit: MAX_EXHAUSTIVE_WORDS,
        });
    }
    let rows = build_combinatorial_matrix(n, w)?.rows;
    let count = rows.len();
    let full = if count == 128 { u128::MAX } else { (1u128 << count) - 1 };
    let compatible: Vec<u128> = rows
        .iter()
        .map(|&a| {
            rows.iter()
                .enumerate()
                .filter(|&(_, &b)| row_distance(a, b) >= d)
                .fold(0u128, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let mut best = 0;
    grow_clique(&compatible, full, 0, &mut best);
    Ok(best)
}

fn grow_clique(compatible: &[u128], mut candidates: u128, size: u32, best: &mut u32) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    while candidates != 0 {
        if size + candidates.count_ones() <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= !(1u128 << v);
        grow_clique(compatible, candidates & compatible[v], size + 1, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::{String, ToString};
    use alloc::vec;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn row_string(m: &BitMatrix, i: usize) -> String {
        let mut s = String::new();
        m.fmt_row(i, &mut s).unwrap();
        s
    }

    pub(crate) fn c_opt() -> BitMatrix {
        BitMatrix::from_strs(&[
            "1110000", "1001100", "1000011", "0101010", "0100101", "0011001", "0010110",
        ])
        .unwrap()
    }

    #[test]
    fn params_reject_odd_and_out_of_range() {
        assert!(CodeParams::new(7, 3, 4, 7).is_ok());
        assert!(matches!(CodeParams::new(7, 3, 3, 7), Err(Error::InvalidParams(_))));
        assert!(CodeParams::new(7, 8, 4, 7).is_err());
        assert!(CodeParams::new(7, 3, 8, 7).is_err());
        assert!(CodeParams::new(7, 3, 4, 1).is_err());
        assert!(CodeParams::new(0, 0, 2, 2).is_err());
        let p = CodeParams::new(7, 3, 6, 2).unwrap();
        assert!(p.is_degenerate());
        assert_eq!(p.degenerate_max_codewords(), 2);
    }

    #[test]
    fn combinatorial_matrix_3_2() {
        let p = build_combinatorial_matrix(3, 2).unwrap();
        let rows: Vec<String> = (0..p.len()).map(|i| row_string(&p, i)).collect();
        assert_eq!(rows, ["110", "101", "011"]);
    }

    #[test]
    fn combinatorial_matrix_first_row() {
        let p = build_combinatorial_matrix(7, 3).unwrap();
        assert_eq!(row_string(&p, 0), "1110000");
        assert_eq!(p.row(0), first_codeword(7, 3));
    }

    #[test]
    fn combinatorial_matrix_counts_and_weights() {
        for n in 0..=12u32 {
            for w in 0..=n {
                let p = build_combinatorial_matrix(n, w).unwrap();
                let fact = |m: u32| (1..=u64::from(m)).product::<u64>();
                assert_eq!(p.len() as u64, fact(n) / (fact(w) * fact(n - w)), "({n}, {w})");
                assert!(p.rows().iter().all(|r| r.count_ones() == w));
                let mut sorted = p.rows().to_vec();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), p.len());
            }
        }
        assert!(build_combinatorial_matrix(3, 4).is_err());
    }

    #[test]
    fn combinatorial_matrix_is_deterministic() {
        assert_eq!(build_combinatorial_matrix(10, 4), build_combinatorial_matrix(10, 4));
    }

    #[test]
    fn distance_and_inner_product_examples() {
        let a = bits("1110000");
        let b = bits("1001100");
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        assert_eq!(hamming_distance(&a, &b).unwrap(), 4);
        assert_eq!(inner_product(&a, &a).unwrap(), 3);
        assert_eq!(inner_product(&a, &b).unwrap(), 1);
        assert_eq!(
            hamming_distance(&a, &bits("101")),
            Err(Error::LengthMismatch { left: 7, right: 3 })
        );
        assert!(inner_product(&a, &bits("1")).is_err());
    }

    #[test]
    fn inner_product_exhaustive_over_p_5_2() {
        let p = build_combinatorial_matrix(5, 2).unwrap();
        for &a in p.rows() {
            for &b in p.rows() {
                let va: Vec<u8> = (0..5).rev().map(|i| (a >> i & 1) as u8).collect();
                let vb: Vec<u8> = (0..5).rev().map(|i| (b >> i & 1) as u8).collect();
                let mut brute = 0;
                for i in 0..5 {
                    if va[i] == 1 && vb[i] == 1 {
                        brute += 1;
                    }
                }
                assert_eq!(inner_product(&va, &vb).unwrap(), brute);
                assert_eq!(row_inner_product(a, b), brute);
            }
        }
    }

    #[test]
    fn distance_identity_exhaustive() {
        // For equal weight w: d(a, b) = 2 (w - <a, b>).
        for n in 1..=10u32 {
            for w in 0..=n {
                let p = build_combinatorial_matrix(n, w).unwrap();
                for &a in p.rows() {
                    for &b in p.rows() {
                        assert_eq!(row_distance(a, b), 2 * (w - row_inner_product(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_matrix_7_3_4_matches_listed_rows() {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        let p = build_combinatorial_matrix(7, 3).unwrap();
        let reduced = reduce_matrix(&p, &params).unwrap();
        assert_eq!(reduced.len(), 22);
        // Columns of the transposed listing, i.e. rows of P'(7, 3).
        let listing = [
            "1111110000000000000000",
            "0000001111110000000000",
            "0000000000001111110000",
            "1110001110001110001110",
            "1001101001101001101101",
            "0101010101010101011011",
            "0010110010110010110111",
        ];
        for r in 0..22 {
            let expected: String = listing.iter().map(|l| l.as_bytes()[r] as char).collect();
            assert_eq!(row_string(&reduced, r), expected, "row {r}");
        }
    }

    #[test]
    fn reduced_matrix_d6_and_d2() {
        let p = build_combinatorial_matrix(7, 3).unwrap();
        let params = CodeParams::new(7, 3, 6, 2).unwrap();
        let reduced = reduce_matrix(&p, &params).unwrap();
        let p0 = p.row(0);
        let brute: Vec<u64> =
            p.rows()[1..].iter().copied().filter(|&r| row_distance(p0, r) >= 6).collect();
        assert_eq!(reduced.rows(), &brute[..]);
        assert_eq!(reduced.len(), 4);
        assert!(reduced.rows().iter().all(|&r| row_inner_product(r, p0) == 0));

        let params = CodeParams::new(7, 3, 2, 5).unwrap();
        assert_eq!(reduce_matrix(&p, &params).unwrap().len(), 35 - 1);
    }

    #[test]
    fn reduced_row_count_matches_closed_form() {
        for n in 1..=10u32 {
            for w in 1..=n {
                let p = build_combinatorial_matrix(n, w).unwrap();
                for d in (2..=2 * w).step_by(2) {
                    let params = CodeParams::new(n, w, d, 2).unwrap();
                    let reduced = reduce_matrix(&p, &params).unwrap();
                    let closed = reduced_row_count(&params).unwrap();
                    assert_eq!(reduced.len() as u64, closed, "({n}, {w}, {d})");
                }
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(&c_opt()).unwrap(), 4);
        let dup = BitMatrix::from_strs(&["1100", "0011", "1100"]).unwrap();
        assert_eq!(min_distance(&dup).unwrap(), 0);
        let one = BitMatrix::from_strs(&["1100"]).unwrap();
        assert!(min_distance(&one).is_err());
    }

    #[test]
    fn decode_x_opt() {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        let p = build_combinatorial_matrix(7, 3).unwrap();
        let reduced = reduce_matrix(&p, &params).unwrap();
        let x: Vec<bool> =
            "1000010100100011000000".bytes().map(|b| b == b'1').collect();
        let code = decode_solution(&x, &reduced, &params).unwrap();
        assert_eq!(code, c_opt());
        assert!(validate_code(&code, &params).is_valid());

        let zero = decode_solution(&[false; 22], &reduced, &params).unwrap();
        assert_eq!(zero.rows(), &[first_codeword(7, 3)]);
        assert!(decode_solution(&[true; 3], &reduced, &params).is_err());
        assert_eq!(decode_mask(bits_to_mask(&x), &reduced, &params).unwrap(), c_opt());
    }

    #[test]
    fn validate_reports_violations() {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        let report = validate_code(&c_opt(), &params);
        assert!(report.is_valid());
        assert_eq!(report.min_distance, Some(4));

        let mut rows = c_opt().rows().to_vec();
        rows[3] ^= 1;
        let flipped = BitMatrix::new(7, rows).unwrap();
        let report = validate_code(&flipped, &params);
        assert!(!report.weights_ok);
        assert!(matches!(report.first_violation, Some(Violation::Weight { row: 3, .. })));

        let short = BitMatrix::new(7, c_opt().rows()[..5].to_vec()).unwrap();
        assert!(matches!(
            validate_code(&short, &params).first_violation,
            Some(Violation::RowCount { expected: 7, found: 5 })
        ));

        let close = BitMatrix::from_strs(&["1110000", "1101000"]).unwrap();
        let report = validate_code(&close, &CodeParams::new(7, 3, 4, 2).unwrap());
        assert_eq!(
            report.first_violation,
            Some(Violation::Distance { first: 0, second: 1, distance: 2 })
        );
        assert_eq!(report.first_violation.unwrap().to_string(), "rows 0 and 1 are at distance 2");
    }

    #[test]
    fn column_permuted_c_opt_is_valid() {
        let params = CodeParams::new(7, 3, 4, 7).unwrap();
        let permuted = c_opt().permute_columns(&[6, 2, 4, 0, 5, 1, 3]).unwrap();
        assert_ne!(permuted, c_opt());
        assert!(validate_code(&permuted, &params).is_valid());
        assert!(c_opt().permute_columns(&[0, 0, 1, 2, 3, 4, 5]).is_err());
    }

    #[test]
    fn max_code_size_small_values() {
        assert_eq!(max_code_size(7, 4, 3).unwrap(), 7);
        assert_eq!(max_code_size(6, 4, 3).unwrap(), 4);
        assert_eq!(max_code_size(7, 6, 3).unwrap(), 2);
        assert_eq!(max_code_size(5, 2, 2).unwrap(), 10);
        assert!(max_code_size(10, 4, 5).is_err());
    }

    #[test]
    fn display_round_trips_through_from_strs() {
        let p = build_combinatorial_matrix(5, 2).unwrap();
        let text = p.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(BitMatrix::from_strs(&lines).unwrap(), p);
        assert!(BitMatrix::from_strs(&["10", "1"]).is_err());
        assert!(BitMatrix::from_strs(&["1x"]).is_err());
        assert_eq!(vec![1u8], bits("1"));
    }

    fn arb_code() -> impl Strategy<Value = (u32, u32, Vec<u64>)> {
        (4u32..=9).prop_flat_map(|n| {
            (1..n).prop_flat_map(move |w| {
                let words = build_combinatorial_matrix(n, w).unwrap().rows().to_vec();
                (Just(n), Just(w), proptest::sample::subsequence(words.clone(), 2..=words.len().min(6)))
            })
        })
    }

    proptest! {
        #[test]
        fn validity_is_invariant_under_column_permutations(
            (n, w, rows) in arb_code(),
            seed in any::<u64>(),
        ) {
            let code = BitMatrix::new(n, rows).unwrap();
            let d = min_distance(&code).unwrap().max(2);
            let params = CodeParams::new(n, w, d.min(2 * w), code.len() as u32).unwrap();
            let mut perm: Vec<u32> = (0..n).collect();
            let mut s = seed;
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let permuted = code.permute_columns(&perm).unwrap();
            prop_assert_eq!(
                validate_code(&code, &params).is_valid(),
                validate_code(&permuted, &params).is_valid()
            );
            prop_assert_eq!(min_distance(&code).unwrap(), min_distance(&permuted).unwrap());
        }

        #[test]
        fn min_distance_matches_pairwise_brute_force((n, _w, rows) in arb_code()) {
            let code = BitMatrix::new(n, rows.clone()).unwrap();
            let mut brute = u32::MAX;
            for i in 0..rows.len() {
                for j in 0..rows.len() {
                    if i != j {
                        let mut dist = 0;
                        for c in 0..n {
                            if code.get(i, c) != code.get(j, c) {
                                dist += 1;
                            }
                        }
                        brute = brute.min(dist);
                    }
                }
            }
            prop_assert_eq!(min_distance(&code).unwrap(), brute);
        }

        #[test]
        fn distance_matches_inner_product_identity((n, w, rows) in arb_code()) {
            let unpack = |r: u64| -> Vec<u8> { (0..n).rev().map(|i| (r >> i & 1) as u8).collect() };
            let a = unpack(rows[0]);
            let b = unpack(rows[1]);
            prop_assert_eq!(
                hamming_distance(&a, &b).unwrap(),
                2 * (w - inner_product(&a, &b).unwrap())
            );
        }
    }
}
