use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{compile_state_prep, Gate, GateList};
use crate::qubo::QuboProblem;
use crate::{Error, Result};

/// Largest register the dense simulator will allocate.
pub const MAX_SIM_QUBITS: u32 = 24;
/// Largest register a dense (inverse) Fourier transform is applied to.
pub const MAX_DENSE_QFT_QUBITS: u32 = 12;

/// Dense state of `n` qubits; qubit `k` is bit `n - 1 - k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: u32) -> Result<Self> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(Error::Resource {
                what: "simulated qubits",
                requested: u64::from(n_qubits),
                limit: u64::from(MAX_SIM_QUBITS),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// Distribution of the first `q1` qubits, indexed by assignment mask with
    /// bit `r` holding qubit `r`.
    pub fn assignment_distribution(&self, q1: u32) -> Vec<f64> {
        let rest = self.n_qubits - q1;
        let mut dist = vec![0.0; 1 << q1];
        for (i, a) in self.amps.iter().enumerate() {
            let reg = i >> rest;
            dist[reverse_bits(reg, q1)] += a.norm_sqr();
        }
        dist
    }

    fn mask(&self, qubit: u32) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, list: &GateList) -> Result<()> {
        if list.n_qubits() != self.n_qubits {
            return Err(Error::LengthMismatch { left: list.n_qubits() as usize, right: self.n_qubits as usize });
        }
        let quantum = list.turn_angle();
        for gate in &list.gates {
            self.apply_gate(gate, quantum)?;
        }
        Ok(())
    }

    /// Applies one gate; `quantum` is the angle of one phase turn.
    pub fn apply_gate(&mut self, gate: &Gate, quantum: f64) -> Result<()> {
        if gate.qubits(self.n_qubits).iter().any(|&q| q >= self.n_qubits) {
            return Err(Error::InvalidParams("gate addresses a qubit outside the register"));
        }
        match gate {
            Gate::Hadamard { target } => {
                let m = self.mask(*target);
                let s = core::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * s;
                        self.amps[i | m] = (a - b) * s;
                    }
                }
            }
            Gate::Phase { target, turns } => self.phase_where(self.mask(*target), *turns, quantum),
            Gate::ControlledPhase { controls, target, turns } => {
                let m = controls.iter().fold(self.mask(*target), |m, &c| m | self.mask(c));
                self.phase_where(m, *turns, quantum);
            }
            Gate::PauliZ { target } => {
                let m = self.mask(*target);
                self.amps.iter_mut().enumerate().filter(|(i, _)| i & m != 0).for_each(|(_, a)| *a = -*a);
            }
            Gate::InverseQft { start, len } => self.fourier(*start, *len, -1.0)?,
            Gate::Qft { start, len } => self.fourier(*start, *len, 1.0)?,
            Gate::Diffusion => {
                self.amps.iter_mut().skip(1).for_each(|a| *a = -*a);
            }
        }
        Ok(())
    }

    fn phase_where(&mut self, mask: usize, turns: u64, quantum: f64) {
        if turns == 0 {
            return;
        }
        let w = Complex64::from_polar(1.0, quantum * turns as f64);
        self.amps.iter_mut().enumerate().filter(|(i, _)| i & mask == mask).for_each(|(_, a)| *a *= w);
    }

    /// Dense DFT with kernel `e^{sign 2 pi i j k / 2^len}` on a contiguous
    /// register whose first qubit is its most significant bit.
    fn fourier(&mut self, start: u32, len: u32, sign: f64) -> Result<()> {
        if len > MAX_DENSE_QFT_QUBITS {
            return Err(Error::Resource {
                what: "dense Fourier transform qubits",
                requested: u64::from(len),
                limit: u64::from(MAX_DENSE_QFT_QUBITS),
            });
        }
        let size = 1usize << len;
        let shift = self.n_qubits - start - len;
        let reg_mask = (size - 1) << shift;
        let step = core::f64::consts::TAU / size as f64;
        let roots: Vec<Complex64> = (0..size).map(|k| Complex64::from_polar(1.0, sign * step * k as f64)).collect();
        let norm = 1.0 / libm::sqrt(size as f64);
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for base in 0..self.amps.len() {
            if base & reg_mask != 0 {
                continue;
            }
            for (j, out) in buf.iter_mut().enumerate() {
                *out = (0..size)
                    .map(|k| roots[(j * k) & (size - 1)] * self.amps[base | (k << shift)])
                    .sum::<Complex64>()
                    * norm;
            }
            for (j, v) in buf.iter().enumerate() {
                self.amps[base | (j << shift)] = *v;
            }
        }
        Ok(())
    }
}

fn reverse_bits(v: usize, width: u32) -> usize {
    if width == 0 {
        0
    } else {
        v.reverse_bits() >> (usize::BITS - width)
    }
}

/// Runs `A_y` followed by `L` Grover iterations `A_y D A_y^H O` and returns
/// the distribution over assignments (bit `r` of the index is `x_r`).
pub fn grover_iterate(qubo: &QuboProblem, y: i64, rotations: u32) -> Result<Vec<f64>> {
    let mut all = grover_distributions(qubo, y, rotations)?;
    Ok(all.pop().unwrap_or_default())
}

/// Distributions after `0, 1, .., max_rotations` iterations from one run.
pub fn grover_distributions(qubo: &QuboProblem, y: i64, max_rotations: u32) -> Result<Vec<Vec<f64>>> {
    let prep = compile_state_prep(qubo, y)?;
    let adjoint = prep.adjoint();
    let mut state = StateVector::zero(prep.n_qubits())?;
    state.apply(&prep)?;
    let quantum = prep.turn_angle();
    let oracle = Gate::PauliZ { target: prep.q1 };
    let mut out = vec![state.assignment_distribution(prep.q1)];
    for _ in 0..max_rotations {
        state.apply_gate(&oracle, quantum)?;
        state.apply(&adjoint)?;
        state.apply_gate(&Gate::Diffusion, quantum)?;
        state.apply(&prep)?;
        out.push(state.assignment_distribution(prep.q1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::success_prob_l;
    use proptest::prelude::*;

    fn one_qubit() -> GateList {
        GateList { q1: 1, q2: 0, gates: Vec::new() }
    }

    #[test]
    fn hadamard_and_phase_on_one_qubit() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::Hadamard { target: 0 }, 0.0).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amps[0].re - h).abs() < 1e-15 && (s.amps[1].re - h).abs() < 1e-15);

        let mut s = StateVector::zero(1).unwrap();
        s.amps.swap(0, 1);
        s.apply_gate(&Gate::Phase { target: 0, turns: 3 }, 0.25).unwrap();
        assert!((s.amps[1] - Complex64::from_polar(1.0, 0.75)).norm() < 1e-15);
        assert!(s.apply(&one_qubit()).is_ok());
    }

    #[test]
    fn guards_and_dimension_checks() {
        assert!(matches!(StateVector::zero(25), Err(Error::Resource { .. })));
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.apply(&one_qubit()).is_err());
        assert!(s.apply_gate(&Gate::Hadamard { target: 2 }, 0.0).is_err());
    }

    #[test]
    fn qft_round_trip_and_basis_image() {
        let mut s = StateVector::zero(4).unwrap();
        s.apply_gate(&Gate::Hadamard { target: 0 }, 0.0).unwrap();
        s.apply_gate(&Gate::Hadamard { target: 3 }, 0.0).unwrap();
        let before = s.clone();
        s.apply_gate(&Gate::Qft { start: 1, len: 3 }, 0.0).unwrap();
        s.apply_gate(&Gate::InverseQft { start: 1, len: 3 }, 0.0).unwrap();
        for (a, b) in s.amps.iter().zip(&before.amps) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    /// Toy QUBO with `q1` variables and coefficients derived from `seed`.
    fn toy(q1: usize, seed: u64) -> QuboProblem {
        let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let coeffs: Vec<i64> = (0..q1 * q1)
            .map(|i| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                if i / q1 <= i % q1 {
                    (x % 9) as i64 - 4
                } else {
                    0
                }
            })
            .collect();
        QuboProblem::custom(q1, coeffs, (seed % 5) as i64 - 2).unwrap()
    }

    #[test]
    fn state_prep_encodes_shifted_objective() {
        for q1 in 1..=4usize {
            for seed in 0..6 {
                let qubo = toy(q1, seed);
                for y in [-3i64, 0, 2] {
                    let qubo = qubo.clone().with_q2(qubo.q2 + 3);
                    let q2 = qubo.q2;
                    let prep = compile_state_prep(&qubo, y).unwrap();
                    let mut s = StateVector::zero(prep.n_qubits()).unwrap();
                    s.apply(&prep).unwrap();
                    assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
                    let probs = s.probabilities();
                    for mask in 0..1u64 << q1 {
                        let v = (qubo.evaluate_mask(mask) - y).rem_euclid(1 << q2) as usize;
                        let reg = reverse_bits(mask as usize, q1 as u32);
                        let idx = (reg << q2) | v;
                        assert!((probs[idx] - 1.0 / (1u64 << q1) as f64).abs() < 1e-10, "q1={q1} seed={seed} y={y}");
                        // Sign bit is the first value qubit.
                        let negative = qubo.evaluate_mask(mask) - y < 0;
                        assert_eq!(idx & (1 << (q2 - 1)) != 0, negative);
                    }
                }
            }
        }
    }

    #[test]
    fn amplification_matches_closed_form() {
        for seed in 0..4 {
            let qubo = toy(4, seed);
            let qubo = qubo.clone().with_q2(qubo.q2.max(6));
            let lo = (0..16).map(|m| qubo.evaluate_mask(m)).min().unwrap();
            let hi = (0..16).map(|m| qubo.evaluate_mask(m)).max().unwrap();
            for y in lo..=hi + 1 {
                let good: Vec<bool> = (0..16).map(|m| qubo.evaluate_mask(m) < y).collect();
                let t = good.iter().filter(|&&g| g).count() as u64;
                for (l, dist) in grover_distributions(&qubo, y, 20).unwrap().into_iter().enumerate() {
                    let l = l as u32;
                    let mass: f64 = dist.iter().zip(&good).filter(|(_, g)| **g).map(|(p, _)| p).sum();
                    let expected = success_prob_l(u64::from(l), t, 16);
                    assert!((mass - expected).abs() < 1e-9, "seed={seed} y={y} L={l}: {mass} vs {expected}");
                    let total: f64 = dist.iter().sum();
                    assert!((total - 1.0).abs() < 1e-10);
                    for class in [true, false] {
                        let ps: Vec<f64> = dist.iter().zip(&good).filter(|(_, g)| **g == class).map(|(p, _)| *p).collect();
                        if let Some(first) = ps.first() {
                            assert!(ps.iter().all(|p| (p - first).abs() < 1e-10));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_objective_measures_zero_value() {
        let qubo = QuboProblem::custom(2, vec![0; 4], 0).unwrap().with_q2(3);
        let prep = compile_state_prep(&qubo, 0).unwrap();
        let mut s = StateVector::zero(5).unwrap();
        s.apply(&prep).unwrap();
        for (i, p) in s.probabilities().iter().enumerate() {
            let expected = if i & 0b111 == 0 { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12);
        }
        let uniform = grover_iterate(&qubo, 0, 0).unwrap();
        assert!(uniform.iter().all(|p| (p - 0.25).abs() < 1e-12));
    }

    #[test]
    fn single_run_matches_per_count_runs() {
        let qubo = toy(3, 7).with_q2(6);
        let all = grover_distributions(&qubo, 1, 5).unwrap();
        assert_eq!(all.len(), 6);
        for (l, dist) in all.iter().enumerate() {
            let direct = grover_iterate(&qubo, 1, l as u32).unwrap();
            assert!(dist.iter().zip(&direct).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn compiled_circuits_preserve_norm(seed in 0u64..1000, q1 in 1usize..4, y in -5i64..5) {
            let qubo = toy(q1, seed);
            let prep = compile_state_prep(&qubo, y).unwrap();
            let mut s = StateVector::zero(prep.n_qubits()).unwrap();
            for g in &prep.gates {
                s.apply_gate(g, prep.turn_angle()).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
            s.apply(&prep.adjoint()).unwrap();
            prop_assert!((s.amps[0].norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}
