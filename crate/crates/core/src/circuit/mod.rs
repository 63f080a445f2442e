//! Gate-level model of the phase-encoding state preparation `A_y`.
//!
//! Qubits `0..q1` hold the assignment, qubits `q1..q1 + q2` the value
//! register with its most significant (sign) bit first. Phase angles are
//! kept as integers in units of `2 pi / 2^q2`, so compilation is exact.

mod state;

pub use state::{grover_distributions, grover_iterate, StateVector, MAX_DENSE_QFT_QUBITS, MAX_SIM_QUBITS};

use alloc::vec::Vec;

use crate::qubo::QuboProblem;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Gate {
    Hadamard { target: u32 },
    /// `diag(1, e^{2 pi i turns / 2^q2})`.
    Phase { target: u32, turns: u64 },
    /// Phase on `target` applied only when every control is 1.
    ControlledPhase { controls: Vec<u32>, target: u32, turns: u64 },
    InverseQft { start: u32, len: u32 },
    Qft { start: u32, len: u32 },
    PauliZ { target: u32 },
    /// `2|0><0| - I` on the whole register.
    Diffusion,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Hadamard { .. } => "h",
            Gate::Phase { .. } => "r",
            Gate::ControlledPhase { controls, .. } if controls.len() == 1 => "cr",
            Gate::ControlledPhase { .. } => "ccr",
            Gate::InverseQft { .. } => "iqft",
            Gate::Qft { .. } => "qft",
            Gate::PauliZ { .. } => "z",
            Gate::Diffusion => "diffusion",
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self, n_qubits: u32) -> Vec<u32> {
        match self {
            Gate::Hadamard { target } | Gate::Phase { target, .. } | Gate::PauliZ { target } => alloc::vec![*target],
            Gate::ControlledPhase { controls, target, .. } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
            Gate::InverseQft { start, len } | Gate::Qft { start, len } => (*start..start + len).collect(),
            Gate::Diffusion => (0..n_qubits).collect(),
        }
    }

    pub fn turns(&self) -> Option<u64> {
        match self {
            Gate::Phase { turns, .. } | Gate::ControlledPhase { turns, .. } => Some(*turns),
            _ => None,
        }
    }

    fn adjoint(&self, modulus: u64) -> Gate {
        let neg = |t: u64| (modulus - t) & (modulus - 1);
        match self {
            Gate::Phase { target, turns } => Gate::Phase { target: *target, turns: neg(*turns) },
            Gate::ControlledPhase { controls, target, turns } => {
                Gate::ControlledPhase { controls: controls.clone(), target: *target, turns: neg(*turns) }
            }
            Gate::InverseQft { start, len } => Gate::Qft { start: *start, len: *len },
            Gate::Qft { start, len } => Gate::InverseQft { start: *start, len: *len },
            g => g.clone(),
        }
    }
}

/// An ordered circuit on `q1 + q2` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateList {
    pub q1: u32,
    pub q2: u32,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn n_qubits(&self) -> u32 {
        self.q1 + self.q2
    }

    /// Phase quantum in radians.
    pub fn turn_angle(&self) -> f64 {
        libm::ldexp(core::f64::consts::TAU, -(self.q2 as i32))
    }

    pub fn adjoint(&self) -> GateList {
        let modulus = 1u64 << self.q2;
        GateList { q1: self.q1, q2: self.q2, gates: self.gates.iter().rev().map(|g| g.adjoint(modulus)).collect() }
    }

    pub fn tally(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::Hadamard { .. } => c.hadamard += 1,
                Gate::Phase { .. } => c.phase += 1,
                Gate::ControlledPhase { controls, .. } if controls.len() == 1 => c.controlled_1 += 1,
                Gate::ControlledPhase { .. } => c.controlled_2 += 1,
                Gate::InverseQft { .. } => c.iqft += 1,
                _ => {}
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateCounts {
    pub hadamard: u64,
    pub phase: u64,
    pub controlled_1: u64,
    pub controlled_2: u64,
    pub iqft: u64,
}

/// Gate counts of `A_y` for a QUBO with every coefficient nonzero.
pub fn gate_counts(q1: u64, q2: u64) -> GateCounts {
    GateCounts {
        hadamard: q1 + q2,
        phase: q2,
        controlled_1: q1 * q2,
        controlled_2: q1 * q1.saturating_sub(1) / 2 * q2,
        iqft: 1,
    }
}

/// Compiles `A_y` for `E(x) - y`: Hadamards everywhere, a phase block per
/// quadratic, linear and constant term (in that order), then the IQFT.
///
/// A block for coefficient `a` puts `a 2^b` turns on the value qubit of
/// weight `2^b`. Zero coefficients produce no block.
pub fn compile_state_prep(qubo: &QuboProblem, y: i64) -> Result<GateList> {
    let q1 = qubo.q1 as u32;
    let q2 = qubo.q2;
    if q2 == 0 || q2 > 62 {
        return Err(Error::InvalidParams("value register width must lie in 1..=62"));
    }
    let constant = qubo.constant.checked_sub(y).ok_or(Error::Overflow("constant - y"))?;
    let modulus = 1u64 << q2;
    let mut gates: Vec<Gate> = (0..q1 + q2).map(|target| Gate::Hadamard { target }).collect();

    let block = |gates: &mut Vec<Gate>, a: i64, controls: &[u32]| {
        if a == 0 {
            return;
        }
        let base = a.rem_euclid(modulus as i64) as u64;
        for b in (0..q2).rev() {
            // Value qubit q1 + j carries weight 2^(q2 - 1 - j).
            let target = q1 + (q2 - 1 - b);
            let turns = (base << b) & (modulus - 1);
            gates.push(if controls.is_empty() {
                Gate::Phase { target, turns }
            } else {
                Gate::ControlledPhase { controls: controls.to_vec(), target, turns }
            });
        }
    };

    let n = qubo.q1;
    for r in 0..n {
        for c in r + 1..n {
            block(&mut gates, qubo.get(r, c), &[r as u32, c as u32]);
        }
    }
    for r in 0..n {
        block(&mut gates, qubo.get(r, r), &[r as u32]);
    }
    block(&mut gates, constant, &[]);
    gates.push(Gate::InverseQft { start: q1, len: q2 });
    Ok(GateList { q1, q2, gates })
}
