//! Search for binary constant weight codes with Grover adaptive search.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithmic
//! pieces:
//!
//! * [`code`]: combinatorial matrices, distances and code validation.
//! * [`qubo`]: the integer QUBO objectives and their bounds.
//! * [`bounds`]: solution-count and rotation-count bounds for the search.
//! * [`engine`]: exact Monte-Carlo simulation of BBHT and GAS over a fully
//!   enumerated objective landscape, plus the classical baseline.
//! * [`circuit`]: a small dense statevector simulator of the phase-encoding
//!   state preparation circuit, used to check the analytic model.
//!
//! File formats, the parallel trial runner and the command line live in the
//! `cwc-gas` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod circuit;
pub mod code;
pub mod engine;
mod error;
pub mod math;
pub mod qubo;

pub use error::{Error, Result};
