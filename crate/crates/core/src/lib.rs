//! Phase-only beam broadening of contiguous uniform subarrayed planar arrays.
//!
//! Subarray phases are grouped by distance from the array center, quantized to
//! the phase-shifter resolution, and searched with simulated annealing, a
//! genetic algorithm with elitism, or particle swarm optimization. Candidates
//! are scored by FFT synthesis of the array factor against a flat-top mask.

pub mod array;
pub mod cost;
pub mod error;
pub mod experiment;
pub mod objective;
pub mod optim;
pub mod pattern;
pub mod verify;

pub use error::{Error, Result};
