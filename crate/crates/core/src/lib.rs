//! Two-qubit entanglement and purity under random-unitary phase damping.
//!
//! A diagonal stochastic Hamiltonian driven by Gaussian accumulated phases
//! `(Ω₁, Ω₂, Ω₃)` produces a phase-damping channel that acts on a density
//! matrix as an entrywise (Hadamard) product `ρ' = D ⋆ ρ`. The channel
//! splits into a mean unitary `U_μ` and a real noise part `D̃`, and for
//! uncorrelated fields the noise part is a convex mixture of the four
//! diagonal Pauli conjugations.
//!
//! The crate provides
//!
//! * [`qmath`]: fixed-size complex matrices and a 4×4 eigensolver,
//! * [`states`]: pure two-qubit state construction and invariants,
//! * [`channels`]: damping matrices, noise probabilities, Kraus forms,
//! * [`measures`]: Wootters concurrence, purity and the closed-form laws,
//! * [`bounds`]: boundary curves of the concurrence–purity plane,
//! * [`montecarlo`]: ensemble-average estimates used as ground truth,
//! * [`cli`]: the command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod channels;
pub mod cli;
pub mod error;
pub mod measures;
pub mod montecarlo;
pub mod qmath;
pub mod states;
pub mod tolerances;

pub use error::{Error, Result};
