//! QAOA-based syndrome decoding for classical linear codes and stabilizer codes.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.
//!
//! Bit order is little-endian throughout: entry 1 of a vector (index 0) is the
//! least significant bit of its integer encoding, and basis-state index bit
//! `j` is qubit `j + 1`.

pub mod archive;
pub mod catalog;
pub mod channel;
pub mod codes;
pub mod curve;
pub mod decoder;
pub mod engine;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod hamiltonian;
pub mod metrics;
pub mod optimizer;
pub mod problem;
pub mod rng;
pub mod scalar;

pub use codes::{Code, CodeDefinition, CodeKind, LinearCode, StabilizerCode};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use hamiltonian::{PenaltyParams, ZTerm};
pub use problem::{Construction, ConstructionKind, DecodingProblem};
pub use scalar::Real;

pub type Hamiltonian = hamiltonian::DiagonalHamiltonian<f64>;
pub type State = engine::StateVector<f64>;
pub type Schedule = engine::AngleSchedule<f64>;
pub type Objective = optimizer::Objective<f64>;
pub type Report = optimizer::OptimizerReport<f64>;

