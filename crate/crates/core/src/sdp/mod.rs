//! Semidefinite programming: a problem builder, a first-order solver and
//! the concrete programs used by the entanglement bounds.

mod problem;
pub mod programs;
mod solver;

pub use problem::{block_inner, block_norm, Constraint, Entry, SdpProblem};
pub use solver::{solve, IterRecord, SdpSolution, SolveStatus, SolverOptions};
