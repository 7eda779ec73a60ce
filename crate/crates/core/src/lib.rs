//! Bounds on one-way and two-way distillable entanglement of finite
//! dimensional bipartite states.
//!
//! Logarithms are base 2 throughout. Bipartite vectors are indexed
//! `i * d_B + j`, and Choi operators are unnormalized with the input factor
//! first: `J = Σ |i><j| ⊗ N(|i><j|)`.

pub mod bell;
pub mod bounds;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod sdp;
pub mod state;
pub mod states;

pub use channel::QuantumMap;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum, C64};
pub use state::DensityMatrix;
