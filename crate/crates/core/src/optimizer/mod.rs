//! Non-convex searches behind the symmetry-reduced bounds, the two-way
//! closed-form achievers and the lower convex envelope of sampled curves.

pub mod depolarizing;
pub mod hull;
pub mod nelder_mead;
pub mod symmetric;

use serde::{Deserialize, Serialize};

pub use depolarizing::{
    normal_form_overlap, normal_form_state, phi_g_qubit_depolarizing, phi_g_qutrit_depolarizing, NormalFormParams, QubitSearch,
    QutritSearch,
};
pub use hull::convex_hull_1d;
pub use nelder_mead::SimplexOptions;
pub use symmetric::{two_way_iso_value, two_way_werner_value};

/// One sample of a bound curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub value: f64,
    /// The minimizer passed every feasibility check; `residual ≤ 1e-6`.
    pub feasible: bool,
    /// Largest constraint violation of the returned minimizer.
    pub residual: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Post hoc degradability parameter of the minimizer, when computed.
    pub dg: Option<f64>,
}

/// Feasibility threshold on [`CurvePoint::residual`].
pub const FEASIBILITY_TOL: f64 = 1e-6;

impl CurvePoint {
    /// A point known in closed form.
    pub fn exact(p: f64, value: f64) -> Self {
        Self { p, value, feasible: true, residual: 0.0, restarts: 0, seed: 0, dg: None }
    }
}
