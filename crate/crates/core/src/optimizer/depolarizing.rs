//! Minimal coherent information over degradable states with a fixed overlap
//! with the maximally entangled state, for qubits and qutrits.

use std::cell::RefCell;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, SimplexOptions};
use super::{CurvePoint, FEASIBILITY_TOL};
use crate::bounds::{transfer_check_from, CLASS_TOL};
use crate::entropy::{coherent_information, mes_overlap};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64, ZERO};
use crate::sdp::programs::dg;
use crate::sdp::SolverOptions;
use crate::state::{complementary_from_factor, max_entangled_vector, DensityMatrix};
use crate::states::stream_rng;

/// Parameters of the two-Kraus normal form
/// `K₁ = diag(r₁ cos α, r₂ cos β)`, `K₂ = [[0, r₂ sin β], [r₁ sin α, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormParams {
    pub alpha: f64,
    pub beta: f64,
    pub r1: f64,
    pub r2: f64,
}

impl NormalFormParams {
    pub fn new(alpha: f64, beta: f64, r1: f64, r2: f64) -> Result<Self> {
        let p = Self { alpha, beta, r1, r2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.alpha, self.beta, self.r1, self.r2].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(0.0..=1.0).contains(&self.r1) || !(0.0..=1.0).contains(&self.r2) {
            return Err(Error::InvalidParameter(format!("r1, r2 must lie in [0, 1], got {}, {}", self.r1, self.r2)));
        }
        if self.r1 * self.r1 + self.r2 * self.r2 == 0.0 {
            return Err(Error::InvalidParameter("r1 and r2 cannot both vanish".into()));
        }
        Ok(())
    }

    /// `(r₁ cos α, r₂ cos β, r₁ sin α, r₂ sin β)`.
    fn entries(&self) -> (f64, f64, f64, f64) {
        (self.r1 * self.alpha.cos(), self.r2 * self.beta.cos(), self.r1 * self.alpha.sin(), self.r2 * self.beta.sin())
    }

    fn from_entries(u: f64, v: f64, a: f64, b: f64) -> Self {
        Self { alpha: a.atan2(u), beta: b.atan2(v), r1: u.hypot(a), r2: v.hypot(b) }
    }
}

/// `2/(r₁²+r₂²) Σ_k (1 ⊗ K_k) Φ+ (1 ⊗ K_k)†`.
pub fn normal_form_state(params: &NormalFormParams) -> Result<DensityMatrix> {
    params.validate()?;
    let (u, v, a, b) = params.entries();
    state_from_entries(u, v, a, b)
}

fn state_from_entries(u: f64, v: f64, a: f64, b: f64) -> Result<DensityMatrix> {
    let norm = u * u + v * v + a * a + b * b;
    if norm <= 0.0 {
        return Err(Error::InvalidParameter("degenerate normal form".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // (1 ⊗ K)|Φ+> has entry K[j][i]/√2 at index 2i + j
    let psi1 = [c(u * s, 0.0), ZERO, ZERO, c(v * s, 0.0)];
    let psi2 = [ZERO, c(a * s, 0.0), c(b * s, 0.0), ZERO];
    let m = &ComplexMatrix::projector(&psi1) + &ComplexMatrix::projector(&psi2);
    DensityMatrix::new(vec![2, 2], m.scale_real(2.0 / norm))
}

/// `(r₁ cos α + r₂ cos β)² / (2(r₁² + r₂²))`.
pub fn normal_form_overlap(params: &NormalFormParams) -> f64 {
    let (u, v, _, _) = params.entries();
    (u + v).powi(2) / (2.0 * (params.r1 * params.r1 + params.r2 * params.r2))
}

/// Normal-form entries with `r₁² + r₂² = 1` and overlap exactly `1 − p`,
/// from two unconstrained angles.
fn constrained_entries(p: f64, theta: &[f64]) -> (f64, f64, f64, f64) {
    let s = (2.0 * (1.0 - p)).sqrt();
    let h = (p / 2.0).sqrt();
    let u = s / 2.0 + h * theta[0].sin();
    let v = s - u;
    let radius = (1.0 - u * u - v * v).max(0.0).sqrt();
    (u, v, radius * theta[1].cos(), radius * theta[1].sin())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSearch {
    pub restarts: usize,
    pub seed: u64,
    pub simplex: SimplexOptions,
    /// Candidates (best first) passed to the post hoc SDP before giving up.
    pub max_verified: usize,
}

impl Default for QubitSearch {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            simplex: SimplexOptions { step: 0.4, max_iters: 400, ..SimplexOptions::default() },
            max_verified: 4,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// `φ_G(p)` for the qubit depolarizing channel: the smallest coherent
/// information over normal-form states with overlap `1 − p`. Every returned
/// feasible minimizer has dg ≤ 1e-5 by the SDP.
pub fn phi_g_qubit_depolarizing(p: f64, search: &QubitSearch, solver: &SolverOptions) -> Result<CurvePoint> {
    check_p(p)?;
    let base =
        CurvePoint { p, value: 0.0, feasible: true, residual: 0.0, restarts: search.restarts, seed: search.seed, dg: None };
    if p == 0.0 {
        return Ok(CurvePoint { value: 1.0, ..base });
    }
    if p >= 0.25 {
        return Ok(base);
    }
    if search.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let objective = |theta: &[f64]| {
        let (u, v, a, b) = constrained_entries(p, theta);
        state_from_entries(u, v, a, b).and_then(|r| coherent_information(&r)).unwrap_or(f64::INFINITY)
    };
    let mut candidates = Vec::with_capacity(search.restarts);
    for r in 0..search.restarts {
        let mut rng = stream_rng(search.seed, r as u64);
        let x0 = vec![
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        ];
        candidates.push(minimize(objective, x0, &search.simplex)?);
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut fallback = None;
    for (theta, value) in candidates.iter().take(search.max_verified.max(1)) {
        let (u, v, a, b) = constrained_entries(p, theta);
        let rho = state_from_entries(u, v, a, b)?;
        let residual = (mes_overlap(&rho)? - (1.0 - p)).abs();
        let dg_value = dg(&rho, false, solver)?.value;
        let point = CurvePoint { value: *value, residual, dg: Some(dg_value), ..base.clone() };
        if dg_value <= CLASS_TOL && residual <= FEASIBILITY_TOL {
            return Ok(point);
        }
        fallback.get_or_insert(CurvePoint { feasible: false, ..point });
    }
    Ok(fallback.expect("at least one candidate"))
}

/// The normal-form parameters reached for a given pair of search angles.
pub fn qubit_candidate(p: f64, theta: &[f64; 2]) -> NormalFormParams {
    let (u, v, a, b) = constrained_entries(p, theta);
    NormalFormParams::from_entries(u, v, a, b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QutritSearch {
    /// Columns of the factor `G` with `ρ = G G†`.
    pub rank: usize,
    pub restarts: usize,
    pub seed: u64,
    pub penalty: f64,
    pub simplex: SimplexOptions,
}

impl Default for QutritSearch {
    fn default() -> Self {
        Self {
            rank: 9,
            restarts: 64,
            seed: 0,
            penalty: 1e4,
            simplex: SimplexOptions { step: 0.05, max_iters: 4000, sd_tol: 1e-14, polish_rounds: 1 },
        }
    }
}

/// Schmidt coefficients `(x, y, …, y)` minimizing entanglement at overlap `f`,
/// aligned with the maximally entangled vector.
fn pure_start(d: usize, f: f64) -> Vec<C64> {
    let df = d as f64;
    let x = ((df * f).sqrt() + ((df - 1.0) * (df - df * f)).max(0.0).sqrt()) / df;
    let y = (((1.0 - x * x) / (df - 1.0)).max(0.0)).sqrt();
    let mut psi = vec![ZERO; d * d];
    for i in 0..d {
        psi[i * d + i] = c(if i == 0 { x } else { y }, 0.0);
    }
    psi
}

/// Factor columns rescaled so that `tr ρ = 1` and `<Φ|ρ|Φ> = 1 − p` exactly.
fn rescaled_columns(params: &[f64], rank: usize, phi: &[C64], p: f64) -> Option<Vec<Vec<C64>>> {
    let n = phi.len();
    let cols: Vec<Vec<C64>> =
        (0..rank).map(|k| (0..n).map(|i| c(params[2 * (i * rank + k)], params[2 * (i * rank + k) + 1])).collect()).collect();
    let coeff: Vec<C64> = cols.iter().map(|g| phi.iter().zip(g).map(|(a, b)| a.conj() * b).sum()).collect();
    let nc = coeff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rest: Vec<Vec<C64>> =
        cols.iter().zip(&coeff).map(|(g, &ck)| g.iter().zip(phi).map(|(&gi, &fi)| gi - fi * ck).collect()).collect();
    let nq = rest.iter().flat_map(|g| g.iter()).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nc < 1e-12 || (p > 0.0 && nq < 1e-12) {
        return None;
    }
    let (sp, sq) = ((1.0 - p).sqrt() / nc, if p > 0.0 { p.sqrt() / nq } else { 0.0 });
    Some(rest.iter().zip(&coeff).map(|(q, &ck)| q.iter().zip(phi).map(|(&qi, &fi)| fi * ck * sp + qi * sq).collect()).collect())
}

struct QutritEval {
    value: f64,
    violation: f64,
}

fn qutrit_eval(params: &[f64], rank: usize, phi: &[C64], p: f64) -> Option<QutritEval> {
    let cols = rescaled_columns(params, rank, phi, p)?;
    let mut m = ComplexMatrix::zeros(9, 9);
    for g in &cols {
        m = &m + &ComplexMatrix::outer(g, g);
    }
    let rho = DensityMatrix::new(vec![3, 3], m).ok()?;
    let value = coherent_information(&rho).ok()?;
    let env = complementary_from_factor(3, 3, &cols);
    let check = transfer_check_from(rho.matrix(), &env, 3, 3, rank).ok()?;
    let violation = check.residual.max(check.tp_residual).max(-check.min_choi_eigenvalue).max(0.0);
    Some(QutritEval { value, violation })
}

/// `φ_G(p)` for the qutrit depolarizing channel: penalized search over
/// `ρ = G G†` with the overlap fixed by rescaling and the degrading map
/// `T(ρ_AE) T(ρ_AB)^{-1}` pushed towards CPTP. Returns the best point seen
/// whose map violates CP/TP and the transfer equation by at most 1e-6.
pub fn phi_g_qutrit_depolarizing(p: f64, search: &QutritSearch) -> Result<CurvePoint> {
    check_p(p)?;
    let base =
        CurvePoint { p, value: 0.0, feasible: true, residual: 0.0, restarts: search.restarts, seed: search.seed, dg: None };
    if p == 0.0 {
        return Ok(CurvePoint { value: 3f64.log2(), ..base });
    }
    if p >= 1.0 / 3.0 {
        return Ok(base);
    }
    if search.restarts == 0 || search.rank == 0 {
        return Err(Error::InvalidParameter("rank and restarts must be positive".into()));
    }
    let rank = search.rank;
    let phi = max_entangled_vector(3);
    let psi = pure_start(3, 1.0 - p);
    let mut start = vec![0.0; 2 * 9 * rank];
    for (i, z) in psi.iter().enumerate() {
        start[2 * i * rank] = z.re;
        start[2 * i * rank + 1] = z.im;
    }
    // best feasible (value, violation) and best penalized (cost, violation, value)
    let feasible: RefCell<Option<(f64, f64)>> = RefCell::new(None);
    let fallback: RefCell<Option<(f64, f64, f64)>> = RefCell::new(None);
    let objective = |x: &[f64]| match qutrit_eval(x, rank, &phi, p) {
        Some(e) => {
            let cost = e.value + search.penalty * e.violation * e.violation;
            if e.violation <= FEASIBILITY_TOL {
                let mut f = feasible.borrow_mut();
                if f.is_none_or(|(v, _)| e.value < v) {
                    *f = Some((e.value, e.violation));
                }
            }
            let mut fb = fallback.borrow_mut();
            if fb.is_none_or(|(cst, _, _)| cost < cst) {
                *fb = Some((cost, e.violation, e.value));
            }
            cost
        }
        None => f64::INFINITY,
    };
    for r in 0..search.restarts {
        let x0 = if r == 0 {
            start.clone()
        } else {
            let mut rng = stream_rng(search.seed, r as u64);
            let scale = rng.random_range(0.01..0.5);
            start.iter().map(|&s| s + scale * rng.sample::<f64, _>(StandardNormal)).collect()
        };
        minimize(objective, x0, &search.simplex)?;
    }
    if let Some((value, violation)) = *feasible.borrow() {
        return Ok(CurvePoint { value, residual: violation, ..base });
    }
    let (_, violation, value) = fallback.borrow().ok_or_else(|| Error::Optimizer("no valid candidate evaluated".into()))?;
    Ok(CurvePoint { value, residual: violation, feasible: false, ..base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_normal_form_is_bell_state() {
        let params = NormalFormParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let rho = normal_form_state(&params).unwrap();
        assert!((mes_overlap(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((normal_form_overlap(&params) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn right_angles_give_zero_overlap() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let params = NormalFormParams::new(half_pi, half_pi, 1.0, 1.0).unwrap();
        assert!(mes_overlap(&normal_form_state(&params).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_radii() {
        assert!(NormalFormParams::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(NormalFormParams::new(0.0, 0.0, 1.5, 0.0).is_err());
    }

    #[test]
    fn constrained_entries_hit_the_overlap() {
        for &p in &[0.01, 0.1, 0.2] {
            for k in 0..10 {
                let theta = [k as f64 * 0.7, k as f64 * 1.3 - 2.0];
                let params = qubit_candidate(p, &theta);
                let rho = normal_form_state(&params).unwrap();
                assert!((mes_overlap(&rho).unwrap() - (1.0 - p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_start_has_requested_overlap() {
        let psi = pure_start(3, 0.8);
        let rho = DensityMatrix::from_pure(vec![3, 3], &psi).unwrap();
        assert!((mes_overlap(&rho).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn shortcuts() {
        let s = SolverOptions::default();
        assert_eq!(phi_g_qubit_depolarizing(0.0, &QubitSearch::default(), &s).unwrap().value, 1.0);
        assert_eq!(phi_g_qubit_depolarizing(0.3, &QubitSearch::default(), &s).unwrap().value, 0.0);
        assert!((phi_g_qutrit_depolarizing(0.0, &QutritSearch::default()).unwrap().value - 3f64.log2()).abs() < 1e-15);
        assert_eq!(phi_g_qutrit_depolarizing(1.0 / 3.0, &QutritSearch::default()).unwrap().value, 0.0);
    }
}
