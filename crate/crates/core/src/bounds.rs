//! Evaluators for lower and upper bounds on distillable entanglement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bell::{mc_block_coherent_information, MCBlock, MCMatrix};
use crate::channel::{choi_to_transfer, transfer_to_choi, QuantumMap};
use crate::entropy::{binary_entropy, coherent_information, reverse_coherent_information};
use crate::error::{Error, Result};
use crate::linalg::{expm_anti_hermitian, ComplexMatrix, C64, ZERO};
use crate::optimizer::nelder_mead::{minimize, SimplexOptions};
use crate::sdp::programs::{adeg, dg, SolveReport};
use crate::sdp::SolverOptions;
use crate::state::{complementary_state, partial_trace_matrix, spectral_factor, DensityMatrix, RANK_CUTOFF};
use crate::states::stream_rng;

/// Default tolerance on dg/adeg for calling a state (anti)degradable.
pub const CLASS_TOL: f64 = 1e-5;
/// Numerical rank cutoff for the rank-2 precondition.
pub const RANK2_CUTOFF: f64 = 1e-8;
/// Transfer-matrix residual and CP/TP tolerance.
pub const TRANSFER_TOL: f64 = 1e-7;
/// Singular values of `T(ρ_AB)` below this are treated as zero.
pub const TRANSFER_SINGULAR: f64 = 1e-9;

/// Hashing bound `max(I(A⟩B), I(B⟩A), 0)`.
pub fn hashing_lower(rho: &DensityMatrix) -> Result<f64> {
    let forward = coherent_information(rho)?;
    let backward = reverse_coherent_information(rho)?;
    Ok(forward.max(backward).max(0.0))
}

/// `I(A⟩B) + 4δ log|E| + 2(1+δ) h(δ/(1+δ))` with `|E| = rank(ρ)`.
/// `delta` must dominate the degradability parameter of `rho`.
pub fn approx_deg_upper(rho: &DensityMatrix, delta: f64) -> Result<f64> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be a finite nonnegative number, got {delta}")));
    }
    let env = rho.rank(RANK_CUTOFF).max(1) as f64;
    approx_deg_formula(coherent_information(rho)?, delta, env)
}

/// The scalar part of [`approx_deg_upper`].
pub fn approx_deg_formula(coherent_info: f64, delta: f64, env_dim: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(coherent_info);
    }
    Ok(coherent_info + 4.0 * delta * env_dim.log2() + 2.0 * (1.0 + delta) * binary_entropy(delta / (1.0 + delta))?)
}

/// PPT relative entropy of the isotropic state, `log d − (1−f) log(d−1) − h(f)` for `f ≥ 1/d`.
pub fn ppt_ree_isotropic(d: usize, f: f64) -> Result<f64> {
    check_dim(d)?;
    check_unit("f", f)?;
    let df = d as f64;
    if f <= 1.0 / df {
        return Ok(0.0);
    }
    Ok((df.log2() - (1.0 - f) * (df - 1.0).log2() - binary_entropy(f)?).max(0.0))
}

/// `D(W_d(p) ‖ W_d(1/2)) = 1 − h(p)` for `p ≥ 1/2`.
pub fn ppt_ree_werner(d: usize, p: f64) -> Result<f64> {
    check_dim(d)?;
    check_unit("p", p)?;
    if p <= 0.5 {
        return Ok(0.0);
    }
    Ok(1.0 - binary_entropy(p)?)
}

/// Rains bound for Werner states. For `d = 2` the third branch degenerates
/// (its prefactor is `log 0`), so the second branch covers all of `[1/2, 1]`.
pub fn rains_werner(d: usize, p: f64) -> Result<f64> {
    check_dim(d)?;
    check_unit("p", p)?;
    let df = d as f64;
    if p <= 0.5 {
        Ok(0.0)
    } else if d == 2 || p <= 0.5 + 1.0 / df {
        Ok(1.0 - binary_entropy(p)?)
    } else {
        Ok(((df - 2.0) / df).log2() + p * ((df + 2.0) / (df - 2.0)).log2())
    }
}

/// `E_MP = (1−p) I(A⟩B)_ω` for `(1−p) ω + p τ` with `ω` supported on a Bell block.
pub fn e_mp_block(block: &MCBlock, alpha: &MCMatrix, p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok((1.0 - p) * mc_block_coherent_information(block, alpha)?)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rank2Verdict {
    Degradable,
    Antidegradable,
    Both,
    NumericallyUndecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rank2Class {
    pub verdict: Rank2Verdict,
    pub dg_value: f64,
    pub adeg_value: f64,
}

impl Rank2Class {
    pub fn is_definite(&self) -> bool {
        self.verdict != Rank2Verdict::NumericallyUndecided
    }
}

/// Classifies a rank-2 two-qubit state by its dg and adeg values.
pub fn classify_rank2(rho: &DensityMatrix, class_tol: f64, opts: &SolverOptions) -> Result<Rank2Class> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit state, got dims {:?}", rho.dims())));
    }
    let rank = rho.rank(RANK2_CUTOFF);
    if rank != 2 {
        return Err(Error::InvalidParameter(format!("expected numerical rank 2, got {rank}")));
    }
    let dg_value = dg(rho, false, opts)?.value;
    let adeg_value = adeg(rho, opts)?.value;
    let verdict = match (dg_value <= class_tol, adeg_value <= class_tol) {
        (true, true) => Rank2Verdict::Both,
        (true, false) => Rank2Verdict::Degradable,
        (false, true) => Rank2Verdict::Antidegradable,
        (false, false) => Rank2Verdict::NumericallyUndecided,
    };
    Ok(Rank2Class { verdict, dg_value, adeg_value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferVerdict {
    Degradable,
    NotDegradable,
    /// `T(ρ_AB)` is singular and no exact solution was found; fall back to [`dg`].
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct TransferCheck {
    pub verdict: TransferVerdict,
    /// Candidate degrading map `B → E`; its Choi matrix may fail to be Hermitian or PSD.
    pub map: QuantumMap,
    /// `max |T(ρ_AE) − T(D) T(ρ_AB)|`.
    pub residual: f64,
    pub min_choi_eigenvalue: f64,
    pub tp_residual: f64,
    pub singular: bool,
}

impl TransferCheck {
    pub fn is_degradable(&self) -> bool {
        self.verdict == TransferVerdict::Degradable
    }
}

/// Solves `T(D) T(ρ_AB) = T(ρ_AE)` for the degrading map, reading both
/// states as Choi matrices of maps out of `A`. Sufficient only: a
/// non-degradable verdict is definitive only when `T(ρ_AB)` is invertible.
pub fn transfer_degradability_check(rho: &DensityMatrix) -> Result<TransferCheck> {
    let (d_a, d_b) = rho.bipartite_dims()?;
    if d_a != d_b {
        return Err(Error::DimensionMismatch(format!("transfer check needs dA = dB, got {d_a} and {d_b}")));
    }
    let env = complementary_state(rho)?;
    let d_e = env.dims()[1];
    transfer_check_from(rho.matrix(), env.matrix(), d_a, d_b, d_e)
}

/// [`transfer_degradability_check`] from explicit `ρ_AB` and `ρ_AE` matrices.
pub fn transfer_check_from(
    rho_ab: &ComplexMatrix,
    rho_ae: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    d_e: usize,
) -> Result<TransferCheck> {
    let t_ab = choi_to_transfer(rho_ab, d_a, d_b);
    let t_ae = choi_to_transfer(rho_ae, d_a, d_e);
    let sv = t_ab.singular_values();
    let smax = sv.first().copied().unwrap_or(0.0);
    let singular = sv.last().copied().unwrap_or(0.0) < TRANSFER_SINGULAR * smax.max(1.0);
    let t_d = t_ae.matmul(&t_ab.pseudo_inverse(TRANSFER_SINGULAR));
    let residual = (&t_d.matmul(&t_ab) - &t_ae).max_abs();
    let choi = transfer_to_choi(&t_d, d_b, d_e);
    let hermitian = choi.hermiticity_deviation() <= TRANSFER_TOL;
    let min_choi_eigenvalue = choi.hermitian_part().min_eigenvalue();
    let tp_residual = partial_trace_matrix(&choi, &[d_b, d_e], &[0])?.max_abs_diff(&ComplexMatrix::identity(d_b));
    let map = QuantumMap::from_transfer_matrix(&t_d, d_b, d_e)?;
    let valid = hermitian && min_choi_eigenvalue >= -TRANSFER_TOL && tp_residual <= TRANSFER_TOL;
    let verdict = if residual <= TRANSFER_TOL && valid {
        TransferVerdict::Degradable
    } else if singular {
        TransferVerdict::Undetermined
    } else {
        TransferVerdict::NotDegradable
    };
    Ok(TransferCheck { verdict, map, residual, min_choi_eigenvalue, tp_residual, singular })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdaOptions {
    /// Number of rank-2 terms; the decomposition has `2k` pure vectors.
    pub pairs: usize,
    pub restarts: usize,
    pub seed: u64,
    /// With pairing off every pure vector is its own term, giving a pure-state ensemble value.
    pub pairing: bool,
    pub simplex: SimplexOptions,
}

impl Default for EdaOptions {
    fn default() -> Self {
        Self {
            pairs: 2,
            restarts: 8,
            seed: 0,
            pairing: true,
            simplex: SimplexOptions { max_iters: 3000, ..SimplexOptions::default() },
        }
    }
}

#[derive(Clone, Debug)]
pub struct EdaResult {
    pub value: f64,
    /// Best value after each restart; non-increasing.
    pub restart_values: Vec<f64>,
    pub unitary: ComplexMatrix,
    /// Every positive term of the final decomposition was confirmed degradable by the SDP.
    pub certified: bool,
    pub undecided_terms: usize,
}

/// Hermitian matrix from `n²` reals: the diagonal, then real and imaginary
/// parts of the strict upper triangle.
fn hermitian_from_params(params: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut it = params.iter();
    for i in 0..n {
        h[(i, i)] = C64::new(*it.next().expect("n² params"), 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let re = *it.next().expect("n² params");
            let im = *it.next().expect("n² params");
            h[(i, j)] = C64::new(re, im);
            h[(j, i)] = C64::new(re, -im);
        }
    }
    h
}

fn unitary_from_params(params: &[f64], n: usize) -> ComplexMatrix {
    expm_anti_hermitian(&hermitian_from_params(params, n).scale(C64::new(0.0, 1.0)))
}

/// Terms `(q_j, ω_j)` of the decomposition induced by `U` on the padded spectral factor.
fn decomposition(factor: &[Vec<C64>], u: &ComplexMatrix, pairing: bool) -> Vec<(f64, Vec<Vec<C64>>)> {
    let n = u.rows();
    let len = factor.first().map_or(0, |v| v.len());
    let phis: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut v = vec![ZERO; len];
            for (i, psi) in factor.iter().enumerate() {
                let w = u[(j, i)];
                for (acc, &z) in v.iter_mut().zip(psi) {
                    *acc += w * z;
                }
            }
            v
        })
        .collect();
    let group = if pairing { 2 } else { 1 };
    phis.chunks(group)
        .map(|chunk| {
            let q: f64 = chunk.iter().flat_map(|v| v.iter()).map(|z| z.norm_sqr()).sum();
            (q, chunk.to_vec())
        })
        .collect()
}

fn term_state(vectors: &[Vec<C64>], q: f64) -> Result<DensityMatrix> {
    let n = vectors[0].len();
    let mut m = ComplexMatrix::zeros(n, n);
    for v in vectors {
        m = &m + &ComplexMatrix::outer(v, v);
    }
    DensityMatrix::new(vec![2, 2], m.scale_real(1.0 / q))
}

/// Terms below this weight are dropped.
const TERM_WEIGHT_CUTOFF: f64 = 1e-14;

fn decomposition_value(factor: &[Vec<C64>], u: &ComplexMatrix, pairing: bool) -> f64 {
    decomposition(factor, u, pairing)
        .iter()
        .filter(|(q, _)| *q > TERM_WEIGHT_CUTOFF)
        .map(|(q, vs)| {
            // rank-2 two-qubit states are degradable or antidegradable, and
            // the coherent information is nonnegative on the first and
            // nonpositive on the second, so max(I, 0) is the per-term value
            term_state(vs, *q).and_then(|w| coherent_information(&w)).map_or(f64::INFINITY, |i| q * i.max(0.0))
        })
        .sum()
}

/// Upper bound on the one-way distillable entanglement of a two-qubit state from
/// decompositions into rank-2 states, minimized over `2k × 2k` unitaries.
pub fn e_da_two_qubit(rho: &DensityMatrix, eda: &EdaOptions, solver: &SolverOptions) -> Result<EdaResult> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit state, got dims {:?}", rho.dims())));
    }
    let n = 2 * eda.pairs;
    let factor = spectral_factor(rho);
    if factor.len() > n {
        return Err(Error::InvalidParameter(format!("rank {} exceeds 2k = {n}", factor.len())));
    }
    if eda.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let objective = |x: &[f64]| decomposition_value(&factor, &unitary_from_params(x, n), eda.pairing);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut restart_values = Vec::with_capacity(eda.restarts);
    for r in 0..eda.restarts {
        let mut rng = stream_rng(eda.seed, r as u64);
        let x0: Vec<f64> =
            (0..n * n).map(|_| rand::Rng::random_range(&mut rng, -std::f64::consts::PI..std::f64::consts::PI)).collect();
        let (x, fx) = minimize(objective, x0, &eda.simplex)?;
        if best.as_ref().is_none_or(|b| fx < b.0) {
            best = Some((fx, x));
        }
        restart_values.push(best.as_ref().expect("set above").0);
    }
    let (value, x) = best.expect("restarts > 0");
    let unitary = unitary_from_params(&x, n);
    let mut undecided_terms = 0;
    if eda.pairing {
        for (q, vs) in decomposition(&factor, &unitary, true) {
            if q <= TERM_WEIGHT_CUTOFF {
                continue;
            }
            let w = term_state(&vs, q)?;
            if coherent_information(&w)? <= 0.0 || w.rank(RANK2_CUTOFF) < 2 {
                continue;
            }
            if dg(&w, false, solver)?.value > CLASS_TOL {
                undecided_terms += 1;
            }
        }
    }
    Ok(EdaResult { value: value.max(0.0), restart_values, unitary, certified: undecided_terms == 0, undecided_terms })
}

/// A labelled collection of bound values for one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub state: String,
    pub lower_hashing: f64,
    pub upper: BTreeMap<String, f64>,
    /// Solver diagnostics per SDP-backed entry.
    pub solver: BTreeMap<String, SolveReport>,
}

/// Entries of [`BoundReport::upper`] that are distances rather than bounds on distillable entanglement.
pub const DISTANCE_KEYS: [&str; 2] = ["dg", "adeg"];

impl BoundReport {
    pub fn new(state: impl Into<String>, lower_hashing: f64) -> Self {
        Self { state: state.into(), lower_hashing, upper: BTreeMap::new(), solver: BTreeMap::new() }
    }

    /// Names of upper bounds that fall below the hashing bound by more than `tol`.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        self.upper
            .iter()
            .filter(|(k, v)| {
                !DISTANCE_KEYS.contains(&k.as_str())
                    && v.is_finite()
                    && self.lower_hashing.is_finite()
                    && **v < self.lower_hashing - tol
            })
            .map(|(k, _)| k.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::isotropic;

    #[test]
    fn formula_hand_expansion() {
        // 4·1·log 2 + 2·2·h(1/2) = 8
        assert!((approx_deg_formula(0.3, 1.0, 2.0).unwrap() - 8.3).abs() < 1e-12);
        assert_eq!(approx_deg_formula(0.3, 0.0, 4.0).unwrap(), 0.3);
    }

    #[test]
    fn rejects_negative_delta() {
        let rho = isotropic(2, 0.9).unwrap();
        assert!(approx_deg_upper(&rho, -1e-3).is_err());
    }

    #[test]
    fn closed_form_endpoints() {
        assert!((ppt_ree_isotropic(2, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ppt_ree_isotropic(2, 0.5).unwrap(), 0.0);
        assert_eq!(ppt_ree_werner(3, 0.5).unwrap(), 0.0);
        assert!((ppt_ree_werner(3, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rains_werner(3, 0.3).unwrap(), 0.0);
        assert!((rains_werner(3, 1.0).unwrap() - (5.0f64 / 3.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn hermitian_params_round_trip_to_unitary() {
        let params: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let u = unitary_from_params(&params, 4);
        let id = u.adjoint().matmul(&u);
        assert!(id.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn distances_are_not_checked_against_hashing() {
        let mut r = BoundReport::new("x", 0.5);
        r.upper.insert("dg".into(), 0.0);
        r.upper.insert("log_neg".into(), 0.2);
        assert_eq!(r.violations(1e-4), vec!["log_neg".to_string()]);
    }
}
