//! Concrete semidefinite programs: trace norm, approximate (anti)degradability
//! distances, the Wang–Duan quantity and the antidegradable overlap maximum.

use super::problem::SdpProblem;
use super::solver::{solve, SdpSolution, SolveStatus, SolverOptions};
use crate::channel::QuantumMap;
use crate::entropy::trace_norm;
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, ComplexMatrix, C64, ONE};
use crate::state::{complementary_state, max_entangled_state, partial_trace_matrix, permute_subsystems, DensityMatrix};

pub use crate::entropy::log_negativity;

/// Solver diagnostics carried alongside every SDP-backed value.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl From<&SdpSolution> for SolveReport {
    fn from(s: &SdpSolution) -> Self {
        Self {
            status: s.status,
            objective: s.objective,
            dual_objective: s.dual_objective,
            gap: s.gap,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            iterations: s.iterations,
        }
    }
}

fn require_solved(sol: &SdpSolution, what: &str) -> Result<()> {
    match sol.status {
        SolveStatus::Infeasible => Err(Error::Solver(format!("{what}: problem reported infeasible"))),
        _ => Ok(()),
    }
}

/// `‖M‖₁` from `min ½(tr W₁ + tr W₂)` over `[[W₁, −M†], [−M, W₂]] ⪰ 0`.
/// Rectangular inputs are zero-padded to square.
pub fn trace_norm_sdp(m: &ComplexMatrix, opts: &SolverOptions) -> Result<(f64, SolveReport)> {
    let n = m.rows().max(m.cols());
    if n == 0 {
        return Ok((0.0, SolveReport::from(&solve(&SdpProblem::new(vec![1]), opts)?)));
    }
    let mut p = SdpProblem::new(vec![2 * n]);
    p.set_cost(0, ComplexMatrix::identity(2 * n).scale_real(0.5))?;
    for r in 0..n {
        for col in 0..n {
            let v = if r < m.rows() && col < m.cols() { m[(r, col)] } else { C64::new(0.0, 0.0) };
            // lower-left block holds −M
            p.add_functional(&[(0, n + r, col, ONE)], -v.re)?;
            p.add_functional(&[(0, n + r, col, c(0.0, -1.0))], -v.im)?;
        }
    }
    let sol = solve(&p, opts)?;
    require_solved(&sol, "trace norm")?;
    Ok((sol.objective, SolveReport::from(&sol)))
}

/// Result of a degradation-distance program.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    /// `½‖σ − (id ⊗ M)(ρ)‖₁` for the returned map, which is exactly trace preserving.
    pub value: f64,
    pub map: QuantumMap,
    pub report: SolveReport,
}

/// `min_M ½‖σ_AY − (id_A ⊗ M)(ρ_AX)‖₁` over channels `M: X → Y`.
///
/// Blocks: `[[P, K], [K†, Q]]` of side `2·dA·dY` with `K = (id ⊗ M)(ρ) − σ`,
/// and the Choi matrix `J` of `M`, constrained by `tr_Y J = 1_X`.
/// The solver's `J` is renormalized to be exactly trace preserving and the
/// distance is re-evaluated for it, so `value` is attained by `map`.
pub fn degradation_distance(rho: &DensityMatrix, sigma: &DensityMatrix, opts: &SolverOptions) -> Result<DistanceResult> {
    let (d_a, d_x) = rho.bipartite_dims()?;
    let (d_a2, d_y) = sigma.bipartite_dims()?;
    if d_a != d_a2 {
        return Err(Error::DimensionMismatch(format!("reference systems differ: {d_a} vs {d_a2}")));
    }
    let n = d_a * d_y;
    let dj = d_x * d_y;
    let r = rho.matrix();
    let s = sigma.matrix();
    let mut p = SdpProblem::new(vec![2 * n, dj]);
    p.set_cost(0, ComplexMatrix::identity(2 * n).scale_real(0.25))?;

    for a in 0..d_a {
        for y in 0..d_y {
            let row = a * d_y + y;
            for a2 in 0..d_a {
                for y2 in 0..d_y {
                    let col = a2 * d_y + y2;
                    // K_{row,col} − Σ ρ[(a,x),(a',x')] J[(x,y),(x',y')] = −σ_{row,col}
                    let mut re = vec![(0, row, n + col, ONE)];
                    let mut im = vec![(0, row, n + col, c(0.0, -1.0))];
                    for x in 0..d_x {
                        for x2 in 0..d_x {
                            let rv = r[(a * d_x + x, a2 * d_x + x2)];
                            if rv.norm() == 0.0 {
                                continue;
                            }
                            let (jr, jc) = (x * d_y + y, x2 * d_y + y2);
                            re.push((1, jr, jc, -rv));
                            im.push((1, jr, jc, rv * c(0.0, 1.0)));
                        }
                    }
                    let target = s[(row, col)];
                    p.add_functional(&re, -target.re)?;
                    p.add_functional(&im, -target.im)?;
                }
            }
        }
    }
    p.add_hermitian_equality(
        d_x,
        |x, x2| (0..d_y).map(|y| (1, x * d_y + y, x2 * d_y + y, ONE)).collect(),
        &ComplexMatrix::identity(d_x),
    )?;

    let sol = solve(&p, opts)?;
    require_solved(&sol, "degradation distance")?;
    let map = make_trace_preserving(&sol.x[1], d_x, d_y)?;
    let image = map.apply_to_second(r, d_a)?;
    let value = (0.5 * trace_norm(&(s - &image))).clamp(0.0, 1.0);
    Ok(DistanceResult { value, map, report: SolveReport::from(&sol) })
}

/// `(T^{-1/2} ⊗ 1) J (T^{-1/2} ⊗ 1)` with `T = tr_Y J`.
fn make_trace_preserving(j: &ComplexMatrix, d_x: usize, d_y: usize) -> Result<QuantumMap> {
    let t = partial_trace_matrix(j, &[d_x, d_y], &[0])?;
    let spec = eigh(&t);
    if spec.eigenvalues.last().copied().unwrap_or(0.0) <= 1e-12 {
        return Err(Error::Solver("Choi matrix has a singular input marginal".into()));
    }
    let inv_sqrt = spec.apply(|l| 1.0 / l.sqrt());
    let k = inv_sqrt.kron(&ComplexMatrix::identity(d_y));
    let fixed = k.matmul(j).matmul(&k);
    QuantumMap::new(d_x, d_y, fixed.hermitian_part())
}

/// How far `ρ_AB` is from degradable: `min_D ½‖ρ_AE − D(ρ_AB)‖₁` over channels `D: B → E`,
/// with `E` the minimal purifying system. `conjugate` compares against `conj(ρ_AE)`.
pub fn dg(rho: &DensityMatrix, conjugate: bool, opts: &SolverOptions) -> Result<DistanceResult> {
    let mut target = complementary_state(rho)?;
    if conjugate {
        target = DensityMatrix::new(target.dims().to_vec(), target.matrix().conj())?;
    }
    degradation_distance(rho, &target, opts)
}

/// How far `ρ_AB` is from antidegradable: `min_A ½‖ρ_AB − A(ρ_AE)‖₁` over channels `A: E → B`.
pub fn adeg(rho: &DensityMatrix, opts: &SolverOptions) -> Result<DistanceResult> {
    let env = complementary_state(rho)?;
    degradation_distance(&env, rho, opts)
}

/// `E_WD(ρ) = log max { tr(ρR) : R ⪰ 0, −1 ⪯ R^Γ ⪯ 1 }`, partial transpose on `B`.
pub fn e_wd(rho: &DensityMatrix, opts: &SolverOptions) -> Result<(f64, SolveReport)> {
    let (d_a, d_b) = rho.bipartite_dims()?;
    let n = d_a * d_b;
    // blocks R, S₁ = 1 − R^Γ, S₂ = 1 + R^Γ
    let mut p = SdpProblem::new(vec![n, n, n]);
    p.set_cost(0, rho.matrix().scale_real(-1.0))?;
    let pt = |r: usize, col: usize| {
        let (a, b) = (r / d_b, r % d_b);
        let (a2, b2) = (col / d_b, col % d_b);
        (a * d_b + b2, a2 * d_b + b)
    };
    let id = ComplexMatrix::identity(n);
    p.add_hermitian_equality(
        n,
        |r, col| {
            let (i, j) = pt(r, col);
            vec![(1, r, col, ONE), (0, i, j, ONE)]
        },
        &id,
    )?;
    p.add_hermitian_equality(
        n,
        |r, col| {
            let (i, j) = pt(r, col);
            vec![(2, r, col, ONE), (0, i, j, -ONE)]
        },
        &id,
    )?;
    let sol = solve(&p, opts)?;
    require_solved(&sol, "Wang-Duan")?;
    Ok(((-sol.objective).max(1.0).log2(), SolveReport::from(&sol)))
}

/// `½(Φ_AB ⊗ 1_B' + Φ_AB' ⊗ 1_B)` on `A ⊗ B ⊗ B'`.
pub fn antideg_overlap_operator(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {d}")));
    }
    let phi = max_entangled_state(d).into_matrix();
    let first = phi.kron(&ComplexMatrix::identity(d));
    let second = permute_subsystems(&first, &[d, d, d], &[0, 2, 1])?;
    Ok((&first + &second).scale_real(0.5))
}

/// Largest overlap with the maximally entangled state attainable by an
/// antidegradable state, as the SDP `max tr(ρ_ABB' O)` over states.
pub fn antideg_overlap_max(d: usize, opts: &SolverOptions) -> Result<(f64, SolveReport)> {
    let op = antideg_overlap_operator(d)?;
    let side = op.rows();
    let mut p = SdpProblem::new(vec![side]);
    p.set_cost(0, op.scale_real(-1.0))?;
    p.add_dense(0, &ComplexMatrix::identity(side), 1.0)?;
    let sol = solve(&p, opts)?;
    require_solved(&sol, "antidegradable overlap")?;
    Ok((-sol.objective, SolveReport::from(&sol)))
}

/// Dual route of [`antideg_overlap_max`]: the largest eigenvalue of the overlap operator.
pub fn antideg_overlap_eigen(d: usize) -> Result<f64> {
    Ok(antideg_overlap_operator(d)?.max_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron_vec;
    use crate::state::{basis_vector, max_entangled_vector};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -2.0]);
        let (v, rep) = trace_norm_sdp(&m, &opts()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((v - 3.0).abs() < 1e-5, "{v}");
    }

    #[test]
    fn trace_norm_of_rectangular() {
        let m = ComplexMatrix::new(1, 2, vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        let (v, _) = trace_norm_sdp(&m, &opts()).unwrap();
        assert!((v - 5.0).abs() < 1e-5, "{v}");
    }

    #[test]
    fn pure_state_is_degradable() {
        let psi: Vec<C64> = vec![c(0.8, 0.0), ONE * 0.0, ONE * 0.0, c(0.0, 0.6)];
        let rho = DensityMatrix::from_pure(vec![2, 2], &psi).unwrap();
        let r = dg(&rho, false, &opts()).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
        assert!(r.map.is_cp(1e-7) && r.map.tp_residual() < 1e-7);
    }

    #[test]
    fn bell_state_is_far_from_antidegradable() {
        let rho = DensityMatrix::from_pure(vec![2, 2], &max_entangled_vector(2)).unwrap();
        let r = adeg(&rho, &opts()).unwrap();
        assert!(r.value >= 0.25 - 1e-4, "{}", r.value);
    }

    #[test]
    fn product_state_has_trivial_wang_duan() {
        let v = kron_vec(&basis_vector(2, 0), &basis_vector(2, 0));
        let rho = DensityMatrix::from_pure(vec![2, 2], &v).unwrap();
        let (e, _) = e_wd(&rho, &opts()).unwrap();
        assert!(e.abs() < 1e-5, "{e}");
    }

    #[test]
    fn overlap_routes_agree() {
        for d in 2..=3 {
            let eig = antideg_overlap_eigen(d).unwrap();
            assert!((eig - (1.0 + d as f64) / (2.0 * d as f64)).abs() < 1e-10);
            let (sdp, _) = antideg_overlap_max(d, &opts()).unwrap();
            assert!((sdp - eig).abs() < 1e-5, "d={d}: {sdp} vs {eig}");
        }
    }
}
