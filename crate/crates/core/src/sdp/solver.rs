//! Dual alternating-direction augmented Lagrangian method for
//! `min <C, X>  s.t.  A(X) = b,  X ⪰ 0`, in complex Hermitian arithmetic.
//!
//! Each sweep solves for the dual multipliers `y` with the Gram matrix
//! `A A*`, projects `V = C − A*(y) − μX` onto the PSD cone to get the dual
//! slack `S = Π₊(V)` and the primal candidate `Π₊(−V)/μ`, then over-relaxes
//! the primal update. The penalty `μ` is rebalanced whenever primal and dual
//! residuals drift more than a factor 10 apart.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::problem::{block_inner, block_norm, Constraint, Entry, SdpProblem};
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Initial penalty.
    pub mu: f64,
    /// Over-relaxation factor, in `(0, 1.618)`.
    pub relaxation: f64,
    /// Residuals are evaluated every this many iterations.
    pub check_every: usize,
    /// Record an [`IterRecord`] every this many iterations (0 disables).
    pub trace_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { gap_tol: 1e-7, feas_tol: 1e-7, max_iter: 50_000, mu: 1.0, relaxation: 1.6, check_every: 10, trace_every: 0 }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0 && self.feas_tol > 0.0) {
            return Err(Error::InvalidParameter("solver tolerances must be positive".into()));
        }
        if !(self.mu > 0.0 && self.relaxation > 0.0 && self.relaxation < 1.618) {
            return Err(Error::InvalidParameter("penalty must be positive and relaxation in (0, 1.618)".into()));
        }
        if self.check_every == 0 || self.max_iter == 0 {
            return Err(Error::InvalidParameter("iteration counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    pub iteration: usize,
    pub primal: f64,
    pub dual: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
}

/// (merit, X, y, S, residuals, iteration) of the best checked iterate.
type BestIterate = (f64, Vec<ComplexMatrix>, Vec<f64>, Vec<ComplexMatrix>, Residuals, usize);

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// Primal blocks, each exactly PSD.
    pub x: Vec<ComplexMatrix>,
    pub y: Vec<f64>,
    pub s: Vec<ComplexMatrix>,
    pub objective: f64,
    pub dual_objective: f64,
    /// `|objective − dual_objective| / (1 + |objective| + |dual_objective|)`.
    pub gap: f64,
    /// `‖A(X) − b‖ / (1 + ‖b‖)` on the row-normalized constraints.
    pub primal_residual: f64,
    /// `‖C − A*(y) − S‖ / (1 + ‖C‖)` on the row-normalized constraints.
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Largest observed `(dual − primal) − (|yᵀR_p| + |<R_d, X>|)` over checked iterates.
    pub weak_duality_excess: f64,
    pub trace: Vec<IterRecord>,
}

/// Internal scaled copy of the problem with Gram factorization.
struct Scaled {
    problem: SdpProblem,
    row_scale: Vec<f64>,
    b_scale: f64,
    c_scale: f64,
    gram: GramSolver,
}

enum GramSolver {
    Cholesky(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Pseudo(DMatrix<f64>),
}

impl GramSolver {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(rhs);
        let out = match self {
            GramSolver::Cholesky(ch) => ch.solve(&v),
            GramSolver::Pseudo(p) => p * v,
        };
        out.iter().copied().collect()
    }
}

fn gram_matrix(p: &SdpProblem) -> DMatrix<f64> {
    use std::collections::HashMap;
    let m = p.num_constraints();
    let mut by_pos: HashMap<(usize, usize, usize), Vec<(usize, crate::linalg::C64)>> = HashMap::new();
    for (i, con) in p.constraints().iter().enumerate() {
        for e in &con.entries {
            by_pos.entry((e.block, e.row, e.col)).or_default().push((i, e.value));
        }
    }
    let mut g = DMatrix::<f64>::zeros(m, m);
    for list in by_pos.values() {
        for &(i, vi) in list {
            for &(j, vj) in list {
                g[(i, j)] += (vi.conj() * vj).re;
            }
        }
    }
    g
}

fn scale_problem(p: &SdpProblem) -> Scaled {
    let mut scaled = SdpProblem::new(p.block_dims().to_vec());
    let mut row_scale = Vec::with_capacity(p.num_constraints());
    let mut rows = Vec::with_capacity(p.num_constraints());
    for con in p.constraints() {
        let norm = con.entries.iter().map(|e| e.value.norm_sqr()).sum::<f64>().sqrt();
        row_scale.push(norm);
        rows.push((con.entries.iter().map(|e| Entry { value: e.value / norm, ..*e }).collect::<Vec<_>>(), con.rhs / norm));
    }
    let b_norm = rows.iter().map(|r| r.1 * r.1).sum::<f64>().sqrt();
    let b_scale = if b_norm > 0.0 { b_norm } else { 1.0 };
    let c_norm = block_norm(p.cost());
    let c_scale = if c_norm > 0.0 { c_norm } else { 1.0 };
    for (k, c) in p.cost().iter().enumerate() {
        scaled.set_cost(k, c.scale_real(1.0 / c_scale)).expect("same shape");
    }
    for (entries, rhs) in rows {
        scaled.push_constraint(Constraint { entries, rhs: rhs / b_scale });
    }
    let g = gram_matrix(&scaled);
    let gram = match g.clone().cholesky() {
        Some(ch) if min_diag_ratio(&ch) > 1e-10 => GramSolver::Cholesky(ch),
        _ => {
            let eig = g.symmetric_eigen();
            let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let inv = eig.eigenvalues.map(|l| if l > 1e-10 * max { 1.0 / l } else { 0.0 });
            let q = &eig.eigenvectors;
            GramSolver::Pseudo(q * DMatrix::from_diagonal(&inv) * q.transpose())
        }
    };
    Scaled { problem: scaled, row_scale, b_scale, c_scale, gram }
}

fn min_diag_ratio(ch: &nalgebra::Cholesky<f64, nalgebra::Dyn>) -> f64 {
    let l = ch.l_dirty();
    let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)]).collect();
    let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if max > 0.0 {
        (min / max).powi(2)
    } else {
        0.0
    }
}

/// `(Π₊(V), Π₊(−V))` from one eigendecomposition per block.
fn split_psd(v: &[ComplexMatrix]) -> (Vec<ComplexMatrix>, Vec<ComplexMatrix>) {
    let mut pos = Vec::with_capacity(v.len());
    let mut neg = Vec::with_capacity(v.len());
    for m in v {
        let spec = eigh(m);
        pos.push(spec.apply(|l| l.max(0.0)));
        neg.push(spec.apply(|l| (-l).max(0.0)));
    }
    (pos, neg)
}

fn axpy_blocks(a: f64, x: &[ComplexMatrix], b: f64, y: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    x.iter().zip(y).map(|(u, v)| &u.scale_real(a) + &v.scale_real(b)).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Residuals {
    primal: f64,
    dual: f64,
    pinf: f64,
    dinf: f64,
    gap: f64,
    excess: f64,
}

fn residuals(
    p: &SdpProblem,
    b: &[f64],
    b_norm: f64,
    c_norm: f64,
    x: &[ComplexMatrix],
    y: &[f64],
    s: &[ComplexMatrix],
) -> Residuals {
    let ax = p.apply(x);
    let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let aty = p.adjoint_apply(y);
    let rd: Vec<ComplexMatrix> = p.cost().iter().zip(&aty).zip(s).map(|((c, a), s)| &(c - a) - s).collect();
    let primal = p.objective(x);
    let dual: f64 = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
    let slack = rp.iter().zip(y).map(|(r, yi)| r * yi).sum::<f64>().abs() + block_inner(&rd, x).abs();
    Residuals {
        primal,
        dual,
        pinf: norm2(&rp) / (1.0 + b_norm),
        dinf: block_norm(&rd) / (1.0 + c_norm),
        gap: (primal - dual).abs() / (1.0 + primal.abs() + dual.abs()),
        excess: (dual - primal) - slack,
    }
}

/// Solves the SDP. Never fails on numerical grounds: non-convergence is reported through the status.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    opts.validate()?;
    for (k, c) in problem.cost().iter().enumerate() {
        if c.hermiticity_deviation() > 1e-10 {
            return Err(Error::Solver(format!("cost block {k} is not Hermitian")));
        }
    }
    let m = problem.num_constraints();
    let sc = scale_problem(problem);
    let p = &sc.problem;
    let b = p.rhs();
    let b_norm = norm2(&b);
    let c_norm = block_norm(p.cost());
    let ac = p.apply(p.cost());
    let zero_blocks = || -> Vec<ComplexMatrix> { p.block_dims().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect() };

    let mut mu = opts.mu;
    let gamma = opts.relaxation;
    let mut x = zero_blocks();
    let mut s = zero_blocks();
    let mut y = vec![0.0; m];
    let mut trace = Vec::new();
    let mut excess = f64::NEG_INFINITY;
    let mut best: Option<BestIterate> = None;
    let mut y_anchor = y.clone();
    let mut status = SolveStatus::MaxIter;
    let mut iterations = opts.max_iter;

    for it in 1..=opts.max_iter {
        // y = (AA*)^{-1} (μ(b − A(X)) − A(S − C))
        let ax = p.apply(&x);
        let as_ = p.apply(&s);
        let rhs: Vec<f64> = (0..m).map(|i| mu * (b[i] - ax[i]) - (as_[i] - ac[i])).collect();
        y = sc.gram.solve(&rhs);
        let aty = p.adjoint_apply(&y);
        let v: Vec<ComplexMatrix> = p.cost().iter().zip(&aty).zip(&x).map(|((c, a), xk)| &(c - a) - &xk.scale_real(mu)).collect();
        let (pos, neg) = split_psd(&v);
        s = pos;
        let x_new: Vec<ComplexMatrix> = neg.iter().map(|n| n.scale_real(1.0 / mu)).collect();
        x = axpy_blocks(1.0 - gamma, &x, gamma, &x_new);

        if it % opts.check_every == 0 || it == opts.max_iter {
            let r = residuals(p, &b, b_norm, c_norm, &x_new, &y, &s);
            excess = excess.max(r.excess);
            if opts.trace_every > 0 && it % opts.trace_every == 0 {
                trace.push(IterRecord {
                    iteration: it,
                    primal: r.primal * sc.b_scale * sc.c_scale,
                    dual: r.dual * sc.b_scale * sc.c_scale,
                    primal_residual: r.pinf,
                    dual_residual: r.dinf,
                    mu,
                });
            }
            let merit = r.pinf.max(r.dinf).max(r.gap);
            let converged = r.pinf <= opts.feas_tol && r.dinf <= opts.feas_tol && r.gap <= opts.gap_tol;
            if best.as_ref().is_none_or(|bst| merit < bst.0) || converged {
                best = Some((merit, x_new.clone(), y.clone(), s.clone(), r, it));
            }
            if converged {
                status = SolveStatus::Optimal;
                iterations = it;
                break;
            }
        }
        if it % 50 == 0 {
            let r = residuals(p, &b, b_norm, c_norm, &x_new, &y, &s);
            if r.dinf > 10.0 * r.pinf {
                mu /= 2.0;
            } else if r.pinf > 10.0 * r.dinf {
                mu *= 2.0;
            }
            mu = mu.clamp(1e-8, 1e8);
        }
        if it % 100 == 0 {
            if it >= 2000 && farkas_certificate(p, &b, &y, &y_anchor) {
                status = SolveStatus::Infeasible;
                iterations = it;
                best = Some((
                    f64::INFINITY,
                    x_new.clone(),
                    y.clone(),
                    s.clone(),
                    residuals(p, &b, b_norm, c_norm, &x_new, &y, &s),
                    it,
                ));
                break;
            }
            y_anchor = y.clone();
        }
    }

    let (_, xb, yb, sb, r, _) = best.expect("at least one residual check");
    // undo the scalings: X = σ_b X̃, S = σ_C S̃, y_i = σ_C ỹ_i / ‖A_i‖
    let x_out: Vec<ComplexMatrix> = xb.iter().map(|m| m.scale_real(sc.b_scale)).collect();
    let s_out: Vec<ComplexMatrix> = sb.iter().map(|m| m.scale_real(sc.c_scale)).collect();
    let y_out: Vec<f64> = yb.iter().zip(&sc.row_scale).map(|(yi, rs)| yi * sc.c_scale / rs).collect();
    let objective = problem.objective(&x_out);
    let dual_objective: f64 = problem.rhs().iter().zip(&y_out).map(|(bi, yi)| bi * yi).sum();
    Ok(SdpSolution {
        objective,
        dual_objective,
        x: x_out,
        y: y_out,
        s: s_out,
        // relative gap in the caller's units; convergence was judged on the scaled problem
        gap: (objective - dual_objective).abs() / (1.0 + objective.abs() + dual_objective.abs()),
        primal_residual: r.pinf,
        dual_residual: r.dinf,
        iterations,
        status,
        weak_duality_excess: excess * sc.b_scale * sc.c_scale,
        trace,
    })
}

/// Whether the recent change in `y` is a ray with `A*(d) ⪯ 0` and `bᵀd > 0`,
/// i.e. a certificate that no PSD `X` satisfies the constraints.
fn farkas_certificate(p: &SdpProblem, b: &[f64], y: &[f64], anchor: &[f64]) -> bool {
    let d: Vec<f64> = y.iter().zip(anchor).map(|(a, c)| a - c).collect();
    let dn = norm2(&d);
    if dn <= 1e-6 * (1.0 + norm2(anchor)) {
        return false;
    }
    let d: Vec<f64> = d.iter().map(|x| x / dn).collect();
    let bd: f64 = b.iter().zip(&d).map(|(u, v)| u * v).sum();
    if bd <= 1e-6 {
        return false;
    }
    let aty = p.adjoint_apply(&d);
    aty.iter().all(|m| m.max_eigenvalue() <= 1e-6 * bd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn minimal_trace_with_unit_trace() {
        let mut p = SdpProblem::new(vec![2]);
        p.set_cost(0, ComplexMatrix::identity(2)).unwrap();
        p.add_dense(0, &ComplexMatrix::identity(2), 1.0).unwrap();
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-6);
    }

    #[test]
    fn smallest_eigenvalue_by_sdp() {
        // min <H, X> s.t. tr X = 1 gives the smallest eigenvalue of H
        let h = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(-1.0, 0.0)]).unwrap();
        let mut p = SdpProblem::new(vec![2]);
        p.set_cost(0, h.clone()).unwrap();
        p.add_dense(0, &ComplexMatrix::identity(2), 1.0).unwrap();
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - h.min_eigenvalue()).abs() < 1e-6);
        assert!((sol.dual_objective - h.min_eigenvalue()).abs() < 1e-6);
        assert!(sol.weak_duality_excess <= 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        let mut p = SdpProblem::new(vec![2]);
        p.set_cost(0, ComplexMatrix::identity(2)).unwrap();
        p.add_dense(0, &ComplexMatrix::identity(2), -1.0).unwrap();
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn trace_records_iterations() {
        let mut p = SdpProblem::new(vec![3]);
        p.set_cost(0, ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0])).unwrap();
        p.add_dense(0, &ComplexMatrix::identity(3), 2.0).unwrap();
        let opts = SolverOptions { trace_every: 10, ..SolverOptions::default() };
        let sol = solve(&p, &opts).unwrap();
        assert!(!sol.trace.is_empty());
        assert!((sol.objective - 2.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_options() {
        let p = SdpProblem::new(vec![1]);
        let opts = SolverOptions { relaxation: 2.0, ..SolverOptions::default() };
        assert!(solve(&p, &opts).is_err());
    }
}
