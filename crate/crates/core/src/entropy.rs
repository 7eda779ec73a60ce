//! Entropic functionals in bits.

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix};
use crate::state::{max_entangled_vector, partial_trace, partial_transpose, DensityMatrix};

/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as zero; anything more negative is an error.
pub const CLIP_TOL: f64 = 1e-9;
/// Eigenvalues below this contribute nothing to an entropy.
pub const DROP_TOL: f64 = 1e-12;
/// Eigenvalue cutoff defining the support of the second argument of a relative entropy.
pub const SUPPORT_CUTOFF: f64 = 1e-10;
/// Mass outside the support above which a relative entropy is infinite.
pub const SUPPORT_LEAK: f64 = 1e-9;

/// `-Σ p log p` over a probability-like vector, clipping tiny negatives.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &x in p {
        if x < -CLIP_TOL {
            return Err(Error::NotPositive { min_eigenvalue: x });
        }
        if x > DROP_TOL {
            h -= x * x.log2();
        }
    }
    Ok(h.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    // validated states have no eigenvalue below -CLIP_TOL
    shannon_entropy(&rho.spectrum().eigenvalues).unwrap_or(0.0)
}

/// Entropy of a Hermitian matrix that is expected to be a (possibly
/// unnormalized) state; rejects genuinely negative spectra.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    shannon_entropy(&eigh(m).eigenvalues)
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("binary entropy argument {p} outside [0,1]")));
    }
    shannon_entropy(&[p, 1.0 - p])
}

/// `I(A⟩B) = S(B) - S(AB)`.
pub fn coherent_information(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let rho_b = partial_trace(rho, &[1])?;
    Ok(von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// `I(B⟩A) = S(A) - S(AB)`.
pub fn reverse_coherent_information(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let rho_a = partial_trace(rho, &[0])?;
    Ok(von_neumann_entropy(&rho_a) - von_neumann_entropy(rho))
}

/// `D(ρ‖σ)`, or `+∞` when ρ leaks out of the support of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let spec = sigma.spectrum();
    let m = rho.matrix();
    let mut inside = 0.0;
    let mut cross = 0.0;
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        if lam <= SUPPORT_CUTOFF {
            continue;
        }
        let v = spec.eigenvector(k);
        let w = m.mul_vec(&v);
        let weight: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        inside += weight;
        cross += weight * lam.log2();
    }
    if 1.0 - inside > SUPPORT_LEAK {
        return Ok(f64::INFINITY);
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.singular_values().iter().sum()
}

/// Smallest eigenvalue of the partial transpose on the second party.
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    Ok(partial_transpose(rho, 1)?.min_eigenvalue())
}

pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho)? >= -tol)
}

/// `<Φ+|ρ|Φ+>`.
pub fn mes_overlap(rho: &DensityMatrix) -> Result<f64> {
    let (a, b) = rho.bipartite_dims()?;
    if a != b {
        return Err(Error::DimensionMismatch(format!("overlap needs equal local dims, got {a} and {b}")));
    }
    let phi = max_entangled_vector(a);
    let w = rho.matrix().mul_vec(&phi);
    Ok(phi.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum::<f64>().clamp(0.0, 1.0))
}

/// `E_N(ρ) = log ‖ρ^Γ‖₁`.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let pt = partial_transpose(rho, 1)?;
    // the partial transpose is Hermitian, so its trace norm is Σ|λ|
    let norm: f64 = pt.eigenvalues_hermitian().iter().map(|l| l.abs()).sum();
    Ok(norm.log2().max(0.0))
}
