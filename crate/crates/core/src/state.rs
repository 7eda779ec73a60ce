//! Density matrices on multipartite systems and the index algebra on them:
//! partial traces, partial transposes, subsystem permutations and
//! purifications.

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, vec_norm, ComplexMatrix, Spectrum, C64, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalue cutoff that defines the numerical rank used for purifications.
pub const RANK_CUTOFF: f64 = 1e-10;

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn check_square(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let n: usize = dims.iter().product();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!("matrix is {}x{}, dims {:?} give {}", m.rows(), m.cols(), dims, n)));
    }
    Ok(())
}

/// Offsets into the full index space for every multi-index over the listed
/// subsystems (in the listed order, last one fastest).
fn offsets(dims: &[usize], which: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &s in which {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &base in &out {
            for i in 0..dims[s] {
                next.push(base + i * st[s]);
            }
        }
        out = next;
    }
    out
}

/// Partial trace of an operator on `dims`, keeping the subsystems in `keep`
/// (returned in their original order).
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square(m, dims)?;
    if keep.is_empty() {
        return Err(Error::InvalidParameter("keep set must be non-empty".into()));
    }
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::IndexOutOfRange { index: k, count: dims.len() });
        }
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let k_off = offsets(dims, &kept);
    let t_off = offsets(dims, &traced);
    let n = k_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &ri) in k_off.iter().enumerate() {
        for (j, &cj) in k_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &t_off {
                acc += m[(ri + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Transpose on one tensor factor.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    check_square(m, dims)?;
    if subsystem >= dims.len() {
        return Err(Error::IndexOutOfRange { index: subsystem, count: dims.len() });
    }
    let st = strides(dims)[subsystem];
    let d = dims[subsystem];
    let n = m.rows();
    Ok(ComplexMatrix::from_fn(n, n, |r, col| {
        let dr = (r / st) % d;
        let dc = (col / st) % d;
        let r2 = r - dr * st + dc * st;
        let c2 = col - dc * st + dr * st;
        m[(r2, c2)]
    }))
}

/// Reorders tensor factors: factor `j` of the result is factor `perm[j]` of the input.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_square(m, dims)?;
    let map = permutation_map(dims, perm)?;
    let n = m.rows();
    Ok(ComplexMatrix::from_fn(n, n, |r, col| m[(map[r], map[col])]))
}

/// Same as [`permute_subsystems`] for a state vector.
pub fn permute_vector(v: &[C64], dims: &[usize], perm: &[usize]) -> Result<Vec<C64>> {
    let map = permutation_map(dims, perm)?;
    if v.len() != map.len() {
        return Err(Error::DimensionMismatch("vector length vs dims".into()));
    }
    Ok(map.iter().map(|&i| v[i]).collect())
}

/// For each index of the permuted space, the corresponding index in the original space.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let k = dims.len();
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::InvalidParameter(format!("permutation {perm:?} has wrong length")));
    }
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let n: usize = dims.iter().product();
    Ok((0..n)
        .map(|idx| perm.iter().enumerate().map(|(j, &p)| ((idx / new_strides[j]) % new_dims[j]) * old_strides[p]).sum())
        .collect())
}

/// A validated quantum state with an explicit tensor-factor structure.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and normalization, then stores the
    /// exactly Hermitian part of `matrix`.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!("invalid dims {dims:?}")));
        }
        check_square(&matrix, &dims)?;
        let deviation = matrix.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace });
        }
        let min_eigenvalue = matrix.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { dims, matrix })
    }

    /// Normalizes a positive operator to unit trace before validating.
    pub fn from_unnormalized(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0 && tr.is_finite()) {
            return Err(Error::Trace { trace: tr });
        }
        Self::new(dims, matrix.scale_real(1.0 / tr))
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn from_pure(dims: Vec<usize>, psi: &[C64]) -> Result<Self> {
        let norm = vec_norm(psi);
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(dims, ComplexMatrix::projector(&v))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let matrix = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spectrum(&self) -> Spectrum {
        eigh(&self.matrix)
    }

    pub fn rank(&self, cutoff: f64) -> usize {
        self.spectrum().rank(cutoff)
    }

    /// Local dimensions of a bipartite state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::DimensionMismatch(format!("expected a bipartite state, got dims {:?}", self.dims))),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, matrix: self.matrix.kron(&other.matrix) }
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("mixing states with different dims".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!("mixing weight {lambda} outside [0,1]")));
        }
        let m = &self.matrix.scale_real(lambda) + &other.matrix.scale_real(1.0 - lambda);
        Ok(Self { dims: self.dims.clone(), matrix: m })
    }

    /// `U rho U†` for a unitary on the full space.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch("unitary size".into()));
        }
        Self::new(self.dims.clone(), u.matmul(&self.matrix).matmul(&u.adjoint()))
    }

    /// Exchanges the two parties of a bipartite state.
    pub fn swap_parties(&self) -> Result<Self> {
        let (a, b) = self.bipartite_dims()?;
        let m = permute_subsystems(&self.matrix, &[a, b], &[1, 0])?;
        Ok(Self { dims: vec![b, a], matrix: m })
    }

    /// Regroups tensor factors into a coarser split with the same total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(Error::DimensionMismatch(format!("dims {dims:?} incompatible with size {}", self.dim())));
        }
        Ok(Self { dims, matrix: self.matrix.clone() })
    }
}

/// Marginal on the subsystems in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let dims = kept.iter().map(|&k| rho.dims()[k]).collect();
    Ok(DensityMatrix { dims, matrix: m.hermitian_part() })
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), subsystem)
}

/// Pure state on `A ⊗ B ⊗ E` whose `AB` marginal is the input.
#[derive(Clone, Debug)]
pub struct Purification {
    /// Input dims followed by the environment dimension.
    pub dims: Vec<usize>,
    pub vector: Vec<C64>,
}

impl Purification {
    pub fn environment_dim(&self) -> usize {
        *self.dims.last().expect("non-empty dims")
    }

    pub fn state(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims.clone(), matrix: ComplexMatrix::projector(&self.vector) }
    }
}

/// Weighted eigenvectors `sqrt(λ_k) v_k` for the eigenvalues above [`RANK_CUTOFF`].
pub fn spectral_factor(rho: &DensityMatrix) -> Vec<Vec<C64>> {
    let spec = rho.spectrum();
    spec.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_CUTOFF)
        .map(|(k, &l)| spec.eigenvector(k).into_iter().map(|z| z * l.sqrt()).collect())
        .collect()
}

/// Minimal purification `Σ_k sqrt(λ_k) |v_k>|k>_E` with `|E|` equal to the
/// numerical rank.
pub fn purify(rho: &DensityMatrix) -> Purification {
    let factor = spectral_factor(rho);
    let r = factor.len();
    let n = rho.dim();
    let mut vector = vec![ZERO; n * r];
    for (k, g) in factor.iter().enumerate() {
        for (i, &z) in g.iter().enumerate() {
            vector[i * r + k] = z;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    Purification { dims, vector }
}

/// `tr_B` of the purification `Σ_k g_k ⊗ |k>_E`, where `Σ_k g_k g_k† = ρ_AB`.
/// The result lives on `A ⊗ E` with `|E|` = number of factor columns.
pub fn complementary_from_factor(d_a: usize, d_b: usize, factor: &[Vec<C64>]) -> ComplexMatrix {
    let r = factor.len();
    let n = d_a * r;
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..d_a {
        for k in 0..r {
            for a2 in 0..d_a {
                for k2 in 0..r {
                    let mut acc = ZERO;
                    for b in 0..d_b {
                        acc += factor[k][a * d_b + b] * factor[k2][a2 * d_b + b].conj();
                    }
                    out[(a * r + k, a2 * r + k2)] = acc;
                }
            }
        }
    }
    out
}

/// The complementary state `ρ_AE = tr_B φ_ABE` of a bipartite state, using
/// the minimal purification.
pub fn complementary_state(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let (d_a, d_b) = rho.bipartite_dims()?;
    let factor = spectral_factor(rho);
    let r = factor.len();
    let m = complementary_from_factor(d_a, d_b, &factor);
    let tr = m.trace().re;
    DensityMatrix::new(vec![d_a, r], m.scale_real(1.0 / tr))
}

/// The maximally entangled vector `Σ_i |ii> / sqrt(d)`.
pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = c(amp, 0.0);
    }
    v
}

pub fn max_entangled_state(d: usize) -> DensityMatrix {
    DensityMatrix { dims: vec![d, d], matrix: ComplexMatrix::projector(&max_entangled_vector(d)) }
}

/// Computational basis vector `|i>` in dimension `d`.
pub fn basis_vector(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[i] = c(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron_vec;

    fn bell() -> DensityMatrix {
        max_entangled_state(2)
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho_a = partial_trace(&bell(), &[0]).unwrap();
        assert!(rho_a.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert_eq!(rho_a.dims(), &[2]);
    }

    #[test]
    fn product_marginal_recovers_factor() {
        let rho = DensityMatrix::new(
            vec![2],
            ComplexMatrix::new(2, 2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap(),
        )
        .unwrap();
        let sigma = DensityMatrix::maximally_mixed(vec![3]);
        let joint = rho.tensor(&sigma);
        let back = partial_trace(&joint, &[0]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let other = partial_trace(&joint, &[1]).unwrap();
        assert!(other.matrix().max_abs_diff(sigma.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        assert_eq!(partial_trace(&bell(), &[2]).unwrap_err(), Error::IndexOutOfRange { index: 2, count: 2 });
        assert!(partial_trace(&bell(), &[]).is_err());
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_eigenvalue() {
        let pt = partial_transpose(&bell(), 1).unwrap();
        let ev = pt.eigenvalues_hermitian();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_of_product_is_itself() {
        let v = kron_vec(&basis_vector(2, 0), &basis_vector(2, 0));
        let rho = DensityMatrix::from_pure(vec![2, 2], &v).unwrap();
        let pt = partial_transpose(&rho, 1).unwrap();
        assert_eq!(&pt, rho.matrix());
    }

    #[test]
    fn permutation_swaps_product_factors() {
        let a = DensityMatrix::from_pure(vec![2], &basis_vector(2, 1)).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let ab = a.tensor(&b);
        let ba = permute_subsystems(ab.matrix(), &[2, 3], &[1, 0]).unwrap();
        assert!(ba.max_abs_diff(b.tensor(&a).matrix()) < 1e-15);
        assert!(permute_subsystems(ab.matrix(), &[2, 3], &[0, 0]).is_err());
    }

    #[test]
    fn validation_names_failed_invariant() {
        let m = ComplexMatrix::from_real_diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(vec![2], m), Err(Error::NotPositive { .. })));
        let m = ComplexMatrix::from_real_diagonal(&[0.6, 0.6]);
        assert!(matches!(DensityMatrix::new(vec![2], m), Err(Error::Trace { .. })));
        let m = ComplexMatrix::new(2, 2, vec![c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(matches!(DensityMatrix::new(vec![2], m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn pure_state_purifies_with_trivial_environment() {
        let v = vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.8)];
        let rho = DensityMatrix::from_pure(vec![2, 2], &v).unwrap();
        let p = purify(&rho);
        assert_eq!(p.environment_dim(), 1);
        let back = partial_trace(&p.state(), &[0, 1]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        let comp = complementary_state(&rho).unwrap();
        let rho_a = partial_trace(&rho, &[0]).unwrap();
        assert_eq!(comp.dims(), &[2, 1]);
        assert!(comp.matrix().max_abs_diff(rho_a.matrix()) < 1e-12);
    }

    #[test]
    fn maximally_mixed_purifies_to_entangled_vector() {
        let rho = DensityMatrix::maximally_mixed(vec![1, 2]);
        let p = purify(&rho);
        assert_eq!(p.environment_dim(), 2);
        let st = p.state();
        let back = partial_trace(&st, &[0, 1]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        // B and E are maximally entangled: the E marginal is maximally mixed as well
        let env = partial_trace(&st, &[2]).unwrap();
        assert!(env.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-12);
    }
}
