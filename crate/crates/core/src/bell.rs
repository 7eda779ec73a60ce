//! Generalized Pauli operators, the generalized Bell basis, simultaneous
//! Schmidt decomposability and maximally correlated (MC) Bell blocks.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::entropy::shannon_entropy;
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::state::DensityMatrix;

/// Default tolerance for the algebraic SSD test.
pub const SSD_TOL: f64 = 1e-9;
/// Largest dimension accepted by [`enumerate_mc_blocks`].
pub const MAX_BLOCK_DIM: usize = 6;

fn root_of_unity(d: usize, power: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (power % d) as f64 / d as f64)
}

/// Shift `X|k> = |k+1>` and clock `Z|k> = ω^k |k>` in dimension `d`;
/// they satisfy `ZX = ω XZ`.
pub fn gen_pauli(d: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("generalized Paulis need d >= 2, got {d}")));
    }
    let x = ComplexMatrix::from_fn(d, d, |r, col| if r == (col + 1) % d { ONE } else { ZERO });
    let z = ComplexMatrix::from_fn(d, d, |r, col| if r == col { root_of_unity(d, r) } else { ZERO });
    Ok((x, z))
}

/// `(1 ⊗ X^m Z^n)|Φ+>`; component `(i, i+m)` equals `ω^{ni}/sqrt(d)`.
pub fn bell_state(d: usize, n: usize, m: usize) -> Result<Vec<C64>> {
    if d < 2 || n >= d || m >= d {
        return Err(Error::InvalidParameter(format!("Bell index ({n},{m}) invalid for d = {d}")));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + (i + m) % d] = root_of_unity(d, n * i) * amp;
    }
    Ok(v)
}

/// Coefficient matrix `op(ψ)[i][j] = ψ[i·d_B + j]`.
pub fn op_of_vec(psi: &[C64], d_a: usize, d_b: usize) -> Result<ComplexMatrix> {
    if psi.len() != d_a * d_b {
        return Err(Error::DimensionMismatch(format!("vector of length {} is not {d_a}x{d_b}", psi.len())));
    }
    ComplexMatrix::new(d_a, d_b, psi.to_vec())
}

/// Largest entry of `X Y† Z − Z Y† X` over all ordered triples of coefficient matrices.
pub fn ssd_violation(vectors: &[Vec<C64>], d_a: usize, d_b: usize) -> Result<f64> {
    let ops = vectors.iter().map(|v| op_of_vec(v, d_a, d_b)).collect::<Result<Vec<_>>>()?;
    let adj: Vec<ComplexMatrix> = ops.iter().map(|o| o.adjoint()).collect();
    let mut worst: f64 = 0.0;
    for x in &ops {
        for y in &adj {
            let xy = x.matmul(y);
            for z in &ops {
                let lhs = xy.matmul(z);
                let rhs = z.matmul(y).matmul(x);
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    Ok(worst)
}

pub fn is_ssd(vectors: &[Vec<C64>], d_a: usize, d_b: usize, tol: f64) -> Result<bool> {
    Ok(ssd_violation(vectors, d_a, d_b)? <= tol)
}

/// Generalized Bell label `(n, m)`; linear number `k = n·d + m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellIndex {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl BellIndex {
    pub fn new(d: usize, n: usize, m: usize) -> Result<Self> {
        if d < 2 || n >= d || m >= d {
            return Err(Error::InvalidParameter(format!("Bell index ({n},{m}) invalid for d = {d}")));
        }
        Ok(Self { n, m, d })
    }

    pub fn from_linear(d: usize, k: usize) -> Result<Self> {
        if d < 2 || k == 0 || k > d * d {
            return Err(Error::InvalidParameter(format!("linear Bell index {k} outside [1, {}]", d * d)));
        }
        Ok(Self { n: (k - 1) / d, m: (k - 1) % d, d })
    }

    pub fn linear(&self) -> usize {
        self.n * self.d + self.m + 1
    }

    pub fn vector(&self) -> Vec<C64> {
        bell_state(self.d, self.n, self.m).expect("validated index")
    }
}

/// The congruence relation for one ordered triple, reduced mod `d`.
fn triple_holds(d: usize, a: (usize, usize), b: (usize, usize), g: (usize, usize)) -> bool {
    let d = d as i64;
    let (na, ma) = (a.0 as i64, a.1 as i64);
    let (nb, mb) = (b.0 as i64, b.1 as i64);
    let (ng, mg) = (g.0 as i64, g.1 as i64);
    let lhs = ma * (ng - nb) - ng * mb;
    let rhs = na * (mg - mb) - mg * nb;
    (lhs - rhs).rem_euclid(d) == 0
}

/// Whether the Bell states with labels `(n, m)` are simultaneously Schmidt
/// decomposable, via the congruence test. At most `d` distinct labels are accepted.
pub fn block_is_mc(d: usize, indices: &[(usize, usize)]) -> Result<bool> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}")));
    }
    if indices.len() > d {
        return Err(Error::InvalidParameter(format!("{} labels exceed d = {d}", indices.len())));
    }
    for (i, &(n, m)) in indices.iter().enumerate() {
        if n >= d || m >= d {
            return Err(Error::InvalidParameter(format!("label ({n},{m}) invalid for d = {d}")));
        }
        if indices[..i].contains(&(n, m)) {
            return Err(Error::InvalidParameter(format!("label ({n},{m}) repeated")));
        }
    }
    // triples with a repeated element hold trivially
    for &a in indices {
        for &b in indices {
            for &g in indices {
                if a != b && b != g && a != g && !triple_holds(d, a, b, g) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A set of Bell labels spanning only MC states, sorted by linear index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCBlock {
    d: usize,
    indices: Vec<BellIndex>,
}

impl MCBlock {
    pub fn from_linear(d: usize, ks: &[usize]) -> Result<Self> {
        let mut indices = ks.iter().map(|&k| BellIndex::from_linear(d, k)).collect::<Result<Vec<_>>>()?;
        indices.sort();
        Self::from_indices(d, indices)
    }

    pub fn from_pairs(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut indices = pairs.iter().map(|&(n, m)| BellIndex::new(d, n, m)).collect::<Result<Vec<_>>>()?;
        indices.sort();
        Self::from_indices(d, indices)
    }

    fn from_indices(d: usize, indices: Vec<BellIndex>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter("empty block".into()));
        }
        let pairs: Vec<_> = indices.iter().map(|b| (b.n, b.m)).collect();
        if !block_is_mc(d, &pairs)? {
            let ks: Vec<_> = indices.iter().map(|b| b.linear()).collect();
            return Err(Error::NotMaximallyCorrelated(format!("block {ks:?} fails the congruence test for d = {d}")));
        }
        Ok(Self { d, indices })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[BellIndex] {
        &self.indices
    }

    pub fn linear_indices(&self) -> Vec<usize> {
        self.indices.iter().map(|b| b.linear()).collect()
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        self.indices.iter().map(|b| b.vector()).collect()
    }
}

impl fmt::Display for MCBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.linear_indices().iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", ks.join(", "))
    }
}

/// All size-`d` MC blocks, each ascending in linear index, listed lexicographically.
pub fn enumerate_mc_blocks(d: usize) -> Result<Vec<MCBlock>> {
    if !(2..=MAX_BLOCK_DIM).contains(&d) {
        return Err(Error::InvalidParameter(format!("block enumeration supports 2 <= d <= {MAX_BLOCK_DIM}, got {d}")));
    }
    let labels: Vec<(usize, usize)> = (0..d * d).map(|k| (k / d, k % d)).collect();
    let first_choices: Vec<usize> = (0..=d * d - d).collect();
    let per_first: Vec<Vec<Vec<usize>>> = first_choices
        .par_iter()
        .map(|&first| {
            let mut found = Vec::new();
            let mut current = vec![first];
            extend_block(d, &labels, &mut current, &mut found);
            found
        })
        .collect();
    Ok(per_first
        .into_iter()
        .flatten()
        .map(|ks| MCBlock { d, indices: ks.iter().map(|&k| BellIndex { n: labels[k].0, m: labels[k].1, d }).collect() })
        .collect())
}

fn extend_block(d: usize, labels: &[(usize, usize)], current: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    if current.len() == d {
        found.push(current.clone());
        return;
    }
    let start = *current.last().expect("non-empty") + 1;
    let remaining = d - current.len();
    for next in start..=(d * d - remaining) {
        let g = labels[next];
        // only triples involving the new label need checking
        let ok = current.iter().all(|&i| {
            current.iter().all(|&j| {
                i == j || {
                    let (a, b) = (labels[i], labels[j]);
                    triple_holds(d, a, b, g) && triple_holds(d, a, g, b) && triple_holds(d, g, a, b)
                }
            })
        });
        if ok {
            current.push(next);
            extend_block(d, labels, current, found);
            current.pop();
        }
    }
}

/// Coefficient matrix of an MC state: PSD with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct MCMatrix {
    alpha: ComplexMatrix,
}

impl MCMatrix {
    pub fn new(alpha: ComplexMatrix) -> Result<Self> {
        let n = alpha.rows();
        // same validation as a single-party state
        let rho = DensityMatrix::new(vec![n], alpha)?;
        Ok(Self { alpha: rho.into_matrix() })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn size(&self) -> usize {
        self.alpha.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.alpha
    }
}

/// `ω = Σ_{i,j ∈ B} α_ij |Φ_i><Φ_j|`.
pub fn mc_state_from_block(block: &MCBlock, alpha: &MCMatrix) -> Result<DensityMatrix> {
    if alpha.size() != block.len() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix of size {} for a block of {} labels",
            alpha.size(),
            block.len()
        )));
    }
    let d = block.d();
    let vecs = block.vectors();
    let a = alpha.matrix();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for (i, vi) in vecs.iter().enumerate() {
        for (j, vj) in vecs.iter().enumerate() {
            let w = a[(i, j)];
            if w == ZERO {
                continue;
            }
            for (r, &x) in vi.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (col, &y) in vj.iter().enumerate() {
                    m[(r, col)] += w * x * y.conj();
                }
            }
        }
    }
    DensityMatrix::new(vec![d, d], m)
}

/// Common Schmidt bases of an SSD family: `op(ψ_k) = A diag(λ^{(k)}) B^T`.
#[derive(Clone, Debug)]
pub struct SsdDecomposition {
    /// Unitary whose columns are the A-side Schmidt vectors.
    pub a: ComplexMatrix,
    /// Unitary whose columns are the B-side Schmidt vectors.
    pub b: ComplexMatrix,
    /// `coefficients[(i, k)]` is the `i`-th Schmidt coefficient of vector `k`.
    pub coefficients: ComplexMatrix,
    /// Largest off-diagonal entry left after rotating into the common bases.
    pub residual: f64,
}

/// Finds common Schmidt bases for square (`d ⊗ d`) SSD vectors, at least one
/// of which has full Schmidt rank.
pub fn ssd_decompose(vectors: &[Vec<C64>], d: usize) -> Result<SsdDecomposition> {
    let ops = vectors.iter().map(|v| op_of_vec(v, d, d)).collect::<Result<Vec<_>>>()?;
    if ops.is_empty() {
        return Err(Error::InvalidParameter("no vectors".into()));
    }
    let (ref_idx, smin) = ops
        .iter()
        .enumerate()
        .map(|(i, o)| (i, *o.singular_values().last().expect("non-empty")))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    if smin < 1e-8 {
        return Err(Error::NotMaximallyCorrelated("no vector of full Schmidt rank to anchor the bases".into()));
    }
    let reference = &ops[ref_idx];
    let ref_inv = reference.pseudo_inverse(1e-12);
    // N_k = O_k O_ref^{-1} are commuting normal matrices diagonal in the A basis
    let ns: Vec<ComplexMatrix> = ops.iter().map(|o| o.matmul(&ref_inv)).collect();
    let mut best: Option<SsdDecomposition> = None;
    for attempt in 0..4 {
        let mut h = ComplexMatrix::zeros(d, d);
        for (k, n) in ns.iter().enumerate() {
            let t = (k + 1) as f64 * (1.0 + attempt as f64 * 0.37);
            let (a, b) = ((t * 1.618_033_988_7).sin(), (t * std::f64::consts::E).cos());
            let herm = &n.clone() + &n.adjoint();
            let anti = (&n.clone() - &n.adjoint()).scale(c(0.0, -1.0));
            h = &(&h + &herm.scale_real(a)) + &anti.scale_real(b);
        }
        let a_mat = eigh(&h).eigenvectors;
        let rotated = a_mat.adjoint().matmul(reference);
        let mut bt = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            let row = rotated.row(i);
            let norm = vec_norm(row);
            for j in 0..d {
                bt[(i, j)] = row[j] / norm;
            }
        }
        let bt_adj = bt.adjoint();
        let mut coefficients = ComplexMatrix::zeros(d, ops.len());
        let mut residual: f64 = 0.0;
        for (k, o) in ops.iter().enumerate() {
            let diag = a_mat.adjoint().matmul(o).matmul(&bt_adj);
            for i in 0..d {
                coefficients[(i, k)] = diag[(i, i)];
                for j in 0..d {
                    if i != j {
                        residual = residual.max(diag[(i, j)].norm());
                    }
                }
            }
        }
        let candidate = SsdDecomposition { a: a_mat, b: bt.transpose(), coefficients, residual };
        if residual <= 1e-8 {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(candidate);
        }
    }
    let best = best.expect("at least one attempt");
    Err(Error::NotMaximallyCorrelated(format!(
        "vectors do not share Schmidt bases (off-diagonal residual {:.3e})",
        best.residual
    )))
}

/// An MC Bell-block state rewritten as `(A ⊗ B) [Σ β_ij |ii><jj|] (A ⊗ B)†`.
#[derive(Clone, Debug)]
pub struct McNormalForm {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub beta: MCMatrix,
}

impl McNormalForm {
    pub fn local_unitary(&self) -> ComplexMatrix {
        self.a.kron(&self.b)
    }
}

/// Computational-basis coefficients `β = Λ α Λ†` of a Bell-block MC state.
pub fn mc_normal_form(block: &MCBlock, alpha: &MCMatrix) -> Result<McNormalForm> {
    if alpha.size() != block.len() {
        return Err(Error::DimensionMismatch("coefficient matrix size vs block".into()));
    }
    let dec = ssd_decompose(&block.vectors(), block.d())?;
    let lam = &dec.coefficients;
    let beta = lam.matmul(alpha.matrix()).matmul(&lam.adjoint());
    Ok(McNormalForm { a: dec.a, b: dec.b, beta: MCMatrix::new(beta)? })
}

/// `Σ β_ij |ii><jj|`.
pub fn mc_computational_form(beta: &MCMatrix) -> DensityMatrix {
    let d = beta.size();
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, col| {
        let (i, i2) = (r / d, r % d);
        let (j, j2) = (col / d, col % d);
        if i == i2 && j == j2 {
            beta.matrix()[(i, j)]
        } else {
            ZERO
        }
    });
    DensityMatrix::new(vec![d, d], m).expect("PSD coefficients give a state")
}

/// `H(diag β) − S(β)`: the coherent information of `Σ β_ij |ii><jj|`.
pub fn mc_coherent_information(beta: &MCMatrix) -> f64 {
    let n = beta.size();
    let diag: Vec<f64> = (0..n).map(|i| beta.matrix()[(i, i)].re).collect();
    let h_diag = shannon_entropy(&diag).unwrap_or(0.0);
    let s = shannon_entropy(&beta.matrix().eigenvalues_hermitian()).unwrap_or(0.0);
    (h_diag - s).max(0.0)
}

/// Coherent information of the Bell-block state built from `alpha`, via its
/// computational normal form.
pub fn mc_block_coherent_information(block: &MCBlock, alpha: &MCMatrix) -> Result<f64> {
    Ok(mc_coherent_information(&mc_normal_form(block, alpha)?.beta))
}

/// Off-pattern tolerance for [`dephase_mc`].
pub const MC_PATTERN_TOL: f64 = 1e-9;

/// `Σ α_ij |ii><jj| ↦ Σ α_kk |kk><kk|` for a state already in computational MC form.
pub fn dephase_mc(omega: &DensityMatrix) -> Result<DensityMatrix> {
    let (a, b) = omega.bipartite_dims()?;
    if a != b {
        return Err(Error::DimensionMismatch("MC form needs equal local dims".into()));
    }
    let d = a;
    let m = omega.matrix();
    let mut off = 0.0f64;
    for r in 0..d * d {
        for col in 0..d * d {
            let on_pattern = r / d == r % d && col / d == col % d;
            if !on_pattern {
                off = off.max(m[(r, col)].norm());
            }
        }
    }
    if off > MC_PATTERN_TOL {
        return Err(Error::NotMaximallyCorrelated(format!("entry of size {off:.3e} outside the |ii><jj| pattern")));
    }
    let out = ComplexMatrix::from_fn(d * d, d * d, |r, col| if r == col && r / d == r % d { m[(r, col)] } else { ZERO });
    DensityMatrix::new(vec![d, d], out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{coherent_information, is_ppt, relative_entropy};
    use crate::linalg::inner;

    #[test]
    fn paulis_satisfy_weyl_relation() {
        for d in [2, 3, 5] {
            let (x, z) = gen_pauli(d).unwrap();
            let w = root_of_unity(d, 1);
            // with these definitions the commutation phase sits on ZX
            let diff = &z.matmul(&x) - &x.matmul(&z).scale(w);
            assert!(diff.max_abs() <= 1e-12);
            let mut xp = ComplexMatrix::identity(d);
            let mut zp = ComplexMatrix::identity(d);
            for _ in 0..d {
                xp = xp.matmul(&x);
                zp = zp.matmul(&z);
            }
            assert!(xp.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
            assert!(zp.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
        assert!(gen_pauli(1).is_err());
    }

    #[test]
    fn qubit_paulis_are_standard() {
        let (x, z) = gen_pauli(2).unwrap();
        assert!(x.max_abs_diff(&ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()) < 1e-15);
        assert!(z.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        let d = 3;
        let basis: Vec<_> = (0..d * d).map(|k| bell_state(d, k / d, k % d).unwrap()).collect();
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((inner(u, v) - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singlet_is_bell_state_one_one() {
        let v = bell_state(2, 1, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [ZERO, c(s, 0.0), c(-s, 0.0), ZERO];
        let overlap = inner(&singlet, &v).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn op_of_bell_state_is_scaled_pauli_product() {
        let d = 3;
        let (x, z) = gen_pauli(d).unwrap();
        for n in 0..d {
            for m in 0..d {
                let op = op_of_vec(&bell_state(d, n, m).unwrap(), d, d).unwrap();
                let mut g = ComplexMatrix::identity(d);
                for _ in 0..m {
                    g = g.matmul(&x);
                }
                for _ in 0..n {
                    g = g.matmul(&z);
                }
                let expected = g.transpose().scale_real(1.0 / (d as f64).sqrt());
                assert!(op.max_abs_diff(&expected) < 1e-12);
            }
        }
        assert!(op_of_vec(&[ONE; 5], 2, 2).is_err());
    }

    #[test]
    fn known_block_examples() {
        let one_six_eight: Vec<_> = [1, 6, 8].iter().map(|&k| BellIndex::from_linear(3, k).unwrap()).collect();
        let pairs: Vec<_> = one_six_eight.iter().map(|b| (b.n, b.m)).collect();
        assert!(block_is_mc(3, &pairs).unwrap());
        let bad: Vec<_> = [1, 2, 4].iter().map(|&k| BellIndex::from_linear(3, k).unwrap()).map(|b| (b.n, b.m)).collect();
        assert!(!block_is_mc(3, &bad).unwrap());
        assert!(block_is_mc(2, &[(0, 0), (0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let expected = [(2, 6), (3, 12), (4, 28), (5, 30)];
        for (d, count) in expected {
            let blocks = enumerate_mc_blocks(d).unwrap();
            assert_eq!(blocks.len(), count, "d = {d}");
        }
        assert_eq!(enumerate_mc_blocks(3).unwrap()[0].linear_indices(), vec![1, 2, 3]);
        assert!(enumerate_mc_blocks(7).is_err());
    }

    #[test]
    fn block_of_one_is_phi_plus() {
        let block = MCBlock::from_linear(2, &[1]).unwrap();
        let omega = mc_state_from_block(&block, &MCMatrix::from_real_diagonal(&[1.0]).unwrap()).unwrap();
        let phi = crate::state::max_entangled_state(2);
        assert!(omega.matrix().max_abs_diff(phi.matrix()) < 1e-12);
    }

    #[test]
    fn uniform_pure_block_state_has_log_d_coherent_information() {
        let block = MCBlock::from_linear(3, &[1, 6, 8]).unwrap();
        let alpha = MCMatrix::new(ComplexMatrix::from_fn(3, 3, |_, _| c(1.0 / 3.0, 0.0))).unwrap();
        let omega = mc_state_from_block(&block, &alpha).unwrap();
        assert!((coherent_information(&omega).unwrap() - 3f64.log2()).abs() < 1e-10);
        assert!((mc_block_coherent_information(&block, &alpha).unwrap() - 3f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn normal_form_reproduces_state() {
        let block = MCBlock::from_linear(3, &[1, 6, 8]).unwrap();
        let alpha = MCMatrix::new(
            ComplexMatrix::new(
                3,
                3,
                vec![
                    c(0.5, 0.0),
                    c(0.1, 0.1),
                    c(0.0, 0.05),
                    c(0.1, -0.1),
                    c(0.3, 0.0),
                    c(0.02, 0.0),
                    c(0.0, -0.05),
                    c(0.02, 0.0),
                    c(0.2, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let omega = mc_state_from_block(&block, &alpha).unwrap();
        let nf = mc_normal_form(&block, &alpha).unwrap();
        let u = nf.local_unitary();
        let comp = mc_computational_form(&nf.beta);
        let back = u.matmul(comp.matrix()).matmul(&u.adjoint());
        assert!(back.max_abs_diff(omega.matrix()) < 1e-10);
        let ci = coherent_information(&omega).unwrap();
        assert!((mc_coherent_information(&nf.beta) - ci).abs() < 1e-8);
        let dephased = dephase_mc(&comp).unwrap();
        assert!(is_ppt(&dephased, 1e-12).unwrap());
        assert!((relative_entropy(&comp, &dephased).unwrap() - ci).abs() < 1e-8);
    }

    #[test]
    fn diagonal_coefficients_are_classical() {
        let beta = MCMatrix::from_real_diagonal(&[0.3, 0.7]).unwrap();
        assert!(mc_coherent_information(&beta).abs() < 1e-12);
        let classical = mc_computational_form(&beta);
        assert_eq!(dephase_mc(&classical).unwrap(), classical);
    }

    #[test]
    fn dephasing_phi_plus() {
        let phi = crate::state::max_entangled_state(2);
        let out = dephase_mc(&phi).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);
        let off = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!(matches!(dephase_mc(&off), Err(Error::NotMaximallyCorrelated(_))));
    }
}
