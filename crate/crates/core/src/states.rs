//! Concrete state families and seeded random ensembles.
//!
//! Randomness comes from SplitMix64 (state increment `0x9E3779B97F4A7C15`,
//! output mix constants `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). Each
//! independent task draws from its own stream, seeded by [`stream_seed`].

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::bell::{gen_pauli, mc_state_from_block, MCBlock, MCMatrix};
use crate::channel::QuantumMap;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};
use crate::state::{max_entangled_state, DensityMatrix};

pub type StateRng = SplitMix64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `stream` derived from a master seed.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> StateRng {
    SplitMix64::seed_from_u64(seed)
}

pub fn stream_rng(seed: u64, stream: u64) -> StateRng {
    rng_from_seed(stream_seed(seed, stream))
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} = {x} outside [0,1]")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
    }
    Ok(())
}

/// Isotropic family parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicParams {
    pub d: usize,
    pub f: f64,
}

/// Werner family parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerParams {
    pub d: usize,
    pub p: f64,
}

/// `I_d(f) = f Φ+ + (1−f)/(d²−1) (1 − Φ+)`.
pub fn isotropic(d: usize, f: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    check_unit("f", f)?;
    let phi = max_entangled_state(d).into_matrix();
    let n = d * d;
    let rest = &ComplexMatrix::identity(n) - &phi;
    let m = &phi.scale_real(f) + &rest.scale_real((1.0 - f) / (n as f64 - 1.0));
    DensityMatrix::new(vec![d, d], m)
}

pub fn isotropic_from(params: IsotropicParams) -> Result<DensityMatrix> {
    isotropic(params.d, params.f)
}

/// The swap operator `F|ij> = |ji>`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, col| if r == (col % d) * d + col / d { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `W_d(p) = (1−p)/(d²+d) (1+F) + p/(d²−d) (1−F)`.
pub fn werner(d: usize, p: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    check_unit("p", p)?;
    let n = d * d;
    let id = ComplexMatrix::identity(n);
    let f = swap_operator(d);
    let sym = &id + &f;
    let anti = &id - &f;
    let df = d as f64;
    let m = &sym.scale_real((1.0 - p) / (df * df + df)) + &anti.scale_real(p / (df * df - df));
    DensityMatrix::new(vec![d, d], m)
}

pub fn werner_from(params: WernerParams) -> Result<DensityMatrix> {
    werner(params.d, params.p)
}

/// Kraus operators `sqrt(1−p) 1, sqrt(p/(d²−1)) X^i Z^j` of the depolarizing channel.
pub fn depolarizing_kraus(d: usize, p: f64) -> Result<Vec<ComplexMatrix>> {
    check_dim(d)?;
    check_unit("p", p)?;
    let (x, z) = gen_pauli(d)?;
    let weight = (p / (d * d - 1) as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    let mut xi = ComplexMatrix::identity(d);
    for i in 0..d {
        let mut g = xi.clone();
        for j in 0..d {
            let w = if i == 0 && j == 0 { (1.0 - p).sqrt() } else { weight };
            out.push(g.scale_real(w));
            g = g.matmul(&z);
        }
        xi = xi.matmul(&x);
    }
    Ok(out)
}

/// Normalized Choi state `(id ⊗ D_p)(Φ+)` built from the Kraus form.
pub fn depolarizing_choi(d: usize, p: f64) -> Result<DensityMatrix> {
    let channel = QuantumMap::from_kraus(&depolarizing_kraus(d, p)?)?;
    DensityMatrix::new(vec![d, d], channel.choi().scale_real(1.0 / d as f64))
}

/// The 3⊗3 PPT family `τ_a`, normalized by `1/(8a+1)`.
pub fn horodecki_state(a: f64) -> Result<DensityMatrix> {
    check_unit("a", a)?;
    let mut m = ComplexMatrix::zeros(9, 9);
    for &i in &[0usize, 4, 8] {
        for &j in &[0usize, 4, 8] {
            m[(i, j)] = c(a, 0.0);
        }
    }
    for &i in &[1usize, 2, 3, 5, 7] {
        m[(i, i)] = c(a, 0.0);
    }
    m[(6, 6)] = c((1.0 + a) / 2.0, 0.0);
    m[(8, 8)] = c((1.0 + a) / 2.0, 0.0);
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 8)] = c(off, 0.0);
    m[(8, 6)] = c(off, 0.0);
    DensityMatrix::new(vec![3, 3], m.scale_real(1.0 / (8.0 * a + 1.0)))
}

/// `(1−p) ω + p τ_{1/2}` for a qutrit Bell block.
pub fn block_mixture_state(block: &MCBlock, alpha: &MCMatrix, p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    if block.d() != 3 {
        return Err(Error::InvalidParameter(format!("mixture with the 3⊗3 PPT state needs d = 3, got {}", block.d())));
    }
    let omega = mc_state_from_block(block, alpha)?;
    omega.mix(&horodecki_state(0.5)?, 1.0 - p)
}

/// The block `{1, 6, 8}` used by the two θ examples.
pub fn theta_block() -> MCBlock {
    MCBlock::from_linear(3, &[1, 6, 8]).expect("valid block")
}

/// `α^(1) = (|0><0| + |ψ><ψ|)/2` and `α^(2) = |ψ><ψ|` with ψ uniform.
pub fn theta_alpha(k: usize) -> Result<MCMatrix> {
    let psi = ComplexMatrix::from_fn(3, 3, |_, _| c(1.0 / 3.0, 0.0));
    match k {
        1 => {
            let e0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
            MCMatrix::new((&e0 + &psi).scale_real(0.5))
        }
        2 => MCMatrix::new(psi),
        _ => Err(Error::InvalidParameter(format!("θ index {k} is not 1 or 2"))),
    }
}

pub fn theta_state(k: usize, p: f64) -> Result<DensityMatrix> {
    block_mixture_state(&theta_block(), &theta_alpha(k)?, p)
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `G G† / tr(G G†)` with `G` Ginibre of shape `dim × rank`.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let n: usize = dims.iter().product();
    if rank == 0 || rank > n {
        return Err(Error::InvalidParameter(format!("rank {rank} outside [1, {n}]")));
    }
    let g = ginibre(n, rank, rng);
    DensityMatrix::from_unnormalized(dims.to_vec(), g.matmul(&g.adjoint()))
}

pub fn random_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = crate::linalg::vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar unitary: QR of a Ginibre matrix with the phases of `diag R` divided out.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    for col in 0..d {
        let rd = r[(col, col)];
        let phase = if rd.norm() > 0.0 { rd / rd.norm() } else { c(1.0, 0.0) };
        for row in 0..d {
            u[(row, col)] *= phase;
        }
    }
    u
}

/// Full-rank Hilbert–Schmidt random coefficient matrix of the given size.
pub fn random_mc_matrix<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Result<MCMatrix> {
    if size == 0 {
        return Err(Error::InvalidParameter("MC matrix of size 0".into()));
    }
    MCMatrix::new(random_density(&[size], size, rng)?.into_matrix())
}
