//! States achieving the two-way bounds for isotropic and Werner states.

use crate::bell::{mc_state_from_block, MCBlock, MCMatrix};
use crate::entropy::coherent_information;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ZERO};
use crate::state::DensityMatrix;
use crate::states::swap_operator;

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// `f Φ_{0,0} + (1−f)/(d−1) Σ_{m≠0} Φ_{0,m}`, an MC state with overlap `f`.
pub fn iso_achieving_state(d: usize, f: f64) -> Result<DensityMatrix> {
    check_unit("f", f)?;
    let pairs: Vec<(usize, usize)> = (0..d).map(|m| (0, m)).collect();
    let block = MCBlock::from_pairs(d, &pairs)?;
    let rest = (1.0 - f) / (d as f64 - 1.0);
    let diag: Vec<f64> = (0..d).map(|m| if m == 0 { f } else { rest }).collect();
    mc_state_from_block(&block, &MCMatrix::from_real_diagonal(&diag)?)
}

/// Coherent information of [`iso_achieving_state`]; zero for `f ≤ 1/d`, where PPT states reach the overlap.
pub fn two_way_iso_value(d: usize, f: f64) -> Result<f64> {
    check_unit("f", f)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {d}")));
    }
    if f <= 1.0 / d as f64 {
        return Ok(0.0);
    }
    coherent_information(&iso_achieving_state(d, f)?)
}

/// `(1−p) Ψ+ + p Ψ−` on the span of `|0>, |1>` in each factor.
pub fn werner_achieving_state(d: usize, p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {d}")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = vec![ZERO; d * d];
    let mut minus = vec![ZERO; d * d];
    plus[1] = c(h, 0.0);
    plus[d] = c(h, 0.0);
    minus[1] = c(h, 0.0);
    minus[d] = c(-h, 0.0);
    let m = &ComplexMatrix::projector(&plus).scale_real(1.0 - p) + &ComplexMatrix::projector(&minus).scale_real(p);
    let rho = DensityMatrix::new(vec![d, d], m)?;
    let swap_expectation = swap_operator(d).trace_product(rho.matrix()).re;
    if (swap_expectation - (1.0 - 2.0 * p)).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("swap expectation {swap_expectation} does not match 1 − 2p")));
    }
    Ok(rho)
}

/// Coherent information of [`werner_achieving_state`]; zero for `p ≤ 1/2`.
pub fn two_way_werner_value(d: usize, p: f64) -> Result<f64> {
    let rho = werner_achieving_state(d, p)?;
    if p <= 0.5 {
        return Ok(0.0);
    }
    coherent_information(&rho)
}
