//! Thin wrapper over the `argmin` simplex method for closures on `&[f64]`.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub step: f64,
    pub max_iters: u64,
    /// Stop once the standard deviation of simplex costs falls below this.
    pub sd_tol: f64,
    /// Extra restarts from the incumbent with a fresh, halved simplex.
    pub polish_rounds: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { step: 0.5, max_iters: 2000, sd_tol: 1e-12, polish_rounds: 2 }
    }
}

struct Objective<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let v = (self.0)(p);
        // the simplex ordering breaks on NaN
        Ok(if v.is_nan() { f64::MAX } else { v })
    }
}

/// Minimizes `f` from `x0`; returns the best point and its cost.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: Vec<f64>, opts: &SimplexOptions) -> Result<(Vec<f64>, f64)> {
    if x0.is_empty() {
        return Err(Error::Optimizer("empty parameter vector".into()));
    }
    let objective = Objective(f);
    let mut best_x = x0;
    let mut best_f = objective.cost(&best_x).map_err(|e| Error::Optimizer(e.to_string()))?;
    let mut step = opts.step;
    for _ in 0..=opts.polish_rounds {
        let mut simplex = vec![best_x.clone()];
        for i in 0..best_x.len() {
            let mut v = best_x.clone();
            v[i] += step;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex).with_sd_tolerance(opts.sd_tol).map_err(|e| Error::Optimizer(e.to_string()))?;
        let res = Executor::new(Objective(&objective.0), solver)
            .configure(|s| s.max_iters(opts.max_iters))
            .run()
            .map_err(|e| Error::Optimizer(e.to_string()))?;
        let state = res.state();
        if let Some(x) = state.get_best_param() {
            let fx = state.get_best_cost();
            if fx < best_f {
                best_f = fx;
                best_x = x.clone();
            }
        }
        step *= 0.5;
    }
    Ok((best_x, best_f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = SimplexOptions { max_iters: 5000, ..SimplexOptions::default() };
        let (x, fx) = minimize(f, vec![-1.2, 1.0], &opts).unwrap();
        assert!(fx < 1e-8, "{fx}");
        assert!((x[0] - 1.0).abs() < 1e-3 && (x[1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn never_returns_worse_than_start() {
        let f = |x: &[f64]| if x[0] == 0.0 { -1.0 } else { x[0].abs() };
        let (_, fx) = minimize(f, vec![0.0], &SimplexOptions::default()).unwrap();
        assert_eq!(fx, -1.0);
    }
}
