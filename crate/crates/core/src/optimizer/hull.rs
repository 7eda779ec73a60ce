//! Lower convex envelope of a sampled curve.

use super::CurvePoint;
use crate::error::{Error, Result};

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the lower hull of `(x, y)` samples sorted by `x` (monotone chain).
pub fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Evaluates the piecewise-linear hull at `x` inside its range.
fn interpolate(hull: &[(f64, f64)], x: f64) -> f64 {
    let k = hull.partition_point(|v| v.0 < x);
    if k == 0 {
        return hull[0].1;
    }
    if k == hull.len() {
        return hull[k - 1].1;
    }
    let (a, b) = (hull[k - 1], hull[k]);
    if b.0 == x {
        return b.1;
    }
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// The lower convex envelope of the feasible points, evaluated at each of
/// their `p` values. Infeasible points are dropped.
pub fn convex_hull_1d(points: &[CurvePoint]) -> Result<Vec<CurvePoint>> {
    let mut feasible: Vec<&CurvePoint> = points.iter().filter(|pt| pt.feasible && pt.value.is_finite()).collect();
    if feasible.len() < 2 {
        return Err(Error::InvalidParameter(format!("convex hull needs at least 2 feasible points, got {}", feasible.len())));
    }
    feasible.sort_by(|a, b| a.p.total_cmp(&b.p));
    if feasible.windows(2).any(|w| w[0].p == w[1].p) {
        return Err(Error::InvalidParameter("convex hull needs distinct p values".into()));
    }
    let xy: Vec<(f64, f64)> = feasible.iter().map(|pt| (pt.p, pt.value)).collect();
    let hull = lower_hull(&xy);
    Ok(feasible.into_iter().map(|pt| CurvePoint { value: interpolate(&hull, pt.p).min(pt.value), ..pt.clone() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xy: &[(f64, f64)]) -> Vec<CurvePoint> {
        xy.iter().map(|&(p, v)| CurvePoint::exact(p, v)).collect()
    }

    #[test]
    fn convex_samples_unchanged() {
        let xy: Vec<(f64, f64)> = (0..11).map(|i| (i as f64 / 10.0, (i as f64 / 10.0).powi(2))).collect();
        let out = convex_hull_1d(&pts(&xy)).unwrap();
        for (o, (_, y)) in out.iter().zip(&xy) {
            assert!((o.value - y).abs() < 1e-15);
        }
    }

    #[test]
    fn tent_becomes_chord() {
        let out = convex_hull_1d(&pts(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)])).unwrap();
        assert_eq!(out[1].value, 0.0);
    }

    #[test]
    fn needs_two_points() {
        assert!(convex_hull_1d(&pts(&[(0.0, 1.0)])).is_err());
        assert!(convex_hull_1d(&pts(&[(0.0, 1.0), (0.0, 2.0)])).is_err());
    }
}
