//! Composite-Simpson quadrature and the probability-assembly pipeline.

use crate::error::{Result, RouterError};
use crate::types::{CorrelationGrid, RoutingProbabilities};

/// Silent-renormalization tolerance: raw sums within this distance of 1 are
/// rescaled without complaint.
pub const EPS_NORM: f64 = 1e-3;
/// Hard-error tolerance: raw sums farther than this from 1 indicate an
/// under-resolved or truncated grid.
pub const EPS_NORM_FAIL: f64 = 5e-2;

/// Default number of points per axis (odd, for Simpson weights).
pub const DEFAULT_GRID_POINTS: usize = 601;

/// Composite Simpson weights for `n` points (n odd) with spacing `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson rule needs an odd point count");
    let mut w = vec![0.0; n];
    for i in 0..n {
        w[i] = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * h
            / 3.0;
    }
    w
}

/// Integrate samples on a uniform grid with Simpson weights.
pub fn simpson(samples: &[f64], h: f64) -> f64 {
    let w = simpson_weights(samples.len(), h);
    samples.iter().zip(&w).map(|(s, w)| s * w).sum()
}

/// Uniform grid of `n` points covering `[0, max]`.
pub fn uniform_axis(max: f64, n: usize) -> Vec<f64> {
    let h = max / (n - 1) as f64;
    (0..n).map(|i| i as f64 * h).collect()
}

/// 2D Simpson integral of one row-major surface.
pub fn integrate_surface(surface: &[f64], t_axis: &[f64], tau_axis: &[f64]) -> f64 {
    let nt = t_axis.len();
    let ntau = tau_axis.len();
    let ht = t_axis[1] - t_axis[0];
    let htau = tau_axis[1] - tau_axis[0];
    let wt = simpson_weights(nt, ht);
    let wtau = simpson_weights(ntau, htau);
    let mut total = 0.0;
    for i in 0..nt {
        let row = &surface[i * ntau..(i + 1) * ntau];
        let row_sum: f64 = row.iter().zip(&wtau).map(|(s, w)| s * w).sum();
        total += row_sum * wt[i];
    }
    total
}

/// Integrate the four correlation surfaces into routing probabilities.
///
/// The raw sum must land within [`EPS_NORM_FAIL`] of one; deviations within
/// [`EPS_NORM`] are renormalized silently, larger (but still tolerable)
/// deviations are renormalized as well since they stem from quadrature
/// rather than modeling error.
pub fn integrate_probabilities(grid: &CorrelationGrid) -> Result<RoutingProbabilities> {
    let [tr, rt, rr, tt] = grid.surfaces();
    let p_tr = integrate_surface(tr, &grid.t_axis, &grid.tau_axis);
    let p_rt = integrate_surface(rt, &grid.t_axis, &grid.tau_axis);
    let p_rr = integrate_surface(rr, &grid.t_axis, &grid.tau_axis);
    let p_tt = integrate_surface(tt, &grid.t_axis, &grid.tau_axis);
    let raw = RoutingProbabilities::new(p_tr, p_rt, p_rr, p_tt);
    let sum = raw.sum();
    if sum == 0.0 {
        return Err(RouterError::EmptyCorrelation);
    }
    if (sum - 1.0).abs() > EPS_NORM_FAIL {
        return Err(RouterError::Normalization {
            sum,
            tolerance: EPS_NORM_FAIL,
        });
    }
    Ok(raw.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_integrates_exponentials_accurately() {
        let n = 601;
        let t_max = 12.0;
        let axis = uniform_axis(t_max, n);
        let samples: Vec<f64> = axis.iter().map(|&t| (-2.0 * t).exp()).collect();
        let got = simpson(&samples, axis[1]);
        assert_relative_eq!(got, 0.5 * (1.0 - (-2.0 * t_max).exp()), epsilon = 1e-10);
    }

    #[test]
    fn empty_surfaces_error() {
        let grid = CorrelationGrid {
            t_axis: uniform_axis(1.0, 5),
            tau_axis: uniform_axis(1.0, 5),
            gamma_tr: vec![0.0; 25],
            gamma_rt: vec![0.0; 25],
            gamma_rr: vec![0.0; 25],
            gamma_tt: vec![0.0; 25],
        };
        assert!(matches!(
            integrate_probabilities(&grid),
            Err(RouterError::EmptyCorrelation)
        ));
    }
}
