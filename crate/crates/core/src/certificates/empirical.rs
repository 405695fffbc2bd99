use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::Trace;

/// Gaps at or below this are excluded from rate fits.
pub const RATE_FIT_FLOOR: f64 = 1e-14;

/// Per-iteration contraction factor fitted to a trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRate {
    pub q_hat: f64,
    /// Root-mean-square residual of the fit in `ln f_gap`.
    pub residual: f64,
    pub points: usize,
    /// Set when the trace reached the floor and later records were dropped.
    pub floored: bool,
}

/// Least-squares slope of `ln(f_gap)` against `k` over the last
/// `tail_fraction` of the records above [`RATE_FIT_FLOOR`], exponentiated.
pub fn empirical_rate(trace: &Trace, tail_fraction: f64) -> Result<EmpiricalRate> {
    let pts: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (r.k as f64, r.f_gap))
        .collect();
    fit_rate(&pts, tail_fraction)
}

/// Same fit on raw `(k, gap)` pairs.
pub fn fit_rate(points: &[(f64, f64)], tail_fraction: f64) -> Result<EmpiricalRate> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::RateEstimate(format!(
            "tail fraction {tail_fraction} not in (0, 1)"
        )));
    }
    let above = points
        .iter()
        .position(|&(_, g)| !(g > RATE_FIT_FLOOR))
        .unwrap_or(points.len());
    let usable = &points[..above];
    let take = ((usable.len() as f64 * tail_fraction).ceil() as usize).min(usable.len());
    if take < 2 {
        return Err(Error::RateEstimate(format!(
            "only {take} record(s) above {RATE_FIT_FLOOR:e} in the tail"
        )));
    }
    let tail = &usable[usable.len() - take..];
    let n = tail.len() as f64;
    let mean_k = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = tail.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(k, g) in tail {
        sxy += (k - mean_k) * (g.ln() - mean_y);
        sxx += (k - mean_k) * (k - mean_k);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_k;
    let sse: f64 = tail
        .iter()
        .map(|&(k, g)| {
            let r = g.ln() - (intercept + slope * k);
            r * r
        })
        .sum();
    Ok(EmpiricalRate {
        q_hat: slope.exp(),
        residual: (sse / n).sqrt(),
        points: tail.len(),
        floored: above < points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{make_quadratic, QuadraticSpec};
    use crate::solvers::{run, MethodConfig, RunSpec};

    #[test]
    fn gradient_descent_on_unit_quadratic() {
        let o = make_quadratic(QuadraticSpec {
            spectrum: vec![1.0],
            x_star: vec![0.0],
        })
        .unwrap();
        let t = run(
            &o,
            &MethodConfig::GradientDescent { alpha: 0.5 },
            &RunSpec::new(vec![3.0], 200),
        )
        .unwrap();
        let r = empirical_rate(&t, 0.5).unwrap();
        assert!((0.2499..=0.2501).contains(&r.q_hat), "{}", r.q_hat);
        assert!(r.floored);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn constant_gap_has_unit_rate() {
        let pts: Vec<_> = (0..20).map(|k| (k as f64, 0.7)).collect();
        let r = fit_rate(&pts, 0.5).unwrap();
        assert_eq!(r.q_hat, 1.0);
        assert!(!r.floored);
    }

    #[test]
    fn exact_geometric() {
        let pts: Vec<_> = (0..60).map(|k| (k as f64, 3.0 * 0.8f64.powi(k))).collect();
        let r = fit_rate(&pts, 0.3).unwrap();
        assert!((r.q_hat - 0.8).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let pts = [(0.0, 1.0), (1.0, 0.0), (2.0, 0.0)];
        assert!(fit_rate(&pts, 0.5).is_err());
        assert!(fit_rate(&pts, 1.0).is_err());
    }
}
