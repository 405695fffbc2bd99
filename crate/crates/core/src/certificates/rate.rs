//! Linear-rate certificate for constant-parameter Heavy-ball on smooth
//! strongly convex functions.
//!
//! With `A_k = f(x_k) − f★` and `B_k = ‖x_k − x_{k−1}‖²` the iteration
//! satisfies the coupled recurrence of [`super::lemma`] for every balancing
//! parameter `θ` with `(1−θ)/L ≤ α < 2(1−θ)/L`. The constants depend on
//! `θ`; this module searches `θ` for the smallest factor `q`.

use super::lemma::{lemma1_factor, Lemma1Params, LinearRateCertificate};
use super::regions::region_hb_smu;
use crate::error::{Error, Result};

pub const DEFAULT_THETA_GRID: usize = 512;

/// Recurrence constants `(a₁, a₂, b, c)` for balancing parameter `theta`.
pub fn identify(l: f64, mu: f64, alpha: f64, beta: f64, theta: f64) -> (f64, f64, f64, f64) {
    let lam = 1.0 - theta;
    let ratio = alpha * l / lam;
    let a2 = beta * (ratio - 1.0);
    let a1 = 1.0 - 2.0 * alpha * mu * (1.0 - ratio / 2.0) - a2;
    let b = l * theta / (2.0 * lam);
    let c = 0.5 * beta * (mu * (1.0 - ratio) + l * beta / lam);
    (a1, a2, b, c)
}

/// Admissible `θ` interval `(lo, hi)` and whether `lo` itself is allowed.
pub fn theta_interval(l: f64, alpha: f64) -> (f64, f64, bool) {
    let al = alpha * l;
    let lo = 1.0 - al.min(1.0);
    (lo, 1.0 - al / 2.0, al < 1.0)
}

fn theta_grid(lo: f64, hi: f64, lo_closed: bool, points: usize) -> Vec<f64> {
    let width = hi - lo;
    let per_end = points / 4;
    let uniform = points - 2 * per_end;
    let mut grid = Vec::with_capacity(points + 1);
    if lo_closed {
        grid.push(lo);
    }
    for i in 1..=uniform {
        grid.push(lo + width * i as f64 / (uniform + 1) as f64);
    }
    // offsets from 10^-1 down to 10^-13 of the interval width
    for i in 0..per_end {
        let t = 1.0 + 12.0 * i as f64 / (per_end.max(2) - 1) as f64;
        let off = width * 10f64.powf(-t);
        grid.push(lo + off);
        grid.push(hi - off);
    }
    grid.retain(|&t| t > 0.0 && t < 1.0 && t >= lo && t < hi && (lo_closed || t > lo));
    grid
}

/// Lemma constants at `theta` with `A₀ = 1`, `B₀ = 0`, if admissible.
pub fn certificate_at(
    l: f64,
    mu: f64,
    alpha: f64,
    beta: f64,
    theta: f64,
) -> Option<LinearRateCertificate> {
    let (a1, a2, b, c) = identify(l, mu, alpha, beta, theta);
    let params = Lemma1Params {
        a1,
        a2,
        b,
        c,
        a0: 1.0,
        b0: 0.0,
    };
    lemma1_factor(&params)
        .ok()
        .map(|cert| LinearRateCertificate {
            theta: Some(theta),
            ..cert
        })
}

/// Best certificate over a `points`-sized θ grid.
///
/// The coefficient is for `A₀ = 1` and `B₀ = ‖x₀ − x₋₁‖² = 0`; rebind with
/// [`LinearRateCertificate::with_initial`].
///
/// When `α ≤ 1/L` and `β = √((1−αμ)(1−αL))`, `θ = 1 − αL` is used directly
/// and gives `q = 1 − αμ`.
pub fn rate_smu_with_grid(
    l: f64,
    mu: f64,
    alpha: f64,
    beta: f64,
    points: usize,
) -> Result<LinearRateCertificate> {
    let verdict = region_hb_smu(l, mu, alpha, beta)?;
    if !verdict.inside {
        return Err(Error::OutsideRegion(verdict));
    }
    if alpha * l <= 1.0 {
        let special = ((1.0 - alpha * mu) * (1.0 - alpha * l)).sqrt();
        if (beta - special).abs() <= 1e-12 {
            return Ok(special_case(l, mu, alpha, beta));
        }
    }

    let (lo, hi, lo_closed) = theta_interval(l, alpha);
    theta_grid(lo, hi, lo_closed, points)
        .into_iter()
        .filter_map(|theta| certificate_at(l, mu, alpha, beta, theta))
        .min_by(|x, y| {
            x.q.total_cmp(&y.q)
                .then_with(|| x.coefficient.total_cmp(&y.coefficient))
        })
        .ok_or(Error::NoAdmissibleTheta { alpha, beta })
}

pub fn rate_smu(l: f64, mu: f64, alpha: f64, beta: f64) -> Result<LinearRateCertificate> {
    rate_smu_with_grid(l, mu, alpha, beta, DEFAULT_THETA_GRID)
}

fn special_case(l: f64, mu: f64, alpha: f64, beta: f64) -> LinearRateCertificate {
    let theta = 1.0 - alpha * l;
    if let Some(cert) = certificate_at(l, mu, alpha, beta, theta) {
        return cert;
    }
    // α = 1/L: θ = 0 leaves b = c = 0 and only A_{k+1} ≤ a₁A_k remains.
    let (a1, a2, b, c) = identify(l, mu, alpha, beta, theta);
    let q = 0.5 * (a1 + (a1 * a1 + 4.0 * a2).sqrt());
    LinearRateCertificate {
        q,
        coefficient: q - a1 + 1.0,
        a0_weight: q - a1 + 1.0,
        b0_weight: b,
        theta: Some(theta),
        params: Lemma1Params {
            a1,
            a2,
            b,
            c,
            a0: 1.0,
            b0: 0.0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::regions::hb_smu_beta_limit;

    #[test]
    fn special_factor() {
        for &(l, mu) in &[(1.0f64, 1.0f64), (10.0, 1.0), (50.0, 5.0), (100.0, 1.0)] {
            for &frac in &[0.2, 0.5, 1.0] {
                let alpha = frac / l;
                let beta = ((1.0 - alpha * mu) * (1.0 - alpha * l)).sqrt();
                let cert = rate_smu(l, mu, alpha, beta).unwrap();
                assert!(
                    (cert.q - (1.0 - alpha * mu)).abs() < 1e-12,
                    "L={l} mu={mu} a={alpha}: {}",
                    cert.q
                );
                assert!((cert.theta.unwrap() - (1.0 - alpha * l)).abs() < 1e-15);
                assert!((cert.coefficient - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradient_step_is_within_half_gap() {
        for &(l, mu) in &[(2.0, 1.0), (10.0, 1.0), (50.0, 5.0)] {
            let cert = rate_smu(l, mu, 1.0 / l, 0.0).unwrap();
            assert!(cert.q <= 1.0 - mu / (2.0 * l), "q={}", cert.q);
            // the θ grid alone, without the closed-form shortcut
            let (lo, hi, closed) = theta_interval(l, 1.0 / l);
            let best = theta_grid(lo, hi, closed, DEFAULT_THETA_GRID)
                .into_iter()
                .filter_map(|t| certificate_at(l, mu, 1.0 / l, 0.0, t))
                .map(|c| c.q)
                .fold(f64::INFINITY, f64::min);
            assert!(best <= 1.0 - mu / (2.0 * l) + 1e-9, "grid q={best}");
        }
    }

    #[test]
    fn counterexample_anchor() {
        let cert = rate_smu(50.0, 5.0, 1.9 / 50.0, 0.05).unwrap();
        assert!(cert.q < 1.0 && cert.q > 0.0);
        // regression anchor for the default grid
        assert!((cert.q - ANCHOR_Q).abs() < 1e-9, "q = {:.12}", cert.q);
    }

    const ANCHOR_Q: f64 = 0.981832657584;

    #[test]
    fn inside_region_always_certified() {
        for &(l, mu) in &[(2.0, 1.0), (10.0, 1.0), (100.0, 1.0), (50.0, 5.0)] {
            for i in 1..40 {
                let alpha = 2.0 / l * i as f64 / 40.0;
                let limit = hb_smu_beta_limit(l, mu, alpha);
                for j in 0..20 {
                    let beta = limit * j as f64 / 20.0;
                    let cert = rate_smu(l, mu, alpha, beta)
                        .unwrap_or_else(|e| panic!("L={l} mu={mu} a={alpha} b={beta}: {e}"));
                    assert!((0.0..1.0).contains(&cert.q));
                }
            }
        }
    }

    #[test]
    fn refuses_outside() {
        assert!(matches!(
            rate_smu(1.0, 0.5, 2.5, 0.0),
            Err(Error::OutsideRegion(_))
        ));
        assert!(matches!(
            rate_smu(1.0, 0.5, 1.0, 0.99),
            Err(Error::OutsideRegion(_))
        ));
    }

    #[test]
    fn identification_matches_special_values() {
        let (l, mu, alpha): (f64, f64, f64) = (10.0, 1.0, 0.05);
        let beta = ((1.0 - alpha * mu) * (1.0 - alpha * l)).sqrt();
        let (a1, a2, b, c) = identify(l, mu, alpha, beta, 1.0 - alpha * l);
        assert!((a1 - (1.0 - alpha * mu)).abs() < 1e-15);
        assert!(a2.abs() < 1e-15);
        assert!((c / b - (1.0 - alpha * mu)).abs() < 1e-14);
    }
}
