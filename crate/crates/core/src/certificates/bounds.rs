//! `C/(T+1)` decay certificates for smooth convex objectives.

use serde::{Deserialize, Serialize};

use super::regions::region_hb_fl;
use crate::error::{invalid, Error, Result};

/// Which trace quantity a bound controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundTarget {
    /// `f(x̄_T) − f★` at the running mean.
    Cesaro,
    /// `f(x_T) − f★`.
    Iterate,
    /// `min_{k≤T} f(x_k) − f★`.
    Best,
}

/// Formula that produced a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundBranch {
    /// Constant Heavy-ball, `α ≤ (1−β)/L`.
    HbShortStep,
    /// Constant Heavy-ball, `α ≥ (1−β)/L`.
    HbLongStep,
    /// Constant Heavy-ball with the momentum minimizing the coefficient.
    HbBestBeta,
    /// Heavy-ball with the `k/(k+2)` schedule.
    HbTimeVarying,
    NesterovConvex,
    /// Plain gradient descent with `α ≤ 1/L`.
    GradientBaseline,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub beta: f64,
    pub lipschitz: f64,
    /// `‖x₀ − x★‖`
    pub r0: f64,
    pub f0_gap: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub coefficient: f64,
    pub branch: BoundBranch,
    pub target: BoundTarget,
    pub inputs: BoundInputs,
}

impl BoundCurve {
    /// `C/(T+1)`
    pub fn at(&self, t: usize) -> f64 {
        self.coefficient / (t as f64 + 1.0)
    }

    /// Same curve with the coefficient multiplied by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.coefficient *= factor;
        self
    }
}

fn check_r0(r0: f64) -> Result<()> {
    if r0 >= 0.0 && r0.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "r0",
            format!("must be finite and non-negative, got {r0}"),
        ))
    }
}

fn hb_short_step(l: f64, alpha: f64, beta: f64, r0: f64) -> f64 {
    0.5 * r0 * r0 * (l * beta / (1.0 - beta) + (1.0 - beta) / alpha)
}

fn hb_long_step(l: f64, alpha: f64, beta: f64, r0: f64) -> f64 {
    let denom = 2.0 * (1.0 - beta) - alpha * l;
    r0 * r0 * (l * beta + (1.0 - beta) * (1.0 - beta) / alpha) / (2.0 * denom)
}

/// Cesàro-average bound for constant-parameter Heavy-ball on smooth convex
/// functions. Refuses parameters outside the stability region.
pub fn bound_hb_fl(l: f64, alpha: f64, beta: f64, r0: f64) -> Result<BoundCurve> {
    let verdict = region_hb_fl(l, alpha, beta)?;
    if !verdict.inside {
        return Err(Error::OutsideRegion(verdict));
    }
    check_r0(r0)?;
    let seam = (1.0 - beta) / l;
    let (coefficient, branch) = if alpha <= seam {
        (hb_short_step(l, alpha, beta, r0), BoundBranch::HbShortStep)
    } else {
        (hb_long_step(l, alpha, beta, r0), BoundBranch::HbLongStep)
    };
    if alpha == seam {
        let other = hb_long_step(l, alpha, beta, r0);
        debug_assert!(
            (coefficient - other).abs() <= 1e-12 * coefficient.abs().max(f64::MIN_POSITIVE),
            "branches disagree at the seam: {coefficient} vs {other}"
        );
    }
    Ok(BoundCurve {
        coefficient,
        branch,
        target: BoundTarget::Cesaro,
        inputs: BoundInputs {
            alpha,
            beta,
            lipschitz: l,
            r0,
            f0_gap: None,
        },
    })
}

/// Coefficients of both branches at the seam `α = (1−β)/L`.
pub fn seam_coefficients(l: f64, beta: f64, r0: f64) -> (f64, f64) {
    let alpha = (1.0 - beta) / l;
    (
        hb_short_step(l, alpha, beta, r0),
        hb_long_step(l, alpha, beta, r0),
    )
}

/// Momentum `β★ = 1 − √(ᾱL)` and the resulting bound on the best value
/// among the first `T+1` iterates.
pub fn bound_hb_best_beta(alpha_bar: f64, l: f64, r0: f64) -> Result<(f64, BoundCurve)> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(invalid(
            "L",
            format!("must be positive and finite, got {l}"),
        ));
    }
    if !(alpha_bar > 0.0 && alpha_bar <= 1.0 / l) {
        return Err(invalid(
            "alpha_bar",
            format!("must lie in (0, 1/L], got {alpha_bar}"),
        ));
    }
    check_r0(r0)?;
    let s = (alpha_bar * l).sqrt();
    let beta_star = 1.0 - s;
    let coefficient = 0.5 * (2.0 * s - alpha_bar * l) / alpha_bar * r0 * r0;
    Ok((
        beta_star,
        BoundCurve {
            coefficient,
            branch: BoundBranch::HbBestBeta,
            target: BoundTarget::Best,
            inputs: BoundInputs {
                alpha: alpha_bar,
                beta: beta_star,
                lipschitz: l,
                r0,
                f0_gap: None,
            },
        },
    ))
}

/// Gradient descent with `α ≤ 1/L`: `f(x_T) − f★ ≤ ‖x₀−x★‖²/(2α(T+1))`.
pub fn bound_gd(l: f64, alpha: f64, r0: f64) -> Result<BoundCurve> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(invalid(
            "L",
            format!("must be positive and finite, got {l}"),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0 / l) {
        return Err(invalid(
            "alpha",
            format!("must lie in (0, 1/L], got {alpha}"),
        ));
    }
    check_r0(r0)?;
    Ok(BoundCurve {
        coefficient: r0 * r0 / (2.0 * alpha),
        branch: BoundBranch::GradientBaseline,
        target: BoundTarget::Iterate,
        inputs: BoundInputs {
            alpha,
            beta: 0.0,
            lipschitz: l,
            r0,
            f0_gap: None,
        },
    })
}

/// Last-iterate bound `‖x₀−x★‖²/(2α₀(T+1))` for the time-varying schedule.
/// The caller is responsible for `α₀ ≤ 1/L`.
pub fn bound_hb_tv(alpha0: f64, r0: f64) -> Result<BoundCurve> {
    if !(alpha0 > 0.0) || !alpha0.is_finite() {
        return Err(invalid("alpha0", format!("must be positive, got {alpha0}")));
    }
    check_r0(r0)?;
    Ok(BoundCurve {
        coefficient: r0 * r0 / (2.0 * alpha0),
        branch: BoundBranch::HbTimeVarying,
        target: BoundTarget::Iterate,
        inputs: BoundInputs {
            alpha: alpha0,
            beta: f64::NAN,
            lipschitz: f64::NAN,
            r0,
            f0_gap: None,
        },
    })
}

/// Cesàro bound `β/(1−β)·(f(x₀)−f★) + L(1−β)/2·‖x₀−x★‖²` over `T+1` for
/// Nesterov's constant-step iteration.
pub fn bound_nesterov_fl(l: f64, beta: f64, f0_gap: f64, r0: f64) -> Result<BoundCurve> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(invalid(
            "L",
            format!("must be positive and finite, got {l}"),
        ));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(invalid("beta", format!("must lie in [0, 1), got {beta}")));
    }
    if !(f0_gap >= 0.0) || !f0_gap.is_finite() {
        return Err(invalid(
            "f0_gap",
            format!("must be finite and non-negative, got {f0_gap}"),
        ));
    }
    check_r0(r0)?;
    let coefficient = beta / (1.0 - beta) * f0_gap + l * (1.0 - beta) / 2.0 * r0 * r0;
    Ok(BoundCurve {
        coefficient,
        branch: BoundBranch::NesterovConvex,
        target: BoundTarget::Cesaro,
        inputs: BoundInputs {
            alpha: 1.0 / l,
            beta,
            lipschitz: l,
            r0,
            f0_gap: Some(f0_gap),
        },
    })
}
