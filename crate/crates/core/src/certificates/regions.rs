use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionName {
    /// Heavy-ball on smooth convex functions.
    HbFl,
    /// Heavy-ball on smooth strongly convex functions.
    HbSmu,
    /// Local region for twice-differentiable strongly convex functions.
    PolyakS21,
}

impl fmt::Display for RegionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionName::HbFl => "HB_FL",
            RegionName::HbSmu => "HB_SMU",
            RegionName::PolyakS21 => "POLYAK_S21",
        })
    }
}

/// Membership of `(α, β)` in a stability region.
///
/// `margin` is measured in β at fixed α: the signed distance to the binding
/// β-limit, positive inside. When α itself is out of range the margin is
/// `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub region: RegionName,
    pub alpha: f64,
    pub beta: f64,
    pub inside: bool,
    pub alpha_in_range: bool,
    pub margin: f64,
    /// Admissible β interval at this α (`None` when α is out of range).
    pub beta_range: Option<(f64, f64)>,
}

impl RegionVerdict {
    pub fn describe(&self) -> String {
        if !self.alpha_in_range {
            format!("alpha={} out of range", self.alpha)
        } else if self.inside {
            format!("inside (beta margin {:.3e})", self.margin)
        } else if self.margin == 0.0 {
            format!("on the boundary (alpha={}, beta={})", self.alpha, self.beta)
        } else {
            format!("outside (beta margin {:.3e})", self.margin)
        }
    }
}

fn check_lipschitz(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "L",
            format!("must be positive and finite, got {l}"),
        ))
    }
}

fn check_mu(l: f64, mu: f64) -> Result<()> {
    check_lipschitz(l)?;
    if mu > 0.0 && mu <= l {
        Ok(())
    } else {
        Err(invalid(
            "mu",
            format!("must satisfy 0 < mu <= L, got mu={mu}, L={l}"),
        ))
    }
}

/// Verdict for β in `[lower, upper)` (`lower` closed at 0, open above 0).
fn verdict(region: RegionName, alpha: f64, beta: f64, range: Option<(f64, f64)>) -> RegionVerdict {
    match range {
        None => RegionVerdict {
            region,
            alpha,
            beta,
            inside: false,
            alpha_in_range: false,
            margin: f64::NEG_INFINITY,
            beta_range: None,
        },
        Some((lower, upper)) => {
            let lower_ok = if lower > 0.0 {
                beta > lower
            } else {
                beta >= 0.0
            };
            let inside = lower_ok && beta < upper;
            let margin = if lower > 0.0 {
                (upper - beta).min(beta - lower)
            } else if beta < 0.0 {
                beta
            } else {
                upper - beta
            };
            RegionVerdict {
                region,
                alpha,
                beta,
                inside,
                alpha_in_range: true,
                margin,
                beta_range: Some((lower, upper)),
            }
        }
    }
}

/// `β ∈ [0, 1)`, `α ∈ (0, 2(1−β)/L)`.
pub fn region_hb_fl(l: f64, alpha: f64, beta: f64) -> Result<RegionVerdict> {
    check_lipschitz(l)?;
    let range = (alpha > 0.0 && alpha < 2.0 / l).then(|| (0.0, 1.0 - alpha * l / 2.0));
    Ok(verdict(RegionName::HbFl, alpha, beta, range))
}

/// Upper β-limit of the strongly convex Heavy-ball region at step `alpha`.
pub fn hb_smu_beta_limit(l: f64, mu: f64, alpha: f64) -> f64 {
    let m = mu * alpha / 2.0;
    let slack = (1.0 - alpha * l / 2.0).max(0.0);
    0.5 * (m + (m * m + 4.0 * slack).sqrt())
}

/// `α ∈ (0, 2/L)`, `0 ≤ β < ½(μα/2 + √(μ²α²/4 + 4(1 − αL/2)))`.
pub fn region_hb_smu(l: f64, mu: f64, alpha: f64, beta: f64) -> Result<RegionVerdict> {
    check_mu(l, mu)?;
    let range = (alpha > 0.0 && alpha < 2.0 / l).then(|| (0.0, hb_smu_beta_limit(l, mu, alpha)));
    Ok(verdict(RegionName::HbSmu, alpha, beta, range))
}

/// `β ∈ [0, 1)`, `α ∈ (0, 2(1+β)/L)`.
pub fn region_polyak(l: f64, alpha: f64, beta: f64) -> Result<RegionVerdict> {
    check_lipschitz(l)?;
    let range = (alpha > 0.0 && alpha < 4.0 / l).then(|| ((alpha * l / 2.0 - 1.0).max(0.0), 1.0));
    Ok(verdict(RegionName::PolyakS21, alpha, beta, range))
}

/// Step and momentum that are optimal for twice-differentiable strongly
/// convex functions: `α★ = 4/(√L+√μ)²`, `β★ = ((√L−√μ)/(√L+√μ))²`.
pub fn polyak_optimal_params(l: f64, mu: f64) -> Result<(f64, f64)> {
    check_mu(l, mu)?;
    let (sl, sm) = (l.sqrt(), mu.sqrt());
    let sum = sl + sm;
    let ratio = (sl - sm) / sum;
    Ok((4.0 / (sum * sum), ratio * ratio))
}
