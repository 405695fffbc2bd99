//! Gradient descent, Heavy-ball (constant and time-varying parameters) and
//! Nesterov's constant-step iteration, plus the run loop that records
//! per-iteration optimality gaps.
//!
//! Conventions for the multi-step schemes: the Heavy-ball history starts at
//! `x₋₁ = x₀`, so its first step is a plain gradient step, and Nesterov's
//! auxiliary sequence starts at `y₀ = x₀`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::objectives::{norm, ObjectiveOracle};

/// Gaps above this are treated as divergence.
pub const DIVERGENCE_GAP: f64 = 1e12;

/// Iteration scheme and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodConfig {
    GradientDescent {
        alpha: f64,
    },
    HeavyBall {
        alpha: f64,
        beta: f64,
    },
    /// Heavy-ball with `β_k = k/(k+2)` and `α_k = α₀/(k+2)`.
    HeavyBallTv {
        alpha0: f64,
    },
    /// Nesterov's iteration with step `1/L` taken from the oracle.
    Nesterov {
        beta: f64,
    },
}

impl MethodConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        let non_negative = |name, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(
                    name,
                    format!("must be non-negative and finite, got {v}"),
                ))
            }
        };
        match *self {
            MethodConfig::GradientDescent { alpha } => positive("alpha", alpha),
            MethodConfig::HeavyBall { alpha, beta } => {
                positive("alpha", alpha)?;
                non_negative("beta", beta)
            }
            MethodConfig::HeavyBallTv { alpha0 } => positive("alpha0", alpha0),
            MethodConfig::Nesterov { beta } => non_negative("beta", beta),
        }
    }

    /// Short label, also used as the CSV file stem.
    pub fn label(&self) -> String {
        match *self {
            MethodConfig::GradientDescent { alpha } => format!("gd_alpha{alpha}"),
            MethodConfig::HeavyBall { alpha, beta } => format!("hb_alpha{alpha}_beta{beta}"),
            MethodConfig::HeavyBallTv { alpha0 } => format!("hbtv_alpha0{alpha0}"),
            MethodConfig::Nesterov { beta } => format!("nesterov_beta{beta}"),
        }
    }

    /// `(α, β)` applied on the step from `x_k` to `x_{k+1}`.
    pub fn params_at(&self, k: usize, lipschitz: f64) -> (f64, f64) {
        match *self {
            MethodConfig::GradientDescent { alpha } => (alpha, 0.0),
            MethodConfig::HeavyBall { alpha, beta } => (alpha, beta),
            MethodConfig::HeavyBallTv { alpha0 } => tv_schedule(k, alpha0),
            MethodConfig::Nesterov { beta } => (1.0 / lipschitz, beta),
        }
    }
}

/// `(α_k, β_k) = (α₀/(k+2), k/(k+2))`.
pub fn tv_schedule(k: usize, alpha0: f64) -> (f64, f64) {
    let d = k as f64 + 2.0;
    (alpha0 / d, k as f64 / d)
}

/// Iteration budget and recording options.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub x0: Vec<f64>,
    pub iterations: usize,
    #[serde(default = "one")]
    pub record_stride: usize,
    #[serde(default)]
    pub store_iterates: bool,
}

fn one() -> usize {
    1
}

impl RunSpec {
    pub fn new(x0: Vec<f64>, iterations: usize) -> Self {
        Self {
            x0,
            iterations,
            record_stride: 1,
            store_iterates: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(invalid("iterations", "must be at least 1"));
        }
        if self.record_stride == 0 || self.record_stride > self.iterations {
            return Err(invalid(
                "record_stride",
                format!(
                    "must be in 1..={}, got {}",
                    self.iterations, self.record_stride
                ),
            ));
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(invalid("x0", "entries must be finite"));
        }
        Ok(())
    }
}

/// One recorded iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    /// `f(x_k) − f★`
    pub f_gap: f64,
    /// `f(x̄_k) − f★` at the running mean of `x_0..x_k`.
    pub cesaro_gap: f64,
    /// `min_{j≤k} f(x_j) − f★`
    pub best_gap: f64,
    pub grad_norm: f64,
    /// `‖x_k − x★‖`
    pub dist: f64,
    pub alpha_k: f64,
    pub beta_k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub method: MethodConfig,
    pub method_label: String,
    pub oracle_id: String,
    pub seed: Option<u64>,
    pub records: Vec<TraceRecord>,
    /// Iteration at which a non-finite number or a gap above
    /// [`DIVERGENCE_GAP`] appeared; the trace stops before it.
    pub diverged_at: Option<usize>,
    /// Iterates `x_0..x_T`, kept only when requested.
    pub iterates: Option<Vec<Vec<f64>>>,
    /// Running mean at the last completed iteration.
    pub final_mean: Vec<f64>,
}

impl Trace {
    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// Record for iteration `k`, if it was recorded.
    pub fn at(&self, k: usize) -> Option<&TraceRecord> {
        self.records
            .binary_search_by_key(&k, |r| r.k)
            .ok()
            .map(|i| &self.records[i])
    }
}

pub fn step_gd(oracle: &ObjectiveOracle, x: &[f64], alpha: f64) -> Vec<f64> {
    let (_, g) = oracle.eval(x);
    x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect()
}

/// `x_k − α∇f(x_k) + β(x_k − x_{k−1})`
pub fn step_hb(
    oracle: &ObjectiveOracle,
    x: &[f64],
    x_prev: &[f64],
    alpha: f64,
    beta: f64,
) -> Vec<f64> {
    let (_, g) = oracle.eval(x);
    let mut out = vec![0.0; x.len()];
    hb_update(x, x_prev, &g, alpha, beta, &mut out);
    out
}

pub fn step_hb_tv(
    oracle: &ObjectiveOracle,
    x: &[f64],
    x_prev: &[f64],
    k: usize,
    alpha0: f64,
) -> Vec<f64> {
    let (alpha, beta) = tv_schedule(k, alpha0);
    step_hb(oracle, x, x_prev, alpha, beta)
}

/// One Nesterov step, returning `(x_{k+1}, y_{k+1})`.
pub fn step_nesterov(
    oracle: &ObjectiveOracle,
    x: &[f64],
    y: &[f64],
    beta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = oracle.lipschitz();
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::MissingMetadata {
            oracle: oracle.id().to_string(),
            what: "a finite positive Lipschitz constant",
        });
    }
    let (_, g) = oracle.eval(x);
    let mut x_next = vec![0.0; x.len()];
    let mut y_next = vec![0.0; x.len()];
    nesterov_update(x, y, &g, 1.0 / l, beta, &mut x_next, &mut y_next);
    Ok((x_next, y_next))
}

fn hb_update(x: &[f64], x_prev: &[f64], g: &[f64], alpha: f64, beta: f64, out: &mut [f64]) {
    for i in 0..x.len() {
        out[i] = x[i] - alpha * g[i] + beta * (x[i] - x_prev[i]);
    }
}

fn nesterov_update(
    x: &[f64],
    y: &[f64],
    g: &[f64],
    step: f64,
    beta: f64,
    x_next: &mut [f64],
    y_next: &mut [f64],
) {
    for i in 0..x.len() {
        let yi = x[i] - step * g[i];
        x_next[i] = yi + beta * (yi - y[i]);
        y_next[i] = yi;
    }
}

/// Runs `method` from `spec.x0` for `spec.iterations` steps.
///
/// The oracle must know `f★` and `x★`. Divergence is not an error: the
/// returned trace is truncated and `diverged_at` is set.
pub fn run(oracle: &ObjectiveOracle, method: &MethodConfig, spec: &RunSpec) -> Result<Trace> {
    method.validate()?;
    spec.validate()?;
    let n = oracle.dimension();
    if spec.x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spec.x0.len(),
        });
    }
    let missing = |what| Error::MissingMetadata {
        oracle: oracle.id().to_string(),
        what,
    };
    let f_star = oracle.f_star().ok_or_else(|| missing("f_star"))?;
    let x_star = oracle.x_star().ok_or_else(|| missing("x_star"))?.to_vec();
    let lipschitz = oracle.lipschitz();
    if matches!(method, MethodConfig::Nesterov { .. })
        && !(lipschitz > 0.0 && lipschitz.is_finite())
    {
        return Err(missing("a finite positive Lipschitz constant"));
    }

    let mut x = spec.x0.clone();
    let mut x_prev = spec.x0.clone();
    // Nesterov's y_k; unused by the other schemes.
    let mut y = spec.x0.clone();
    let mut x_next = vec![0.0; n];
    let mut y_next = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut mean = vec![0.0; n];

    let mut records = Vec::with_capacity(spec.iterations / spec.record_stride + 2);
    let mut iterates = spec
        .store_iterates
        .then(|| Vec::with_capacity(spec.iterations + 1));
    let mut best = f64::INFINITY;
    let mut diverged_at = None;

    for k in 0..=spec.iterations {
        let inv = 1.0 / (k as f64 + 1.0);
        for (m, xi) in mean.iter_mut().zip(&x) {
            *m += (xi - *m) * inv;
        }

        let f_gap = oracle.value(&x) - f_star;
        oracle.gradient_into(&x, &mut grad);
        let grad_norm = norm(&grad);
        let cesaro_gap = oracle.value(&mean) - f_star;
        if !f_gap.is_finite()
            || !grad_norm.is_finite()
            || !cesaro_gap.is_finite()
            || f_gap > DIVERGENCE_GAP
        {
            diverged_at = Some(k);
            break;
        }
        best = best.min(f_gap);
        if let Some(store) = iterates.as_mut() {
            store.push(x.clone());
        }

        let (alpha, beta) = method.params_at(k, lipschitz);
        if k % spec.record_stride == 0 || k == spec.iterations {
            let dist = x
                .iter()
                .zip(&x_star)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            records.push(TraceRecord {
                k,
                f_gap,
                cesaro_gap,
                best_gap: best,
                grad_norm,
                dist,
                alpha_k: alpha,
                beta_k: beta,
            });
        }
        if k == spec.iterations {
            break;
        }

        match method {
            MethodConfig::Nesterov { beta } => {
                nesterov_update(&x, &y, &grad, alpha, *beta, &mut x_next, &mut y_next);
                std::mem::swap(&mut y, &mut y_next);
            }
            _ => hb_update(&x, &x_prev, &grad, alpha, beta, &mut x_next),
        }
        std::mem::swap(&mut x_prev, &mut x);
        std::mem::swap(&mut x, &mut x_next);
    }

    Ok(Trace {
        method: *method,
        method_label: method.label(),
        oracle_id: oracle.id().to_string(),
        seed: oracle.seed(),
        records,
        diverged_at,
        iterates,
        final_mean: mean,
    })
}
