//! Test objectives exposed as value/gradient oracles.
//!
//! Every oracle carries its class metadata: the gradient Lipschitz constant
//! `L`, the strong-convexity modulus `mu` when the function has one, and the
//! known minimizer and optimal value. Oracles are immutable and `Sync`, so a
//! single instance can be shared by runs executing on different threads.

mod counterexample;
mod finite_diff;
mod moreau;
mod quadratic;

pub use counterexample::make_counterexample;
pub use finite_diff::finite_diff_check;
pub use moreau::{make_moreau, MoreauEnvelopeSpec};
pub use quadratic::{make_quadratic, random_quadratic, QuadraticSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which closed-form function an oracle evaluates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Moreau envelope of `(1/c)‖x‖`.
    Moreau { c: f64 },
    /// One-dimensional piecewise quadratic with curvature 50, 5, 50.
    Counterexample,
    /// Diagonal quadratic `(1/2) Σ λᵢ (xᵢ − x★ᵢ)²`.
    Quadratic { spectrum: Vec<f64> },
}

/// A smooth convex function together with its class constants.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveOracle {
    kind: ObjectiveKind,
    dimension: usize,
    lipschitz: f64,
    mu: Option<f64>,
    x_star: Option<Vec<f64>>,
    f_star: Option<f64>,
    id: String,
    seed: Option<u64>,
}

impl ObjectiveOracle {
    pub(crate) fn new(
        kind: ObjectiveKind,
        dimension: usize,
        lipschitz: f64,
        mu: Option<f64>,
        x_star: Option<Vec<f64>>,
        f_star: Option<f64>,
        id: String,
    ) -> Self {
        Self {
            kind,
            dimension,
            lipschitz,
            mu,
            x_star,
            f_star,
            id,
            seed: None,
        }
    }

    pub(crate) fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Lipschitz constant of the gradient.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Strong-convexity modulus, absent for merely convex functions.
    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn x_star(&self) -> Option<&[f64]> {
        self.x_star.as_deref()
    }

    pub fn f_star(&self) -> Option<f64> {
        self.f_star
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Seed used to generate a random instance.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: len,
            });
        }
        Ok(())
    }

    /// Function value at `x`.
    ///
    /// Panics if `x` has the wrong dimension; use [`ObjectiveOracle::try_eval`]
    /// for a checked call.
    pub fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "point dimension");
        match &self.kind {
            ObjectiveKind::Moreau { c } => moreau::value(*c, x),
            ObjectiveKind::Counterexample => counterexample::value(x[0]),
            ObjectiveKind::Quadratic { spectrum } => {
                quadratic::value(spectrum, self.x_star.as_deref().unwrap_or(&[]), x)
            }
        }
    }

    /// Writes `∇f(x)` into `grad`.
    pub fn gradient_into(&self, x: &[f64], grad: &mut [f64]) {
        assert_eq!(x.len(), self.dimension, "point dimension");
        assert_eq!(grad.len(), self.dimension, "gradient dimension");
        match &self.kind {
            ObjectiveKind::Moreau { c } => moreau::gradient(*c, x, grad),
            ObjectiveKind::Counterexample => grad[0] = counterexample::gradient(x[0]),
            ObjectiveKind::Quadratic { spectrum } => {
                quadratic::gradient(spectrum, self.x_star.as_deref().unwrap_or(&[]), x, grad)
            }
        }
    }

    /// Value and gradient at `x`.
    pub fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.dimension];
        self.gradient_into(x, &mut grad);
        (self.value(x), grad)
    }

    pub fn try_eval(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_dim(x.len())?;
        Ok(self.eval(x))
    }

    /// Smallest optimality gap `f(x) − f★` that a floating-point iteration
    /// with step `step` can be expected to resolve.
    ///
    /// Near a minimizer with non-zero coordinates an update `x − step·g`
    /// rounds back to `x` once `|step·g| < ulp(x)/2`, so iterates stall
    /// within about `ulp(x★ᵢ) / (step·λᵢ)` of the optimum. The returned
    /// value is the gap at that distance (with a few ulps of headroom) and
    /// never less than `1e-300`.
    pub fn gap_resolution(&self, step: f64) -> f64 {
        const FLOOR: f64 = 1e-300;
        match (&self.kind, self.x_star.as_deref()) {
            (ObjectiveKind::Quadratic { spectrum }, Some(x_star)) => {
                let gap: f64 = spectrum
                    .iter()
                    .zip(x_star)
                    .map(|(&lambda, &xs)| {
                        let delta = ulp(xs) * (1.0 / (step * lambda) + 4.0);
                        0.5 * lambda * delta * delta
                    })
                    .sum();
                gap.max(FLOOR)
            }
            _ => FLOOR,
        }
    }
}

/// Spacing between `x` and the next representable number away from zero.
fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return 0.0;
    }
    f64::from_bits(a.to_bits() + 1) - a
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ulp_of_one_is_epsilon() {
        assert_eq!(ulp(1.0), f64::EPSILON);
        assert_eq!(ulp(-1.0), f64::EPSILON);
        assert_eq!(ulp(0.0), 0.0);
    }

    #[test]
    fn try_eval_rejects_wrong_dimension() {
        let oracle = make_moreau(MoreauEnvelopeSpec { c: 5.0, n: 3 }).unwrap();
        assert_eq!(
            oracle.try_eval(&[1.0, 2.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn resolution_is_tiny_for_origin_minimizers() {
        let oracle = make_counterexample();
        assert_eq!(oracle.gap_resolution(0.01), 1e-300);
        let q = make_quadratic(QuadraticSpec {
            spectrum: vec![1.0, 10.0],
            x_star: vec![3.0, -4.0],
        })
        .unwrap();
        let r = q.gap_resolution(0.1);
        assert!(r > 1e-300 && r < 1e-26, "{r}");
    }
}
