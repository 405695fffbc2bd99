//! Linear rate for coupled recurrences
//! `A_{k+1} + b·B_{k+1} ≤ a₁·A_k + a₂·A_{k−1} + c·B_k` with `A₋₁ = A₀`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Params {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
    pub c: f64,
    pub a0: f64,
    pub b0: f64,
}

/// `A_k ≤ q^k · coefficient`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearRateCertificate {
    pub q: f64,
    pub coefficient: f64,
    /// Multiplier of `A₀` in the coefficient, `q − a₁ + 1`.
    pub a0_weight: f64,
    /// Multiplier of `B₀` in the coefficient.
    pub b0_weight: f64,
    /// Balancing parameter when the constants came from a Heavy-ball
    /// identification.
    pub theta: Option<f64>,
    pub params: Lemma1Params,
}

impl LinearRateCertificate {
    pub fn bound(&self, k: usize) -> f64 {
        let k = i32::try_from(k).unwrap_or(i32::MAX);
        self.q.powi(k) * self.coefficient
    }

    /// The same rate with the coefficient re-bound to other initial values.
    pub fn with_initial(mut self, a0: f64, b0: f64) -> Self {
        self.params.a0 = a0;
        self.params.b0 = b0;
        self.coefficient = self.a0_weight * a0 + self.b0_weight * b0;
        self
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.coefficient *= factor;
        self
    }
}

fn check(p: &Lemma1Params) -> Result<()> {
    let fields = [p.a1, p.a2, p.b, p.c, p.a0, p.b0];
    if fields.iter().any(|v| !v.is_finite()) {
        return Err(invalid("lemma params", "all constants must be finite"));
    }
    let fail = |msg: String| Err(Error::LemmaInapplicable(msg));
    if p.a1 < 0.0 {
        return fail(format!("a1 >= 0 violated (a1={})", p.a1));
    }
    if p.a2 < 0.0 {
        return fail(format!("a2 >= 0 violated (a2={})", p.a2));
    }
    if !(p.b > 0.0) {
        return fail(format!("b > 0 violated (b={})", p.b));
    }
    if !(p.a1 + p.a2 < 1.0) {
        return fail(format!("a1 + a2 < 1 violated (a1+a2={})", p.a1 + p.a2));
    }
    if !(p.c < p.b) {
        return fail(format!("c < b violated (c={}, b={})", p.c, p.b));
    }
    if p.a0 < 0.0 || p.b0 < 0.0 {
        return fail(format!(
            "initial values must be non-negative (A0={}, B0={})",
            p.a0, p.b0
        ));
    }
    Ok(())
}

/// `q = max{c/b, (a₁ + √(a₁² + 4a₂))/2}` and
/// coefficient `(q − a₁ + 1)·A₀ + b·B₀`.
///
/// The `B₀` weight is `b`: the potential `A_t + γA_{t−1} + b·B_t` contracts
/// by `q` each step, and its initial value is `(1+γ)A₀ + b·B₀`.
pub fn lemma1_factor(p: &Lemma1Params) -> Result<LinearRateCertificate> {
    check(p)?;
    let root = 0.5 * (p.a1 + (p.a1 * p.a1 + 4.0 * p.a2).sqrt());
    let q = (p.c / p.b).max(root);
    let a0_weight = q - p.a1 + 1.0;
    let b0_weight = p.b;
    Ok(LinearRateCertificate {
        q,
        coefficient: a0_weight * p.a0 + b0_weight * p.b0,
        a0_weight,
        b0_weight,
        theta: None,
        params: *p,
    })
}

/// Sequences `A_0..A_K`, `B_0..B_K` that meet the recurrence with equality.
///
/// The right-hand side `R = a₁A_k + a₂A_{k−1} + cB_k` is split so that
/// `A_{k+1} = s·R` and `b·B_{k+1} = (1−s)·R`. A negative `R` admits no
/// non-negative equality split; both terms are then set to zero.
pub fn lemma1_recurrence_oracle(
    p: &Lemma1Params,
    k_max: usize,
    split: f64,
) -> (Vec<f64>, Vec<f64>) {
    assert!((0.0..=1.0).contains(&split), "split must lie in [0, 1]");
    assert!(p.b > 0.0, "b must be positive");
    let mut a = Vec::with_capacity(k_max + 1);
    let mut b = Vec::with_capacity(k_max + 1);
    a.push(p.a0);
    b.push(p.b0);
    let mut a_prev = p.a0;
    for k in 0..k_max {
        let rhs = (p.a1 * a[k] + p.a2 * a_prev + p.c * b[k]).max(0.0);
        a_prev = a[k];
        a.push(split * rhs);
        b.push((1.0 - split) * rhs / p.b);
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a1: f64, a2: f64, b: f64, c: f64, a0: f64, b0: f64) -> Lemma1Params {
        Lemma1Params {
            a1,
            a2,
            b,
            c,
            a0,
            b0,
        }
    }

    #[test]
    fn one_term_recursion() {
        let cert = lemma1_factor(&params(0.5, 0.0, 1.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(cert.q, 0.5);
        assert_eq!(cert.coefficient, 1.0);
        let (a, _) = lemma1_recurrence_oracle(&cert.params, 30, 1.0);
        for (k, v) in a.iter().enumerate() {
            assert_eq!(*v, 0.5f64.powi(k as i32));
            assert!(*v <= cert.bound(k));
        }
    }

    #[test]
    fn second_order_root() {
        let cert = lemma1_factor(&params(0.0, 0.25, 1.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(cert.q, 0.5);
    }

    #[test]
    fn coupling_dominates() {
        let cert = lemma1_factor(&params(0.1, 0.0, 1.0, 0.8, 1.0, 0.0)).unwrap();
        assert_eq!(cert.q, 0.8);
    }

    #[test]
    fn zero_start_stays_zero() {
        let p = params(0.3, 0.2, 2.0, 1.0, 0.0, 0.0);
        for &s in &[0.0, 0.5, 1.0] {
            let (a, b) = lemma1_recurrence_oracle(&p, 50, s);
            assert!(a.iter().chain(&b).all(|v| *v == 0.0));
        }
    }

    #[test]
    fn initial_b_needs_weight_b() {
        // A0 = 0, B0 = 1: the all-to-A split gives A1 = c·B0 = 0.5. With the
        // B0 weight equal to c the bound would be q·c·B0 = 0.25.
        let p = params(0.5, 0.0, 1.0, 0.5, 0.0, 1.0);
        let cert = lemma1_factor(&p).unwrap();
        let (a, _) = lemma1_recurrence_oracle(&p, 1, 1.0);
        assert_eq!(a[1], 0.5);
        assert!(a[1] > cert.q * p.c * p.b0);
        assert!(a[1] <= cert.bound(1));
    }

    #[test]
    fn names_the_failing_inequality() {
        let err = |p| match lemma1_factor(&p) {
            Err(Error::LemmaInapplicable(msg)) => msg,
            other => panic!("expected inapplicability, got {other:?}"),
        };
        assert!(err(params(0.6, 0.4, 1.0, 0.0, 1.0, 0.0)).contains("a1 + a2 < 1"));
        assert!(err(params(0.1, 0.1, 1.0, 1.0, 1.0, 0.0)).contains("c < b"));
        assert!(err(params(0.1, 0.1, 0.0, -1.0, 1.0, 0.0)).contains("b > 0"));
        assert!(err(params(-0.1, 0.1, 1.0, 0.0, 1.0, 0.0)).contains("a1 >= 0"));
    }

    #[test]
    fn rebinding_initial_values() {
        let cert = lemma1_factor(&params(0.2, 0.3, 2.0, 1.0, 1.0, 0.0)).unwrap();
        let moved = cert.with_initial(3.0, 0.5);
        assert!((moved.coefficient - (cert.a0_weight * 3.0 + 2.0 * 0.5)).abs() < 1e-15);
        assert_eq!(moved.q, cert.q);
    }
}
