use serde::{Deserialize, Serialize};

use super::{norm, ObjectiveKind, ObjectiveOracle};
use crate::error::{invalid, Result};

/// Parameters of the Moreau envelope of `(1/c)‖x‖` on `R^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoreauEnvelopeSpec {
    pub c: f64,
    pub n: usize,
}

/// Builds the Moreau envelope oracle.
///
/// The function is `(1/2)‖x‖²` inside the ball `‖x‖ ≤ 1/c` and
/// `‖x‖/c − 1/(2c²)` outside it. It is convex with a 1-Lipschitz gradient
/// but not strongly convex, and it is minimized at the origin.
pub fn make_moreau(spec: MoreauEnvelopeSpec) -> Result<ObjectiveOracle> {
    if !(spec.c > 0.0) || !spec.c.is_finite() {
        return Err(invalid(
            "c",
            format!("must be positive and finite, got {}", spec.c),
        ));
    }
    if spec.n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    Ok(ObjectiveOracle::new(
        ObjectiveKind::Moreau { c: spec.c },
        spec.n,
        1.0,
        None,
        Some(vec![0.0; spec.n]),
        Some(0.0),
        format!("moreau(c={},n={})", spec.c, spec.n),
    ))
}

pub(super) fn value(c: f64, x: &[f64]) -> f64 {
    let r = norm(x);
    if r >= 1.0 / c {
        r / c - 1.0 / (2.0 * c * c)
    } else {
        0.5 * r * r
    }
}

pub(super) fn gradient(c: f64, x: &[f64], grad: &mut [f64]) {
    let r = norm(x);
    let scale = if r <= 1.0 / c { 1.0 } else { 1.0 / (c * r) };
    for (g, xi) in grad.iter_mut().zip(x) {
        *g = scale * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn oracle(c: f64, n: usize) -> ObjectiveOracle {
        make_moreau(MoreauEnvelopeSpec { c, n }).unwrap()
    }

    #[test]
    fn minimizer() {
        let (v, g) = oracle(5.0, 2).eval(&[0.0, 0.0]);
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn linear_branch_by_hand() {
        let (v, g) = oracle(5.0, 2).eval(&[1.0, 0.0]);
        assert_relative_eq!(v, 0.18, epsilon = 1e-15);
        assert_relative_eq!(g[0], 0.2, epsilon = 1e-15);
        assert_eq!(g[1], 0.0);
    }

    #[test]
    fn quadratic_branch_by_hand() {
        let (v, g) = oracle(5.0, 2).eval(&[0.1, 0.0]);
        assert_relative_eq!(v, 0.005, epsilon = 1e-15);
        assert_eq!(g, vec![0.1, 0.0]);
    }

    #[test]
    fn branches_meet_on_the_sphere() {
        for &c in &[0.5, 1.0, 5.0, 20.0] {
            let r: f64 = 1.0 / c;
            let outer = r / c - 1.0 / (2.0 * c * c);
            let inner = 0.5 * r * r;
            assert!((outer - inner).abs() <= 1e-15 * inner.max(1.0), "c={c}");
            let x = [r, 0.0];
            let mut g = [0.0; 2];
            gradient(c, &x, &mut g);
            assert_eq!(g, x);
        }
    }

    #[test]
    fn metadata() {
        let o = oracle(5.0, 50);
        assert_eq!(o.lipschitz(), 1.0);
        assert_eq!(o.mu(), None);
        assert_eq!(o.f_star(), Some(0.0));
        assert_eq!(o.x_star().unwrap(), vec![0.0; 50].as_slice());
    }

    #[test]
    fn rejects_non_positive_c() {
        assert!(make_moreau(MoreauEnvelopeSpec { c: 0.0, n: 2 }).is_err());
        assert!(make_moreau(MoreauEnvelopeSpec { c: -1.0, n: 2 }).is_err());
        assert!(make_moreau(MoreauEnvelopeSpec { c: f64::NAN, n: 2 }).is_err());
        assert!(make_moreau(MoreauEnvelopeSpec { c: 1.0, n: 0 }).is_err());
    }
}
